from flask import Flask

from statefiber.app import create_app


def build_app() -> Flask:
    # Testing app, deciding every piece on the calling thread
    return create_app({'TESTING': True, 'STATEFIBER_WORKERS': 1})
