import os

import click
from flask import Flask, current_app, jsonify, request
from flask.cli import with_appcontext

from .config import Config
from .errors import ErrorCode, ParseError, StateFiberError
from .families import (ContinuedFraction, cycle_graph, parse_labels, two_bridge_fiber, two_bridge_graph,
                       two_bridge_matrix)
from .graph_model import parse_graph
from .ingest import parse_pd, parse_state, resolve, seifert_state
from .stallings import FreeWord, build_gamma_from_words, fold, is_full_rose
from .verdict import decide, decision_to_json

FIGURE_EIGHT = 'X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]'


def create_app(test_config=None):
    """Create and configure an instance of the Flask application."""
    app = Flask(__name__, instance_relative_config=True)
    app.config.from_mapping(Config().as_mapping())

    if test_config is None:
        # load the instance config, if it exists, when not testing
        app.config.from_pyfile('config.py', silent=True)
    else:
        app.config.update(test_config)

    try:
        os.makedirs(app.instance_path)
    except OSError:
        pass

    @app.errorhandler(StateFiberError)
    def bad_input(err: StateFiberError):
        return jsonify(error=err.code.value, message=str(err)), 400

    @app.route('/health')
    def health():
        return jsonify(status='ok')

    @app.route('/decide', methods=['POST'])
    def decide_route():
        payload = _json_body()
        if 'graph' in payload:
            g = parse_graph(payload['graph'])
        elif 'pd' in payload:
            pd = parse_pd(payload['pd'])
            state = payload.get('state', 'seifert')
            g = resolve(pd, seifert_state(pd) if state == 'seifert' else parse_state(state, len(pd)))
        else:
            raise ParseError('request needs "graph" or "pd"')
        decision = decide(g, _config())
        current_app.logger.info('decided %d edges: %s', len(g.edges), decision.verdict.value)
        return jsonify(decision_to_json(decision))

    @app.route('/fold', methods=['POST'])
    def fold_route():
        payload = _json_body()
        words = [FreeWord.parse(w) for w in payload.get('words', [])]
        n = payload.get('rank', len(words))
        if not isinstance(n, int):
            raise ParseError(f'rank must be an integer, got {n!r}')
        folded, certificate = fold(build_gamma_from_words(words, n), n, trace=_config().fold_trace)
        return jsonify(rose=is_full_rose(folded, n), folded=folded.to_json(), certificate=certificate.to_json())

    @app.route('/family/two-bridge')
    def two_bridge_route():
        cf = ContinuedFraction.parse(request.args.get('cf', ''))
        matrix, det = two_bridge_matrix(cf)
        return jsonify(cf=list(cf.coefficients), fiber=two_bridge_fiber(cf), diagonal=list(matrix.diagonal),
                       determinant=det)

    app.cli.add_command(selftest_command)

    return app


def _json_body() -> dict:
    payload = request.get_json(silent=True)
    if not isinstance(payload, dict):
        raise ParseError('request body must be a JSON object', ErrorCode.SYNTAX)
    return payload


def _config() -> Config:
    return Config.from_mapping(current_app.config)


def selftest() -> list:
    '''
    A handful of known answers, run through the general decider
    '''
    config = _config()
    pd = parse_pd(FIGURE_EIGHT)
    cases = [
        ('figure-eight, Seifert state', resolve(pd, seifert_state(pd)), 'FIBER'),
        ('cycle AAAB', cycle_graph(parse_labels('AAAB')), 'FIBER'),
        ('cycle AABB', cycle_graph(parse_labels('AABB')), 'NOT_FIBER'),
        ('2-bridge -3,4,-2', two_bridge_graph(ContinuedFraction((-3, 4, -2))), 'FIBER'),
        ('2-bridge -3,2,-2', two_bridge_graph(ContinuedFraction((-3, 2, -2))), 'NOT_FIBER'),
    ]
    return [(name, expected, decide(g, config).verdict.value) for name, g, expected in cases]


@click.command('statefiber-selftest')
@with_appcontext
def selftest_command():
    """Decide a few graphs with known answers."""
    failed = 0
    for name, expected, got in selftest():
        ok = expected == got
        failed += not ok
        click.echo(f'{"ok  " if ok else "FAIL"} {name}: {got}')
    if failed:
        raise click.ClickException(f'{failed} self-test case(s) failed')
