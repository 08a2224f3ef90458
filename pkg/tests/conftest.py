import inspect

import flask_unittest


def pytest_pycollect_makeitem(collector, name, obj):
    # Abstract flask_unittest bases (no `app` assigned) only hold helpers;
    # the unittest suites in tests/__init__.py never load them either
    if inspect.isclass(obj) and issubclass(obj, flask_unittest.ClientTestCase) and getattr(obj, 'app', None) is None:
        return []
    return None
