import unittest

import flask_unittest
from flask import Flask
from flask.testing import FlaskClient
from flask.wrappers import Response

from statefiber.app import FIGURE_EIGHT, selftest
from statefiber.config import Config
from tests import read_data
from tests.app_factory import build_app
from tests.stallings_test import FIVE_WORDS


class TestBase(flask_unittest.ClientTestCase):
    '''
    Base ClientTestCase with helpers for the JSON endpoints

    Only extended, it has no tests of its own
    '''

    ### Helper functions

    def post_json(self, client: FlaskClient, path: str, payload) -> dict:
        # Post a JSON body and expect a 200 JSON reply
        rv: Response = client.post(path, json=payload)
        self.assertEqual(rv.status_code, 200, rv.get_data(as_text=True))
        return rv.get_json()

    def assertRejected(self, rv: Response, code: str):
        self.assertEqual(rv.status_code, 400)
        self.assertEqual(rv.get_json()['error'], code)


class TestSetup(TestBase):
    app = build_app()

    def test_health(self, client: FlaskClient):
        rv: Response = client.get('/health')
        self.assertEqual(rv.get_json(), {'status': 'ok'})

    def test_config(self, client: FlaskClient):
        config = Config.from_mapping(self.app.config)
        self.assertEqual(config.workers, 1)
        self.assertEqual(config.generator_mode, 'tree')


class TestDecide(TestBase):
    app = build_app()

    def test_graph(self, client: FlaskClient):
        body = self.post_json(client, '/decide', {'graph': read_data('bouquet.graph')})
        self.assertEqual(body['verdict'], 'FIBER')
        # both bigons reduce to trees, nothing is left to fold
        self.assertEqual(body['pieces'], [])
        self.assertEqual([early['kind'] for early in body['early']], ['TREE_FIBER'] * 2)

    def test_not_fiber(self, client: FlaskClient):
        for name in ('cycle_aabb.graph', 'cycle_abab.graph'):
            body = self.post_json(client, '/decide', {'graph': read_data(name)})
            self.assertEqual(body['verdict'], 'NOT_FIBER')
            self.assertEqual(body['early'][-1]['kind'], 'DISTINCT_PARALLEL_NOT_FIBER')

    def test_pd(self, client: FlaskClient):
        body = self.post_json(client, '/decide', {'pd': FIGURE_EIGHT})
        self.assertEqual(body['verdict'], 'FIBER')
        body = self.post_json(client, '/decide', {'pd': 'X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]', 'state': 'AAA'})
        self.assertEqual(body['verdict'], 'FIBER')

    def test_non_orientable(self, client: FlaskClient):
        body = self.post_json(client, '/decide', {'graph': read_data('triangle.graph')})
        self.assertEqual(body['verdict'], 'NON_ORIENTABLE')
        self.assertIsNotNone(body['reason'])

    def test_bad_input(self, client: FlaskClient):
        self.assertRejected(client.post('/decide', json={}), 'SYNTAX')
        self.assertRejected(client.post('/decide', data='not json'), 'SYNTAX')
        self.assertRejected(client.post('/decide', json={'graph': read_data('torus.graph')}), 'NON_SPHERICAL')
        self.assertRejected(client.post('/decide', json={'pd': FIGURE_EIGHT, 'state': 'AB'}), 'STATE_LENGTH')


class TestFold(TestBase):
    app = build_app()

    def test_rose(self, client: FlaskClient):
        body = self.post_json(client, '/fold', {'words': FIVE_WORDS, 'rank': 5})
        self.assertTrue(body['rose'])
        self.assertEqual(body['folded']['vertices'], [0])
        self.assertEqual(body['certificate']['kind'], 'ROSE')

    def test_not_rose(self, client: FlaskClient):
        body = self.post_json(client, '/fold', {'words': ['u1^2']})
        self.assertFalse(body['rose'])

    def test_bad_words(self, client: FlaskClient):
        self.assertRejected(client.post('/fold', json={'words': ['x1']}), 'SYNTAX')
        self.assertRejected(client.post('/fold', json={'words': ['u1'], 'rank': 'one'}), 'SYNTAX')
        self.assertRejected(client.post('/fold', json={'words': ['u3'], 'rank': 2}), 'NON_SQUARE')


class TestTwoBridge(TestBase):
    app = build_app()

    def test_fiber(self, client: FlaskClient):
        rv: Response = client.get('/family/two-bridge', query_string={'cf': '-3,4,-2'})
        self.assertEqual(rv.get_json(), {'cf': [-3, 4, -2], 'fiber': True, 'diagonal': [1], 'determinant': 1})

    def test_not_fiber(self, client: FlaskClient):
        rv: Response = client.get('/family/two-bridge', query_string={'cf': '-3,2,-2'})
        self.assertFalse(rv.get_json()['fiber'])

    def test_invalid(self, client: FlaskClient):
        self.assertRejected(client.get('/family/two-bridge', query_string={'cf': '3,3,-2'}), 'INVALID_CF')
        self.assertRejected(client.get('/family/two-bridge'), 'SYNTAX')


class TestSelfTest(flask_unittest.AppTestCase):
    '''
    The `statefiber-selftest` command, run inside the app context
    '''
    def create_app(self) -> Flask:
        return build_app()

    def test_cases(self, app: Flask):
        with app.app_context():
            results = selftest()
        self.assertEqual(len(results), 5)
        for name, expected, got in results:
            self.assertEqual(got, expected, name)

    def test_command(self, app: Flask):
        result = app.test_cli_runner().invoke(args=['statefiber-selftest'])
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertEqual(result.output.count('ok  '), 5)
        self.assertNotIn('FAIL', result.output)


if __name__ == '__main__':
    unittest.main()
