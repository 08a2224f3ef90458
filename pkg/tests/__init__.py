import os
import unittest

DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')


def read_data(name: str) -> str:
    with open(os.path.join(DATA_DIR, name)) as f:
        return f.read()


def _suite(*cases) -> unittest.TestSuite:
    suite = unittest.TestSuite()
    for case in cases:
        suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(case))
    return suite


def normalsuite():
    from tests import (app_test, cli_test, decompose_test, families_test, graph_model_test, ingest_test,
                       stallings_test)
    return _suite(
        graph_model_test.TestFormat,
        graph_model_test.TestValidate,
        graph_model_test.TestFaces,
        graph_model_test.TestSigns,
        graph_model_test.TestEdits,
        graph_model_test.TestRandomGraphs,
        ingest_test.TestParse,
        ingest_test.TestOrientation,
        ingest_test.TestResolve,
        decompose_test.TestSplit,
        decompose_test.TestReduce,
        decompose_test.TestPipeline,
        decompose_test.TestReplay,
        decompose_test.TestRandomGraphs,
        stallings_test.TestFreeWord,
        stallings_test.TestFolding,
        stallings_test.TestCertificate,
        stallings_test.TestStateGraphs,
        stallings_test.TestRandomPieces,
        stallings_test.TestFoldLanguage,
        families_test.TestCycles,
        families_test.TestTheta,
        families_test.TestTwoBridge,
        cli_test.TestDecide,
        cli_test.TestCertificates,
        cli_test.TestDecompose,
        cli_test.TestFold,
        cli_test.TestFamily,
        app_test.TestSetup,
        app_test.TestDecide,
        app_test.TestFold,
        app_test.TestTwoBridge,
        app_test.TestSelfTest,
    )


def exhaustivesuite():
    # family sweeps; they skip themselves unless STATEFIBER_EXHAUSTIVE is set
    os.environ.setdefault('STATEFIBER_EXHAUSTIVE', '1')
    from tests import families_test
    return _suite(families_test.TestCycles, families_test.TestTheta, families_test.TestTwoBridge)


def benchsuite():
    os.environ.setdefault('STATEFIBER_BENCH', '1')
    from tests import stallings_test
    return _suite(stallings_test.TestBenchmark)
