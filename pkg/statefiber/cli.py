'''
The `statefiber` command line

Exit codes: 0 FIBER, 1 NOT_FIBER, 2 NON_ORIENTABLE, 3 bad input (the error code goes to stderr), 4 anything
unexpected
'''
import functools
import json
import logging
import random
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import click

from . import families
from .config import Config
from .decompose import pipeline
from .errors import ErrorCode, InternalMismatch, ParseError, StateFiberError
from .graph_model import EdgeLabel, PlanarStateGraph, parse_graph, serialize_graph
from .ingest import all_state, parse_pd, parse_state, resolve, seifert_state
from .stallings import (FreeWord, Verdict, build_gamma_from_words, decide_piece, fold, is_full_rose)
from .verdict import decide, decision_to_json, verify_decision

logger = logging.getLogger(__name__)

EXIT_CODES = {Verdict.FIBER: 0, Verdict.NOT_FIBER: 1, Verdict.NON_ORIENTABLE: 2}
EXIT_ERROR = 3
EXIT_UNEXPECTED = 4


class _Group(click.Group):
    # usage errors are input errors, not NON_ORIENTABLE
    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as err:
            err.exit_code = EXIT_ERROR
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as err:
            err.exit_code = EXIT_ERROR
            raise


def guarded(command: Callable) -> Callable:
    '''
    Turn library errors into exit codes, the way every subcommand reports them
    '''
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            code = command(*args, **kwargs)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except StateFiberError as err:
            click.echo(str(err), err=True)
            ctx.exit(EXIT_ERROR)
        except Exception:
            logger.exception('unexpected failure')
            ctx.exit(EXIT_UNEXPECTED)
        ctx.exit(code or 0)

    return wrapper


def _configure_logging(verbose: int) -> None:
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)]
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def load_input(text: str, fmt: str, state: str) -> PlanarStateGraph:
    '''
    A state graph from graph text, or from a PD code resolved by `state`

    `state` is a string over A and B, or one of `seifert`, `all-a`, `all-b`
    '''
    if fmt == 'graph':
        return parse_graph(text)
    pd = parse_pd(text)
    named = state.lower()
    if named == 'seifert':
        chosen = seifert_state(pd)
    elif named in ('all-a', 'all-b'):
        chosen = all_state(pd, EdgeLabel(named[-1].upper()))
    else:
        chosen = parse_state(state, len(pd))
    return resolve(pd, chosen)


@click.group(cls=_Group)
@click.option('--seed', type=int, default=None, help='Seed for randomized choices (default from STATEFIBER_SEED).')
@click.option('--workers', type=int, default=None, help='Threads for pieces and batch lines.')
@click.option('-v', '--verbose', count=True, help='-v for INFO, -vv for DEBUG.')
@click.pass_context
def cli(ctx, seed, workers, verbose):
    '''Decide whether a state surface is a fiber.'''
    _configure_logging(verbose)
    try:
        ctx.obj = Config.from_env().override(seed=seed, workers=workers)
    except ValueError as err:
        raise click.UsageError(str(err))


### decide


def _batch_line(line: str, config: Config) -> dict:
    # a graph file path, or `PD ... | STATE`
    try:
        if '|' in line:
            pd_text, state = line.split('|', 1)
            g = load_input(re.sub(r'^\s*PD\b', '', pd_text.strip()), 'pd', state.strip())
        else:
            with open(line) as f:
                g = parse_graph(f.read())
        decision = decide(g, config.override(workers=1))
        return {'input': line, 'verdict': decision.verdict.value}
    except StateFiberError as err:
        return {'input': line, 'error': err.code.value, 'message': str(err)}
    except OSError as err:
        return {'input': line, 'error': 'IO', 'message': str(err)}


@cli.command('decide')
@click.argument('source', type=click.File('r'), default='-')
@click.option('--format', 'fmt', type=click.Choice(['graph', 'pd']), default='graph')
@click.option('--state', default='seifert', help='A/B string, seifert, all-a or all-b (PD input only).')
@click.option('--trace', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Write the JSON certificate here.')
@click.option('--batch', is_flag=True, help='Read one input per line and write NDJSON verdicts.')
@click.pass_obj
@guarded
def decide_command(config, source, fmt, state, trace, batch):
    '''Print the verdict for a graph file or PD code.'''
    if batch and trace:
        raise click.UsageError('--trace writes the certificate of one decision and cannot be used with --batch')
    if batch:
        lines = [line.strip() for line in source if line.strip()]
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            for result in pool.map(lambda line: _batch_line(line, config), lines):
                click.echo(json.dumps(result))
        return 0

    g = load_input(source.read(), fmt, state)
    decision = decide(g, config, random.Random(config.seed))
    click.echo(decision.verdict.value)
    if trace:
        with open(trace, 'w') as f:
            json.dump(decision_to_json(decision), f, indent=2)
        click.echo(f'certificate: {trace}')
    return EXIT_CODES[decision.verdict]


### decompose


@cli.command('decompose')
@click.argument('source', type=click.File('r'))
@click.option('--format', 'fmt', type=click.Choice(['graph', 'pd']), default='graph')
@click.option('--state', default='seifert')
@click.pass_obj
@guarded
def decompose_command(config, source, fmt, state):
    '''Print every final piece in graph format, then the JSON provenance.'''
    result = pipeline(load_input(source.read(), fmt, state))
    for i, piece in enumerate(result.pieces):
        click.echo(f'# piece {i}: irreducible')
        click.echo(serialize_graph(piece.graph))
    for i, early in enumerate(result.early):
        click.echo(f'# piece {len(result.pieces) + i}: {early.kind.value}')
        click.echo(serialize_graph(early.piece.graph))
    click.echo(json.dumps([step.to_json() for step in result.provenance]))
    return 0


### fold


def _split_words(chunks: List[str]) -> List[FreeWord]:
    return [FreeWord.parse(w) for chunk in chunks for w in re.split(r'[,;]', chunk) if w.strip()]


@cli.command('fold')
@click.option('--words', 'word_chunks', multiple=True, help='Words like "u1^-1 u5 u1^-1", separated by commas.')
@click.option('--rank', 'n', type=int, default=None, help='Number of generators (default: the largest used).')
@click.option('--graph', 'graph_file', type=click.File('r'), default=None, help='A piece without cut vertices.')
@click.option('--trace', type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_obj
@guarded
def fold_command(config, word_chunks, n, graph_file, trace):
    '''Fold a wedge of words, or the graph of a piece, and report whether it is a full rose.'''
    if bool(word_chunks) == bool(graph_file):
        raise click.UsageError('give exactly one of --words or --graph')
    if graph_file:
        decision = decide_piece(parse_graph(graph_file.read()), config)
        certificate, n = decision.certificate, decision.rank
        folded = certificate.final
    else:
        words = _split_words(list(word_chunks))
        if n is None:
            n = max((gen for w in words for gen in w.generators()), default=0)
        folded, certificate = fold(build_gamma_from_words(words, n), n, trace=config.fold_trace)

    rose = is_full_rose(folded, n)
    report = {'rose': rose, 'rank': n, 'vertices': len(folded.vertices), 'edges': len(folded.edges)}
    click.echo(json.dumps(report))
    if trace:
        with open(trace, 'w') as f:
            json.dump(certificate.to_json(), f, indent=2)
    return EXIT_CODES[Verdict.FIBER if rose else Verdict.NOT_FIBER]


### family


def _general(g: PlanarStateGraph, config: Config) -> bool:
    return decide(g, config.override(workers=1)).verdict is Verdict.FIBER


def _enumerate(kind: str, config: Config) -> int:
    rows, mismatches = 0, 0
    if kind == 'cycles':
        cases = ((''.join(l.value for l in labels), families.cycle_fiber(labels), families.cycle_graph(labels))
                 for labels in families.enumerate_cycles())
    elif kind == 'theta':
        cases = ((str(spec), families.theta_fiber(spec), families.theta_graph(spec))
                 for spec in families.enumerate_theta(distinct=True))
    else:
        cases = ((str(cf), families.two_bridge_fiber(cf), families.two_bridge_graph(cf))
                 for cf in families.enumerate_continued_fractions())
    for name, formula, g in cases:
        general = _general(g, config)
        rows += 1
        if formula != general:
            mismatches += 1
            click.echo(f'{kind}\t{name}\tformula={formula}\tgeneral={general}', err=True)
        click.echo(f'{name}\t{"FIBER" if formula else "NOT_FIBER"}')
    if mismatches:
        raise InternalMismatch(f'{mismatches} of {rows} {kind} cases disagree with the general decider')
    return 0


@cli.command('family')
@click.option('--cycle', default=None, help='Edge labels around a cycle, e.g. AABB.')
@click.option('--pretzel', default=None, help='Pretzel coefficients, e.g. 2,-2,7.')
@click.option('--theta', default=None, help='Theta strands, e.g. 1A,1B,3A.')
@click.option('--two-bridge', 'two_bridge', default=None, help='Continued fraction a_{n-1},...,a_1.')
@click.option('--enumerate', 'kind', type=click.Choice(['cycles', 'theta', 'two-bridge']), default=None)
@click.option('--json', 'as_json', is_flag=True)
@click.pass_obj
@guarded
def family_command(config, cycle, pretzel, theta, two_bridge, kind, as_json):
    '''Closed-form verdicts for cycles, pretzel and theta graphs and 2-bridge links.'''
    given = [x for x in (cycle, pretzel, theta, two_bridge, kind) if x is not None]
    if len(given) != 1:
        raise click.UsageError('give exactly one family option')
    if kind:
        return _enumerate(kind, config)

    report: dict = {}
    if cycle is not None:
        labels = families.parse_labels(cycle)
        fiber = families.cycle_fiber(labels)
        report = {'family': 'cycle', 'input': cycle}
    elif pretzel is not None:
        try:
            coefficients = [int(x) for x in pretzel.split(',')]
        except ValueError:
            raise ParseError(f'cannot read pretzel coefficients {pretzel!r}')
        fiber = families.pretzel_fiber(coefficients)
        report = {'family': 'pretzel', 'input': coefficients}
    elif theta is not None:
        spec = families.ThetaSpec.parse(theta)
        fiber = families.theta_fiber(spec)
        report = {'family': 'theta', 'input': str(spec), 'pretzel': families.theta_to_pretzel(spec)}
    else:
        cf = families.ContinuedFraction.parse(two_bridge)
        matrix, det = families.two_bridge_matrix(cf)
        fiber = families.two_bridge_fiber(cf)
        report = {'family': 'two-bridge', 'input': list(cf.coefficients), 'diagonal': list(matrix.diagonal),
                  'determinant': det}

    verdict = Verdict.FIBER if fiber else Verdict.NOT_FIBER
    report['verdict'] = verdict.value
    click.echo(json.dumps(report) if as_json else verdict.value)
    return EXIT_CODES[verdict]


### verify-certificate


@cli.command('verify-certificate')
@click.argument('graph_file', type=click.File('r'))
@click.argument('certificate_file', type=click.File('r'))
@click.pass_obj
@guarded
def verify_command(config, graph_file, certificate_file):
    '''Replay a certificate written by `decide --trace`.'''
    g = parse_graph(graph_file.read())
    try:
        payload = json.load(certificate_file)
    except ValueError as err:
        raise ParseError(f'certificate is not JSON: {err}', ErrorCode.BAD_CERTIFICATE)
    verdict = verify_decision(g, payload)
    click.echo(f'{verdict.value} (verified)')
    return EXIT_CODES[verdict]


def main(argv: Optional[List[str]] = None):
    cli.main(args=argv, prog_name='statefiber')


if __name__ == '__main__':
    main()
