#!/usr/bin/env python3
"""
dirres - Resistance distances on directed graphs

Main entry point for the command line. Loads an edge list or generates a
random digraph, reduces it to its largest strongly connected component and
runs one resistance query, an RDM experiment or a random-walk simulation.
"""

import sys
import argparse
import logging
from typing import Optional

from src.config import Config
from src.core.digraph import Digraph
from src.core.experiment import ExperimentConfig, run_experiment
from src.core.formatters import format_results
from src.core.rdm import METHODS
from src.core.resistance import (
    build_engine, group_centrality, group_resistance, group_resistance_point,
    kemeny_constant, kemeny_constant_trace, kirchhoff_index,
    multiplicative_kirchhoff_index, resistance, resistance_via_submatrix,
    vertex_centrality, vertex_resistance,
)
from src.core import walks
from src.data.generators import generate
from src.data.graph_factory import get_graph, get_raw_graph, options_from_args, source_from_args
from src.exceptions import DirResError, GraphDataError, NumericalError, ParameterError

# --- Logging Configuration ---
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(levelname)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

QUANTITIES = ('escape', 'hitting', 'commute', 'return', 'detour', 'voltage', 'group-hitting')


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that exits with the usage code 1 instead of 2."""

    def __init__(self, *args, **kwargs):
        # --k and --K must not resolve as abbreviations of other flags
        kwargs.setdefault('allow_abbrev', False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _label(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def _label_list(text: str) -> list:
    return [_label(token) for token in text.split(',') if token.strip()]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)

    source = common.add_argument_group('graph source')
    source.add_argument('-i', '--input', default=None,
                        help='Edge-list file (bare names are looked up in DIRRES_DATA_DIR)')
    source.add_argument('--gen', choices=['ws', 'er', 'sf'], default=None,
                        help='Generate a random digraph instead of reading a file')
    source.add_argument('--n', type=int, default=None, help='Vertex count for --gen')
    source.add_argument('--K', type=int, default=None, help='WS: neighbors per side (default: 10)')
    source.add_argument('--p', type=float, default=None,
                        help='WS: rewire probability (default: 0.5); ER: arc probability (default: 0.15)')
    source.add_argument('--b', type=float, default=None, help='WS: out-direction probability (default: 1)')
    source.add_argument('--m', type=int, default=None, help='SF: number of arc draws (default: 300)')
    source.add_argument('--alpha-out', type=float, default=None, help='SF: out-weight exponent (default: 0.5)')
    source.add_argument('--alpha-in', type=float, default=None, help='SF: in-weight exponent (default: 0.5)')
    source.add_argument('--seed', type=int, default=0, help='Generator and random-baseline seed (default: 0)')

    ingest = common.add_argument_group('edge-list options')
    ingest.add_argument('--weighted', action=argparse.BooleanOptionalAction, default=True,
                        help='Read the third column as arc weight (default: on)')
    ingest.add_argument('--keep-loops', action='store_true', help='Keep self-loops (dropped by default)')
    ingest.add_argument('--binarize', action='store_true', help='Set every merged arc weight to 1')

    output = common.add_argument_group('output')
    output.add_argument('--tolerance', type=float, default=None,
                        help=f'Algebraic tolerance override (default: {Config.ALGEBRAIC_TOL:g})')
    output.add_argument('-o', '--output', type=str, default=None,
                        help='Output file path (if not specified, prints to console)')
    output.add_argument('-f', '--format', choices=['table', 'markdown', 'json', 'csv'], default=None,
                        help='Result format for rdm (default: csv)')
    output.add_argument('-v', '--verbose', action='store_true', help='Enable verbose/debug logging')
    return common


def parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = ArgumentParser(
        prog='dirres',
        description='dirres - resistance distances, Kirchhoff indices and RDM on directed graphs',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Resistance distance between two vertices
  dirres resist --input g.txt --pair 0 1

  # Vertex resistance of every vertex, Kirchhoff indices, Kemeny's constant
  dirres node-res --input g.txt
  dirres kirchhoff --input g.txt
  dirres kemeny --gen ws --n 50 --K 10 --p 0.5 --b 1 --seed 3

  # Group resistance of a vertex set
  dirres group --input g.txt --set 1,5,9

  # RDM experiment as a CSV row stream
  dirres rdm --gen er --n 50 --p 0.15 --k 6 --method greedy --seed 7
  dirres rdm --gen sf --n 50 --m 300 --k 6 --method all --seeds 0,1,2 -o sf.csv

  # Generate a digraph, reduce a file to its largest SCC
  dirres gen --gen sf --n 50 --m 300 --seed 1 -o sf.txt
  dirres scc --input g.txt

  # Random-walk estimate next to its algebraic counterpart
  dirres simulate --input g.txt --quantity commute --source 0 --target 3 --walks 100000
        """
    )
    common = _common_parser()
    sub = parser.add_subparsers(dest='command', metavar='command', required=True)

    resist = sub.add_parser('resist', parents=[common], help='Resistance distance between two vertices')
    resist.add_argument('--pair', nargs=2, required=True, metavar=('I', 'J'), help='Vertex labels')
    resist.add_argument('--route', choices=['pinv', 'submatrix'], default='pinv',
                        help='pinv: from L+; submatrix: from the inverse of L without row/column I')

    node = sub.add_parser('node-res', parents=[common], help='Vertex resistance and information centrality')
    node.add_argument('--vertex', default=None, help='Single vertex label (default: all vertices)')

    sub.add_parser('kirchhoff', parents=[common], help='Kirchhoff index R and multiplicative index R*')
    sub.add_parser('kemeny', parents=[common], help="Kemeny's constant")

    group = sub.add_parser('group', parents=[common], help='Group resistance of a vertex set')
    group.add_argument('--set', dest='vertex_set', required=True, help='Comma-separated vertex labels')
    group.add_argument('--vertex', default=None, help='Report Omega(vertex, set) instead of Omega(set)')

    rdm = sub.add_parser('rdm', parents=[common], help='Resistance distance minimization experiment')
    rdm.add_argument('--k', type=int, required=True, help='Largest group size; rows are emitted for 1..k')
    rdm.add_argument('--method', choices=list(METHODS) + ['all'], default='greedy',
                     help='Selection method (default: greedy)')
    rdm.add_argument('--seeds', default=None, help='Comma-separated seeds (overrides --seed)')
    rdm.add_argument('--cap', type=int, default=None,
                     help=f'Brute-force subset cap (default: {Config.BRUTE_FORCE_CAP:,})')
    rdm.add_argument('--workers', type=int, default=1, help='Parallel (network, seed) cells (default: 1)')
    rdm.add_argument('--no-timing', action='store_true', help='Write wall_time_s as 0 for byte-stable output')

    sub.add_parser('gen', parents=[common], help='Write a generated digraph as an edge list')
    sub.add_parser('scc', parents=[common], help="Print n m n' m' for the largest SCC")

    simulate = sub.add_parser('simulate', parents=[common], help='Monte Carlo random-walk estimate')
    simulate.add_argument('--quantity', choices=QUANTITIES, required=True)
    simulate.add_argument('--source', required=True, help='Start vertex label (k for voltage)')
    simulate.add_argument('--target', default=None, help='Target label or comma-separated set')
    simulate.add_argument('--via', default=None, help='detour: transit set; voltage: vertex i')
    simulate.add_argument('--walks', type=int, default=100_000, help='Number of walks (default: 100000)')

    return parser.parse_args(argv)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        try:
            with open(output, 'w', encoding='utf-8') as handle:
                handle.write(text if text.endswith('\n') else text + '\n')
        except OSError as e:
            raise GraphDataError(f"Cannot write output {output}: {e}")
        logger.info(f"Output written to: {output}")
    else:
        print(text)


def _load(args) -> Digraph:
    g, _ = get_graph(source_from_args(args), options_from_args(args))
    return g


def _vertex(g: Digraph, token: str) -> int:
    return g.index_of(_label(token))


def _vertices(g: Digraph, text: str) -> list[int]:
    labels = _label_list(text)
    if not labels:
        raise ParameterError(f"Empty vertex list: {text!r}")
    return g.indices_of(labels)


def cmd_resist(args) -> str:
    g = _load(args)
    i, j = (_vertex(g, token) for token in args.pair)
    if args.route == 'submatrix':
        value = resistance_via_submatrix(g, i, j)
    else:
        value = resistance(build_engine(g), i, j)
    return format(value, '.17g')


def cmd_node_res(args) -> str:
    engine = build_engine(_load(args))
    g = engine.graph
    indices = [_vertex(g, args.vertex)] if args.vertex is not None else range(g.n)
    lines = [
        f"{g.labels[i]} {vertex_resistance(engine, i):.17g} {vertex_centrality(engine, i):.17g}"
        for i in indices
    ]
    return "\n".join(lines)


def cmd_kirchhoff(args) -> str:
    engine = build_engine(_load(args))
    return f"R {kirchhoff_index(engine):.17g}\nR* {multiplicative_kirchhoff_index(engine):.17g}"


def cmd_kemeny(args) -> str:
    engine = build_engine(_load(args))
    value = kemeny_constant(engine)
    logger.debug(f"Kemeny trace route: {kemeny_constant_trace(engine):.17g}")
    return format(value, '.17g')


def cmd_group(args) -> str:
    g = _load(args)
    X = _vertices(g, args.vertex_set)
    if args.vertex is not None:
        return format(group_resistance_point(g, _vertex(g, args.vertex), X), '.17g')
    return f"{group_resistance(g, X):.17g} {group_centrality(g, X):.17g}"


def cmd_rdm(args) -> str:
    seeds = [int(s) for s in args.seeds.split(',')] if args.seeds else [args.seed]
    methods = list(METHODS) if args.method == 'all' else [args.method]
    fmt = args.format or 'csv'
    cfg = ExperimentConfig(
        input=source_from_args(args),
        k_max=args.k,
        methods=methods,
        seeds=seeds,
        output=args.output if fmt == 'csv' else None,
        cap=args.cap,
        tolerance=args.tolerance,
        options=options_from_args(args),
        record_timing=not args.no_timing,
        workers=args.workers,
    )
    rows = run_experiment(cfg)
    skipped = sum(row.skipped for row in rows)
    if skipped:
        logger.warning(f"{skipped} exact row(s) skipped (brute-force cap)")
    if cfg.output:
        return ''
    return format_results(rows, fmt)


def cmd_gen(args) -> str:
    source = source_from_args(args)
    g = generate(source) if args.input is None else get_raw_graph(source, options_from_args(args))
    lines = [f"# {source.label if args.input is None else args.input}", f"# n={g.n} m={g.m}"]
    lines += [f"{u} {v}" if w == 1.0 else f"{u} {v} {w:.17g}" for u, v, w in g.edges()]
    return "\n".join(lines)


def cmd_scc(args) -> str:
    _, summary = get_graph(source_from_args(args), options_from_args(args))
    if summary.loops_dropped:
        logger.info(f"{summary.loops_dropped} self-loop(s) dropped")
    return str(summary)


def cmd_simulate(args) -> str:
    g = _load(args)
    engine = build_engine(g)
    i = _vertex(g, args.source)
    quantity = args.quantity

    def target():
        if args.target is None:
            raise ParameterError(f"--quantity {quantity} requires --target")
        X = _vertices(g, args.target)
        return X[0] if len(X) == 1 else X

    def resistance_to(t) -> float:
        return resistance(engine, i, t) if isinstance(t, int) else group_resistance_point(engine, i, t)

    expected = None
    if quantity == 'escape':
        t = target()
        estimate = walks.estimate_escape_probability(g, i, t, args.walks, args.seed)
        expected = 1.0 / (engine.volume * engine.pi[i] * resistance_to(t))
    elif quantity == 'commute':
        t = target()
        estimate = walks.estimate_commute_time(g, i, t, args.walks, args.seed)
        expected = engine.volume * resistance_to(t)
    elif quantity == 'return':
        estimate = walks.estimate_return_time(g, i, args.walks, args.seed)
        expected = 1.0 / engine.pi[i]
    elif quantity == 'hitting':
        t = target()
        if not isinstance(t, int):
            raise ParameterError("hitting needs a single --target; use group-hitting for sets")
        estimate = walks.estimate_hitting_time(g, i, t, args.walks, args.seed)
    elif quantity == 'group-hitting':
        estimate = walks.estimate_group_hitting_time(g, i, _vertices(g, args.target or ''), args.walks, args.seed)
    elif quantity == 'detour':
        if args.via is None:
            raise ParameterError("detour requires --via (transit set)")
        t = target()
        if not isinstance(t, int):
            raise ParameterError("detour needs a single --target")
        estimate = walks.estimate_detour_time(g, i, _vertices(g, args.via), t, args.walks, args.seed)
    else:
        if args.via is None:
            raise ParameterError("voltage requires --via (vertex i)")
        estimate = walks.estimate_voltage(g, i, _vertex(g, args.via), target(), args.walks, args.seed)

    estimate.require_valid()
    line = f"{estimate.quantity} {estimate.mean:.10g} +- {estimate.std_error:.3g} (walks={estimate.samples})"
    if expected is not None:
        verdict = 'within' if estimate.within(expected) else 'OUTSIDE'
        line += f"\nexpected {expected:.10g} ({verdict} {Config.STOCHASTIC_SIGMAS:g} SE)"
    return line


COMMANDS = {
    'resist': cmd_resist,
    'node-res': cmd_node_res,
    'kirchhoff': cmd_kirchhoff,
    'kemeny': cmd_kemeny,
    'group': cmd_group,
    'rdm': cmd_rdm,
    'gen': cmd_gen,
    'scc': cmd_scc,
    'simulate': cmd_simulate,
}


def main(argv: Optional[list[str]] = None) -> int:
    """
    Run one dirres command.

    Returns:
        Exit code: 0 success, 1 usage error, 2 data error, 3 numerical error
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    Config.validate()
    default_tolerance = Config.ALGEBRAIC_TOL
    if args.tolerance is not None:
        Config.ALGEBRAIC_TOL = args.tolerance

    try:
        text = COMMANDS[args.command](args)
        if text:
            _emit(text, args.output)
    except ParameterError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    except GraphDataError as e:
        logger.error(f"❌ {e}")
        return EXIT_DATA
    except NumericalError as e:
        logger.error(f"❌ {e}")
        return EXIT_NUMERICAL
    except DirResError as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    finally:
        Config.ALGEBRAIC_TOL = default_tolerance

    return EXIT_OK


def cli_dispatch(argv: Optional[list[str]] = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
