"""Command-line front end.

Exit status: 0 positive verdict or success, 1 negative verdict, 2 malformed
input, 3 a resource cap was hit, 4 the input is outside an operation's domain.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from .automata import enumerate_language
from .constraints import taged_witness_run
from .errors import AlienSymbolError, ParseError, PreconditionError, ResourceLimitError
from .formats import format_taged, read_graph, read_taged
from .graphs import count_full_walks, random_digraph
from .reduction import METHODS, Limits, build_d_g, decide, verify_constructions
from .terms import format_position, parse_term

EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_RESOURCE, EXIT_PRECONDITION = 0, 1, 2, 3, 4


def _limits(args) -> Limits:
    return Limits(args.max_vertices, args.max_nodes, args.max_buckets)


def cmd_count_paths(args) -> int:
    G = read_graph(args.graph)
    limits = _limits(args)
    if len(G.vertices) > limits.max_vertices:
        raise ResourceLimitError(
            f"graph has {len(G.vertices)} vertices, cap is {limits.max_vertices}",
            cap_name="max_vertices", cap=limits.max_vertices, needed=len(G.vertices),
        )
    print(count_full_walks(G))
    return EXIT_OK


def cmd_decide(args) -> int:
    G = read_graph(args.graph)
    d = decide(G, args.method, _limits(args))
    print("HAMILTONIAN" if d.hamiltonian else "NO-HAMILTONIAN")
    bg = "-" if d.bg_count is None else d.bg_count
    print(f"# m_G={d.m_g} bG_count={bg} method={d.method}")
    return EXIT_OK if d.hamiltonian else EXIT_NEGATIVE


def cmd_reduce(args) -> int:
    G = read_graph(args.graph)
    limits = _limits(args)
    if len(G.vertices) > limits.max_vertices:
        raise ResourceLimitError(
            f"graph has {len(G.vertices)} vertices, cap is {limits.max_vertices}",
            cap_name="max_vertices", cap=limits.max_vertices, needed=len(G.vertices),
        )
    text = format_taged(build_d_g(G).d_g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_accepts(args) -> int:
    T = read_taged(args.automaton)
    t = parse_term(args.term, T.base.alphabet)
    run = taged_witness_run(T, t)
    print("ACCEPT" if run else "REJECT")
    if run and args.witness:
        for pos, state in run.labels:
            print(f"{format_position(pos)}:{state}")
    return EXIT_OK if run else EXIT_NEGATIVE


def cmd_enumerate(args) -> int:
    T = read_taged(args.automaton)
    if T.eq or T.neq:
        raise PreconditionError("enumerate works on plain automata; drop the eq/neq lines")
    for t in enumerate_language(T.base, args.max_nodes, max_buckets=args.max_buckets):
        print(t)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.random is not None:
        G = random_digraph(args.random, random.Random(args.seed))
    elif args.graph:
        G = read_graph(args.graph)
    else:
        raise PreconditionError("verify needs a graph file or --random N")
    report = verify_constructions(G, print, limits=_limits(args))
    return EXIT_OK if report.all_passed else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--max-vertices", type=_positive, default=Limits.max_vertices)
    caps.add_argument("--max-buckets", type=_positive, default=Limits.max_buckets,
                      help="cap on terms stored while enumerating a language")

    nodes = argparse.ArgumentParser(add_help=False)
    nodes.add_argument("--max-nodes", type=_positive, default=Limits.max_nodes,
                       help="cap on the size of searched terms")

    parser = argparse.ArgumentParser(prog="taged", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count-paths", parents=[caps, nodes], help="print the number of full walks")
    p.add_argument("graph")
    p.set_defaults(func=cmd_count_paths)

    p = sub.add_parser("decide", parents=[caps, nodes], help="decide Hamiltonicity via the reduction")
    p.add_argument("graph")
    p.add_argument("--method", choices=METHODS, default="counting")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("reduce", parents=[caps, nodes], help="write the TAGED built from a graph")
    p.add_argument("graph")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("accepts", parents=[caps, nodes], help="membership of a term")
    p.add_argument("automaton")
    p.add_argument("term")
    p.add_argument("--witness", action="store_true", help="print the run as position:state lines")
    p.set_defaults(func=cmd_accepts)

    p = sub.add_parser("enumerate", parents=[caps], help="list accepted terms up to a size")
    p.add_argument("automaton")
    p.add_argument("--max-nodes", type=_positive, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[caps, nodes], help="check every construction on a graph")
    p.add_argument("graph", nargs="?")
    p.add_argument("--random", type=_positive, metavar="N", help="use a random graph on N vertices")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, AlienSymbolError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        if exc.cap_name:
            print(f"# cap {exc.cap_name}={exc.cap} needed={exc.needed or '?'}", file=sys.stderr)
        return EXIT_RESOURCE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
