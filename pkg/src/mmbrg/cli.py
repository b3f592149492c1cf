"""Command-line front end.

Exit codes: 0 nonblocking / success, 1 blocking, 2 input error or
exhausted budget, 3 disagreement with the brute-force oracle.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .brg import build_brg, build_minimax_brg
from .explain import DEFAULT_BUDGET
from .io import PlantDocument, export_dot, export_report, graph_json, parse_plant, serialize_plant
from .net import BudgetExceeded, NetError
from .oracle import GenConfig, build_reachability_graph, oracle_blocking, random_corpus
from .verify import NON_FINAL_DEADLOCK, OBSTRUCTED, verify_nonblocking

log = logging.getLogger("mmbrg")

EXIT_NONBLOCKING = 0
EXIT_BLOCKING = 1
EXIT_ERROR = 2
EXIT_MISMATCH = 3


def _vec(v) -> str:
    return "[" + ",".join(map(str, v)) + "]"


def _budget(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("budget must be >= 1")
    return v


def _load(path: str) -> PlantDocument:
    return parse_plant(Path(path).read_text(encoding="utf-8"))


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def cmd_verify(args) -> int:
    doc = _load(args.input)
    verdict = verify_nonblocking(
        doc.plant,
        doc.partition,
        budget=args.budget,
        all_deadlocks=args.all_deadlocks,
        deterministic=args.deterministic,
    )
    if verdict.nonblocking:
        print("NONBLOCKING")
    elif verdict.reason == NON_FINAL_DEADLOCK:
        print(f"BLOCKING (non-final deadlock {_vec(verdict.witness)})")
        if args.all_deadlocks:
            for mk in verdict.stats.get("deadlocks", []):
                print(f"  dead non-final {_vec(mk)}")
    elif verdict.reason == OBSTRUCTED:
        print(f"BLOCKING (obstructed at {_vec(verdict.witness)})")
    s = verdict.stats
    print(f"minimax-BRG: {_count(s['minimax_nodes'], 'node')}, {_count(s['minimax_edges'], 'edge')}")
    for note in verdict.notes:
        print(f"note: {note}")
    _write(args.report, export_report(verdict, doc.plant.net.places, args.deterministic))

    if args.cross_check:
        oracle = oracle_blocking(doc.plant, cap=args.budget)
        if oracle.is_nonblocking != verdict.nonblocking:
            print(
                f"CROSS-CHECK FAILED: oracle says "
                f"{'NONBLOCKING' if oracle.is_nonblocking else 'BLOCKING'}",
                file=sys.stderr,
            )
            return EXIT_MISMATCH
        print(f"cross-check: oracle agrees (|R|={len(oracle.reachable)})")
    return EXIT_NONBLOCKING if verdict.nonblocking else EXIT_BLOCKING


def _count(k: int, word: str) -> str:
    return f"{k} {word}" + ("" if k == 1 else "s")


def cmd_brg(args) -> int:
    doc = _load(args.input)
    build = build_brg if args.classical else build_minimax_brg
    graph = build(doc.plant, doc.partition, budget=args.budget)
    print(f"{_count(len(graph.nodes), 'node')}, {_count(len(graph.edges), 'edge')}")
    _write(args.dot, export_dot(graph, doc.name or "brg"))
    _write(args.json, graph_json(graph, doc.plant.net.places))
    return EXIT_NONBLOCKING


def cmd_oracle(args) -> int:
    doc = _load(args.input)
    rg = build_reachability_graph(doc.plant, cap=args.budget)
    cls = oracle_blocking(doc.plant, rg=rg)
    print(f"|R|={len(rg.markings)}, blocking={len(cls.blocking)}, dead={len(cls.dead)}")
    _write(args.dot, export_dot(rg, doc.name or "rg"))
    return EXIT_NONBLOCKING


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    config = GenConfig(rg_cap=args.rg_cap)
    for sub, plant, partition in random_corpus(args.seed, args.count, config):
        doc = PlantDocument(plant, partition, f"rand-{sub}", (("seed", sub),))
        (out / f"plant_{written:04d}.pnet").write_text(serialize_plant(doc), encoding="utf-8")
        log.info("wrote plant %d from seed %d", written, sub)
        written += 1
    print(f"wrote {written} plants to {out}")
    return EXIT_NONBLOCKING


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mmbrg", description="Nonblockingness verification of bounded Petri nets"
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="decide nonblockingness via the minimax-BRG")
    v.add_argument("input")
    v.add_argument("--report", metavar="PATH", help="write a JSON report")
    v.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
    v.add_argument("--all-deadlocks", action="store_true", help="collect every non-final deadlock")
    v.add_argument("--cross-check", action="store_true", help="compare with the brute-force oracle")
    v.add_argument("--deterministic", action="store_true", help="byte-stable output")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("brg", help="build a basis reachability graph")
    b.add_argument("input")
    kind = b.add_mutually_exclusive_group()
    kind.add_argument("--minimax", action="store_true", default=True)
    kind.add_argument("--classical", action="store_true")
    b.add_argument("--dot", metavar="PATH")
    b.add_argument("--json", metavar="PATH")
    b.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
    b.add_argument("--deterministic", action="store_true")
    b.set_defaults(func=cmd_brg)

    o = sub.add_parser("oracle", help="brute-force reachability analysis")
    o.add_argument("input")
    o.add_argument("--dot", metavar="PATH")
    o.add_argument("--budget", type=_budget, default=DEFAULT_BUDGET)
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="write a seeded random corpus of bounded plants")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=50)
    g.add_argument("--out", required=True)
    g.add_argument("--rg-cap", type=_budget, default=5000)
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except NetError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except BudgetExceeded as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
