# ────────────── src/api/commands.py ──────────────
from __future__ import annotations

import argparse
import functools
import logging
from pathlib import Path

from rich.console import Console
from rich.measure import Measurement
from rich.table import Table

from src.api.vectors import format_vectors, read_vectors
from src.app.config import Settings
from src.core.bdd import target_name
from src.core.errors import CoverageUnreachableError, UsageError
from src.core.expr import format_vector
from src.core.oracle import EXHAUSTIVE_LIMIT, find_duplicates, lower_bound
from src.core.runtime import execute, merge
from src.engine.decision import run_fuzz, setup_decision

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2


def register_commands(subparsers) -> None:
    """Attach every subcommand; each sets ``handler`` on its namespace."""
    p = subparsers.add_parser("analyze", help="print the BDD, pseudo-terminals and masking table")
    p.add_argument("expr")
    p.add_argument("--effects", action="store_true", help="also print short-circuit/masking effects per edge")
    p.set_defaults(handler=analyze)

    p = subparsers.add_parser("dot", help="print the BDD as a DOT digraph")
    p.add_argument("expr")
    p.set_defaults(handler=dot)

    p = subparsers.add_parser("run", help="execute vector files and report coverage")
    p.add_argument("expr")
    p.add_argument("--vectors", action="append", required=True, metavar="FILE",
                   help="vector file; repeat to merge several runs")
    p.add_argument("--trace", action="store_true", help="print path and covered outcomes per vector")
    p.set_defaults(handler=run)

    p = subparsers.add_parser("check", help="compare instrumented coverage with the flip oracle")
    p.add_argument("expr")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--vectors", metavar="FILE")
    group.add_argument("--exhaustive", action="store_true")
    p.set_defaults(handler=check)

    p = subparsers.add_parser("generate", help="generate an oracle-verified test suite")
    p.add_argument("expr")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(handler=generate)

    p = subparsers.add_parser("fuzz", help="differential check of random expressions")
    p.add_argument("--conditions", type=int, required=True)
    p.add_argument("--iterations", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=fuzz)


UNBOUNDED_WIDTH = 1 << 20


def _table(*columns: str) -> Table:
    table = Table(box=None, pad_edge=False, show_edge=False, header_style=None)
    for column in columns:
        table.add_column(column, no_wrap=True, overflow="ignore")
    return table


def _print_table(console: Console, table: Table) -> None:
    # sized to its content: one physical line per row, even past the console width
    table.width = Measurement.get(console, console.options.update_width(UNBOUNDED_WIDTH), table).maximum
    console.print(table)


def _outcomes(pairs) -> str:
    return "{" + ", ".join(f"x{i}={int(o)}" for i, o in sorted(pairs)) + "}"


# ---------- handlers ----------
def analyze(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    decision = setup_decision(args.expr)
    b = decision.bdd
    console.print(f"expression: {decision.expr}")
    console.print(f"conditions: {decision.n}")

    successors = _table("vertex", "condition", "then", "else")
    for i in b.vertices:
        label = ("!" if b.is_negated(i) else "") + b.label(i)
        then_t, else_t = b.successors(i)
        successors.add_row(f"x{i}", label, target_name(then_t), target_name(else_t))
    _print_table(console, successors)

    pseudo = decision.pseudo_terminals()
    console.print("pseudo-terminals: " + (", ".join(target_name(x) for x in pseudo) or "none"))
    console.print("tree: " + ("yes" if decision.is_tree() else "no"))

    console.print("masking table:")
    rows = decision.table.render_rows()
    if rows:
        table = _table("edge", "masked conditions", "bitmask")
        for row in rows:
            table.add_row(*row)
        _print_table(console, table)
    else:
        console.print("(empty)")

    if args.effects:
        table = _table("edge", *(f"x{i}" for i in b.vertices))
        for row in decision.effects():
            table.add_row(str(row.edge), *row.marks)
        console.print("effects (* short-circuited, - masked):")
        _print_table(console, table)
    return EXIT_OK


def dot(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    decision = setup_decision(args.expr)
    console.file.write(decision.to_dot())
    return EXIT_OK


def run(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    decision = setup_decision(args.expr)
    accumulators = []
    for name in args.vectors:
        suite = read_vectors(name, decision.n)
        for dup in find_duplicates(suite.vectors):
            log.warning("%s: duplicate vector %s", name, format_vector(dup))
        if args.trace:
            for position, v in enumerate(suite):
                record = execute(decision.bdd, decision.table, v)
                path = " ".join(str(e) for e in record.path)
                console.print(f"{name}:{suite.line_of(position)}: {format_vector(v)} -> {record.outcome} {path} "
                              f"covered {_outcomes(record.covered())}")
        accumulators.append(decision.run(suite))
    acc = functools.reduce(merge, accumulators, decision.empty_accumulator())
    result = decision.report(acc)

    for line in result.header_lines():
        console.print(line)
    table = _table("condition", "true covered", "false covered")
    for row in result.conditions:
        table.add_row(row.name, row.true_cell, row.false_cell)
    _print_table(console, table)
    for line in result.summary_lines():
        console.print(line)
    return EXIT_OK if result.complete else EXIT_PARTIAL


def check(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    decision = setup_decision(args.expr)
    limits = settings.limits
    if args.exhaustive:
        ceiling = max(limits["exhaustive_limit"], EXHAUSTIVE_LIMIT)
        if decision.n > ceiling:
            raise UsageError(
                f"--exhaustive enumerates at most {ceiling} conditions, the decision has {decision.n}"
            )
        limits["exhaustive_limit"] = max(limits["exhaustive_limit"], decision.n)
    vectors = read_vectors(args.vectors, decision.n).vectors if args.vectors else None
    result = decision.check(vectors, seed=settings.seed, **limits)
    for mismatch in result.mismatches:
        console.print(str(mismatch))
    console.print(f"{len(result.mismatches)} mismatches ({result.checked} vectors, {result.mode})")
    return EXIT_OK if result.ok else EXIT_PARTIAL


def generate(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    decision = setup_decision(args.expr)
    status = EXIT_OK
    try:
        suite = decision.generate(seed=settings.seed, **settings.limits)
    except CoverageUnreachableError as exc:
        log.warning("%s", exc)
        suite, status = exc.suite, EXIT_PARTIAL
    header = f"{decision.expr}: {len(suite)} vectors, lower bound {lower_bound(decision.n)}"
    text = format_vectors(suite, header=header)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        console.print(f"wrote {len(suite)} vectors to {args.out}")
    else:
        console.file.write(text)
    return status


def fuzz(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    workers = args.workers if args.workers is not None else settings.workers
    results = run_fuzz(
        args.conditions, args.iterations, args.seed, workers=workers, **settings.limits
    )
    failed = [r for r in results if not r.ok]
    for r in failed:
        console.print(f"FAIL iteration {r.iteration}: {r.expression}")
        for mismatch in r.mismatches:
            console.print(f"  {mismatch}")
    console.print(f"{len(results) - len(failed)}/{len(results)} passed")
    return EXIT_OK if not failed else EXIT_PARTIAL
