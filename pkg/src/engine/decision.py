# ────────────── src/engine/decision.py ──────────────
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from src.core import bdd as bdd_ops
from src.core import masking, oracle, runtime
from src.core.expr import IndexedExpr, compile_expr

log = logging.getLogger(__name__)


class Decision:
    """
    One compiled decision: normalized expression, BDD and masking table.
    The table only depends on structure, so it is built once here and every
    run, check and generation reuses it.
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.expr: IndexedExpr = compile_expr(text)
        self.bdd = bdd_ops.lower(self.expr)
        self.table = masking.build_table(self.bdd)

    @property
    def n(self) -> int:
        return self.expr.n

    # ---------- analysis ----------
    def pseudo_terminals(self) -> list[bdd_ops.Target]:
        return sorted(masking.pseudo_terminals(self.bdd), key=bdd_ops.target_key)

    def effects(self) -> list[masking.EffectRow]:
        return masking.effects(self.bdd, self.table)

    def is_tree(self) -> bool:
        return bdd_ops.is_tree(self.bdd)

    def to_dot(self) -> str:
        return bdd_ops.to_dot(self.bdd)

    # ---------- execution ----------
    def empty_accumulator(self) -> runtime.CoverageAccumulator:
        return runtime.CoverageAccumulator.empty(self.bdd)

    def run(self, suite: Iterable[Sequence[bool]]) -> runtime.CoverageAccumulator:
        return runtime.run_suite(self.bdd, self.table, suite)

    def report(self, acc: runtime.CoverageAccumulator) -> runtime.CoverageReport:
        return runtime.report(self.expr, self.bdd, acc)

    # ---------- oracle ----------
    def check(self, vectors: Optional[Sequence[Sequence[bool]]] = None, **limits) -> oracle.CheckReport:
        return oracle.differential_check(
            self.expr, b=self.bdd, table=self.table, vectors=vectors, **limits
        )

    def generate(self, **limits) -> oracle.TestSuite:
        return oracle.generate_suite(self.expr, self.bdd, self.table, **limits)


def setup_decision(text: str) -> Decision:
    """Parse, lower and tabulate ``text``; raises CoverageError subclasses."""
    return Decision(text)


# ---------- fuzzing ----------
@dataclass(frozen=True)
class FuzzResult:
    iteration: int
    expression: str
    checked: int
    mismatches: tuple[oracle.Mismatch, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def fuzz_one(iteration: int, seed: int, conditions: int, exhaustive_limit: int, sample_size: int) -> FuzzResult:
    text = oracle.random_expr(seed + iteration, conditions)
    decision = setup_decision(text)
    result = decision.check(exhaustive_limit=exhaustive_limit, sample_size=sample_size, seed=seed + iteration)
    return FuzzResult(iteration, text, result.checked, result.mismatches)


def run_fuzz(
    conditions: int,
    iterations: int,
    seed: int,
    *,
    workers: int = 1,
    exhaustive_limit: int = oracle.EXHAUSTIVE_LIMIT,
    sample_size: int = oracle.SAMPLE_SIZE,
) -> list[FuzzResult]:
    """Results are ordered by iteration index whatever the worker count."""
    args = [(i, seed, conditions, exhaustive_limit, sample_size) for i in range(iterations)]
    if workers <= 1:
        results = [fuzz_one(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fuzz_one, *zip(*args))) if args else []
    failures = sum(1 for r in results if not r.ok)
    if failures:
        log.warning("%d of %d fuzz iterations failed", failures, iterations)
    return sorted(results, key=lambda r: r.iteration)
