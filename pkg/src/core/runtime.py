# ────────────── src/core/runtime.py ──────────────
"""Simulated instrumentation: t/f bitsets per run, independence arrays globally.

Before each conditional jump the bits the edge masks are cleared from both
bitsets and the edge's own bit is set. At a terminal the bitsets are flushed
into the accumulator with a bitwise or.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

from src.core.bdd import Bdd, Edge, Terminal, fingerprint, path
from src.core.errors import DimensionMismatchError, IncompatibleAccumulatorsError
from src.core.expr import IndexedExpr
from src.core.masking import MaskingTable, bit, full_mask, render_mask

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExecutionRecord:
    n: int
    path: tuple[Edge, ...]
    outcome: Terminal
    pre_mask_t: int
    pre_mask_f: int
    post_mask_t: int
    post_mask_f: int

    def covered(self) -> frozenset[tuple[int, bool]]:
        """Condition outcomes shown to have an independent effect."""
        return outcome_pairs(self.post_mask_t, self.post_mask_f, self.n)

    def evaluated(self) -> frozenset[tuple[int, bool]]:
        return outcome_pairs(self.pre_mask_t, self.pre_mask_f, self.n)


def outcome_pairs(t: int, f: int, n: int) -> frozenset[tuple[int, bool]]:
    pairs = set()
    for i in range(1, n + 1):
        if t & bit(i):
            pairs.add((i, True))
        if f & bit(i):
            pairs.add((i, False))
    return frozenset(pairs)


def execute(b: Bdd, m: MaskingTable, v: Sequence[bool]) -> ExecutionRecord:
    walk = path(b, v)
    t = f = pre_t = pre_f = 0
    for edge in walk.edges:
        masked = m.mask(edge)
        t &= ~masked
        f &= ~masked
        if edge.outcome:
            t |= bit(edge.source)
            pre_t |= bit(edge.source)
        else:
            f |= bit(edge.source)
            pre_f |= bit(edge.source)
    return ExecutionRecord(b.n, walk.edges, walk.terminal, pre_t, pre_f, t, f)


# ---------- accumulation ----------
@dataclass(frozen=True)
class CoverageAccumulator:
    n: int
    fingerprint: str
    global_t: int = 0
    global_f: int = 0
    edges_taken: frozenset[Edge] = field(default_factory=frozenset)
    terminals_reached: frozenset[Terminal] = field(default_factory=frozenset)
    executions: int = 0

    @classmethod
    def empty(cls, b: Bdd) -> "CoverageAccumulator":
        return cls(b.n, fingerprint(b))

    def same_coverage(self, other: "CoverageAccumulator") -> bool:
        """Equality on the mask and set fields, ignoring the execution count."""
        return (
            self.global_t == other.global_t
            and self.global_f == other.global_f
            and self.edges_taken == other.edges_taken
            and self.terminals_reached == other.terminals_reached
        )


def accumulate(acc: CoverageAccumulator, r: ExecutionRecord) -> CoverageAccumulator:
    if r.n != acc.n:
        raise DimensionMismatchError(acc.n, r.n)
    return replace(
        acc,
        global_t=acc.global_t | r.post_mask_t,
        global_f=acc.global_f | r.post_mask_f,
        edges_taken=acc.edges_taken | frozenset(r.path),
        terminals_reached=acc.terminals_reached | {r.outcome},
        executions=acc.executions + 1,
    )


def merge(a: CoverageAccumulator, b: CoverageAccumulator) -> CoverageAccumulator:
    if a.n != b.n or a.fingerprint != b.fingerprint:
        raise IncompatibleAccumulatorsError(a.fingerprint, b.fingerprint)
    return replace(
        a,
        global_t=a.global_t | b.global_t,
        global_f=a.global_f | b.global_f,
        edges_taken=a.edges_taken | b.edges_taken,
        terminals_reached=a.terminals_reached | b.terminals_reached,
        executions=a.executions + b.executions,
    )


def run_suite(
    b: Bdd,
    m: MaskingTable,
    suite: Iterable[Sequence[bool]],
    acc: Optional[CoverageAccumulator] = None,
) -> CoverageAccumulator:
    acc = acc if acc is not None else CoverageAccumulator.empty(b)
    for v in suite:
        acc = accumulate(acc, execute(b, m, v))
    return acc


# ---------- reporting ----------
@dataclass(frozen=True)
class ConditionRow:
    index: int
    label: str
    negated: bool
    evaluated_true: bool
    evaluated_false: bool
    covered_true: bool
    covered_false: bool

    @staticmethod
    def _cell(covered: bool, evaluated: bool) -> str:
        if covered:
            return "yes"
        return "masked" if evaluated else "no"

    @property
    def true_cell(self) -> str:
        return self._cell(self.covered_true, self.evaluated_true)

    @property
    def false_cell(self) -> str:
        return self._cell(self.covered_false, self.evaluated_false)

    @property
    def name(self) -> str:
        prefix = "!" if self.negated else ""
        return f"x{self.index} ({prefix}{self.label})"


@dataclass(frozen=True)
class CoverageReport:
    expression: str
    n: int
    conditions: tuple[ConditionRow, ...]
    decisions_covered: int
    edges_covered: int
    mcdc_covered: int
    executions: int

    @property
    def total_edges(self) -> int:
        return 2 * self.n

    @property
    def decision_percent(self) -> float:
        return 100.0 * self.decisions_covered / 2

    @property
    def condition_percent(self) -> float:
        return 100.0 * self.edges_covered / self.total_edges

    @property
    def mcdc_percent(self) -> float:
        return 100.0 * self.mcdc_covered / (2 * self.n)

    @property
    def complete(self) -> bool:
        return self.mcdc_covered == 2 * self.n

    def header_lines(self) -> list[str]:
        return [f"expression: {self.expression}", f"conditions: {self.n}"]

    def summary_lines(self) -> list[str]:
        return [
            f"decision: {self.decisions_covered}/2",
            f"condition: {self.edges_covered}/{self.total_edges}",
            f"mcdc: {self.mcdc_covered}/{2 * self.n} ({self.mcdc_percent:.1f}%)",
        ]


def report(e: IndexedExpr, b: Bdd, acc: CoverageAccumulator) -> CoverageReport:
    for n in (e.n, acc.n):
        if n != b.n:
            raise DimensionMismatchError(b.n, n)
    evaluated_t = evaluated_f = 0
    for edge in acc.edges_taken:
        if edge.outcome:
            evaluated_t |= bit(edge.source)
        else:
            evaluated_f |= bit(edge.source)
    rows = tuple(
        ConditionRow(
            lit.index,
            lit.label,
            lit.negated,
            bool(evaluated_t & bit(lit.index)),
            bool(evaluated_f & bit(lit.index)),
            bool(acc.global_t & bit(lit.index)),
            bool(acc.global_f & bit(lit.index)),
        )
        for lit in e.literals
    )
    mcdc = bin(acc.global_t & full_mask(b.n)).count("1") + bin(acc.global_f & full_mask(b.n)).count("1")
    result = CoverageReport(
        str(e),
        b.n,
        rows,
        len(acc.terminals_reached),
        len(acc.edges_taken),
        mcdc,
        acc.executions,
    )
    log.debug(
        "report t=%s f=%s mcdc=%d/%d",
        render_mask(acc.global_t, b.n),
        render_mask(acc.global_f, b.n),
        mcdc,
        2 * b.n,
    )
    return result
