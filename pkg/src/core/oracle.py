# ────────────── src/core/oracle.py ──────────────
"""Brute-force ground truth for masking MC/DC.

A condition outcome is covered by a vector when the condition lies on the
evaluated path and flipping it can change the decision. Conditions evaluated
on the path keep their values; short-circuited ones are free, as they play no
part in the test.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from src.core.bdd import Bdd, Edge, lower, path
from src.core.errors import CoverageUnreachableError, InvariantViolationError
from src.core.expr import (
    Conjunction,
    IndexedExpr,
    InputVector,
    Literal,
    Node,
    check_length,
    evaluate,
    format_vector,
    reachable_values,
    vector_from_int,
)
from src.core.masking import MaskingTable, build_table
from src.core.runtime import execute

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 20
SAMPLE_SIZE = 4096
LEAF_NEGATION_PROBABILITY = 0.25

TestSuite = tuple[InputVector, ...]
CoveredOutcomes = frozenset[tuple[int, bool]]


def flip_covered(e: IndexedExpr, b: Bdd, v: Sequence[bool]) -> CoveredOutcomes:
    check_length(e.n, v)
    v = tuple(bool(x) for x in v)
    decision = evaluate(e, v)
    evaluated = {edge.source: v[edge.source - 1] for edge in path(b, v).edges}
    covered = set()
    for i, outcome in evaluated.items():
        if (not decision) in reachable_values(e, {**evaluated, i: not outcome}):
            covered.add((i, outcome))
    return frozenset(covered)


def all_outcomes(n: int) -> CoveredOutcomes:
    return frozenset((i, o) for i in range(1, n + 1) for o in (True, False))


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _outcome_bits(covered: CoveredOutcomes, n: int) -> int:
    bits = 0
    for i, o in covered:
        bits |= 1 << (i - 1 + (0 if o else n))
    return bits


def _bits_to_outcomes(bits: int, n: int) -> CoveredOutcomes:
    return frozenset(
        (i, o) for i in range(1, n + 1) for o in (True, False) if bits >> (i - 1 + (0 if o else n)) & 1
    )


# ---------- candidate vectors ----------
def candidate_vectors(
    n: int,
    *,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    sample_size: int = SAMPLE_SIZE,
    seed: int = 0,
) -> Iterator[InputVector]:
    """All vectors in ascending order, or a seeded sorted sample above the limit."""
    if n <= exhaustive_limit:
        for value in range(1 << n):
            yield vector_from_int(value, n)
        return
    rng = random.Random(seed)
    values: set[int] = set()
    while len(values) < min(sample_size, 1 << n):
        values.add(rng.getrandbits(n))
    log.warning("sampling %d of 2^%d vectors (seed %d)", len(values), n, seed)
    for value in sorted(values):
        yield vector_from_int(value, n)


def _span(node: Node) -> tuple[int, int]:
    first = last = node
    while not isinstance(first, Literal):
        first = first.children[0]
    while not isinstance(last, Literal):
        last = last.children[-1]
    return first.index, last.index


def sensitizing_vectors(e: IndexedExpr) -> Iterator[InputVector]:
    """
    For each condition, the two vectors in which it alone decides the outcome.
    Every sibling on its way to the root is set so that the parent passes the
    child's value through: true under ``&&``, false under ``||``.
    """
    for i in range(1, e.n + 1):
        values = [False] * e.n
        node: Node = e.root
        while not isinstance(node, Literal):
            through = isinstance(node, Conjunction)
            for child in node.children:
                first, last = _span(child)
                if first <= i <= last:
                    following = child
                else:
                    values[first - 1 : last] = [through] * (last - first + 1)
            node = following
        for outcome in (False, True):
            values[i - 1] = outcome
            yield tuple(values)


def candidate_pool(
    e: IndexedExpr,
    *,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    sample_size: int = SAMPLE_SIZE,
    seed: int = 0,
) -> list[InputVector]:
    """Exhaustive candidates, or the seeded sample plus the sensitizing vectors, ascending."""
    pool = candidate_vectors(e.n, exhaustive_limit=exhaustive_limit, sample_size=sample_size, seed=seed)
    if e.n <= exhaustive_limit:
        return list(pool)
    return sorted(set(pool) | set(sensitizing_vectors(e)))


# ---------- differential harness ----------
@dataclass(frozen=True)
class Mismatch:
    vector: InputVector
    expected: CoveredOutcomes
    actual: CoveredOutcomes

    def __str__(self) -> str:
        def fmt(outcomes: CoveredOutcomes) -> str:
            return "{" + ", ".join(f"x{i}={int(o)}" for i, o in sorted(outcomes)) + "}"

        return f"{format_vector(self.vector)}: oracle {fmt(self.expected)} instrumented {fmt(self.actual)}"


@dataclass(frozen=True)
class CheckReport:
    expression: str
    n: int
    mode: str
    checked: int
    mismatches: tuple[Mismatch, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def differential_check(
    e: IndexedExpr,
    *,
    b: Optional[Bdd] = None,
    table: Optional[MaskingTable] = None,
    vectors: Optional[Sequence[Sequence[bool]]] = None,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    sample_size: int = SAMPLE_SIZE,
    seed: int = 0,
) -> CheckReport:
    b = b if b is not None else lower(e)
    table = table if table is not None else build_table(b)
    if vectors is not None:
        mode, pool = "vectors", list(vectors)
    else:
        mode = "exhaustive" if e.n <= exhaustive_limit else "sampled"
        pool = candidate_pool(e, exhaustive_limit=exhaustive_limit, sample_size=sample_size, seed=seed)
    mismatches = []
    for v in pool:
        expected = flip_covered(e, b, v)
        actual = execute(b, table, v).covered()
        if expected != actual:
            mismatches.append(Mismatch(tuple(bool(x) for x in v), expected, actual))
    log.debug("checked %d vectors of %s: %d mismatches", len(pool), e, len(mismatches))
    return CheckReport(str(e), e.n, mode, len(pool), tuple(mismatches))


# ---------- suite generation ----------
def generate_suite(
    e: IndexedExpr,
    b: Bdd,
    m: MaskingTable,
    *,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    sample_size: int = SAMPLE_SIZE,
    seed: int = 0,
) -> TestSuite:
    """Greedy cover; ties go to the numerically smallest vector."""
    n = e.n
    covers: dict[int, InputVector] = {}
    for v in candidate_pool(e, exhaustive_limit=exhaustive_limit, sample_size=sample_size, seed=seed):
        record = execute(b, m, v)
        bits = record.post_mask_t | record.post_mask_f << n
        if bits and bits not in covers:
            covers[bits] = v

    goal = (1 << 2 * n) - 1
    covered = 0
    suite: list[InputVector] = []
    # candidates arrive in ascending order, so the first maximum is the smallest
    options = list(covers.items())
    while covered != goal:
        best_gain, best = 0, None
        for bits, v in options:
            gain = _popcount(bits & ~covered)
            if gain > best_gain:
                best_gain, best = gain, (bits, v)
        if best is None:
            break
        covered |= best[0]
        suite.append(best[1])

    verified = frozenset().union(*(flip_covered(e, b, v) for v in suite)) if suite else frozenset()
    if verified != _bits_to_outcomes(covered, n):
        raise InvariantViolationError([f"oracle disagrees with instrumented suite for {e}"])
    if covered != goal:
        missing = all_outcomes(n) - verified
        sampled = n > exhaustive_limit
        if sampled:
            log.warning("%d outcomes of %s not found among sampled candidates", len(missing), e)
        else:
            log.warning("%d outcomes of %s are not coverable", len(missing), e)
        raise CoverageUnreachableError(missing, suite, sampled=sampled)
    return tuple(suite)


def suite_coverage(e: IndexedExpr, b: Bdd, suite: Sequence[Sequence[bool]]) -> CoveredOutcomes:
    covered: set[tuple[int, bool]] = set()
    for v in suite:
        covered |= flip_covered(e, b, v)
    return frozenset(covered)


def find_duplicates(suite: Sequence[Sequence[bool]]) -> list[InputVector]:
    counts = Counter(tuple(bool(x) for x in v) for v in suite)
    return [v for v, count in counts.items() if count > 1]


def lower_bound(n: int) -> int:
    """ceil(2 * sqrt(n)), computed exactly."""
    return math.isqrt(4 * n - 1) + 1 if n > 0 else 0


def minimum_suite_size(e: IndexedExpr, b: Bdd, max_n: int = 4) -> int:
    """Smallest complete suite size by exhaustive subset search (tiny N only)."""
    if e.n > max_n:
        raise ValueError(f"exhaustive subset search is limited to {max_n} conditions")
    covers = {
        _outcome_bits(flip_covered(e, b, v), e.n) for v in candidate_vectors(e.n)
    }
    covers.discard(0)
    goal = (1 << 2 * e.n) - 1
    for k in range(1, len(covers) + 1):
        for combo in itertools.combinations(sorted(covers), k):
            acc = 0
            for bits in combo:
                acc |= bits
            if acc == goal:
                return k
    raise CoverageUnreachableError(all_outcomes(e.n), ())


def edge_covering_suite(b: Bdd, rng: random.Random) -> TestSuite:
    """A random suite that takes every edge at least once."""
    values = list(range(1 << b.n))
    rng.shuffle(values)
    every_edge = set(b.edges())
    taken: set[Edge] = set()
    suite = []
    for value in values:
        v = vector_from_int(value, b.n)
        edges = set(path(b, v).edges)
        if edges - taken:
            taken |= edges
            suite.append(v)
            if taken == every_edge:
                break
    return tuple(suite)


# ---------- expression corpora ----------
def random_expr(seed: int, n_conditions: int) -> str:
    if not 1 <= n_conditions <= 64:
        raise ValueError("n_conditions must be between 1 and 64")
    rng = random.Random(seed)
    labels = iter(range(1, n_conditions + 1))

    def build(count: int) -> tuple[str, bool]:
        if count == 1:
            text = f"c{next(labels)}"
            return ("!" + text if rng.random() < LEAF_NEGATION_PROBABILITY else text), False
        split = rng.randint(1, count - 1)
        op = rng.choice(("&&", "||"))
        parts = []
        for size in (split, count - split):
            text, compound = build(size)
            parts.append(f"({text})" if compound else text)
        return f" {op} ".join(parts), True

    return build(n_conditions)[0]


def _compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Ordered splits of n into two or more positive parts."""
    for first in range(1, n):
        rest = n - first
        yield (first, rest)
        for tail in _compositions(rest):
            yield (first,) + tail


def _shapes(n: int, parent: Optional[str]) -> list:
    if n == 1:
        return ["leaf"]
    shapes = []
    for op in ("&&", "||"):
        if op == parent:
            continue
        for parts in _compositions(n):
            for children in itertools.product(*(_shapes(p, op) for p in parts)):
                shapes.append((op, children))
    return shapes


def _render_shape(shape, polarity: Iterator[bool], labels: Iterator[int]) -> str:
    if shape == "leaf":
        text = f"c{next(labels)}"
        return "!" + text if next(polarity) else text
    op, children = shape
    parts = [
        _render_shape(c, polarity, labels) if c == "leaf" else f"({_render_shape(c, polarity, labels)})"
        for c in children
    ]
    return f" {op} ".join(parts)


def enumerate_exprs(max_n: int) -> list[str]:
    """Every normalized shape with every leaf polarity, up to max_n conditions."""
    corpus = []
    for n in range(1, max_n + 1):
        for shape in _shapes(n, None):
            for signs in itertools.product((False, True), repeat=n):
                corpus.append(_render_shape(shape, iter(signs), iter(range(1, n + 1))))
    return corpus
