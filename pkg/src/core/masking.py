# ────────────── src/core/masking.py ──────────────
"""Masking tables computed from BDD structure.

A vertex with in-degree >= 2 is a pseudo-terminal of an embedded
subexpression. For every ordered pair of its predecessors (x_n, x_m) the
conditions that can only reach x or x_e (the other successor of x_n) are
masked when the edge (x_m, x) is taken.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from src.core.bdd import Bdd, Edge, Target, Terminal, target_key, target_name
from src.core.errors import NotAPseudoTerminalError

log = logging.getLogger(__name__)


# ---------- condition masks ----------
def bit(index: int) -> int:
    return 1 << (index - 1)


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= bit(i)
    return mask


def conditions(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def render_mask(mask: int, n: int) -> str:
    """Condition 1 leftmost."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


# ---------- types ----------
@dataclass(frozen=True)
class MaskingTriple:
    x_e: Target
    x_n: int
    x_m: int
    x: Target

    def __str__(self) -> str:
        return f"({target_name(self.x_e)}, x{self.x_n}, x{self.x_m})"


@dataclass(frozen=True)
class MaskingTable:
    n: int
    entries: dict[Edge, int] = field(default_factory=dict)

    def mask(self, edge: Edge) -> int:
        return self.entries.get(edge, 0)

    def rows(self) -> list[tuple[Edge, int]]:
        return sorted(self.entries.items(), key=lambda item: item[0].sort_key)

    def render_rows(self) -> list[tuple[str, str, str]]:
        return [
            (str(edge), ", ".join(f"x{i}" for i in conditions(mask)), render_mask(mask, self.n))
            for edge, mask in self.rows()
        ]

    def __len__(self) -> int:
        return len(self.entries)


# ---------- P(x) ----------
def pseudo_terminals(b: Bdd, graph: Optional[nx.MultiDiGraph] = None) -> frozenset[Target]:
    g = graph if graph is not None else b.graph()
    return frozenset(node for node, degree in g.in_degree() if degree >= 2)


def _other_successor(b: Bdd, vertex: int, x: Target) -> Target:
    then_t, else_t = b.successors(vertex)
    return else_t if then_t == x else then_t


def triples(b: Bdd, x: Target, graph: Optional[nx.MultiDiGraph] = None) -> list[MaskingTriple]:
    g = graph if graph is not None else b.graph()
    degree = g.in_degree(x) if x in g else 0
    if degree < 2:
        raise NotAPseudoTerminalError(target_name(x), degree)
    preds = sorted(set(g.predecessors(x)))
    return [
        MaskingTriple(_other_successor(b, x_n, x), x_n, x_m, x)
        for x_n, x_m in itertools.combinations(preds, 2)
    ]


# ---------- leaf peeling ----------
def _peel(b: Bdd, g: nx.MultiDiGraph, x: Target, x_e: Target, x_n: int) -> frozenset[int]:
    removed: set[Target] = {x, x_e}
    collected: set[int] = set()
    frontier = deque(sorted(set(g.predecessors(x)) | set(g.predecessors(x_e)), key=target_key))
    while frontier:
        u = frontier.popleft()
        if u in removed:
            continue
        if all(s in removed for s in b.successors(u)):
            removed.add(u)
            collected.add(u)
            frontier.extend(g.predecessors(u))
    return frozenset(i for i in collected if i <= x_n)


def collect_masked(b: Bdd, t: MaskingTriple, graph: Optional[nx.MultiDiGraph] = None) -> frozenset[int]:
    """Conditions made into leaves once x and x_e are removed."""
    g = graph if graph is not None else b.graph()
    return _peel(b, g, t.x, t.x_e, t.x_n)


def build_table(b: Bdd) -> MaskingTable:
    g = b.graph()
    entries: dict[Edge, int] = {}
    # pairs sharing x_n peel the same leaves
    peeled: dict[tuple[Target, Target, int], frozenset[int]] = {}
    for x in sorted(pseudo_terminals(b, g), key=target_key):
        for t in triples(b, x, g):
            key = (t.x, t.x_e, t.x_n)
            if key not in peeled:
                peeled[key] = collect_masked(b, t, g)
            mask = mask_of(peeled[key])
            if not mask:
                continue
            edge = b.edge(t.x_m, b.then_succ[t.x_m - 1] == x)
            entries[edge] = entries.get(edge, 0) | mask
    log.debug("masking table for %d conditions has %d entries", b.n, len(entries))
    return MaskingTable(b.n, entries)


# ---------- effect rows ----------
SHORT_CIRCUITED = "*"
MASKED = "-"


@dataclass(frozen=True)
class EffectRow:
    edge: Edge
    marks: tuple[str, ...]


def effects(b: Bdd, m: MaskingTable) -> list[EffectRow]:
    """For each edge, mark conditions it skips (*) and conditions it masks (-)."""
    rows = []
    for edge in b.edges():
        masked = set(conditions(m.mask(edge)))
        end = b.n + 1 if isinstance(edge.target, Terminal) else edge.target
        marks = []
        for k in b.vertices:
            if k in masked:
                marks.append(MASKED)
            elif edge.source < k < end:
                marks.append(SHORT_CIRCUITED)
            else:
                marks.append("")
        rows.append(EffectRow(edge, tuple(marks)))
    return rows
