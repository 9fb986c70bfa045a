# ────────────── src/core/bdd.py ──────────────
"""The evaluation graph of a decision as a reduced ordered BDD.

Vertex ``i`` tests condition ``i``; the two terminals are sentinels rather than
numbered vertices so that a vertex index is always a condition index. Edges
follow the condition *outcome*: the then-edge is taken when the condition
evaluates to true, whatever its polarity.
"""

from __future__ import annotations

import enum
import hashlib
import logging
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import networkx as nx

from src.core.errors import InvariantViolationError
from src.core.expr import Conjunction, IndexedExpr, Literal, Node, check_length

log = logging.getLogger(__name__)


class Terminal(enum.Enum):
    FALSE = "0"
    TRUE = "1"

    def __str__(self) -> str:
        return self.value


T0 = Terminal.FALSE
T1 = Terminal.TRUE

Target = Union[int, Terminal]


def target_key(t: Target) -> tuple[int, int]:
    """Sort key: vertices by index, then 0, then 1."""
    if isinstance(t, Terminal):
        return (1, int(t.value))
    return (0, t)


def target_name(t: Target) -> str:
    return str(t) if isinstance(t, Terminal) else f"x{t}"


@dataclass(frozen=True)
class Edge:
    source: int
    outcome: bool
    target: Target

    @property
    def sort_key(self) -> tuple[int, tuple[int, int]]:
        return (self.source, target_key(self.target))

    def __str__(self) -> str:
        return f"({target_name(self.source)},{target_name(self.target)})"


@dataclass(frozen=True)
class Path:
    edges: tuple[Edge, ...]
    terminal: Terminal

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(e.source for e in self.edges)

    def __str__(self) -> str:
        return " ".join(str(e) for e in self.edges)


@dataclass(frozen=True)
class Bdd:
    """Successor table; entry ``i - 1`` belongs to vertex ``i``."""

    n: int
    then_succ: tuple[Target, ...]
    else_succ: tuple[Target, ...]
    negated: tuple[bool, ...] = ()
    labels: tuple[str, ...] = ()

    root = 1

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def successor(self, vertex: int, outcome: bool) -> Target:
        return self.then_succ[vertex - 1] if outcome else self.else_succ[vertex - 1]

    def successors(self, vertex: int) -> tuple[Target, Target]:
        return self.then_succ[vertex - 1], self.else_succ[vertex - 1]

    def edge(self, vertex: int, outcome: bool) -> Edge:
        return Edge(vertex, outcome, self.successor(vertex, outcome))

    def edges(self) -> Iterator[Edge]:
        for i in self.vertices:
            yield self.edge(i, True)
            yield self.edge(i, False)

    def is_negated(self, vertex: int) -> bool:
        return bool(self.negated) and self.negated[vertex - 1]

    def label(self, vertex: int) -> str:
        return self.labels[vertex - 1] if self.labels else f"x{vertex}"

    # ---------- graph view ----------
    def graph(self) -> nx.MultiDiGraph:
        """A fresh networkx view; parallel edges survive so in-degrees are exact."""
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices, kind="condition")
        g.add_nodes_from((T0, T1), kind="terminal")
        for e in self.edges():
            if isinstance(e.target, Terminal) or (
                isinstance(e.target, int) and 1 <= e.target <= self.n
            ):
                g.add_edge(e.source, e.target, key=e.outcome, outcome=e.outcome)
        return g


# ---------- lowering ----------
def lower(ie: IndexedExpr) -> Bdd:
    """Continuation lowering: each node is wired to its (true, false) continuations."""
    then_succ: list[Target] = [T0] * ie.n
    else_succ: list[Target] = [T0] * ie.n

    def wire(node: Node, ct: Target, cf: Target) -> Target:
        if isinstance(node, Literal):
            then_succ[node.index - 1] = ct
            else_succ[node.index - 1] = cf
            return node.index
        entry = ct if isinstance(node, Conjunction) else cf
        for child in reversed(node.children):
            if isinstance(node, Conjunction):
                entry = wire(child, entry, cf)
            else:
                entry = wire(child, ct, entry)
        return entry

    wire(ie.root, T1, T0)
    literals = ie.literals
    b = Bdd(
        ie.n,
        tuple(then_succ),
        tuple(else_succ),
        tuple(lit.negated for lit in literals),
        tuple(lit.label for lit in literals),
    )
    violations = validate(b)
    if violations:
        raise InvariantViolationError(violations)
    log.debug("lowered %d conditions to %d edges", b.n, 2 * b.n)
    return b


# ---------- validation ----------
NOT_ORDERED = "NotOrdered"
REDUNDANT_TEST = "RedundantTest"
UNREACHABLE = "Unreachable"
DANGLING_PATH = "DanglingPath"


@dataclass(frozen=True)
class Violation:
    rule: str
    vertex: int

    def __str__(self) -> str:
        return f"{self.rule}(x{self.vertex})"


def validate(b: Bdd) -> list[Violation]:
    found: set[Violation] = set()
    for i in b.vertices:
        then_t, else_t = b.successors(i)
        for succ in (then_t, else_t):
            if isinstance(succ, Terminal):
                continue
            if not isinstance(succ, int) or not 1 <= succ <= b.n:
                found.add(Violation(DANGLING_PATH, i))
            elif succ <= i:
                found.add(Violation(NOT_ORDERED, i))
        if then_t == else_t:
            found.add(Violation(REDUNDANT_TEST, i))

    g = b.graph()
    if b.n:
        reachable = nx.descendants(g, b.root) | {b.root}
        for i in b.vertices:
            if i not in reachable:
                found.add(Violation(UNREACHABLE, i))
            if not ({T0, T1} & nx.descendants(g, i)):
                found.add(Violation(DANGLING_PATH, i))
    return sorted(found, key=lambda v: (v.vertex, v.rule))


# ---------- queries ----------
def path(b: Bdd, v: Sequence[bool]) -> Path:
    check_length(b.n, v)
    edges: list[Edge] = []
    current: Target = b.root
    while not isinstance(current, Terminal):
        e = b.edge(current, bool(v[current - 1]))
        edges.append(e)
        current = e.target
    return Path(tuple(edges), current)


def in_degrees(b: Bdd) -> dict[Target, int]:
    return dict(b.graph().in_degree())


def is_tree(b: Bdd) -> bool:
    """True when no condition vertex is shared by two incoming edges."""
    degrees = in_degrees(b)
    return all(degrees[i] <= 1 for i in b.vertices)


def fingerprint(b: Bdd) -> str:
    table = ";".join(
        f"{target_name(t)},{target_name(e)}" for t, e in zip(b.then_succ, b.else_succ)
    )
    return hashlib.sha256(f"{b.n}|{table}".encode()).hexdigest()[:16]


# ---------- DOT export ----------
def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r"\""))


def to_dot(b: Bdd) -> str:
    lines = ["digraph bdd {", "\tnode [shape=circle];"]
    for i in b.vertices:
        name = f"!x{i}" if b.is_negated(i) else f"x{i}"
        lines.append(f"\tx{i} [label={_gvquote(name)}, tooltip={_gvquote(b.label(i))}];")
    for t in (T0, T1):
        lines.append(f"\tT{t.value} [label={_gvquote(t.value)}, shape=box];")
    for e in b.edges():
        target = f"T{e.target.value}" if isinstance(e.target, Terminal) else f"x{e.target}"
        style = "solid" if e.outcome else "dashed"
        lines.append(f"\tx{e.source} -> {target} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
