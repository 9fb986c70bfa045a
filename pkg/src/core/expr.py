# ────────────── src/core/expr.py ──────────────
"""Decision expressions: parsing, negation push-down and condition indexing.

Grammar (lowest precedence first)::

    or_expr  := and_expr ('||' and_expr)*
    and_expr := unary ('&&' unary)*
    unary    := '!' unary | primary
    primary  := IDENT | '(' or_expr ')'

Every occurrence of an identifier is a distinct condition, so ``a && b || a``
has three conditions.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, NamedTuple, Sequence, Union

from src.core.errors import (
    EmptyInputError,
    ExprSyntaxError,
    LengthMismatchError,
    TooManyConditionsError,
)

log = logging.getLogger(__name__)

MAX_CONDITIONS = 64
# open parentheses plus pending negations
MAX_NESTING = 100
CONSTANTS = {"true", "false"}

InputVector = tuple[bool, ...]


# ---------- tree nodes ----------
@dataclass(frozen=True)
class Condition:
    label: str


@dataclass(frozen=True)
class Negation:
    child: "Expr"


@dataclass(frozen=True)
class Conjunction:
    children: tuple["Expr", ...]


@dataclass(frozen=True)
class Disjunction:
    children: tuple["Expr", ...]


@dataclass(frozen=True)
class Literal:
    """A condition occurrence in a normalized tree."""

    label: str
    index: int
    negated: bool = False

    def __str__(self) -> str:
        return f"!{self.label}" if self.negated else self.label


Expr = Union[Condition, Negation, Conjunction, Disjunction]
Node = Union[Literal, Conjunction, Disjunction]


@dataclass(frozen=True)
class IndexedExpr:
    """A negation-free tree whose leaves are numbered 1..n by occurrence."""

    root: Node
    n: int

    @property
    def literals(self) -> tuple[Literal, ...]:
        return tuple(_leaves(self.root))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lit.label for lit in self.literals)

    def __str__(self) -> str:
        return render(self)


# ---------- tokenizer ----------
class Token(NamedTuple):
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(
    r"(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>&&|\|\||!|\(|\))|(?P<space>\s+)"
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            ch = text[pos]
            if ch in "&|":
                raise ExprSyntaxError(f"expected '{ch * 2}'", pos)
            raise ExprSyntaxError(f"unexpected character {ch!r}", pos)
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


def _describe(token: Token) -> str:
    return "end of input" if token.kind == "end" else repr(token.text)


class _Parser:
    def __init__(self, tokens: list[Token]) -> None:
        self.tokens = tokens
        self.i = 0
        self.depth = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.text != text or token.kind == "end":
            raise ExprSyntaxError(f"expected {text!r} but found {_describe(token)}", token.pos)
        return self.advance()

    # ---------- productions ----------
    def parse(self) -> Expr:
        node = self.or_expr()
        token = self.peek()
        if token.kind != "end":
            raise ExprSyntaxError(
                f"expected '&&', '||' or end of input but found {_describe(token)}", token.pos
            )
        return node

    def or_expr(self) -> Expr:
        children = [self.and_expr()]
        while self.peek().text == "||":
            self.advance()
            children.append(self.and_expr())
        return children[0] if len(children) == 1 else Disjunction(tuple(children))

    def and_expr(self) -> Expr:
        children = [self.unary()]
        while self.peek().text == "&&":
            self.advance()
            children.append(self.unary())
        return children[0] if len(children) == 1 else Conjunction(tuple(children))

    def enter(self, token: Token) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ExprSyntaxError(f"nesting deeper than {MAX_NESTING} levels", token.pos)

    def unary(self) -> Expr:
        if self.peek().text == "!":
            self.enter(self.advance())
            node = Negation(self.unary())
            self.depth -= 1
            return node
        return self.primary()

    def primary(self) -> Expr:
        token = self.peek()
        if token.kind == "ident":
            if token.text.lower() in CONSTANTS:
                raise ExprSyntaxError(f"constant {token.text!r} is not a condition", token.pos)
            self.advance()
            return Condition(token.text)
        if token.text == "(" and token.kind == "op":
            self.enter(self.advance())
            node = self.or_expr()
            self.expect(")")
            self.depth -= 1
            return node
        raise ExprSyntaxError(
            f"expected identifier, '!' or '(' but found {_describe(token)}", token.pos
        )


def parse(text: str) -> Expr:
    if not text or not text.strip():
        raise EmptyInputError()
    return _Parser(tokenize(text)).parse()


# ---------- normalization ----------
def count_conditions(e: Expr) -> int:
    if isinstance(e, Condition):
        return 1
    if isinstance(e, Negation):
        return count_conditions(e.child)
    return sum(count_conditions(c) for c in e.children)


def _push(e: Expr, negate: bool, counter: Iterator[int]) -> Node:
    if isinstance(e, Condition):
        return Literal(e.label, next(counter), negate)
    if isinstance(e, Negation):
        return _push(e.child, not negate, counter)
    # De Morgan: a negated conjunction becomes a disjunction and vice versa
    if isinstance(e, Conjunction):
        kind = Disjunction if negate else Conjunction
    else:
        kind = Conjunction if negate else Disjunction
    children: list[Node] = []
    for child in e.children:
        pushed = _push(child, negate, counter)
        if isinstance(pushed, kind):
            children.extend(pushed.children)
        else:
            children.append(pushed)
    return kind(tuple(children))


def normalize(e: Expr) -> IndexedExpr:
    n = count_conditions(e)
    if n > MAX_CONDITIONS:
        raise TooManyConditionsError(n, MAX_CONDITIONS)
    root = _push(e, False, itertools.count(1))
    log.debug("normalized %d conditions", n)
    return IndexedExpr(root, n)


def compile_expr(text: str) -> IndexedExpr:
    """parse + normalize."""
    return normalize(parse(text))


def to_expr(ie: IndexedExpr) -> Expr:
    """Re-express polarity flags as Negation nodes."""

    def convert(node: Node) -> Expr:
        if isinstance(node, Literal):
            cond = Condition(node.label)
            return Negation(cond) if node.negated else cond
        return type(node)(tuple(convert(c) for c in node.children))

    return convert(ie.root)


def render(ie: IndexedExpr | Node) -> str:
    node = ie.root if isinstance(ie, IndexedExpr) else ie
    if isinstance(node, Literal):
        return str(node)
    if isinstance(node, Conjunction):
        parts = [f"({render(c)})" if isinstance(c, Disjunction) else render(c) for c in node.children]
        return " && ".join(parts)
    return " || ".join(render(c) for c in node.children)


def _leaves(node: Node) -> Iterator[Literal]:
    if isinstance(node, Literal):
        yield node
    else:
        for child in node.children:
            yield from _leaves(child)


# ---------- evaluation ----------
def vector_from_int(value: int, n: int) -> InputVector:
    """Condition 1 is the most significant bit."""
    return tuple(bool(value >> (n - 1 - i) & 1) for i in range(n))


def vector_to_int(v: Sequence[bool]) -> int:
    value = 0
    for bit in v:
        value = value << 1 | int(bool(bit))
    return value


def format_vector(v: Sequence[bool]) -> str:
    return "".join("1" if b else "0" for b in v)


def check_length(n: int, v: Sequence[bool]) -> None:
    if len(v) != n:
        raise LengthMismatchError(n, len(v))


def _eval(node: Node, v: Sequence[bool]) -> bool:
    if isinstance(node, Literal):
        return bool(v[node.index - 1])
    if isinstance(node, Conjunction):
        return all(_eval(c, v) for c in node.children)
    return any(_eval(c, v) for c in node.children)


def evaluate(ie: IndexedExpr, v: Sequence[bool]) -> bool:
    """Decision value; ``v`` holds condition outcomes, polarity already applied."""
    check_length(ie.n, v)
    return _eval(ie.root, v)


def outcomes_from_assignment(ie: IndexedExpr, assignment: Mapping[str, bool]) -> InputVector:
    """Translate raw variable values into condition outcomes."""
    return tuple(bool(assignment[lit.label]) != lit.negated for lit in ie.literals)


def evaluate_expr(e: Expr, assignment: Mapping[str, bool]) -> bool:
    """Evaluate an un-normalized tree over raw variable values."""
    if isinstance(e, Condition):
        return bool(assignment[e.label])
    if isinstance(e, Negation):
        return not evaluate_expr(e.child, assignment)
    if isinstance(e, Conjunction):
        return all(evaluate_expr(c, assignment) for c in e.children)
    return any(evaluate_expr(c, assignment) for c in e.children)


def _reachable(node: Node, fixed: Mapping[int, bool]) -> frozenset[bool]:
    if isinstance(node, Literal):
        if node.index in fixed:
            return frozenset((bool(fixed[node.index]),))
        return frozenset((False, True))
    values = [_reachable(c, fixed) for c in node.children]
    if isinstance(node, Conjunction):
        can_true, can_false = all(True in s for s in values), any(False in s for s in values)
    else:
        can_true, can_false = any(True in s for s in values), all(False in s for s in values)
    return frozenset(o for o, possible in ((False, can_false), (True, can_true)) if possible)


def reachable_values(ie: IndexedExpr, fixed: Mapping[int, bool]) -> frozenset[bool]:
    """
    Decision values reachable when only the conditions in ``fixed`` (index ->
    outcome) are pinned and every other condition is free. Exact because each
    condition occurs once in the tree.
    """
    return _reachable(ie.root, fixed)
