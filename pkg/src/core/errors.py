# ────────────── src/core/errors.py ──────────────
"""Exceptions raised by the coverage engine.

Every error derives from :class:`CoverageError` so the CLI can map the whole
family to a single exit status.
"""

from __future__ import annotations

from typing import Any, Iterable, Sequence


class CoverageError(Exception):
    """Base class for every error raised by the engine."""


# ---------- expression errors ----------
class ExprSyntaxError(CoverageError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


class EmptyInputError(CoverageError):
    def __init__(self) -> None:
        super().__init__("empty expression")


class TooManyConditionsError(CoverageError):
    def __init__(self, count: int, limit: int) -> None:
        super().__init__(f"{count} conditions exceed the limit of {limit}")
        self.count = count
        self.limit = limit


class LengthMismatchError(CoverageError):
    def __init__(self, expected: int, got: int) -> None:
        super().__init__(f"vector has {got} values, expected {expected}")
        self.expected = expected
        self.got = got


# ---------- structural errors ----------
class InvariantViolationError(CoverageError):
    def __init__(self, violations: Sequence[Any]) -> None:
        rendered = ", ".join(str(v) for v in violations)
        super().__init__(f"BDD invariants violated: {rendered}")
        self.violations = tuple(violations)


class NotAPseudoTerminalError(CoverageError):
    def __init__(self, target: Any, in_degree: int) -> None:
        super().__init__(f"{target} has in-degree {in_degree}, expected >= 2")
        self.target = target
        self.in_degree = in_degree


# ---------- accumulator errors ----------
class DimensionMismatchError(CoverageError):
    def __init__(self, expected: int, got: int) -> None:
        super().__init__(f"record has {got} conditions, accumulator has {expected}")
        self.expected = expected
        self.got = got


class IncompatibleAccumulatorsError(CoverageError):
    def __init__(self, left: str, right: str) -> None:
        super().__init__(f"accumulators belong to different decisions ({left} != {right})")
        self.left = left
        self.right = right


# ---------- oracle errors ----------
class CoverageUnreachableError(CoverageError):
    """
    Raised when no suite reaches full coverage; carries the best suite found.
    ``sampled`` is set when the candidates were a sample, so the missing
    outcomes may be coverable by vectors outside it.
    """

    def __init__(
        self, missing: Iterable[tuple[int, bool]], suite: Sequence[tuple[bool, ...]], sampled: bool = False
    ) -> None:
        self.missing = tuple(sorted(missing))
        self.suite = tuple(suite)
        self.sampled = sampled
        rendered = ", ".join(f"x{i}={int(o)}" for i, o in self.missing)
        reason = "outcomes not found among sampled candidates" if sampled else "uncoverable outcomes"
        super().__init__(f"{reason}: {rendered}")


# ---------- vector file errors ----------
class BadTokenError(CoverageError):
    def __init__(self, line: int, token: str) -> None:
        super().__init__(f"line {line}: bad token {token!r}")
        self.line = line
        self.token = token


class WrongArityError(CoverageError):
    def __init__(self, line: int, expected: int, got: int) -> None:
        super().__init__(f"line {line}: expected {expected} values, got {got}")
        self.line = line
        self.expected = expected
        self.got = got


class ConfigError(CoverageError):
    pass


class UsageError(CoverageError):
    pass
