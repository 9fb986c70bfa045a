# ────────────── src/api/vectors.py ──────────────
"""Vector files: one vector per line, 0/1 values separated by spaces or commas,
``#`` starts a comment, blank lines are ignored."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional, Sequence

from src.core.errors import BadTokenError, WrongArityError
from src.core.expr import InputVector

_SEPARATORS = re.compile(r"[\s,]+")


@dataclass(frozen=True)
class VectorFile:
    vectors: tuple[InputVector, ...]
    lines: tuple[int, ...]

    def __iter__(self) -> Iterator[InputVector]:
        return iter(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def line_of(self, position: int) -> int:
        return self.lines[position]


def parse_vectors(text: str, n: int) -> VectorFile:
    vectors, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        data = raw.split("#", 1)[0].strip()
        if not data:
            continue
        tokens = [tok for tok in _SEPARATORS.split(data) if tok]
        for tok in tokens:
            if tok not in ("0", "1"):
                raise BadTokenError(lineno, tok)
        if len(tokens) != n:
            raise WrongArityError(lineno, n, len(tokens))
        vectors.append(tuple(tok == "1" for tok in tokens))
        lines.append(lineno)
    return VectorFile(tuple(vectors), tuple(lines))


def read_vectors(path: str | Path, n: int) -> VectorFile:
    return parse_vectors(Path(path).read_text(encoding="utf-8"), n)


def format_vectors(suite: Sequence[Sequence[bool]], header: Optional[str] = None) -> str:
    out = []
    if header:
        out.append(f"# {header}")
    out.extend(" ".join("1" if b else "0" for b in v) for v in suite)
    return "\n".join(out) + "\n"
