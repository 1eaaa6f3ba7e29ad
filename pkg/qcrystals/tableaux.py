"""Shifted tableaux, hook words, reading words and bracketing.

A shifted shape is a strict partition ``η_1 > η_2 > ... > η_ℓ > 0``; row r
(1-based, counted from the top) has η_r cells and is indented r−1 units, so
the cell at position p of row r sits in diagram column ``r + p − 1``.

A semistandard decomposition tableau (SDT) with letters 1..n fills such a
shape so that

* every row is a *hook word* (weakly decreasing, then strictly increasing),
* the leftmost entry of each row is strictly larger than every entry of the
  row below, and
* neither of the two forbidden configurations occurs::

      type L:  a                  type U:  b ... c
               c ... b                           a
               a <= b <= c                 a < b < c

  (a directly above c, resp. a directly below c).

The reading word reads the rows from right to left, top row first. Restricting
it to the letters i, i+1 and cancelling brackets (an i+1 followed later by an
i, innermost first) leaves ``red_i``: unmatched i's followed by unmatched
(i+1)'s. Every letter of a word carries the cell it came from so that crystal
operators can act on the tableau.
"""
import itertools as it
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from qcrystals.config import DEFAULT_MAX_FILLINGS, GuardExceeded
from qcrystals.weights import WeightVector

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]          # (row, position), both 1-based, row 1 = top


class ShapeError(ValueError):
    """A tableau or shape that is not even well-formed."""


# ====================================================================
# Shapes
# ====================================================================

@dataclass(frozen=True)
class Shape:
    """A strict partition, top row first."""
    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ShapeError(f"shape parts must be positive, got {parts}")
        if any(a <= b for a, b in zip(parts, parts[1:])):
            raise ShapeError(f"shape parts must be strictly decreasing, got {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Shape":
        """``"5,3,1"`` -> Shape((5, 3, 1))."""
        text = text.strip()
        if not text:
            return cls(())
        return cls(tuple(int(x) for x in text.split(",")))

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def padded(self, n: int) -> Tuple[int, ...]:
        if len(self.parts) > n:
            raise ShapeError(f"shape {self.parts} has more than {n} rows")
        return self.parts + (0,) * (n - len(self.parts))

    def cells(self) -> Iterator[Cell]:
        for r, length in enumerate(self.parts, start=1):
            for p in range(1, length + 1):
                yield r, p

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)


def strict_partitions(size: int, max_parts: Optional[int] = None) -> List[Shape]:
    """All strict partitions of ``size`` with at most ``max_parts`` parts."""
    out = []

    def rec(remaining: int, bound: int, acc: List[int]):
        if remaining == 0:
            out.append(Shape(tuple(acc)))
            return
        if max_parts is not None and len(acc) == max_parts:
            return
        for p in range(min(remaining, bound), 0, -1):
            acc.append(p)
            rec(remaining - p, p - 1, acc)
            acc.pop()

    rec(size, size, [])
    return out


# ====================================================================
# Tableaux
# ====================================================================

@dataclass(frozen=True)
class ShiftedTableau:
    """A filling of a shifted shape with letters 1..n (rows top to bottom)."""
    n: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        n = int(self.n)
        if n < 1:
            raise ShapeError(f"rank must be >= 1, got {n}")
        if len(rows) > n:
            raise ShapeError(f"{len(rows)} rows exceed rank {n}")
        Shape(tuple(len(row) for row in rows))
        for r, row in enumerate(rows, start=1):
            for x in row:
                if not 1 <= x <= n:
                    raise ShapeError(f"letter {x} in row {r} outside 1..{n}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n", n)

    @property
    def shape(self) -> Shape:
        return Shape(tuple(len(row) for row in self.rows))

    def __getitem__(self, cell: Cell) -> int:
        r, p = cell
        return self.rows[r - 1][p - 1]

    def cells(self) -> Iterator[Cell]:
        return self.shape.cells()

    @property
    def size(self) -> int:
        return sum(len(row) for row in self.rows)

    def replace(self, changes: Dict[Cell, int]) -> "ShiftedTableau":
        """A copy with the given cells overwritten."""
        rows = [list(row) for row in self.rows]
        for (r, p), x in changes.items():
            rows[r - 1][p - 1] = x
        return ShiftedTableau(self.n, tuple(tuple(row) for row in rows))

    def to_json(self) -> dict:
        return {"n": self.n, "rows": [list(row) for row in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "ShiftedTableau":
        try:
            return cls(int(data["n"]), tuple(tuple(row) for row in data["rows"]))
        except (KeyError, TypeError) as e:
            raise ShapeError(f"not a tableau JSON object: {data!r}") from e

    def __str__(self) -> str:
        return " / ".join("".join(str(x) if x < 10 else f"({x})" for x in row)
                          for row in self.rows) or "∅"


# ====================================================================
# Hook words
# ====================================================================

def is_hook_word(word: Sequence[int]) -> bool:
    """True iff word = u_1 >= ... >= u_k < u_{k+1} < ... < u_N for some k."""
    if len(word) == 0:
        raise ValueError("empty word")
    k = 1
    while k < len(word) and word[k] <= word[k - 1]:
        k += 1
    return all(a < b for a, b in zip(word[k - 1:], word[k:]))


# ====================================================================
# Tagged words
# ====================================================================

@dataclass(frozen=True)
class TaggedLetter:
    letter: int
    row: int
    pos: int

    @property
    def cell(self) -> Cell:
        return self.row, self.pos


@dataclass(frozen=True)
class TaggedWord:
    """A word whose letters remember the tableau cell they were read from."""
    entries: Tuple[TaggedLetter, ...] = field(default_factory=tuple)

    @property
    def letters(self) -> Tuple[int, ...]:
        return tuple(e.letter for e in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TaggedLetter]:
        return iter(self.entries)

    def __getitem__(self, k: int) -> TaggedLetter:
        return self.entries[k]

    def count(self, letter: int) -> int:
        return sum(1 for e in self.entries if e.letter == letter)


def reading_word(T: ShiftedTableau) -> TaggedWord:
    """Rows top to bottom, each read right to left."""
    entries = []
    for r, row in enumerate(T.rows, start=1):
        for p in range(len(row), 0, -1):
            entries.append(TaggedLetter(row[p - 1], r, p))
    return TaggedWord(tuple(entries))


def _check_index(n: int, i: int):
    if not 1 <= i <= n - 1:
        raise ValueError(f"index {i} out of range 1..{n - 1}")


def restricted_word(T: ShiftedTableau, i: int) -> TaggedWord:
    """The subword of the reading word on the letters i and i+1."""
    _check_index(T.n, i)
    return TaggedWord(tuple(e for e in reading_word(T) if e.letter in (i, i + 1)))


def bracket(word: TaggedWord, i: int) -> Tuple[Dict[int, int], List[int]]:
    """Match every i with the nearest unmatched i+1 before it.

    :return: (pairs, unmatched) where ``pairs`` maps the position of each
        matched i+1 to the position of the i that cancels it, and
        ``unmatched`` lists the surviving positions in word order.
    """
    stack: List[int] = []
    pairs: Dict[int, int] = {}
    alive: List[bool] = []
    for k, e in enumerate(word.entries):
        alive.append(True)
        if e.letter == i + 1:
            stack.append(k)
        elif e.letter == i:
            if stack:
                top = stack.pop()
                pairs[top] = k
                alive[top] = False
                alive[k] = False
        else:
            raise ValueError(f"letter {e.letter} foreign to the index {i}")
    return pairs, [k for k, a in enumerate(alive) if a]


def pair_reduce(word: TaggedWord, i: int) -> TaggedWord:
    """Cancel adjacent (i+1, i) pairs until none remain."""
    _, unmatched = bracket(word, i)
    return TaggedWord(tuple(word.entries[k] for k in unmatched))


def reduced_word(T: ShiftedTableau, i: int) -> TaggedWord:
    """red_i(T)."""
    return pair_reduce(restricted_word(T, i), i)


# ====================================================================
# Validation
# ====================================================================

@dataclass(frozen=True)
class Violation:
    kind: str                      # 'hook' | 'leftmost' | 'type-L' | 'type-U'
    cells: Tuple[Cell, ...]
    message: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "cells": [list(c) for c in self.cells],
                "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_json() for v in self.violations]}


def _column_map(T: ShiftedTableau) -> List[Dict[int, int]]:
    """Per row: diagram column -> position."""
    return [{r + p - 1: p for p in range(1, len(row) + 1)}
            for r, row in enumerate(T.rows, start=1)]


def _violations(T: ShiftedTableau) -> Iterator[Violation]:
    rows = T.rows
    for r, row in enumerate(rows, start=1):
        if row and not is_hook_word(row):
            yield Violation("hook", tuple((r, p) for p in range(1, len(row) + 1)),
                            f"row {r} {list(row)} is not a hook word")
    for r in range(1, len(rows)):
        head = rows[r - 1][0]
        for p, x in enumerate(rows[r], start=1):
            if x >= head:
                yield Violation("leftmost", ((r, 1), (r + 1, p)),
                                f"row {r} starts with {head}, not above {x} at ({r + 1},{p})")

    columns = _column_map(T)
    for r in range(1, len(rows)):
        upper, lower = rows[r - 1], rows[r]
        up_cols, low_cols = columns[r - 1], columns[r]
        for x, pa in up_cols.items():
            pc = low_cols.get(x)
            if pc is None:
                continue
            a, c = upper[pa - 1], lower[pc - 1]
            # type L: a above c, b further right in the lower row
            for pb in range(pc + 1, len(lower) + 1):
                b = lower[pb - 1]
                if a <= b <= c:
                    yield Violation("type-L", ((r, pa), (r + 1, pb), (r + 1, pc)),
                                    f"type L: a={a} b={b} c={c}")
            # type U: c above a, b further left in the upper row
            c, a = upper[pa - 1], lower[pc - 1]
            for pb in range(1, pa):
                b = upper[pb - 1]
                if a < b < c:
                    yield Violation("type-U", ((r + 1, pc), (r, pb), (r, pa)),
                                    f"type U: a={a} b={b} c={c}")


def validate_sdt(T: ShiftedTableau) -> ValidationReport:
    """Check the three local conditions characterizing decomposition tableaux."""
    return ValidationReport(tuple(_violations(T)))


def is_sdt(T: ShiftedTableau) -> bool:
    return next(_violations(T), None) is None


def content(T: ShiftedTableau) -> WeightVector:
    """Letter multiplicities in the ε-basis."""
    counts = [0] * T.n
    for row in T.rows:
        for x in row:
            counts[x - 1] += 1
    return WeightVector(tuple(counts))


# ====================================================================
# Enumeration
# ====================================================================

def _hook_prefix(prefix: Sequence[int]) -> bool:
    return len(prefix) == 0 or is_hook_word(prefix)


def enumerate_sdt(shape: Shape, n: int,
                  max_fillings: int = DEFAULT_MAX_FILLINGS) -> FrozenSet[ShiftedTableau]:
    """All SDT of the given shape with letters 1..n (brute force with pruning).

    Rows are filled top to bottom, left to right; a partial row must stay a
    hook word and, below the top row, stay under the leftmost entry of the
    row above. The remaining conditions are checked on complete fillings.
    ``max_fillings`` bounds the number of partial fillings visited.
    """
    if not isinstance(shape, Shape):
        shape = Shape(tuple(shape))
    if len(shape) > n:
        raise ShapeError(f"shape {shape.parts} has more than {n} rows")
    visited = 0
    found = set()
    rows: List[List[int]] = [[] for _ in shape.parts]
    cells = list(shape.cells())

    def rec(k: int):
        nonlocal visited
        visited += 1
        if visited > max_fillings:
            raise GuardExceeded("max_fillings", max_fillings,
                                f"enumerating shape {shape.parts} with n={n}")
        if k == len(cells):
            T = ShiftedTableau(n, tuple(tuple(row) for row in rows))
            if is_sdt(T):
                found.add(T)
            return
        r, p = cells[k]
        bound = rows[r - 2][0] - 1 if r > 1 else n
        for x in range(1, bound + 1):
            rows[r - 1].append(x)
            if _hook_prefix(rows[r - 1]):
                rec(k + 1)
            rows[r - 1].pop()

    rec(0)
    logger.debug("enumerate_sdt(%s, n=%d): %d tableaux, %d partial fillings",
                 shape, n, len(found), visited)
    return frozenset(found)


def all_fillings(shape: Shape, n: int) -> Iterator[ShiftedTableau]:
    """Every filling of ``shape`` with letters 1..n, valid or not."""
    sizes = shape.parts
    for letters in it.product(range(1, n + 1), repeat=shape.size):
        rows, k = [], 0
        for s in sizes:
            rows.append(tuple(letters[k:k + s]))
            k += s
        yield ShiftedTableau(n, tuple(rows))
