"""Lowest-weight elements of SDT(−∞) and their parametrization by subsets of
the positive roots.

A cell is *trivial* if it belongs to the leading run of the trivial letter of
its row. The nontrivial reading word skips those cells. An (i,k)-consecution
is a subword k, k−1, ..., i of the nontrivial reading word in which every
letter j+1 is bracketed with the following j (the j pops it in red_j) and the
final i survives in red_{i−1} (or i = 1).

:func:`xi_forward` builds the lowest-weight element for a root subset B by
adding the roots of B one at a time, grouped by their second index j = 2..n
and, inside a group, by decreasing first index. The k-th root ε_i − ε_j of a
group pushes in a trivial column, plants the letter j−k in the row whose
trivial letter is j and walks the planted letter down to i. Every move of the
walk lowers one more letter b to b−1:

* an unchanged b left unpaired in red_b is lowered (its right neighbour
  instead, when that holds b as well);
* otherwise the first (a,b)-consecution read after the last changed cell,
  with a above i, is lowered letter by letter;
* otherwise a column of height n+1−b is pushed in and the last trivial b of
  the row of b becomes b−1.

The tableau is canonicalized after each root and its weight grows by exactly
ε_i − ε_j. :func:`xi_inverse` peels the roots off again, last one first.

Rows are counted from the top everywhere else in the package. Here "the row of
letter j" is the row whose trivial letter is j, i.e. row n+1−j from the top.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from qcrystals.limit import (
    canonicalize, enumerate_marginal, is_lowest_limit, is_marginally_large, leading_trivial,
    limit_generator, limit_weight, push_column,
)
from qcrystals.tableaux import (
    Cell, ShiftedTableau, TaggedWord, bracket, is_sdt, reading_word, reduced_word,
    restricted_word,
)
from qcrystals.weights import WeightVector, positive_root

logger = logging.getLogger(__name__)

Root = Tuple[int, int]


class XiDefect(RuntimeError):
    """An internal invariant of the root-subset bijection failed."""


# ====================================================================
# Root subsets
# ====================================================================

def parse_roots(text: str) -> FrozenSet[Root]:
    """``"2-3,1-4"`` -> {(2, 3), (1, 4)}."""
    out = set()
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i, j = (int(x) for x in tok.split("-"))
        except ValueError as e:
            raise ValueError(f"not a root 'i-j': {tok!r}") from e
        out.add((i, j))
    return frozenset(out)


def check_roots(roots: Iterable[Root], n: int) -> FrozenSet[Root]:
    roots = frozenset((int(i), int(j)) for i, j in roots)
    for i, j in roots:
        if not 1 <= i < j <= n:
            raise ValueError(f"({i},{j}) is not a positive root of rank {n}")
    return roots


def root_sum(roots: Iterable[Root], n: int) -> WeightVector:
    out = WeightVector.zero(n)
    for i, j in roots:
        out = out + positive_root(n, i, j)
    return out


def format_roots(roots: Iterable[Root]) -> str:
    return ",".join(f"{i}-{j}" for i, j in sorted(roots))


# ====================================================================
# Consecutions
# ====================================================================

def trivial_cells(T: ShiftedTableau) -> FrozenSet[Cell]:
    return frozenset((r, p) for r in range(1, len(T.rows) + 1)
                     for p in range(1, leading_trivial(T, r) + 1))


def nontrivial_reading_word(T: ShiftedTableau) -> TaggedWord:
    trivial = trivial_cells(T)
    return TaggedWord(tuple(e for e in reading_word(T) if e.cell not in trivial))


@dataclass(frozen=True)
class Consecution:
    i: int
    k: int
    cells: Tuple[Cell, ...]     # letters k, k−1, ..., i

    @property
    def start(self) -> Cell:
        return self.cells[0]

    def to_json(self) -> dict:
        return {"i": self.i, "k": self.k, "cells": [list(c) for c in self.cells]}


def _bracket_partners(T: ShiftedTableau) -> Dict[Cell, Cell]:
    """Cell of a letter x+1 -> cell of the x that pops it in red_x."""
    partner = {}
    for x in range(1, T.n):
        word = restricted_word(T, x)
        pairs, _ = bracket(word, x)
        for up, down in pairs.items():
            partner[word[up].cell] = word[down].cell
    return partner


def _reading_key(cell: Cell) -> Tuple[int, int]:
    r, p = cell
    return r, -p


def _walk(T: ShiftedTableau, start: Cell, partner: Dict[Cell, Cell],
          blocked: FrozenSet[Cell]) -> Tuple[List[Cell], bool]:
    """Follow bracket partners down from ``start``.

    :return: the cells visited and False if the walk ran into ``blocked``
    """
    cells = [start]
    letter = T[start]
    while letter > 1:
        nxt = partner.get(cells[-1])
        if nxt is None:
            break
        if nxt in blocked:
            return cells, False
        cells.append(nxt)
        letter -= 1
    return cells, True


def find_consecutions(T: ShiftedTableau, exclude: FrozenSet[Cell] = frozenset()) -> List[Consecution]:
    """Every consecution of T, ordered by k descending, then by the reading
    position of the first cell.

    :param exclude: cells that may not take part
    """
    blocked = trivial_cells(T) | exclude
    partner = _bracket_partners(T)
    out = []
    for e in nontrivial_reading_word(T):
        if e.cell in exclude:
            continue
        cells, valid = _walk(T, e.cell, partner, blocked)
        if valid:
            out.append(Consecution(e.letter - len(cells) + 1, e.letter, tuple(cells)))
    out.sort(key=lambda c: (-c.k, _reading_key(c.start)))
    return out


# ====================================================================
# Forward map
# ====================================================================

class _Builder:
    """The tableau under construction plus the cells changed for the current
    root, remembered as (row, distance from the right end) so that push-ins
    do not move them."""

    def __init__(self, T: ShiftedTableau):
        self.n = T.n
        self.T = T
        self.changed: Set[Tuple[int, int]] = set()
        self.last: Optional[Tuple[int, int]] = None
        self.steps: List[dict] = []

    def _anchor(self, cell: Cell) -> Tuple[int, int]:
        r, p = cell
        return r, len(self.T.rows[r - 1]) - p

    def _cell(self, anchor: Tuple[int, int]) -> Cell:
        r, d = anchor
        return r, len(self.T.rows[r - 1]) - d

    def push(self, h: int):
        self.T = push_column(self.T, h, "in", check=False)

    def set(self, cell: Cell, letter: int, step: str):
        self.T = self.T.replace({cell: letter})
        self.last = self._anchor(cell)
        self.changed.add(self.last)
        self.steps.append({"step": step, "cell": list(cell), "letter": letter})

    def excluded(self) -> FrozenSet[Cell]:
        return frozenset(self._cell(a) for a in self.changed)

    def last_cell(self) -> Cell:
        return self._cell(self.last)


def _plant(b: _Builder, j: int, k: int) -> int:
    """Push in a column of height n+2−j and write j−k into the row of j,
    just before its increasing part."""
    n = b.n
    b.push(n + 2 - j)
    r = n + 1 - j
    m = leading_trivial(b.T, r)
    pos = m - 1 if m == len(b.T.rows[r - 1]) else m
    if pos < 1:
        raise XiDefect(f"no room to plant in row {r} of {b.T}")
    b.set((r, pos), j - k, "plant")
    return j - k


def _lower_unpaired(b: _Builder, letter: int) -> bool:
    """Lower the first unchanged ``letter`` left unpaired in red_letter, or
    its right neighbour when that holds the same letter."""
    excluded = b.excluded()
    target = next((e.cell for e in reduced_word(b.T, letter)
                   if e.letter == letter and e.cell not in excluded), None)
    if target is None:
        return False
    r, p = target
    row = b.T.rows[r - 1]
    if p < len(row) and row[p] == letter and (r, p + 1) not in excluded:
        p += 1
    b.set((r, p), letter - 1, "unpaired")
    return True


def _lower_consecution(b: _Builder, top: int, i: int) -> Optional[int]:
    after = _reading_key(b.last_cell())
    for c in find_consecutions(b.T, b.excluded()):
        if c.k == top and c.i > i and _reading_key(c.start) > after:
            for cell in c.cells:
                b.set(cell, b.T[cell] - 1, "consecution")
            return c.i
    return None


def _replant(b: _Builder, a: int):
    """Push in a column of height n+1−a and lower the last trivial a of the
    row of a."""
    r = b.n + 1 - a
    b.push(r)
    b.set((r, leading_trivial(b.T, r)), a - 1, "replant")


def add_root(T: ShiftedTableau, i: int, j: int, k: int,
             steps: Optional[list] = None) -> ShiftedTableau:
    """Add ε_i − ε_j as the k-th root of its group to a marginally large
    tableau.

    :param steps: if given, the cell changes are appended to it
    :raises XiDefect: the weight did not grow by the root
    """
    n = T.n
    if not 1 <= i < j <= n or not 1 <= k <= j - i:
        raise ValueError(f"cannot add ({i},{j}) as root number {k} of its group")
    b = _Builder(T)
    if k == 1:
        b.push(n + 1 - j)
    top = _plant(b, j, k)
    while top > i:
        if _lower_unpaired(b, top):
            a = top
        else:
            a = _lower_consecution(b, top, i)
            if a is None:
                a = top
                _replant(b, a)
        top = a - 1
    result = canonicalize(b.T)
    gained = limit_weight(result) - limit_weight(T)
    if gained != positive_root(n, i, j):
        raise XiDefect(f"adding ({i},{j}) to {T} changed the weight by {gained}")
    if steps is not None:
        steps.extend(b.steps)
    return result


def xi_forward(roots: Iterable[Root], n: int, trace: Optional[list] = None) -> ShiftedTableau:
    """The lowest-weight element of SDT(−∞) attached to a set of positive
    roots; its weight is the sum of the roots.

    :param roots: pairs (i, j), i < j, for ε_i − ε_j
    :param trace: if given, one record per added root is appended
    """
    roots = check_roots(roots, n)
    T = limit_generator(n)
    for j in range(2, n + 1):
        group = sorted((r for r in roots if r[1] == j), key=lambda r: -r[0])
        for k, (i, _) in enumerate(group, start=1):
            steps: List[dict] = []
            T = add_root(T, i, j, k, steps)
            logger.debug("xi: added (%d,%d) as step %d of group %d: %s", i, j, k, j, T)
            if trace is not None:
                trace.append({"j": j, "k": k, "root": [i, j], "substeps": steps,
                              "tableau": T.to_json()})
    if not is_lowest_limit(T):
        raise XiDefect(f"{format_roots(roots)} produced a non-lowest element {T}")
    return T


# ====================================================================
# Inverse
# ====================================================================

def _top_group(T: ShiftedTableau) -> Optional[Tuple[int, int]]:
    """(j, k): j maximal such that the row of j has a nontrivial cell, and k
    the length of the increasing part of that row."""
    for r in range(1, len(T.rows) + 1):
        row = T.rows[r - 1]
        if leading_trivial(T, r) < len(row):
            dec = 1
            while dec < len(row) and row[dec] <= row[dec - 1]:
                dec += 1
            return T.n + 1 - r, len(row) - dec
    return None


def _unplant(T: ShiftedTableau, chain: List[Cell], i: int, j: int) -> Optional[ShiftedTableau]:
    """Raise the letters i..j of a consecution chain by one, drop the raised
    j with the column above it and canonicalize. None if the result is not a
    lowest-weight element."""
    n = T.n
    by_letter = {T[cell]: cell for cell in chain}
    r, p = by_letter[i]
    if p > 1 and T[(r, p - 1)] == i:
        p -= 1
    rows = [list(row) for row in T.rows]
    rows[r - 1][p - 1] += 1
    for x in range(i + 1, j):
        rr, pp = by_letter[x]
        rows[rr - 1][pp - 1] += 1
    rj, pj = by_letter[j]
    if pj != len(rows[rj - 1]):
        return None
    del rows[rj - 1][-1]
    for row in rows[:rj - 1]:
        del row[0]
    try:
        out = canonicalize(ShiftedTableau(n, tuple(tuple(row) for row in rows)))
    except ValueError:
        return None
    if not is_sdt(out) or not is_lowest_limit(out):
        return None
    return out


def _candidates(T: ShiftedTableau, after: Optional[Root]) -> Iterator[Tuple[Root, ShiftedTableau]]:
    """Roots that may have been added last, i′ increasing, each with the
    tableau left after removing it.

    j is maximal such that the row of j has a nontrivial cell and the chain
    is the (i,j)-consecution ending that row. From i′ = i upwards, the letters
    i′..j of the chain go up by one (the cell of i′ moves to its left
    neighbour when that holds i′ too) and the column of the raised j is
    removed. A candidate is kept if adding (i′, j) back restores T.

    :param after: the root peeled before; a second root of the same group
        must have a larger first index
    """
    found = _top_group(T)
    if found is None:
        return
    j, k = found
    if after is not None and j > after[1]:
        return
    r = T.n + 1 - j
    chain, _ = _walk(T, (r, len(T.rows[r - 1])), _bracket_partners(T), trivial_cells(T))
    for i2 in range(T[chain[-1]], j - k + 1):
        if after is not None and j == after[1] and i2 <= after[0]:
            continue
        smaller = _unplant(T, chain, i2, j)
        if smaller is None:
            continue
        try:
            restored = add_root(smaller, i2, j, k)
        except (XiDefect, ValueError):
            restored = None
        if restored == T:
            yield (i2, j), smaller
        else:
            logger.debug("peel: (%d,%d) does not restore %s", i2, j, T)


def _peel_all(T: ShiftedTableau, after: Optional[Root]) -> Optional[List[Tuple[Root, ShiftedTableau]]]:
    if _top_group(T) is None:
        return []
    for root, smaller in _candidates(T, after):
        rest = _peel_all(smaller, root)
        if rest is not None:
            return [(root, smaller)] + rest
        logger.debug("peel: %s from %s leads nowhere", root, T)
    return None


def _peel_checked(T: ShiftedTableau) -> List[Tuple[Root, ShiftedTableau]]:
    if not is_marginally_large(T):
        raise ValueError(f"not dual marginally large: {T}")
    if not is_lowest_limit(T):
        raise ValueError(f"not a lowest-weight element: {T}")
    peeled = _peel_all(T, None)
    if peeled is None:
        raise XiDefect(f"no root can be peeled from {T}")
    return peeled


def peel_root(T: ShiftedTableau) -> Optional[Tuple[Root, ShiftedTableau]]:
    """The root the inverse removes first and the lowest-weight element left
    behind; None for L^{−∞}."""
    peeled = _peel_checked(T)
    return peeled[0] if peeled else None


def xi_inverse(T: ShiftedTableau) -> FrozenSet[Root]:
    """The root subset B with xi_forward(B) == T.

    :raises ValueError: T is not a lowest-weight element of SDT(−∞)
    :raises XiDefect: no sequence of peels reaches L^{−∞}
    """
    roots = [root for root, _ in _peel_checked(T)]
    logger.debug("xi_inverse: %s -> %s", T, format_roots(roots))
    return frozenset(roots)


# ====================================================================
# Enumeration
# ====================================================================

def enumerate_lowest(n: int, D: int) -> Dict[WeightVector, List[ShiftedTableau]]:
    """Lowest-weight elements of SDT(−∞) with weight height <= D, by weight."""
    out: Dict[WeightVector, List[ShiftedTableau]] = {}
    for T in enumerate_marginal(n, D):
        if is_lowest_limit(T):
            out.setdefault(limit_weight(T), []).append(T)
    logger.info("enumerate_lowest(n=%d, D=%d): %d elements",
                n, D, sum(len(v) for v in out.values()))
    return out
