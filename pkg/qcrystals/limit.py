"""SDT(−∞): the direct limit of the crystals SDT(λ) ⊗ 𝒯_{−λ}.

Its elements are realized by *dual marginally large* tableaux. Count rows
from the top and let row r carry the trivial letter ``n+1−r``. Write

    lead_r   number of leading (leftmost, consecutive) trivial letters of row r
    below_r  length of row r+1 (0 for the last row)
    d_r      lead_r − below_r − 1        (the *excess* of row r)

A tableau with n rows is dual large if every d_r >= 0 and dual marginally
large if every d_r == 0.

Pushing in a trivial column of height h adds the trivial letter at the left
of rows 1..h; it raises d_h by one and leaves every other excess alone.
Pushing out is the inverse. So every tableau with n rows has exactly one
marginally large representative, reached by pushing in where d_r < 0 and
out where d_r > 0 (:func:`canonicalize`).

The limit operators apply the finite cell change and canonicalize. Statistics
are normalized against L^{shape(T)} so that L^{−∞} has weight 0 and ε_i = 0.
"""
import logging
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from qcrystals.finite import (
    ODD, OperatorLabel, Statistics, index_set, lowest_generator, raw_apply,
)
from qcrystals.tableaux import (
    Shape, ShapeError, ShiftedTableau, content, is_hook_word, is_sdt, reduced_word,
    validate_sdt,
)

logger = logging.getLogger(__name__)


class NotMarginallyLargeError(ValueError):
    """The tableau is not in the class of any marginally large tableau."""


class Largeness(str, Enum):
    NOT_DUAL_LARGE = "not_dual_large"
    DUAL_LARGE = "dual_large"
    DUAL_MARGINALLY_LARGE = "dual_marginally_large"


# ====================================================================
# Excess and largeness
# ====================================================================

def leading_trivial(T: ShiftedTableau, r: int) -> int:
    """Number of leading letters n+1−r in row r (1-based from the top)."""
    letter = T.n + 1 - r
    count = 0
    for x in T.rows[r - 1]:
        if x != letter:
            break
        count += 1
    return count


def excess(T: ShiftedTableau) -> Tuple[int, ...]:
    """(d_1, ..., d_n); only defined for tableaux with exactly n rows."""
    if len(T.rows) != T.n:
        raise NotMarginallyLargeError(
            f"tableau has {len(T.rows)} rows, a marginally large class needs {T.n}")
    out = []
    for r in range(1, T.n + 1):
        below = len(T.rows[r]) if r < T.n else 0
        out.append(leading_trivial(T, r) - below - 1)
    return tuple(out)


def largeness(T: ShiftedTableau) -> Largeness:
    if len(T.rows) != T.n:
        return Largeness.NOT_DUAL_LARGE
    d = excess(T)
    if any(x < 0 for x in d):
        return Largeness.NOT_DUAL_LARGE
    if all(x == 0 for x in d):
        return Largeness.DUAL_MARGINALLY_LARGE
    return Largeness.DUAL_LARGE


def is_marginally_large(T: ShiftedTableau) -> bool:
    return largeness(T) is Largeness.DUAL_MARGINALLY_LARGE


# ====================================================================
# Trivial columns
# ====================================================================

def has_trivial_column(T: ShiftedTableau, h: int) -> bool:
    """True iff a trivial column of height h can be pushed out."""
    if not 1 <= h <= len(T.rows):
        return False
    for r in range(1, h + 1):
        if leading_trivial(T, r) < 1:
            return False
    lengths = [len(row) - (1 if r <= h else 0) for r, row in enumerate(T.rows, start=1)]
    return lengths[-1] >= 1 and all(a > b for a, b in zip(lengths, lengths[1:]))


def push_column(T: ShiftedTableau, h: int, direction: str = "in", check: bool = True) -> ShiftedTableau:
    """Push a trivial column of height h in or out.

    :param direction: ``"in"`` adds the letter n+1−r at the left of rows
        r = 1..h, ``"out"`` removes it
    """
    if not 1 <= h <= T.n:
        raise ValueError(f"column height {h} out of range 1..{T.n}")
    rows = [list(row) for row in T.rows]
    if direction == "in":
        while len(rows) < h:
            rows.append([])
        for r in range(1, h + 1):
            rows[r - 1].insert(0, T.n + 1 - r)
    elif direction == "out":
        if not has_trivial_column(T, h):
            raise ValueError(f"no trivial column of height {h} in {T}")
        for r in range(1, h + 1):
            del rows[r - 1][0]
    else:
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    result = ShiftedTableau(T.n, tuple(tuple(row) for row in rows))
    if check:
        assert validate_sdt(result).valid, f"push {direction} h={h} broke {T}"
    return result


def canonicalize(T: ShiftedTableau) -> ShiftedTableau:
    """The unique dual marginally large tableau in the class of T."""
    d = excess(T)
    for h, x in enumerate(d, start=1):
        for _ in range(-x):
            T = push_column(T, h, "in", check=False)
    for h, x in enumerate(d, start=1):
        for _ in range(x):
            if not has_trivial_column(T, h):
                raise NotMarginallyLargeError(f"not in a marginally large class: {T}")
            T = push_column(T, h, "out", check=False)
    if d != (0,) * T.n:
        logger.debug("canonicalize: excess %s resolved", d)
    assert is_marginally_large(T)
    return T


def make_dual_large(T: ShiftedTableau) -> ShiftedTableau:
    """Push in the fewest trivial columns that make T dual large.

    Missing bottom rows are created by the push-ins.
    """
    n = T.n
    rows = [list(row) for row in T.rows] + [[] for _ in range(n - len(T.rows))]
    lead = [0] * n
    for r in range(1, n + 1):
        letter = n + 1 - r
        for x in rows[r - 1]:
            if x != letter:
                break
            lead[r - 1] += 1
    lengths = [len(row) for row in rows]
    pushes = [0] * n
    for r in range(n, 0, -1):
        # row r only sees pushes of height >= r, all decided already
        added_here = sum(pushes[r - 1:])
        added_below = sum(pushes[r:]) if r < n else 0
        below = lengths[r] + added_below if r < n else 0
        d = lead[r - 1] + added_here - below - 1
        if d < 0:
            pushes[r - 1] += -d
    for h in range(1, n + 1):
        for _ in range(pushes[h - 1]):
            for r in range(1, h + 1):
                rows[r - 1].insert(0, n + 1 - r)
    result = ShiftedTableau(n, tuple(tuple(row) for row in rows))
    assert largeness(result) is not Largeness.NOT_DUAL_LARGE
    return result


def to_limit(T: ShiftedTableau) -> ShiftedTableau:
    """The element of SDT(−∞) represented by a finite tableau."""
    return canonicalize(make_dual_large(T))


# ====================================================================
# Limit crystal
# ====================================================================

def limit_generator(n: int) -> ShiftedTableau:
    """L^{−∞}: the staircase n, n−1, ..., 1 with trivial letters."""
    return lowest_generator(Shape(tuple(range(n, 0, -1))), n)


def _require_marginal(T: ShiftedTableau):
    if not is_marginally_large(T):
        raise ValueError(f"not dual marginally large: {T}")


def apply_limit(T: ShiftedTableau, op: OperatorLabel, check: bool = True) -> Optional[ShiftedTableau]:
    """Apply a crystal operator on SDT(−∞): raw cell change, then canonicalize."""
    if check:
        _require_marginal(T)
    raw = raw_apply(T, op)
    if raw is None:
        return None
    return canonicalize(raw)


def limit_statistics(T: ShiftedTableau, i: int) -> Statistics:
    """(ε_i, φ_i, wt) on SDT(−∞), relative to L^{shape(T)}."""
    base = lowest_generator(T.shape, T.n)
    wt = content(T) - content(base)
    if i == ODD:
        eps = int(raw_apply(T, OperatorLabel("e", ODD)) is not None)
        phi = int(raw_apply(T, OperatorLabel("f", ODD)) is not None)
        return Statistics(eps, phi, wt)
    eps = reduced_word(T, i).count(i + 1) - reduced_word(base, i).count(i + 1)
    return Statistics(eps, eps + wt.wt_i(i), wt)


def limit_weight(T: ShiftedTableau):
    return content(T) - content(lowest_generator(T.shape, T.n))


def is_lowest_limit(T: ShiftedTableau) -> bool:
    """All f_i, i in I, give ⊥ (the same test as for finite tableaux, since
    f_i on SDT(−∞) is ⊥ exactly when the raw change is)."""
    return all(raw_apply(T, OperatorLabel("f", i)) is None for i in index_set(T.n))


def project(T: ShiftedTableau, shape: Shape) -> ShiftedTableau:
    """The representative of T's class with the given shape (push-ins only)."""
    if not isinstance(shape, Shape):
        shape = Shape(tuple(shape))
    target = shape.padded(T.n)
    current = T.shape.padded(T.n)
    delta = [a - b for a, b in zip(target, current)] + [0]
    pushes = [delta[h - 1] - delta[h] for h in range(1, T.n + 1)]
    if any(x < 0 for x in delta) or any(x < 0 for x in pushes):
        raise ValueError(f"shape {shape.parts} is not reachable from {T} by push-ins")
    for h, count in enumerate(pushes, start=1):
        for _ in range(count):
            T = push_column(T, h, "in", check=False)
    assert validate_sdt(T).valid
    return T


# ====================================================================
# Embeddings of the directed system
# ====================================================================

def embed(T: ShiftedTableau, increment: Sequence[int]) -> ShiftedTableau:
    """Prepend increment[r−1] trivial letters n+1−r to row r.

    Maps SDT(η) into SDT(η + increment) and L^η to L^{η + increment}.
    """
    n = T.n
    increment = tuple(int(x) for x in increment)
    if len(increment) != n or any(x < 0 for x in increment):
        raise ValueError(f"increment must be {n} nonnegative integers, got {increment}")
    if any(a < b for a, b in zip(increment, increment[1:])):
        raise ValueError(f"increment {increment} is not weakly decreasing")
    old = T.shape.padded(n)
    new = tuple(a + b for a, b in zip(old, increment))
    k = len(new)
    while k > 0 and new[k - 1] == 0:
        k -= 1
    try:
        Shape(new[:k])
    except ShapeError as e:
        raise ValueError(f"target shape {new} is not a strict partition") from e
    rows: List[List[int]] = [list(row) for row in T.rows] + [[] for _ in range(n - len(T.rows))]
    for r in range(1, n + 1):
        rows[r - 1][:0] = [n + 1 - r] * increment[r - 1]
    result = ShiftedTableau(n, tuple(tuple(row) for row in rows[:k]))
    assert validate_sdt(result).valid, f"embedding {increment} broke {T}"
    return result


# ====================================================================
# Enumeration by height
# ====================================================================

def _tails(t: int, lead: int, budget: int) -> List[Tuple[Tuple[int, ...], int]]:
    """Nontrivial row suffixes after ``lead`` letters t, with their height cost."""
    out = []
    tail: List[int] = []

    def rec(cost: int):
        out.append((tuple(tail), cost))
        for x in range(1, t + 1):
            if not tail and x == t:
                continue
            c = cost + t - x
            if c > budget or not is_hook_word([t] * lead + tail + [x]):
                continue
            tail.append(x)
            rec(c)
            tail.pop()

    rec(0)
    return out


def enumerate_marginal(n: int, max_height: int) -> List[ShiftedTableau]:
    """Every element of SDT(−∞) whose weight has height <= max_height.

    Rows are built from the bottom: the marginal condition fixes the leading
    run of each row by the length of the row below, and every nontrivial
    letter x in row r costs n+1−r−x units of height.
    """
    if max_height < 0:
        raise ValueError(f"height cap must be >= 0, got {max_height}")
    found: List[ShiftedTableau] = []
    rows: List[Tuple[int, ...]] = [()] * n

    def rec(r: int, below: int, budget: int):
        if r == 0:
            T = ShiftedTableau(n, tuple(rows))
            if is_sdt(T):
                found.append(T)
            return
        t = n + 1 - r
        lead = below + 1
        for tail, cost in _tails(t, lead, budget):
            rows[r - 1] = (t,) * lead + tail
            rec(r - 1, len(rows[r - 1]), budget - cost)

    rec(n, 0, max_height)
    logger.debug("enumerate_marginal(n=%d, %d): %d tableaux", n, max_height, len(found))
    return sorted(found, key=lambda T: (limit_weight(T).coords, T.rows))
