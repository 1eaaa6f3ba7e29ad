"""The 𝔮(n)-crystal structure on SDT(λ).

For i in I_0 = {1, ..., n−1} the operators read ``red_i(T)``:

* ``e_i`` turns the leftmost surviving i+1 into an i,
* ``f_i`` turns the rightmost surviving i into an i+1,

and return ⊥ (``None``) when there is no such letter. The odd operators look
at the unreduced word ``rd_1(T)``: ``e_1̄`` turns its first letter from 2 to 1,
``f_1̄`` turns it from 1 to 2, and both are ⊥ otherwise.

The odd index 1̄ is encoded as ``-1`` everywhere (labels ``"e-1"``, ``"f-1"``).
"""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from qcrystals.tableaux import (
    Shape, ShapeError, ShiftedTableau, content, reduced_word, restricted_word,
    validate_sdt,
)
from qcrystals.weights import WeightVector

logger = logging.getLogger(__name__)

ODD = -1


# ====================================================================
# Operator labels
# ====================================================================

@dataclass(frozen=True, order=True)
class OperatorLabel:
    """``e_i`` or ``f_i`` with i in I = {1, ..., n−1, 1̄} (1̄ encoded as −1)."""
    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("e", "f"):
            raise ValueError(f"operator kind must be 'e' or 'f', got {self.kind!r}")
        if self.index == 0 or self.index < -1:
            raise ValueError(f"invalid operator index {self.index}")

    @classmethod
    def parse(cls, text: str) -> "OperatorLabel":
        """``"e2"`` / ``"f-1"`` -> OperatorLabel."""
        text = text.strip()
        if len(text) < 2 or text[0] not in "ef":
            raise ValueError(f"not an operator label: {text!r}")
        try:
            index = int(text[1:])
        except ValueError as e:
            raise ValueError(f"not an operator label: {text!r}") from e
        return cls(text[0], index)

    def check(self, n: int) -> "OperatorLabel":
        if self.index == ODD:
            if n < 2:
                raise ValueError("the odd operators need rank n >= 2")
        elif not 1 <= self.index <= n - 1:
            raise ValueError(f"index {self.index} out of range for rank {n}")
        return self

    @property
    def is_odd(self) -> bool:
        return self.index == ODD

    def dual(self) -> "OperatorLabel":
        return OperatorLabel("f" if self.kind == "e" else "e", self.index)

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def parse_operators(text: str) -> List[OperatorLabel]:
    """``"e2,f-1"`` -> [e2, f-1]."""
    return [OperatorLabel.parse(tok) for tok in text.split(",") if tok.strip()]


def index_set(n: int) -> Tuple[int, ...]:
    """I = (1, ..., n−1, 1̄) in the canonical order; empty odd part for n = 1."""
    return tuple(range(1, n)) + ((ODD,) if n >= 2 else ())


def all_operators(n: int, kinds: Sequence[str] = ("e", "f")) -> List[OperatorLabel]:
    return [OperatorLabel(kind, i) for kind in kinds for i in index_set(n)]


# ====================================================================
# Operators
# ====================================================================

def raw_apply(T: ShiftedTableau, op: OperatorLabel) -> Optional[ShiftedTableau]:
    """The cell change of an operator without any validity check.

    Shared by the finite crystals and by the limit crystal, which
    canonicalizes afterwards.
    """
    op.check(T.n)
    if op.is_odd:
        rd = restricted_word(T, 1)
        if len(rd) == 0:
            return None
        first = rd[0]
        if op.kind == "e":
            return T.replace({first.cell: 1}) if first.letter == 2 else None
        return T.replace({first.cell: 2}) if first.letter == 1 else None

    i = op.index
    red = reduced_word(T, i)
    if op.kind == "e":
        target = next((x for x in red if x.letter == i + 1), None)
        return None if target is None else T.replace({target.cell: i})
    target = next((x for x in reversed(red.entries) if x.letter == i), None)
    return None if target is None else T.replace({target.cell: i + 1})


def apply_finite(T: ShiftedTableau, op: OperatorLabel, check: bool = True) -> Optional[ShiftedTableau]:
    """Apply a crystal operator to a decomposition tableau.

    :param T: a valid SDT
    :param op: the operator
    :param check: validate the input first
    :return: the new tableau, or ``None`` for ⊥
    """
    if check:
        report = validate_sdt(T)
        if not report.valid:
            raise ValueError(f"not a decomposition tableau: {report.violations[0].message}")
    result = raw_apply(T, op)
    if result is not None:
        assert validate_sdt(result).valid, f"{op} left the crystal at {T}"
    return result


def apply_word(T: ShiftedTableau, ops: Sequence[OperatorLabel]) -> Optional[ShiftedTableau]:
    """Apply operators in the given order (the first one acts first)."""
    for op in ops:
        if T is None:
            return None
        T = apply_finite(T, op, check=False)
    return T


# ====================================================================
# Statistics
# ====================================================================

@dataclass(frozen=True)
class Statistics:
    epsilon: int
    phi: int
    weight: WeightVector


def statistics(T: ShiftedTableau, i: int) -> Statistics:
    """(ε_i, φ_i, wt) of a finite element; 0/1 applicability indicators for 1̄."""
    wt = content(T)
    if i == ODD:
        if T.n < 2:
            raise ValueError("the odd index needs rank n >= 2")
        eps = int(raw_apply(T, OperatorLabel("e", ODD)) is not None)
        phi = int(raw_apply(T, OperatorLabel("f", ODD)) is not None)
        return Statistics(eps, phi, wt)
    red = reduced_word(T, i)
    return Statistics(red.count(i + 1), red.count(i), wt)


def string_lengths(T: ShiftedTableau, i: int) -> Tuple[int, int]:
    """(max k with e_i^k T ≠ ⊥, max k with f_i^k T ≠ ⊥) by repeated application."""
    out = []
    for kind in ("e", "f"):
        op = OperatorLabel(kind, i)
        k, cur = 0, raw_apply(T, op)
        while cur is not None:
            k += 1
            cur = raw_apply(cur, op)
        out.append(k)
    return out[0], out[1]


# ====================================================================
# Generators and extremal elements
# ====================================================================

def lowest_generator(shape: Shape, n: int) -> ShiftedTableau:
    """L^λ: row r (from the top) filled with the letter n+1−r.

    For a shape with n rows this is "row k from the bottom holds k"; shorter
    shapes are the ones with empty bottom rows.
    """
    if not isinstance(shape, Shape):
        shape = Shape(tuple(shape))
    if len(shape) > n:
        raise ShapeError(f"shape {shape.parts} has more than {n} rows")
    return ShiftedTableau(n, tuple((n + 1 - r,) * length
                                   for r, length in enumerate(shape.parts, start=1)))


def is_extremal(T: ShiftedTableau, side: str = "lowest") -> bool:
    """True iff every f_i (lowest) or every e_i (highest), i in I, gives ⊥."""
    if side not in ("lowest", "highest"):
        raise ValueError(f"side must be 'lowest' or 'highest', got {side!r}")
    kind = "f" if side == "lowest" else "e"
    return all(raw_apply(T, OperatorLabel(kind, i)) is None for i in index_set(T.n))


def orbit(T: ShiftedTableau, ops: Sequence[OperatorLabel]) -> Iterator[Tuple[OperatorLabel, Optional[ShiftedTableau]]]:
    """Yield (op, tableau) after each step; stops after the first ⊥."""
    for op in ops:
        T = apply_finite(T, op, check=False)
        yield op, T
        if T is None:
            return
