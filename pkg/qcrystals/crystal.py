"""Crystal elements with a uniform interface, and the tensor product rule.

Every element answers ``apply(op)``, ``epsilon(i)``, ``phi(i)`` and
``weight()``. The kinds are

* :class:`FiniteElement`  a decomposition tableau in SDT(λ),
* :class:`LimitElement`   a dual marginally large tableau in SDT(−∞),
* :class:`TMarker`        t_λ, the single element of 𝒯_λ (ε = φ = −∞),
* :class:`RMarker`        r^∨_λ, the single element of ℛ^∨_λ
  (ε_i = 0, φ_i = λ_i − λ_{i+1}),
* :class:`TensorElement`  b ⊗ c.

The tensor rule: for i in I_0, ``e_i`` acts on the left factor iff
φ_i(c) < ε_i(b) and ``f_i`` iff φ_i(c) <= ε_i(b); the odd operators act on
the right factor iff e_1̄ b = f_1̄ b = ⊥. Statistics of a tensor are

    ε_i(b⊗c) = max(ε_i(c), ε_i(b) − wt_i(c))
    φ_i(b⊗c) = max(φ_i(b), φ_i(c) + wt_i(b))

and weights add. For the odd index, ε and φ are 0/1 indicators of whether
the operator is defined.
"""
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

from qcrystals.finite import ODD, OperatorLabel, apply_finite, statistics
from qcrystals.limit import apply_limit, is_marginally_large, limit_statistics, limit_weight
from qcrystals.tableaux import ShiftedTableau, content, validate_sdt
from qcrystals.weights import NEG_INF, ExtInt, WeightVector


class CrystalElement(ABC):
    """Common interface; subclasses are frozen dataclasses (hashable)."""

    @property
    @abstractmethod
    def n(self) -> int:
        ...

    @abstractmethod
    def apply(self, op: OperatorLabel) -> Optional["CrystalElement"]:
        ...

    @abstractmethod
    def epsilon(self, i: int) -> ExtInt:
        ...

    @abstractmethod
    def phi(self, i: int) -> ExtInt:
        ...

    @abstractmethod
    def weight(self) -> WeightVector:
        ...

    @abstractmethod
    def to_json(self) -> dict:
        ...

    def e(self, i: int) -> Optional["CrystalElement"]:
        return self.apply(OperatorLabel("e", i))

    def f(self, i: int) -> Optional["CrystalElement"]:
        return self.apply(OperatorLabel("f", i))

    def wt_i(self, i: int) -> int:
        return self.weight().wt_i(1 if i == ODD else i)

    def sort_key(self):
        """Deterministic order: weight first, then serialization."""
        return self.weight().coords, json.dumps(self.to_json(), sort_keys=True)

    def _odd_indicator(self, kind: str) -> int:
        return int(self.apply(OperatorLabel(kind, ODD)) is not None)


@dataclass(frozen=True)
class FiniteElement(CrystalElement):
    tableau: ShiftedTableau

    def __post_init__(self):
        report = validate_sdt(self.tableau)
        if not report.valid:
            raise ValueError(f"not a decomposition tableau: {report.violations[0].message}")

    @property
    def n(self) -> int:
        return self.tableau.n

    def apply(self, op):
        result = apply_finite(self.tableau, op, check=False)
        return None if result is None else FiniteElement(result)

    def epsilon(self, i):
        return statistics(self.tableau, i).epsilon

    def phi(self, i):
        return statistics(self.tableau, i).phi

    def weight(self):
        return content(self.tableau)

    def to_json(self):
        return {"kind": "finite", "tableau": self.tableau.to_json()}

    def __str__(self) -> str:
        return str(self.tableau)


@dataclass(frozen=True)
class LimitElement(CrystalElement):
    tableau: ShiftedTableau

    def __post_init__(self):
        if not is_marginally_large(self.tableau):
            raise ValueError(f"not dual marginally large: {self.tableau}")

    @property
    def n(self) -> int:
        return self.tableau.n

    def apply(self, op):
        result = apply_limit(self.tableau, op, check=False)
        return None if result is None else LimitElement(result)

    def epsilon(self, i):
        return limit_statistics(self.tableau, i).epsilon

    def phi(self, i):
        return limit_statistics(self.tableau, i).phi

    def weight(self):
        return limit_weight(self.tableau)

    def to_json(self):
        return {"kind": "limit", "tableau": self.tableau.to_json()}

    def __str__(self) -> str:
        return str(self.tableau)


@dataclass(frozen=True)
class TMarker(CrystalElement):
    """t_λ: every operator is ⊥ and ε_i = φ_i = −∞."""
    lam: WeightVector

    @property
    def n(self) -> int:
        return self.lam.n

    def apply(self, op):
        op.check(self.n)
        return None

    def epsilon(self, i):
        return 0 if i == ODD else NEG_INF

    def phi(self, i):
        return 0 if i == ODD else NEG_INF

    def weight(self):
        return self.lam

    def to_json(self):
        return {"kind": "t", "weight": self.lam.to_json()}

    def __str__(self) -> str:
        return f"t{self.lam}"


@dataclass(frozen=True)
class RMarker(CrystalElement):
    """r^∨_λ: every operator is ⊥, ε_i = 0 and φ_i = λ_i − λ_{i+1}."""
    lam: WeightVector

    @property
    def n(self) -> int:
        return self.lam.n

    def apply(self, op):
        op.check(self.n)
        return None

    def epsilon(self, i):
        return 0

    def phi(self, i):
        return 0 if i == ODD else self.lam.wt_i(i)

    def weight(self):
        return self.lam

    def to_json(self):
        return {"kind": "r", "weight": self.lam.to_json()}

    def __str__(self) -> str:
        return f"r{self.lam}"


@dataclass(frozen=True)
class TensorElement(CrystalElement):
    left: CrystalElement
    right: CrystalElement

    def __post_init__(self):
        if self.left.n != self.right.n:
            raise ValueError(f"rank mismatch in tensor: {self.left.n} vs {self.right.n}")

    @property
    def n(self) -> int:
        return self.left.n

    def acts_left(self, op: OperatorLabel) -> bool:
        """Which factor the operator acts on."""
        b, c = self.left, self.right
        if op.is_odd:
            return b.e(ODD) is not None or b.f(ODD) is not None
        i = op.index
        if op.kind == "e":
            return c.phi(i) < b.epsilon(i)
        return c.phi(i) <= b.epsilon(i)

    def apply(self, op):
        op.check(self.n)
        if self.acts_left(op):
            b = self.left.apply(op)
            return None if b is None else TensorElement(b, self.right)
        c = self.right.apply(op)
        return None if c is None else TensorElement(self.left, c)

    def epsilon(self, i):
        if i == ODD:
            return self._odd_indicator("e")
        return max(self.right.epsilon(i), self.left.epsilon(i) - self.right.wt_i(i))

    def phi(self, i):
        if i == ODD:
            return self._odd_indicator("f")
        return max(self.left.phi(i), self.right.phi(i) + self.left.wt_i(i))

    def weight(self):
        return self.left.weight() + self.right.weight()

    def to_json(self):
        return {"kind": "tensor", "left": self.left.to_json(), "right": self.right.to_json()}

    def __str__(self) -> str:
        return f"{self.left} ⊗ {self.right}"


def tensor(*factors: CrystalElement) -> CrystalElement:
    """Left-associated tensor product b_1 ⊗ b_2 ⊗ ... ."""
    if not factors:
        raise ValueError("empty tensor product")
    out = factors[0]
    for x in factors[1:]:
        out = TensorElement(out, x)
    return out


def tensor_apply(x: TensorElement, op: OperatorLabel) -> Optional[CrystalElement]:
    """``op (b ⊗ c)``: the operator acts on the factor chosen by :meth:`TensorElement.acts_left`."""
    if not isinstance(x, TensorElement):
        raise TypeError(f"expected a tensor element, got {type(x).__name__}")
    return x.apply(op)


def elementary_stats(marker: CrystalElement, i: int):
    """(ε_i, φ_i, wt) of t_λ or r^∨_λ."""
    if not isinstance(marker, (TMarker, RMarker)):
        raise TypeError(f"not an elementary crystal element: {marker!r}")
    return marker.epsilon(i), marker.phi(i), marker.weight()


def element_from_json(data: dict) -> CrystalElement:
    kind = data.get("kind")
    if kind == "finite":
        return FiniteElement(ShiftedTableau.from_json(data["tableau"]))
    if kind == "limit":
        return LimitElement(ShiftedTableau.from_json(data["tableau"]))
    if kind == "t":
        return TMarker(WeightVector(tuple(data["weight"])))
    if kind == "r":
        return RMarker(WeightVector(tuple(data["weight"])))
    if kind == "tensor":
        return TensorElement(element_from_json(data["left"]), element_from_json(data["right"]))
    raise ValueError(f"unknown element kind {kind!r}")
