"""Integer weights in the ε-basis and the extended value −∞.

A weight of the rank-n root datum is an integer vector ``(c_1, ..., c_n)``
standing for ``c_1 ε_1 + ... + c_n ε_n``. The simple roots are
``α_i = ε_i − ε_{i+1}`` and the pairing used by the crystal axioms is
``wt_i(v) = c_i − c_{i+1}``.

Elements of the root lattice Q (coordinate sum zero) can also be written in
the α-basis; :meth:`WeightVector.alpha_coords` and
:meth:`WeightVector.from_alpha` convert between the two.

The one-element crystal 𝒯_λ carries ε_i = φ_i = −∞. That value is the
singleton :data:`NEG_INF`: it compares below every integer and absorbs
addition, so the tensor product formulas can be written without special cases.
"""
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union


class _NegInf:
    """The distinguished bottom value −∞ (saturating)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEG_INF"

    def __str__(self) -> str:
        return "-inf"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("qcrystals.NEG_INF")

    def __lt__(self, other) -> bool:
        return other is not self

    def __le__(self, other) -> bool:
        return True

    def __gt__(self, other) -> bool:
        return False

    def __ge__(self, other) -> bool:
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("-inf - -inf is undefined")
        return self

    def __neg__(self):
        raise ArithmeticError("-(-inf) is not representable")

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()

ExtInt = Union[int, _NegInf]


def ext_to_json(x: ExtInt) -> Union[int, str]:
    """JSON form of an extended integer: ints stay ints, −∞ becomes ``"-inf"``."""
    return "-inf" if x is NEG_INF else int(x)


def ext_from_json(x: Union[int, str]) -> ExtInt:
    if x == "-inf":
        return NEG_INF
    return int(x)


@dataclass(frozen=True, order=True)
class WeightVector:
    """An integer vector in the ε-basis of Z^n."""
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def zero(cls, n: int) -> "WeightVector":
        return cls((0,) * n)

    @classmethod
    def ones(cls, n: int) -> "WeightVector":
        return cls((1,) * n)

    @classmethod
    def epsilon(cls, n: int, i: int) -> "WeightVector":
        """ε_i (1-based)."""
        if not 1 <= i <= n:
            raise ValueError(f"epsilon index {i} out of range for rank {n}")
        return cls(tuple(1 if k == i else 0 for k in range(1, n + 1)))

    @classmethod
    def from_alpha(cls, alpha: Sequence[int]) -> "WeightVector":
        """The root-lattice element Σ alpha[k−1] α_k."""
        n = len(alpha) + 1
        coords = [0] * n
        for k, c in enumerate(alpha):
            coords[k] += c
            coords[k + 1] -= c
        return cls(tuple(coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __add__(self, other: "WeightVector") -> "WeightVector":
        self._check_rank(other)
        return WeightVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "WeightVector") -> "WeightVector":
        self._check_rank(other)
        return WeightVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "WeightVector":
        return WeightVector(tuple(-a for a in self.coords))

    def scale(self, k: int) -> "WeightVector":
        return WeightVector(tuple(k * a for a in self.coords))

    def wt_i(self, i: int) -> int:
        """The pairing with α_i: ``c_i − c_{i+1}``."""
        if not 1 <= i < self.n:
            raise ValueError(f"index {i} out of range for rank {self.n}")
        return self.coords[i - 1] - self.coords[i]

    def in_root_lattice(self) -> bool:
        return sum(self.coords) == 0

    def alpha_coords(self) -> Tuple[int, ...]:
        """Coordinates in the basis α_1, ..., α_{n−1}; only for elements of Q."""
        if not self.in_root_lattice():
            raise ValueError(f"{self.coords} is not in the root lattice")
        out = []
        acc = 0
        for c in self.coords[:-1]:
            acc += c
            out.append(acc)
        return tuple(out)

    def height(self) -> int:
        """Sum of the α-coordinates."""
        return sum(self.alpha_coords())

    def is_antidominant(self) -> bool:
        """Membership in Λ⁻: coordinates weakly increasing."""
        return all(a <= b for a, b in zip(self.coords, self.coords[1:]))

    def differs_by_ones(self, other: "WeightVector") -> bool:
        """True iff ``self − other`` is a multiple of (1, ..., 1)."""
        d = (self - other).coords
        return all(x == d[0] for x in d)

    def to_json(self):
        return list(self.coords)

    def _check_rank(self, other: "WeightVector"):
        if self.n != other.n:
            raise ValueError(f"rank mismatch: {self.n} vs {other.n}")

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def simple_root(n: int, i: int) -> WeightVector:
    """α_i = ε_i − ε_{i+1}; the odd index 1̄ (encoded −1) shares α_1."""
    if i == -1:
        i = 1
    if not 1 <= i < n:
        raise ValueError(f"simple root index {i} out of range for rank {n}")
    return WeightVector.epsilon(n, i) - WeightVector.epsilon(n, i + 1)


def positive_root(n: int, i: int, j: int) -> WeightVector:
    """ε_i − ε_j for i < j."""
    if not 1 <= i < j <= n:
        raise ValueError(f"({i},{j}) is not a positive root of rank {n}")
    return WeightVector.epsilon(n, i) - WeightVector.epsilon(n, j)


def antidominant_from_tuple(parts: Iterable[int]) -> WeightVector:
    """λ = −λ_1 ε_1 − ... − λ_n ε_n from the nonnegative, weakly decreasing
    tuple (λ_1, ..., λ_n)."""
    parts = tuple(int(p) for p in parts)
    if any(p < 0 for p in parts):
        raise ValueError(f"parts must be nonnegative, got {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"parts must be weakly decreasing, got {parts}")
    return WeightVector(tuple(-p for p in parts))
