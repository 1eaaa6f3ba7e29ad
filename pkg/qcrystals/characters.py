"""Positive roots and formal characters.

Characters are finitely supported integer series stored as dictionaries from
exponent vectors to coefficients. Two bases are in use and every series
carries its basis tag:

* ``"alpha"``  exponents over the simple roots α_1, ..., α_{n−1}; used for
  gradings of SDT(−∞) by Q⁺ and for products over the positive roots. These
  series may be truncated at a height cap (sum of the exponents).
* ``"epsilon"`` exponents over ε_1, ..., ε_n; used for characters of the
  finite crystals SDT(λ), which are polynomials and never truncated.

Series arithmetic runs on :class:`sympy.Poly` in the variables ``y1, y2, ...``
(one per exponent slot), truncated after every product.

The character of SDT(λ) is evaluated from the shape η = w_0λ as::

    ch = ∏_{α>0} (1 + e^{−α})/(1 − e^{−α}) · Σ_{w ∈ S_n} sgn(w) w( e^η / ∏_{α ∈ Φ⁺(η)} (1 + e^{−α}) )

with Φ⁺(η) the positive roots ε_i − ε_j whose entries η_i = η_j agree. Every
term is e^η times a power series in y_k = e^{−α_k}, so the computation runs in
those variables up to the height of η − w_0η, which bounds the support.
"""
import itertools as it
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import sympy as sym
from sympy.combinatorics import Permutation

from qcrystals.tableaux import Shape, ShiftedTableau, content
from qcrystals.weights import WeightVector, positive_root

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


def _gens(nvars: int) -> Tuple[sym.Symbol, ...]:
    if nvars < 1:
        raise ValueError("polynomial view needs at least one variable")
    return tuple(sym.symbols(f"y1:{nvars + 1}"))


def _poly(terms: Dict[Exponent, int], gens) -> sym.Poly:
    return sym.Poly.from_dict(terms or {(0,) * len(gens): 0}, gens, domain=sym.ZZ)


def _drop_higher_degree(p: sym.Poly, cap: Optional[int]) -> sym.Poly:
    """Remove the terms of total degree above ``cap``."""
    if cap is None:
        return p
    terms = {e: c for e, c in p.as_dict().items() if sum(e) <= cap}
    return _poly(terms, p.gens)


# ====================================================================
# Roots
# ====================================================================

@dataclass(frozen=True)
class RootSet:
    """Φ⁺ of rank n as pairs (i, j), i < j, standing for ε_i − ε_j."""
    n: int

    @property
    def pairs(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((i, j) for i in range(1, self.n + 1) for j in range(i + 1, self.n + 1))

    def __len__(self) -> int:
        return self.n * (self.n - 1) // 2

    def __iter__(self):
        return iter(self.pairs)

    def weights(self) -> List[WeightVector]:
        return [positive_root(self.n, i, j) for i, j in self.pairs]

    def alpha_vector(self, root: Tuple[int, int]) -> Exponent:
        """ε_i − ε_j = α_i + ... + α_{j−1}."""
        i, j = root
        return tuple(1 if i <= k < j else 0 for k in range(1, self.n))


def positive_roots(n: int) -> RootSet:
    if n < 1:
        raise ValueError(f"rank must be >= 1, got {n}")
    return RootSet(n)


# ====================================================================
# Series
# ====================================================================

class CharacterSeries:
    """A finitely supported integer series in a tagged monomial basis.

    :param basis: ``"alpha"`` or ``"epsilon"``
    :param nvars: number of variables
    :param coeffs: exponent vector -> coefficient
    :param cap: height cap (alpha basis only); terms above it are dropped
    """

    def __init__(self, basis: str, nvars: int, coeffs: Optional[Dict[Exponent, int]] = None,
                 cap: Optional[int] = None):
        if basis not in ("alpha", "epsilon"):
            raise ValueError(f"basis must be 'alpha' or 'epsilon', got {basis!r}")
        if cap is not None and basis != "alpha":
            raise ValueError("only alpha-basis series can be truncated")
        self.basis = basis
        self.nvars = nvars
        self.cap = cap
        self.coeffs: Dict[Exponent, int] = {}
        for exps, c in (coeffs or {}).items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent {exps} does not have {nvars} entries")
            if c and (cap is None or sum(exps) <= cap):
                self.coeffs[exps] = self.coeffs.get(exps, 0) + int(c)
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @classmethod
    def one(cls, basis: str, nvars: int, cap: Optional[int] = None) -> "CharacterSeries":
        return cls(basis, nvars, {(0,) * nvars: 1}, cap)

    @classmethod
    def from_counts(cls, counts: Iterable[Exponent], basis: str, nvars: int,
                    cap: Optional[int] = None) -> "CharacterSeries":
        return cls(basis, nvars, dict(Counter(tuple(e) for e in counts)), cap)

    @classmethod
    def from_poly(cls, p: sym.Poly, basis: str, cap: Optional[int] = None) -> "CharacterSeries":
        return cls(basis, len(p.gens), p.as_dict(), cap)

    def to_poly(self) -> sym.Poly:
        """The series as a polynomial in ``y1, ..., y_nvars``."""
        if any(x < 0 for exps in self.coeffs for x in exps):
            raise ValueError("polynomial view needs nonnegative exponents")
        return _poly(self.coeffs, _gens(self.nvars))

    def __getitem__(self, exps: Exponent) -> int:
        return self.coeffs.get(tuple(exps), 0)

    def items(self) -> List[Tuple[Exponent, int]]:
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __len__(self) -> int:
        return len(self.coeffs)

    def total(self) -> int:
        return sum(self.coeffs.values())

    def graded(self) -> List[int]:
        """Coefficient sums by height 0..cap (or the maximal height)."""
        top = self.cap if self.cap is not None else max((sum(e) for e in self.coeffs), default=0)
        out = [0] * (top + 1)
        for exps, c in self.coeffs.items():
            out[sum(exps)] += c
        return out

    def truncate(self, cap: int) -> "CharacterSeries":
        return CharacterSeries(self.basis, self.nvars, self.coeffs, cap)

    def _check(self, other: "CharacterSeries"):
        if (self.basis, self.nvars) != (other.basis, other.nvars):
            raise ValueError(f"incompatible series: {self.basis}/{self.nvars} vs "
                             f"{other.basis}/{other.nvars}")

    def _joint_cap(self, other: "CharacterSeries") -> Optional[int]:
        caps = [c for c in (self.cap, other.cap) if c is not None]
        return min(caps) if caps else None

    def __add__(self, other: "CharacterSeries") -> "CharacterSeries":
        self._check(other)
        coeffs = dict(self.coeffs)
        for exps, c in other.coeffs.items():
            coeffs[exps] = coeffs.get(exps, 0) + c
        return CharacterSeries(self.basis, self.nvars, coeffs, self._joint_cap(other))

    def __mul__(self, other: "CharacterSeries") -> "CharacterSeries":
        self._check(other)
        cap = self._joint_cap(other)
        if self.nvars == 0:
            return CharacterSeries(self.basis, 0, {(): self[()] * other[()]}, cap)
        product = _drop_higher_degree(self.to_poly() * other.to_poly(), cap)
        return CharacterSeries.from_poly(product, self.basis, cap)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharacterSeries):
            return NotImplemented
        return (self.basis, self.nvars, self.coeffs) == (other.basis, other.nvars, other.coeffs)

    def to_tsv(self) -> str:
        lines = ["weight\tcoefficient"]
        for exps, c in self.items():
            lines.append(",".join(str(x) for x in exps) + f"\t{c}")
        return "\n".join(lines) + "\n"

    def to_array(self) -> np.ndarray:
        """Dense coefficient array indexed by exponent vectors."""
        if any(x < 0 for exps in self.coeffs for x in exps):
            raise ValueError("dense view needs nonnegative exponents")
        top = self.cap if self.cap is not None else max((max(e, default=0) for e in self.coeffs), default=0)
        out = np.zeros((top + 1,) * self.nvars, dtype=np.int64)
        for exps, c in self.coeffs.items():
            out[exps] = c
        return out

    def __repr__(self) -> str:
        cap = f", cap={self.cap}" if self.cap is not None else ""
        return f"CharacterSeries({self.basis}, nvars={self.nvars}, {len(self.coeffs)} terms{cap})"


# ====================================================================
# Products over the positive roots
# ====================================================================

def _geometric(v: Exponent, D: int, gens, alternating: bool = False) -> sym.Poly:
    """Σ_k (±1)^k y^{k·v} over k·ht(v) <= D."""
    top = D // sum(v)
    return _poly({tuple(k * x for x in v): (-1) ** k if alternating else 1
                  for k in range(top + 1)}, gens)


def _root_poly(n: int, D: int, verma: bool, gens) -> sym.Poly:
    roots = positive_roots(n)
    out = _poly({(0,) * (n - 1): 1}, gens)
    for root in roots:
        v = roots.alpha_vector(root)
        factor = _poly({(0,) * (n - 1): 1, v: 1}, gens)
        if verma:
            factor = factor * _geometric(v, D, gens)
        out = _drop_higher_degree(out * factor, D)
    return out


def _root_product(n: int, D: int, verma: bool) -> CharacterSeries:
    if D < 0:
        raise ValueError(f"degree cap must be >= 0, got {D}")
    if n == 1:
        return CharacterSeries.one("alpha", 0, D)
    return CharacterSeries.from_poly(_root_poly(n, D, verma, _gens(n - 1)), "alpha", D)


def verma_character(n: int, D: int) -> CharacterSeries:
    """∏_{α∈Φ⁺} (1 + e^α)/(1 − e^α) up to height D; each factor expands to
    1 + 2 Σ_{k>=1} e^{kα}."""
    return _root_product(n, D, verma=True)


def root_subset_character(n: int, D: int) -> CharacterSeries:
    """∏_{α∈Φ⁺} (1 + e^α) up to height D: the number of subsets of Φ⁺ with a
    given sum."""
    return _root_product(n, D, verma=False)


def symbolic_product(n: int, formula: str = "verma") -> str:
    """The product over Φ⁺ as a readable string."""
    roots = positive_roots(n)
    factors = []
    for i, j in roots:
        alpha = "+".join(f"a{k}" for k in range(i, j))
        if formula == "verma":
            factors.append(f"(1+e^({alpha}))/(1-e^({alpha}))")
        elif formula == "subsets":
            factors.append(f"(1+e^({alpha}))")
        else:
            raise ValueError(f"unknown formula {formula!r}")
    return " * ".join(factors) or "1"


# ====================================================================
# Finite characters
# ====================================================================

def _shape_of(lam, n: int) -> Shape:
    if isinstance(lam, Shape):
        return lam
    if isinstance(lam, WeightVector):
        if lam.n != n:
            raise ValueError(f"weight {lam} does not have rank {n}")
        if not lam.is_antidominant() or any(c > 0 for c in lam.coords):
            raise ValueError(f"{lam} is not a polynomial antidominant weight")
        parts = tuple(sorted((-c for c in lam.coords if c), reverse=True))
        return Shape(parts)
    return Shape(tuple(lam))


def _weyl_term(eta: Exponent, w: Tuple[int, ...], cap: int, gens) -> sym.Poly:
    """e^{−η} · sgn(w) w(e^η / ∏_{α∈Φ⁺(η)} (1 + e^{−α})) in y_k = e^{−α_k}.

    A stabilizer root sent to a negative root −β contributes
    1/(1 + e^β) = e^{−β}/(1 + e^{−β}).
    """
    n = len(eta)
    moved = [0] * n
    for a, e in enumerate(eta):
        moved[w[a]] = e
    shift = (WeightVector(eta) - WeightVector(tuple(moved))).alpha_coords()
    term = _poly({shift: Permutation(list(w)).signature()}, gens)
    for a, b in it.combinations(range(n), 2):
        if eta[a] != eta[b]:
            continue
        p, q = w[a], w[b]
        v = positive_roots(n).alpha_vector((min(p, q) + 1, max(p, q) + 1))
        factor = _geometric(v, cap, gens, alternating=True)
        if p > q:
            factor = factor * _poly({v: 1}, gens)
        term = _drop_higher_degree(term * factor, cap)
    return term


def sdt_character(lam, n: int) -> CharacterSeries:
    """ch SDT(λ) in the ε-basis.

    :param lam: a :class:`Shape`, a strict partition tuple, or an antidominant
        weight whose negated nonzero entries form a strict partition
    """
    shape = _shape_of(lam, n)
    if len(shape) > n:
        raise ValueError(f"shape {shape.parts} has more than {n} rows")
    eta = shape.padded(n)
    if n == 1:
        return CharacterSeries("epsilon", 1, {eta: 1})
    gens = _gens(n - 1)
    cap = (WeightVector(eta) - WeightVector(eta[::-1])).height()
    alternating = _poly({}, gens)
    for w in it.permutations(range(n)):
        alternating = alternating + _weyl_term(eta, w, cap, gens)
    lowered = _drop_higher_degree(_root_poly(n, cap, True, gens) * alternating, cap)
    coeffs: Dict[Exponent, int] = {}
    for shift, c in lowered.as_dict().items():
        exps = tuple(eta[k] - (shift[k] if k < n - 1 else 0) + (shift[k - 1] if k else 0)
                     for k in range(n))
        if c < 0 or min(exps) < 0:
            raise ArithmeticError(f"term {c}·x^{exps} in the character of {shape}")
        coeffs[exps] = int(c)
    logger.debug("sdt_character(%s, n=%d): %d monomials up to height %d",
                 shape, n, len(coeffs), cap)
    return CharacterSeries("epsilon", n, coeffs)


def content_character(tableaux: Iterable[ShiftedTableau], n: int) -> CharacterSeries:
    """Σ_T x^{content(T)}."""
    return CharacterSeries.from_counts((content(T).coords for T in tableaux), "epsilon", n)


def graded_dimensions(G, base: Optional[WeightVector] = None, basis: str = "alpha",
                      cap: Optional[int] = None) -> CharacterSeries:
    """Count the nodes of a crystal graph by wt − wt(base).

    :param G: a :class:`qcrystals.graph.CrystalGraph`
    :param base: weight subtracted from every node (default 0)
    :param basis: ``"alpha"`` (differences must lie in Q) or ``"epsilon"``
    :param cap: height cap for the alpha basis
    """
    n = G.n
    base = base if base is not None else WeightVector.zero(n)
    exps = []
    for node in G.nodes:
        d = node.weight - base
        exps.append(d.alpha_coords() if basis == "alpha" else d.coords)
    return CharacterSeries.from_counts(exps, basis, n - 1 if basis == "alpha" else n, cap)
