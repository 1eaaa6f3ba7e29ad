"""Cutting finite crystals out of SDT(−∞).

The connected component of ``L^{−∞} ⊗ r^∨_μ`` in SDT(−∞) ⊗ ℛ^∨_μ is finite.
When μ comes from a strictly decreasing tuple λ = (λ_1 > ... > λ_n >= 0) by

    μ = Σ_i (λ_i − k) ε_{n+1−i},    k >= λ_1,

the component is isomorphic to SDT(η), η the strict partition of the nonzero
λ_i, up to a global weight shift by a multiple of (1, ..., 1). Tuples with a
repeated zero give components that are too large.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from qcrystals.crystal import FiniteElement, LimitElement, RMarker, TensorElement
from qcrystals.finite import lowest_generator
from qcrystals.graph import CrystalGraph, IsomorphismResult, bfs_subcrystal, labeled_isomorphic
from qcrystals.limit import limit_generator
from qcrystals.tableaux import Shape
from qcrystals.weights import WeightVector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CutSpec:
    """λ as a weakly decreasing tuple of nonnegative integers and the shift k."""
    lam: Tuple[int, ...]
    k: int

    def __post_init__(self):
        lam = tuple(int(x) for x in self.lam)
        if not lam:
            raise ValueError("lambda must have at least one entry")
        if any(x < 0 for x in lam) or any(a < b for a, b in zip(lam, lam[1:])):
            raise ValueError(f"lambda must be nonnegative and weakly decreasing, got {lam}")
        if self.k < lam[0]:
            raise ValueError(f"shift k={self.k} is smaller than lambda_1={lam[0]}")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def parse(cls, lam: str, k: int) -> "CutSpec":
        return cls(tuple(int(x) for x in lam.split(",")), k)

    @property
    def n(self) -> int:
        return len(self.lam)

    @property
    def mu(self) -> WeightVector:
        n = self.n
        coords = [0] * n
        for i, x in enumerate(self.lam, start=1):
            coords[n - i] = x - self.k
        return WeightVector(tuple(coords))

    @property
    def has_strict_parts(self) -> bool:
        return all(a > b for a, b in zip(self.lam, self.lam[1:]))

    @property
    def shape(self) -> Shape:
        """η: the nonzero entries of λ (a ShapeError if they repeat)."""
        return Shape(tuple(x for x in self.lam if x))


def component_for_mu(mu: WeightVector, max_nodes: Optional[int] = None) -> CrystalGraph:
    """The component of L^{−∞} ⊗ r^∨_μ under all e_i, f_i, i in I."""
    start = TensorElement(LimitElement(limit_generator(mu.n)), RMarker(mu))
    return bfs_subcrystal([start], max_nodes=max_nodes)


def cut_component(spec: CutSpec, max_nodes: Optional[int] = None) -> CrystalGraph:
    if not spec.has_strict_parts:
        logger.info("cut_component: %s is not strictly decreasing, expect a larger component",
                    spec.lam)
    return component_for_mu(spec.mu, max_nodes)


def sdt_component(shape: Shape, n: int, max_nodes: Optional[int] = None) -> CrystalGraph:
    """SDT(η) as the closure of L^η."""
    return bfs_subcrystal([FiniteElement(lowest_generator(shape, n))], max_nodes=max_nodes)


@dataclass
class CutResult:
    isomorphic: bool
    cut: CrystalGraph
    target: CrystalGraph
    iso: IsomorphismResult
    witness: Dict[str, object] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.isomorphic

    def to_json(self) -> dict:
        return {"isomorphic": self.isomorphic, "cut_nodes": self.cut.num_nodes,
                "sdt_nodes": self.target.num_nodes, "reason": self.iso.reason,
                "witness": self.witness}


def verify_cut(spec: CutSpec, max_nodes: Optional[int] = None) -> CutResult:
    """Compare the cut component with SDT(η) up to a (1, ..., 1) weight shift.

    The witness is the node bijection (cut node id -> SDT node id) on success
    and the two sizes otherwise.
    """
    cut = cut_component(spec, max_nodes)
    target = sdt_component(spec.shape, spec.n, max_nodes)
    iso = labeled_isomorphic(cut, target, weight_mode="mod_ones")
    if iso.isomorphic:
        witness = {"mapping": {str(k): v for k, v in sorted(iso.mapping.items())}}
    else:
        witness = {"cut_nodes": cut.num_nodes, "sdt_nodes": target.num_nodes}
    logger.info("verify_cut(%s, k=%d): %s (%s)", spec.lam, spec.k, iso.isomorphic, iso.reason)
    return CutResult(iso.isomorphic, cut, target, iso, witness)
