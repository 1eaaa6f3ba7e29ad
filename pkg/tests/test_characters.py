import itertools as it
from math import factorial

import numpy as np
import pytest
import sympy as sym
from sympy.combinatorics import Permutation

from qcrystals.characters import (
    CharacterSeries,
    content_character,
    graded_dimensions,
    positive_roots,
    root_subset_character,
    sdt_character,
    symbolic_product,
    verma_character,
)
from qcrystals.crystal import FiniteElement, LimitElement
from qcrystals.finite import lowest_generator
from qcrystals.graph import bfs_subcrystal
from qcrystals.limit import enumerate_marginal, limit_generator, limit_weight
from qcrystals.tableaux import Shape, content, enumerate_sdt, strict_partitions
from qcrystals.weights import WeightVector


def vandermonde_character(parts, n):
    """1/((n−ℓ)! Δ) Σ_w sgn(w) w(x^η ∏_{i<=ℓ, i<j} (x_i + x_j) ∏_{ℓ<i<j} (x_i − x_j))."""
    xs = sym.symbols(f"x1:{n + 1}")
    ell = len(parts)
    eta = tuple(parts) + (0,) * (n - ell)
    numerator = sym.Mul(*(x ** e for x, e in zip(xs, eta)))
    for i, j in it.combinations(range(n), 2):
        numerator *= xs[i] + xs[j] if i < ell else xs[i] - xs[j]
    alternating = sum(Permutation(list(w)).signature()
                      * numerator.subs({xs[k]: xs[w[k]] for k in range(n)}, simultaneous=True)
                      for w in it.permutations(range(n)))
    delta = sym.Mul(*(xs[i] - xs[j] for i, j in it.combinations(range(n), 2)))
    quotient = sym.Poly(alternating, *xs).exquo(sym.Poly(delta, *xs))
    norm = factorial(n - ell)
    assert all(c % norm == 0 for c in quotient.coeffs())
    return CharacterSeries("epsilon", n, {e: c // norm for e, c in quotient.as_dict().items()})


class TestRoots:
    def test_pairs(self):
        roots = positive_roots(3)
        assert roots.pairs == ((1, 2), (1, 3), (2, 3))
        assert len(roots) == 3
        assert roots.alpha_vector((1, 3)) == (1, 1)
        assert [w.coords for w in roots.weights()][1] == (1, 0, -1)

    def test_rank(self):
        assert len(positive_roots(1)) == 0
        with pytest.raises(ValueError):
            positive_roots(0)


class TestSeries:
    def test_arithmetic(self):
        x = CharacterSeries("alpha", 2, {(1, 0): 2, (0, 1): 1, (0, 0): 0})
        assert len(x) == 2
        assert CharacterSeries.one("alpha", 2) * x == x
        assert (x + x)[(1, 0)] == 4
        assert (x * x)[(1, 1)] == 4
        assert x.total() == 3

    def test_cap(self):
        x = CharacterSeries("alpha", 1, {(0,): 1, (1,): 1}, cap=3)
        assert (x * x * x * x).graded() == [1, 4, 6, 4]
        assert x.truncate(0).items() == [((0,), 1)]
        with pytest.raises(ValueError):
            CharacterSeries("epsilon", 2, {}, cap=2)

    def test_incompatible(self):
        with pytest.raises(ValueError):
            CharacterSeries("alpha", 2) + CharacterSeries("epsilon", 2)
        with pytest.raises(ValueError):
            CharacterSeries("alpha", 2, {(1,): 1})
        with pytest.raises(ValueError):
            CharacterSeries("beta", 2)

    def test_tsv(self):
        text = verma_character(2, 2).to_tsv()
        assert text.splitlines() == ["weight\tcoefficient", "0\t1", "1\t2", "2\t2"]

    def test_array(self):
        assert np.array_equal(verma_character(2, 3).to_array(), np.array([1, 2, 2, 2]))
        arr = verma_character(3, 2).to_array()
        assert arr.shape == (3, 3)
        assert arr[1, 1] == 6 and arr[2, 0] == 2 and arr[2, 1] == 0
        with pytest.raises(ValueError):
            CharacterSeries("epsilon", 2, {(-1, 0): 1}).to_array()


class TestRootProducts:
    def test_verma_rank_two(self):
        assert verma_character(2, 3).graded() == [1, 2, 2, 2]
        assert verma_character(2, 0).total() == 1

    def test_verma_rank_three(self):
        v = verma_character(3, 2)
        assert v.graded() == [1, 4, 10]
        assert v[(1, 1)] == 6

    def test_negative_cap(self):
        with pytest.raises(ValueError):
            verma_character(2, -1)

    def test_subsets(self):
        s = root_subset_character(3, 4)
        assert s.total() == 8
        assert s[(1, 1)] == 2
        assert root_subset_character(3, 3)[(2, 2)] == 0

    @pytest.mark.parametrize("n,D", [(2, 6), (3, 6), (4, 3)])
    def test_limit_crystal_matches_verma(self, n, D):
        counts = (limit_weight(T).alpha_coords() for T in enumerate_marginal(n, D))
        assert CharacterSeries.from_counts(counts, "alpha", n - 1, D) == verma_character(n, D)

    @pytest.mark.parametrize("n,D", [(2, 6), (3, 6)])
    def test_limit_ball_matches_verma(self, n, D):
        # shallower e,f balls miss classes of height <= D
        G = bfs_subcrystal([LimitElement(limit_generator(n))], depth=3 * D + n)
        assert graded_dimensions(G, cap=D) == verma_character(n, D)

    def test_shallow_e_ball_is_not_enough(self):
        G = bfs_subcrystal([LimitElement(limit_generator(2))], dirs=("e",), depth=5)
        assert graded_dimensions(G, cap=3) != verma_character(2, 3)

    def test_symbolic(self):
        assert symbolic_product(2) == "(1+e^(a1))/(1-e^(a1))"
        assert symbolic_product(3, "subsets") == "(1+e^(a1)) * (1+e^(a1+a2)) * (1+e^(a2))"
        assert symbolic_product(1) == "1"
        with pytest.raises(ValueError):
            symbolic_product(3, "schur")


SHAPES = [(s, n) for n in (2, 3, 4) for size in range(1, 6)
          for s in strict_partitions(size, max_parts=n)]


class TestFiniteCharacters:
    def test_small(self):
        assert sdt_character((1,), 2) == CharacterSeries("epsilon", 2, {(1, 0): 1, (0, 1): 1})
        assert sdt_character((2, 1), 2) == CharacterSeries("epsilon", 2, {(2, 1): 1, (1, 2): 1})

    @pytest.mark.parametrize("shape,n", SHAPES, ids=lambda v: str(v))
    def test_matches_tableaux(self, shape, n):
        assert sdt_character(shape, n) == content_character(enumerate_sdt(shape, n), n)

    @pytest.mark.parametrize("shape,n", SHAPES, ids=lambda v: str(v))
    def test_matches_closed_form(self, shape, n):
        assert sdt_character(shape, n) == vandermonde_character(shape.parts, n)

    def test_rank_one(self):
        assert sdt_character((2,), 1) == CharacterSeries("epsilon", 1, {(2,): 1})
        assert sdt_character((), 3) == CharacterSeries.one("epsilon", 3)

    def test_symmetric(self):
        ch = sdt_character((4, 2), 3)
        for exps, c in ch.items():
            for w in it.permutations(exps):
                assert ch[w] == c

    def test_from_weight(self):
        assert sdt_character(WeightVector((-3, -1, 0)), 3) == sdt_character((3, 1), 3)
        with pytest.raises(ValueError):
            sdt_character(WeightVector((-1, -3, 0)), 3)
        with pytest.raises(ValueError):
            sdt_character((3, 2, 1), 2)

    def test_graded_dimensions(self):
        L = lowest_generator(Shape((3, 1)), 3)
        G = bfs_subcrystal([FiniteElement(L)])
        assert graded_dimensions(G, basis="epsilon") == sdt_character((3, 1), 3)
        relative = graded_dimensions(G, base=content(L))
        assert relative[(0, 0)] == 1
        assert relative.total() == G.num_nodes
