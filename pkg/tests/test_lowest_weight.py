import itertools as it

import pytest
from hypothesis import given, settings, strategies as st

from qcrystals.characters import root_subset_character
from qcrystals.finite import OperatorLabel
from qcrystals.limit import apply_limit, is_lowest_limit, limit_generator, limit_weight
from qcrystals.lowest_weight import (
    Consecution,
    add_root,
    check_roots,
    enumerate_lowest,
    find_consecutions,
    format_roots,
    nontrivial_reading_word,
    parse_roots,
    peel_root,
    root_sum,
    trivial_cells,
    xi_forward,
    xi_inverse,
)
from qcrystals.tableaux import ShiftedTableau


def tab(n, *rows):
    return ShiftedTableau(n, tuple(tuple(r) for r in rows))


FIRST_ROOTS = parse_roots("2-3,2-4,1-4,1-5")
FIRST_STEPS = [
    tab(5, [5] * 7, [4] * 6, [3, 3, 3, 2, 3], [2, 2], [1]),
    tab(5, [5] * 10, [4] * 7 + [3, 4], [3, 3, 3, 2, 2, 3], [2, 2], [1]),
    tab(5, [5] * 11, [4] * 7 + [2, 3, 4], [3, 3, 3, 2, 1, 3], [2, 2], [1]),
    tab(5, [5] * 12 + [4, 5], [4] * 7 + [3, 2, 3, 4], [3, 3, 3, 1, 1, 2], [2, 2], [1]),
]

SECOND_ROOTS = parse_roots("1-3,2-5,1-5")
SECOND_STEPS = [
    tab(5, [5] * 8, [4] * 7, [3] * 4 + [2, 3], [2, 2, 1], [1]),
    tab(5, [5] * 10 + [4, 5], [4] * 8 + [3], [3] * 4 + [2, 2, 3], [2, 2, 1], [1]),
    tab(5, [5] * 10 + [3, 4, 5], [4] * 8 + [2], [3, 3, 3, 3, 2, 1, 3], [2, 2, 1], [1]),
]

ROOTS5 = [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]


def all_subsets(n, max_size=None):
    roots = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    top = len(roots) if max_size is None else max_size
    for k in range(top + 1):
        for combo in it.combinations(roots, k):
            yield frozenset(combo)


class TestRootSubsets:
    def test_parse(self):
        assert parse_roots("2-3, 1-4,") == {(2, 3), (1, 4)}
        assert parse_roots("") == frozenset()
        with pytest.raises(ValueError):
            parse_roots("2")
        with pytest.raises(ValueError):
            parse_roots("a-b")

    def test_check(self):
        assert check_roots([(1, 3)], 3) == {(1, 3)}
        for bad in [(3, 2), (0, 1), (1, 4)]:
            with pytest.raises(ValueError):
                check_roots([bad], 3)

    def test_format_and_sum(self):
        assert format_roots(FIRST_ROOTS) == "1-4,1-5,2-3,2-4"
        assert root_sum(FIRST_ROOTS, 5).coords == (2, 2, -1, -2, -1)


class TestConsecutions:
    def test_example(self):
        T = FIRST_STEPS[2]
        found = find_consecutions(T)
        assert Consecution(1, 4, ((2, 10), (2, 9), (2, 8), (3, 5))) in found
        assert Consecution(2, 3, ((3, 6), (3, 4))) in found
        assert [c.k for c in found] == sorted((c.k for c in found), reverse=True)
        assert found[0].to_json()["k"] == 4

    def test_nested(self):
        found = find_consecutions(FIRST_STEPS[2])
        assert Consecution(2, 2, ((3, 4),)) in found
        for k in (1, 2, 3):
            assert any(c.i == 1 and c.k == k for c in found)

    def test_exclusion(self):
        T = FIRST_STEPS[2]
        found = find_consecutions(T, exclude=frozenset({(3, 5)}))
        assert Consecution(1, 4, ((2, 10), (2, 9), (2, 8), (3, 5))) not in found
        assert Consecution(2, 3, ((3, 6), (3, 4))) in found

    def test_trivial_cells(self):
        L = limit_generator(3)
        assert trivial_cells(L) == frozenset(L.cells())
        assert len(nontrivial_reading_word(L)) == 0
        assert find_consecutions(L) == []


class TestXiForward:
    def test_empty(self):
        assert xi_forward(frozenset(), 4) == limit_generator(4)

    def test_single_root_rank_two(self):
        T = xi_forward({(1, 2)}, 2)
        assert T == tab(2, [2, 2, 1, 2], [1])
        assert limit_weight(T).coords == (1, -1)

    @pytest.mark.parametrize("roots,steps", [(FIRST_ROOTS, FIRST_STEPS), (SECOND_ROOTS, SECOND_STEPS)])
    def test_worked_examples(self, roots, steps):
        trace = []
        T = xi_forward(roots, 5, trace=trace)
        assert [ShiftedTableau.from_json(rec["tableau"]) for rec in trace] == steps
        assert T == steps[-1]
        assert limit_weight(T) == root_sum(roots, 5)
        assert is_lowest_limit(T)

    def test_trace_records(self):
        trace = []
        xi_forward(FIRST_ROOTS, 5, trace=trace)
        assert [tuple(rec["root"]) for rec in trace] == [(2, 3), (2, 4), (1, 4), (1, 5)]
        assert [(rec["j"], rec["k"]) for rec in trace] == [(3, 1), (4, 1), (4, 2), (5, 1)]
        assert all(rec["substeps"][0]["step"] == "plant" for rec in trace)

    def test_second_example_moves(self):
        trace = []
        xi_forward(SECOND_ROOTS, 5, trace=trace)
        last = trace[-1]["substeps"]
        assert [s["step"] for s in last] == ["plant", "unpaired", "unpaired"]
        assert [s["letter"] for s in last] == [3, 2, 1]

    def test_one_consecution_per_root(self):
        for n in (3, 4):
            for i, j in it.combinations(range(1, n + 1), 2):
                T = xi_forward({(i, j)}, n)
                ends = [c.i for c in find_consecutions(T) if c.k == j]
                assert ends and min(ends) <= i

    def test_add_root_arguments(self):
        with pytest.raises(ValueError):
            add_root(limit_generator(3), 2, 3, 2)
        with pytest.raises(ValueError):
            add_root(limit_generator(3), 3, 2, 1)

    def test_rejects_bad_roots(self):
        with pytest.raises(ValueError):
            xi_forward({(2, 1)}, 3)


class TestXiInverse:
    def test_first_example(self):
        root, rest = peel_root(FIRST_STEPS[-1])
        assert root == (1, 5)
        assert rest == FIRST_STEPS[2]
        assert xi_inverse(FIRST_STEPS[-1]) == FIRST_ROOTS

    def test_second_example(self):
        root, rest = peel_root(SECOND_STEPS[-1])
        assert (root, rest) == ((1, 5), SECOND_STEPS[1])
        root, rest = peel_root(SECOND_STEPS[1])
        assert (root, rest) == ((2, 5), SECOND_STEPS[0])
        assert xi_inverse(SECOND_STEPS[-1]) == SECOND_ROOTS

    def test_generator(self):
        assert peel_root(limit_generator(3)) is None
        assert xi_inverse(limit_generator(3)) == frozenset()

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_roundtrip(self, n):
        images = {}
        for B in all_subsets(n):
            T = xi_forward(B, n)
            assert is_lowest_limit(T)
            assert xi_inverse(T) == B
            images[T] = B
        assert len(images) == 2 ** (n * (n - 1) // 2)

    def test_roundtrip_rank_five(self):
        images = {}
        for B in all_subsets(5, max_size=4):
            T = xi_forward(B, 5)
            assert limit_weight(T) == root_sum(B, 5)
            assert xi_inverse(T) == B
            images[T] = B
        assert len(images) == 386

    @settings(max_examples=25, deadline=None)
    @given(st.sets(st.sampled_from(ROOTS5), min_size=5, max_size=7))
    def test_larger_subsets_rank_five(self, B):
        T = xi_forward(B, 5)
        assert is_lowest_limit(T)
        assert xi_inverse(T) == B

    def test_rejects(self):
        not_lowest = apply_limit(limit_generator(3), OperatorLabel("e", 1))
        with pytest.raises(ValueError):
            xi_inverse(not_lowest)
        with pytest.raises(ValueError):
            xi_inverse(tab(3, [3, 3, 3, 3], [2, 2, 2], [1]))


class TestCounting:
    def test_lowest_elements_are_the_image(self):
        lowest = enumerate_lowest(3, 4)
        found = {T for group in lowest.values() for T in group}
        assert found == {xi_forward(B, 3) for B in all_subsets(3)}

    @pytest.mark.parametrize("n,D", [(2, 4), (3, 3), (3, 6), (4, 4)])
    def test_counts_match_root_subsets(self, n, D):
        lowest = enumerate_lowest(n, D)
        counts = {w.alpha_coords(): len(group) for w, group in lowest.items()}
        expected = root_subset_character(n, D)
        assert counts == dict(expected.items())

    def test_weight_zero(self):
        lowest = enumerate_lowest(3, 2)
        zero = [T for w, group in lowest.items() if not any(w.coords) for T in group]
        assert zero == [limit_generator(3)]
