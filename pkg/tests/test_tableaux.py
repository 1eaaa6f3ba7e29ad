import random

import pytest
from hypothesis import given, settings, strategies as st

from qcrystals.config import GuardExceeded
from qcrystals.tableaux import (
    Shape,
    ShapeError,
    ShiftedTableau,
    TaggedLetter,
    TaggedWord,
    all_fillings,
    bracket,
    content,
    enumerate_sdt,
    is_hook_word,
    is_sdt,
    pair_reduce,
    reading_word,
    reduced_word,
    restricted_word,
    strict_partitions,
    validate_sdt,
)


def tab(n, *rows):
    return ShiftedTableau(n, tuple(tuple(r) for r in rows))


EXAMPLE = tab(3, [3, 3, 3, 3, 2], [2, 2, 1], [1])


def naive_hook(word):
    # some split point k: weakly decreasing up to k, strictly increasing after
    return any(all(a >= b for a, b in zip(word[:k + 1], word[1:k + 1]))
               and all(a < b for a, b in zip(word[k:], word[k + 1:]))
               for k in range(len(word)))


class TestShape:
    def test_parse(self):
        assert Shape.parse("5,3,1").parts == (5, 3, 1)
        assert Shape.parse("").parts == ()
        assert Shape((5, 3, 1)).size == 9

    @pytest.mark.parametrize("parts", [(3, 3), (1, 2), (2, 0)])
    def test_not_strict(self, parts):
        with pytest.raises(ShapeError):
            Shape(parts)

    def test_padded(self):
        assert Shape((2, 1)).padded(4) == (2, 1, 0, 0)
        with pytest.raises(ShapeError):
            Shape((3, 2, 1)).padded(2)

    def test_strict_partitions(self):
        assert [s.parts for s in strict_partitions(6)] == [(6,), (5, 1), (4, 2), (3, 2, 1)]
        assert [s.parts for s in strict_partitions(6, max_parts=2)] == [(6,), (5, 1), (4, 2)]


class TestShiftedTableau:
    def test_rejects_bad_letters(self):
        with pytest.raises(ShapeError):
            tab(2, [3])
        with pytest.raises(ShapeError):
            tab(2, [1], [1], [1])
        with pytest.raises(ShapeError):
            tab(3, [2], [1, 1])

    def test_json(self):
        data = EXAMPLE.to_json()
        assert data == {"n": 3, "rows": [[3, 3, 3, 3, 2], [2, 2, 1], [1]]}
        assert ShiftedTableau.from_json(data) == EXAMPLE
        with pytest.raises(ShapeError):
            ShiftedTableau.from_json({"rows": []})

    def test_replace(self):
        assert EXAMPLE.replace({(2, 3): 2}).rows[1] == (2, 2, 2)
        assert EXAMPLE.rows[1] == (2, 2, 1)

    def test_content(self):
        assert content(EXAMPLE).coords == (2, 3, 4)


class TestHookWords:
    @pytest.mark.parametrize("word,expected", [
        ([1], True),
        ([3, 3, 1, 2], True),
        ([1, 2, 3], True),
        ([3, 2, 1], True),
        ([1, 2, 1], False),
        ([2, 1, 2, 2], False),
        ([3, 1, 1, 2, 3], True),
    ])
    def test_examples(self, word, expected):
        assert is_hook_word(word) is expected

    def test_empty(self):
        with pytest.raises(ValueError):
            is_hook_word([])

    @given(st.lists(st.integers(1, 4), min_size=1, max_size=7))
    def test_matches_definition(self, word):
        assert is_hook_word(word) == naive_hook(word)


class TestWords:
    def test_reading_word(self):
        word = reading_word(tab(3, [3, 2], [1]))
        assert word.letters == (2, 3, 1)
        assert [e.cell for e in word] == [(1, 2), (1, 1), (2, 1)]

    def test_bracket(self):
        word = restricted_word(EXAMPLE, 1)
        assert word.letters == (2, 1, 2, 2, 1)
        pairs, unmatched = bracket(word, 1)
        assert pairs == {0: 1, 3: 4}
        assert unmatched == [2]

    def test_bracket_rejects_foreign_letter(self):
        word = TaggedWord((TaggedLetter(3, 1, 1),))
        with pytest.raises(ValueError):
            bracket(word, 1)

    def test_reduced_word(self):
        red = reduced_word(EXAMPLE, 2)
        assert red.letters == (2, 3, 3)
        assert [e.cell for e in red] == [(1, 5), (1, 4), (1, 3)]

    def test_index_range(self):
        with pytest.raises(ValueError):
            restricted_word(EXAMPLE, 3)

    @settings(max_examples=60)
    @given(st.lists(st.sampled_from([1, 2]), max_size=14), st.integers(0, 10 ** 6))
    def test_pair_reduce_any_deletion_order(self, letters, seed):
        word = TaggedWord(tuple(TaggedLetter(x, 1, k) for k, x in enumerate(letters, start=1)))
        rng = random.Random(seed)
        entries = list(word.entries)
        while True:
            spots = [k for k in range(len(entries) - 1)
                     if (entries[k].letter, entries[k + 1].letter) == (2, 1)]
            if not spots:
                break
            k = rng.choice(spots)
            del entries[k:k + 2]
        assert pair_reduce(word, 1) == TaggedWord(tuple(entries))


class TestValidation:
    def test_example_is_valid(self):
        assert validate_sdt(EXAMPLE).valid

    def test_type_u(self):
        report = validate_sdt(tab(3, [2, 3], [1]))
        assert not report.valid
        assert [v.kind for v in report.violations] == ["type-U"]

    def test_type_l(self):
        report = validate_sdt(tab(3, [3, 1, 1], [2, 2]))
        assert [v.kind for v in report.violations] == ["type-L"]
        assert report.violations[0].cells == ((1, 2), (2, 2), (2, 1))
        assert validate_sdt(tab(3, [3, 1, 1], [2])).valid

    def test_hook_violation(self):
        report = validate_sdt(tab(3, [1, 2, 1]))
        assert [v.kind for v in report.violations] == ["hook"]

    def test_leftmost_violation(self):
        report = validate_sdt(tab(3, [2, 1], [2]))
        assert "leftmost" in [v.kind for v in report.violations]

    def test_report_json(self):
        data = validate_sdt(tab(3, [2, 3], [1])).to_json()
        assert data["valid"] is False
        assert data["violations"][0]["kind"] == "type-U"


class TestEnumeration:
    def test_single_cell(self):
        assert {T.rows for T in enumerate_sdt(Shape((1,)), 3)} == {((1,),), ((2,),), ((3,),)}

    @pytest.mark.parametrize("parts,n", [((2,), 2), ((2, 1), 2), ((3, 1), 3), ((2, 1), 3), ((4,), 2)])
    def test_matches_brute_force(self, parts, n):
        shape = Shape(parts)
        brute = {T for T in all_fillings(shape, n) if is_sdt(T)}
        assert enumerate_sdt(shape, n) == brute

    def test_guard(self):
        with pytest.raises(GuardExceeded) as info:
            enumerate_sdt(Shape((5, 3, 1)), 3, max_fillings=10)
        assert info.value.cap_name == "max_fillings"

    def test_too_many_rows(self):
        with pytest.raises(ShapeError):
            enumerate_sdt(Shape((3, 2, 1)), 2)

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from([(2, 1), (3, 1), (3, 2)]), st.data())
    def test_random_fillings_agree(self, parts, data):
        shape = Shape(parts)
        letters = data.draw(st.lists(st.integers(1, 3), min_size=shape.size, max_size=shape.size))
        rows, k = [], 0
        for s in parts:
            rows.append(letters[k:k + s])
            k += s
        T = tab(3, *rows)
        assert is_sdt(T) == (T in enumerate_sdt(shape, 3))
