import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzylink.similarity import (
    ColumnSpec,
    Matcher,
    edit_distance,
    exact_sim,
    jaro_winkler_sim,
    levenshtein_sim,
    normalize_text,
    score_columns,
)


def recursive_edit_distance(s: str, t: str) -> int:
    """Textbook recursion, memoized; independent of the DP in the package."""

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (s[i - 1] != t[j - 1]),
        )

    return d(len(s), len(t))


def all_strings(alphabet: str, max_len: int):
    for n in range(max_len + 1):
        for chars in itertools.product(alphabet, repeat=n):
            yield "".join(chars)


text = st.text(alphabet="ABCDE XYZ", max_size=12)


class TestNormalization:
    def test_trim_collapse_upper(self):
        assert normalize_text("  el   paso ") == "EL PASO"

    def test_none_is_empty(self):
        assert normalize_text(None) == ""


class TestExact:
    def test_equal(self):
        assert exact_sim("EL PASO", "EL PASO") == 1.0

    def test_trailing_space(self):
        assert exact_sim("TAVARES", "TAVARES ") == 1.0

    def test_distinct(self):
        assert exact_sim("EL PASO", "TAVARES") == 0.0


class TestLevenshtein:
    def test_kitten_sitting(self):
        assert levenshtein_sim("kitten", "sitting") == pytest.approx(1 - 3 / 7)

    def test_identity(self):
        assert levenshtein_sim("2001 N OREGON ST", "2001 N OREGON ST") == 1.0

    def test_empty_vs_nonempty(self):
        assert levenshtein_sim("", "abc") == 0.0

    def test_both_empty(self):
        assert levenshtein_sim("", "") == 1.0

    def test_brute_force_oracle_exhaustive(self):
        # public API against the recursive oracle: all pairs up to length 4,
        # plus the length 5-6 strings against a fixed panel
        short = list(all_strings("ABC", 4))
        for s in short:
            for t in short:
                want = recursive_edit_distance(s, t)
                longest = max(len(s), len(t))
                expected = 1.0 if longest == 0 else 1 - want / longest
                assert levenshtein_sim(s, t) == pytest.approx(expected, abs=1e-12), (s, t)
        panel = ["", "A", "ABC", "CCBA", "ABCABC", "BBBBBB", "CABACB"]
        for s in all_strings("ABC", 6):
            if len(s) < 5:
                continue
            for t in panel:
                expected = 1 - recursive_edit_distance(s, t) / max(len(s), len(t))
                assert levenshtein_sim(s, t) == pytest.approx(expected, abs=1e-12), (s, t)

    def test_exhaustive_length_six_three_letters(self):
        # all 1093 x 1093 pairs; oracle is a batched numpy recurrence per length pair
        strings = list(all_strings("ABC", 6))
        by_len = {}
        for s in strings:
            by_len.setdefault(len(s), []).append(s)
        codes = {n: np.array([[ord(c) for c in s] for s in group], dtype=np.int8).reshape(len(group), n)
                 for n, group in by_len.items()}
        for ls, S in codes.items():
            for lt, T in codes.items():
                table = [[None] * (lt + 1) for _ in range(ls + 1)]
                shape = (S.shape[0], T.shape[0])
                for i in range(ls + 1):
                    for j in range(lt + 1):
                        if i == 0 or j == 0:
                            table[i][j] = np.full(shape, i + j)
                            continue
                        cost = (S[:, i - 1][:, None] != T[:, j - 1][None, :]).astype(int)
                        table[i][j] = np.minimum.reduce(
                            [table[i - 1][j] + 1, table[i][j - 1] + 1, table[i - 1][j - 1] + cost]
                        )
                want = table[ls][lt]
                for a, s in enumerate(by_len[ls]):
                    for b, t in enumerate(by_len[lt]):
                        assert edit_distance(s, t) == want[a, b], (s, t)

    def test_combining_accent_counts_once(self):
        decomposed = "JOSÉ"  # E + combining acute
        assert levenshtein_sim(decomposed, "JOSE") == pytest.approx(1 - 1 / 4)


class TestJaroWinkler:
    def test_martha(self):
        assert jaro_winkler_sim("MARTHA", "MARHTA") == pytest.approx(0.9611, abs=1e-4)

    def test_dixon(self):
        # standard textbook value: jaro 0.7667, prefix 2 -> 0.8133
        assert jaro_winkler_sim("DIXON", "DICKSONX") == pytest.approx(0.8133, abs=1e-4)

    def test_identity(self):
        assert jaro_winkler_sim("PROVIDENCE", "PROVIDENCE") == 1.0

    def test_disjoint(self):
        assert jaro_winkler_sim("ABC", "XYZ") == 0.0


@pytest.mark.parametrize("fn", [exact_sim, levenshtein_sim, jaro_winkler_sim])
class TestMatcherProperties:
    @given(text, text)
    def test_symmetric_and_bounded(self, fn, s, t):
        a, b = fn(s, t), fn(t, s)
        assert a == pytest.approx(b, abs=1e-12)
        assert 0.0 <= a <= 1.0

    @given(text)
    def test_identity(self, fn, s):
        assert fn(s, s) == 1.0


class TestScoreColumns:
    columns = [
        ColumnSpec("Facility Name", "Provider Name", Matcher.JARO_WINKLER, "Name"),
        ColumnSpec("Address", "Provider Street Address", Matcher.LEVENSHTEIN, "Address"),
        ColumnSpec("City", "Provider City", Matcher.EXACT, "City"),
    ]

    def test_reference_top_pair(self):
        left = {"Facility Name": "THE HOSPITALS OF PROVIDENCE MEMORIAL CAMPUS",
                "Address": "2001 N OREGON ST", "City": "EL PASO"}
        right = {"Provider Name": "PROVIDENCE MEMORIAL HOSPITAL",
                 "Provider Street Address": "2001 N OREGON ST", "Provider City": "EL PASO"}
        scores, missing = score_columns(left, right, self.columns)
        assert scores[1] == 1.0 and scores[2] == 1.0
        assert 0.0 < scores[0] < 1.0
        assert missing == []

    def test_identical_records(self):
        rec = {"a": "X", "b": "Y"}
        cols = [ColumnSpec("a", "a", Matcher.LEVENSHTEIN), ColumnSpec("b", "b", Matcher.JARO_WINKLER)]
        assert score_columns(rec, rec, cols)[0] == [1.0, 1.0]

    def test_both_empty(self):
        cols = [ColumnSpec("a", "a", Matcher.LEVENSHTEIN)]
        assert score_columns({"a": ""}, {"a": ""}, cols)[0] == [1.0]

    def test_missing_field_scores_zero_with_flag(self):
        cols = [ColumnSpec("a", "a", Matcher.EXACT, "A"), ColumnSpec("b", "b", Matcher.EXACT, "B")]
        scores, missing = score_columns({"a": "x", "b": None}, {"a": "x"}, cols)
        assert scores == [1.0, 0.0]
        assert missing == ["B"]


def test_matcher_parse():
    assert Matcher.parse("Jaro-Winkler") is Matcher.JARO_WINKLER
    with pytest.raises(ValueError):
        Matcher.parse("soundex")
