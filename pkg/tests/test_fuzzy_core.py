import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzylink.fuzzy_core import (
    TFN,
    Interval,
    ShoulderKind,
    alpha_cut,
    centroid_defuzzify,
    membership,
    normalize,
)

unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def tfns(draw, lo=-5.0, hi=5.0):
    xs = sorted(draw(st.lists(st.floats(lo, hi, allow_nan=False), min_size=3, max_size=3)))
    return TFN(*xs)


class TestTriangularFuzzyNumber:
    def test_rejects_unordered_vertices(self):
        with pytest.raises(ValueError):
            TFN(0.5, 0.2, 1.0)

    def test_degenerate_shapes_are_valid(self):
        TFN(0.0, 0.0, 1.0)
        TFN(0.0, 1.0, 1.0)
        TFN(0.3, 0.3, 0.3)

    def test_shoulder_requires_matching_vertices(self):
        with pytest.raises(ValueError):
            membership(TFN(0, 0.5, 1), ShoulderKind.RIGHT, 0.7)
        with pytest.raises(ValueError):
            membership(TFN(0, 0.5, 1), ShoulderKind.LEFT, 0.7)


class TestMembership:
    tri = TFN(0.0, 0.5, 1.0)

    def test_mode_is_kernel(self):
        assert membership(self.tri, ShoulderKind.NONE, 0.5) == 1.0

    def test_rising_edge(self):
        # (x - a) / (b - a) = 0.25 / 0.5
        assert membership(self.tri, ShoulderKind.NONE, 0.25) == pytest.approx(0.5)

    def test_falling_edge(self):
        assert membership(self.tri, ShoulderKind.NONE, 0.9) == pytest.approx(0.2)

    def test_outside_support(self):
        assert membership(self.tri, ShoulderKind.NONE, 1.2) == 0.0
        assert membership(self.tri, ShoulderKind.NONE, -0.1) == 0.0

    def test_right_shoulder_plateau(self):
        high = TFN(0.5, 1.0, 1.0)
        assert membership(high, ShoulderKind.RIGHT, 1.0) == 1.0
        assert membership(high, ShoulderKind.RIGHT, 1.7) == 1.0
        assert membership(high, ShoulderKind.RIGHT, 0.75) == pytest.approx(0.5)
        # below the support the rising edge still applies
        assert membership(high, ShoulderKind.RIGHT, 0.2) == 0.0

    def test_left_shoulder_plateau(self):
        low = TFN(0.0, 0.0, 0.5)
        assert membership(low, ShoulderKind.LEFT, -3.0) == 1.0
        assert membership(low, ShoulderKind.LEFT, 0.25) == pytest.approx(0.5)
        assert membership(low, ShoulderKind.LEFT, 0.6) == 0.0

    def test_vectorized(self):
        xs = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(membership(self.tri, ShoulderKind.NONE, xs), [0, 0.5, 1, 0.5, 0])

    @given(tfns(), st.floats(-10, 10, allow_nan=False))
    def test_range_and_kernel(self, t, x):
        for shoulder in (ShoulderKind.NONE,):
            mu = membership(t, shoulder, x)
            assert 0.0 <= mu <= 1.0
            assert membership(t, shoulder, t.b) == 1.0


class TestAlphaCut:
    t = TFN(0.1, 0.16, 0.33)

    def test_kernel(self):
        assert alpha_cut(self.t, 1.0) == Interval(0.16, 0.16)

    def test_support(self):
        assert alpha_cut(self.t, 0.0) == Interval(0.1, 0.33)

    def test_half(self):
        cut = alpha_cut(self.t, 0.5)
        assert cut.lo == pytest.approx(0.13)
        assert cut.hi == pytest.approx(0.245)

    @pytest.mark.parametrize("alpha", [-0.1, 1.01])
    def test_rejects_alpha_out_of_range(self, alpha):
        with pytest.raises(ValueError):
            alpha_cut(self.t, alpha)

    @given(tfns(), unit, unit)
    def test_nesting(self, t, a1, a2):
        a1, a2 = sorted((a1, a2))
        assert alpha_cut(t, a1).contains(alpha_cut(t, a2))

    @given(tfns())
    def test_endpoints_exact(self, t):
        assert alpha_cut(t, 0.0) == Interval(t.a, t.c)
        assert alpha_cut(t, 1.0) == Interval(t.b, t.b)


class TestDefuzzify:
    @pytest.mark.parametrize(
        "t, expected",
        [
            (TFN(0, 0.5, 1), 0.5),
            (TFN(0.15, 0.3, 0.6), 0.35),
            (TFN(0.1, 0.16, 0.33), 0.59 / 3),
        ],
    )
    def test_vertex_mean(self, t, expected):
        assert centroid_defuzzify(t) == pytest.approx(expected, abs=1e-12)

    def test_matches_area_centroid(self):
        # independent check: numerical centroid of the triangle's area
        t = TFN(0.15, 0.3, 0.6)
        xs = np.linspace(0.15, 0.6, 200001)
        mu = membership(t, ShoulderKind.NONE, xs)
        assert float((xs * mu).sum() / mu.sum()) == pytest.approx(centroid_defuzzify(t), abs=1e-6)

    @given(tfns())
    def test_within_support(self, t):
        assert t.a - 1e-9 <= centroid_defuzzify(t) <= t.c + 1e-9


class TestNormalize:
    def test_reference_weights(self):
        out = normalize([0.1967, 0.35, 0.5933])
        for got, want in zip(out, (0.17, 0.31, 0.52)):
            assert got == pytest.approx(want, abs=0.005)

    def test_uniform(self):
        assert normalize([1, 1, 1]) == pytest.approx([1 / 3] * 3)

    def test_single_mass(self):
        assert normalize([2, 0, 0]) == [1.0, 0.0, 0.0]

    def test_all_zero_rejected(self):
        with pytest.raises(ValueError):
            normalize([0, 0])

    @given(st.lists(st.floats(0, 1e3, allow_nan=False), min_size=1, max_size=10).filter(lambda v: sum(v) > 1e-6))
    @settings(max_examples=200)
    def test_sums_to_one_and_keeps_argmax(self, values):
        out = normalize(values)
        assert math.fsum(out) == pytest.approx(1.0, abs=1e-12)
        assert out[int(np.argmax(values))] == max(out)
