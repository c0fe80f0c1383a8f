"""Paths, dispersions, mode kernels, and correlation length."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinfid import (
    DegenerateModeError,
    DomainError,
    ExtIsingParams,
    ExtIsingPath,
    PathA,
    PathB,
    PathC,
    PathD,
    PoleError,
    XYParams,
    correlation_length_xy,
    fk_extising,
    fk_xy,
    gap_extising,
    gap_xy,
    kc_anisotropic,
    resolve_path,
)

finite_small = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)


class TestPaths:
    def test_path_a_one_state_critical(self):
        p1, p2 = resolve_path(PathA(gamma=1.0, delta=0.01, c=-1.0))
        assert p1 == XYParams(1.0, 1.0)
        assert p2 == XYParams(0.98, 1.0)

    def test_path_b_substitution(self):
        p1, p2 = resolve_path(PathB(g=0.5, delta=0.1, c=0.0))
        assert p1 == XYParams(0.5, 0.1)
        assert p2 == XYParams(0.5, -0.1)

    def test_path_c_pins_g(self):
        p1, p2 = resolve_path(PathC(delta=0.05, c=2.0))
        assert p1.g == p2.g == 1.0
        assert p1.gamma == pytest.approx(0.15)
        assert p2.gamma == pytest.approx(0.05)

    def test_path_d_corner_pair(self):
        p1, p2 = resolve_path(PathD(alpha=1.0, delta=1e-8, c=1.0))
        assert p1.g == pytest.approx(1.0 + 2e-8, abs=1e-15)
        assert p1.gamma == pytest.approx(2e-8, abs=1e-22)
        assert p2.g == pytest.approx(1.0, abs=1e-15)
        assert p2.gamma == 0.0

    def test_ext_ising_pair(self):
        p1, p2 = resolve_path(ExtIsingPath(delta=0.01, c=0.5))
        assert p1 == ExtIsingParams(0.015)
        assert p2 == ExtIsingParams(-0.005)

    def test_constraints(self):
        with pytest.raises(DomainError):
            PathA(gamma=1.0, delta=0.0, c=1.0)
        with pytest.raises(DomainError):
            PathB(g=1.0, delta=0.1, c=0.0)
        with pytest.raises(DomainError):
            PathD(alpha=1.0, delta=0.1, c=0.5)
        with pytest.raises(DomainError):
            PathD(alpha=-1.0, delta=0.1, c=2.0)


class TestGaps:
    def test_xy_zeros(self):
        assert gap_xy(0.0, XYParams(1.0, 0.7)) == 0.0
        assert gap_xy(math.pi, XYParams(-1.0, 0.3)) == pytest.approx(0.0, abs=1e-15)
        assert gap_xy(math.pi / 2.0, XYParams(0.0, 1.0)) == pytest.approx(2.0)

    def test_xy_closes_on_anisotropic_line(self):
        for g in (-0.9, -0.3, 0.0, 0.4, 0.99):
            kc = kc_anisotropic(g)
            assert gap_xy(kc, XYParams(g, 0.0)) == pytest.approx(0.0, abs=1e-12)

    def test_extising_values(self):
        assert gap_extising(0.0, ExtIsingParams(0.0)) == pytest.approx(0.0, abs=1e-15)
        assert gap_extising(0.0, ExtIsingParams(1.0)) == pytest.approx(8.0)

    def test_extising_small_k_expansion(self):
        exact = gap_extising(0.01, ExtIsingParams(0.01))
        approx = 8.0 * 0.01 ** 2 + 2.0 * 0.01 ** 2
        assert exact == pytest.approx(approx, rel=0.01)


class TestModeKernels:
    def test_equal_params_give_unity(self):
        k = np.linspace(0.05, math.pi - 0.05, 40)
        p = XYParams(0.7, 0.4)
        assert fk_xy(k, p, p) == pytest.approx(np.ones_like(k), abs=1e-14)
        assert fk_extising(k, 0.3, 0.3) == pytest.approx(np.ones_like(k), abs=1e-14)

    def test_hand_value_at_half_pi(self):
        got = fk_xy(math.pi / 2.0, XYParams(1.0, 1.0), XYParams(0.0, 1.0))
        assert got == pytest.approx(math.sqrt(0.5 + 0.5 / math.sqrt(2.0)), abs=1e-12)
        assert got == pytest.approx(0.9238795, abs=1e-7)

    def test_path_b_vanishes_at_gap_momentum(self):
        # opposite-side anisotropies pull f to zero at arccos(g)
        g, delta, c = 0.5, 0.01, 0.3
        p1, p2 = resolve_path(PathB(g=g, delta=delta, c=c))
        kc = kc_anisotropic(g)
        assert fk_xy(kc + 1e-9, p1, p2) < 1e-5

    def test_discontinuity_triple(self):
        delta, k = 1e-3, 1e-9
        f0 = fk_xy(k, *resolve_path(PathA(1.0, delta, 0.0)))
        f1 = fk_xy(k, *resolve_path(PathA(1.0, delta, 1.0)))
        f15 = fk_xy(k, *resolve_path(PathA(1.0, delta, 1.5)))
        assert f0 < 0.01
        assert abs(f1 - 1.0 / math.sqrt(2.0)) < 0.01
        assert f15 > 0.99

    @settings(max_examples=60, deadline=None)
    @given(finite_small, finite_small, finite_small, finite_small,
           st.floats(min_value=1e-3, max_value=math.pi - 1e-3))
    def test_symmetry_and_bounds(self, g1, gam1, g2, gam2, k):
        p1 = XYParams(g1, gam1)
        p2 = XYParams(g2, gam2)
        try:
            a = fk_xy(k, p1, p2)
            b = fk_xy(k, p2, p1)
        except DegenerateModeError:
            return
        assert a == b
        assert 0.0 <= a <= 1.0

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=-1.5, max_value=1.5, allow_nan=False),
           st.floats(min_value=-1.5, max_value=1.5, allow_nan=False),
           st.floats(min_value=1e-3, max_value=math.pi - 1e-3))
    def test_extising_bounds(self, g1, g2, k):
        try:
            f = fk_extising(k, g1, g2)
        except DegenerateModeError:
            return
        assert -1.0 <= f <= 1.0

    def test_extising_small_k_limits(self):
        delta = 0.01
        for c, want in ((0.5, -1.0), (1.0, 0.0), (1.5, 1.0)):
            p1, p2 = resolve_path(ExtIsingPath(delta=delta, c=c))
            got = fk_extising(1e-7, p1.g, p2.g)
            assert got == pytest.approx(want, abs=1e-2)

    def test_extising_zero_crossing_location(self):
        delta, c = 0.01, 0.5
        p1, p2 = resolve_path(ExtIsingPath(delta=delta, c=c))
        k0 = 2.0 * delta * math.sqrt(1.0 - c * c)
        lo = fk_extising(k0 * 0.98, p1.g, p2.g)
        hi = fk_extising(k0 * 1.02, p1.g, p2.g)
        assert lo < 0.0 < hi

    def test_degenerate_mode_raises(self):
        # field pinned to the bit-exact cosine of the probe momentum
        from spinfid import MomentumGrid
        k = MomentumGrid(4).modes
        g = float(np.cos(k)[1])
        p = XYParams(g, 0.0)
        with pytest.raises(DegenerateModeError):
            fk_xy(float(k[1]), p, p)


class TestKcAndXi:
    def test_kc_examples(self):
        assert kc_anisotropic(0.5) == pytest.approx(math.pi / 3.0)
        assert kc_anisotropic(1.0) == 0.0
        assert kc_anisotropic(0.0) == pytest.approx(math.pi / 2.0)
        with pytest.raises(DomainError):
            kc_anisotropic(1.5)

    def test_xi_diverges_at_critical_point(self):
        with pytest.raises(PoleError):
            correlation_length_xy(XYParams(1.0, 0.5))

    def test_xi_near_critical_matches_gamma_over_distance(self):
        xi = correlation_length_xy(XYParams(1.001, 1.0))
        assert 500.0 <= xi <= 2000.0  # within factor 2 of gamma/|g-1| = 1000

    def test_xi_direct_value(self):
        # evaluated away from criticality; 1/ln((2 - sqrt(3))^{-1})
        xi = correlation_length_xy(XYParams(2.0, 0.0))
        assert xi == pytest.approx(1.0 / math.log(1.0 / (2.0 - math.sqrt(3.0))), abs=1e-10)
        assert xi == pytest.approx(0.7595, abs=5e-4)

    def test_xi_grows_toward_critical(self):
        xs = [correlation_length_xy(XYParams(g, 1.0)) for g in (1.5, 1.2, 1.05, 1.01)]
        assert all(b > a for a, b in zip(xs, xs[1:]))
