import math

import mpmath
import numpy as np
import pytest

from ws_spectra.potential import (
    DIMENSIONLESS,
    NUCLEAR,
    UnitSystem,
    WoodsSaxonParams,
    centrifugal_approx,
    centrifugal_deviation,
    centrifugal_exact,
    effective_potential_approx,
    effective_potential_exact,
    pekeris_coefficients,
    shape_coefficients,
    taylor_residuals,
    woods_saxon,
)

BENCH = WoodsSaxonParams(50.0, 7.0, 0.6)
FIG = WoodsSaxonParams(43.1, 3.44731, 0.67)


def fitted_coefficients(t):
    """Solve the 3x3 system matching value and two derivatives at s = 0."""
    with mpmath.workdps(30):
        f = lambda s: 1 / (1 + mpmath.exp(t * s))
        basis = [lambda s: mpmath.mpf(1), f, lambda s: f(s) ** 2]
        M = mpmath.matrix([[mpmath.diff(b, 0, k) for b in basis] for k in range(3)])
        target = mpmath.matrix([mpmath.diff(lambda s: (1 + s) ** -2, 0, k) for k in range(3)])
        return [float(c) for c in mpmath.lu_solve(M, target)]


class TestUnits:
    def test_presets(self):
        assert NUCLEAR.hbar_c == 197.3269804
        assert NUCLEAR.amu_to_energy == 931.49410242
        assert DIMENSIONLESS.kinetic(1.0) == 1.0

    def test_nuclear_kinetic_scale(self):
        # hbar^2 / 2 m_proton in MeV fm^2
        assert NUCLEAR.kinetic(1.007825) == pytest.approx(20.7395, abs=1e-3)

    def test_delta_is_inverse_hbar_c(self):
        assert NUCLEAR.delta * NUCLEAR.hbar_c == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("field", ["hbar_c", "amu_to_energy", "hbar2_over_2m0"])
    def test_rejects_nonpositive(self, field):
        kw = dict(name="x", hbar_c=1.0, amu_to_energy=1.0, hbar2_over_2m0=1.0)
        kw[field] = 0.0
        with pytest.raises(ValueError):
            UnitSystem(**kw)


class TestParams:
    def test_beta_times_a_is_one(self):
        assert BENCH.beta * BENCH.a == 1.0

    @pytest.mark.parametrize("bad", [(0, 1, 1), (1, -1, 1), (1, 1, 0)])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            WoodsSaxonParams(*bad)


class TestWoodsSaxon:
    def test_half_depth_at_radius(self):
        assert woods_saxon(7.0, BENCH) == -25.0

    def test_scalar_value_matches_high_precision(self):
        expected = float(-50 / (1 + mpmath.e))
        assert woods_saxon(7.6, BENCH) == pytest.approx(expected, rel=1e-14)
        assert woods_saxon(7.6, BENCH) == pytest.approx(-13.4471, abs=5e-5)

    def test_tail_vanishes(self):
        r = BENCH.r0 + 31 * BENCH.a
        v = woods_saxon(r, BENCH)
        assert v < 0 and abs(v) < 1e-12 * BENCH.V0
        assert woods_saxon(1e6, BENCH) == 0.0

    def test_monotone_and_bounded(self):
        r = np.linspace(0, 30, 3001)
        v = woods_saxon(r, BENCH)
        assert np.all(np.diff(v) >= 0)
        assert np.all(v > -BENCH.V0) and np.all(v <= 0)


class TestCoefficients:
    def test_t_equal_two(self):
        assert shape_coefficients(2.0) == pytest.approx((2.0, -8.0, 12.0), rel=1e-14)

    @pytest.mark.parametrize("t", [2.0, 7 / 0.6, 25.0])
    def test_against_fitted_oracle(self, t):
        assert shape_coefficients(t) == pytest.approx(fitted_coefficients(t), rel=1e-10)

    def test_benchmark_geometry(self):
        d0, d1, d2 = shape_coefficients(7 / 0.6)
        assert d0 == pytest.approx(0.745306, abs=1e-6)
        assert d1 == pytest.approx(0.333061, abs=1e-6)
        assert d2 == pytest.approx(0.352653, abs=1e-6)

    def test_large_t_limit(self):
        assert shape_coefficients(1e12) == pytest.approx((1.0, 0.0, 0.0), abs=1e-11)

    @pytest.mark.parametrize("t", np.geomspace(0.1, 1e4, 41))
    def test_value_identity(self, t):
        d0, d1, d2 = shape_coefficients(t)
        assert d0 + d1 / 2 + d2 / 4 - 1 == pytest.approx(0, abs=1e-14 * max(abs(d0), abs(d1), abs(d2)))

    def test_scale(self):
        pc = pekeris_coefficients(2, BENCH)
        assert pc.D == pytest.approx(6 / 49, rel=1e-15)
        assert pc.D2 > 0
        assert pekeris_coefficients(0, BENCH).D == 0.0

    def test_rejects_negative_l(self):
        with pytest.raises(ValueError):
            pekeris_coefficients(-1, BENCH)


class TestEffectivePotentials:
    def test_swave_identical(self):
        r = np.linspace(0.01, 20, 500)
        np.testing.assert_array_equal(effective_potential_exact(r, 0, BENCH), woods_saxon(r, BENCH))
        np.testing.assert_array_equal(effective_potential_approx(r, 0, BENCH), woods_saxon(r, BENCH))

    def test_value_at_radius(self):
        D = pekeris_coefficients(3, BENCH).D
        assert effective_potential_approx(7.0, 3, BENCH) == pytest.approx(-25.0 + D, rel=1e-14)

    def test_exact_rejects_origin(self):
        with pytest.raises(ValueError):
            effective_potential_exact(0.0, 1, BENCH)
        with pytest.raises(ValueError):
            centrifugal_exact(np.array([1.0, -1.0]), 1, BENCH, 1.0, DIMENSIONLESS)

    def test_exact_diverges_at_origin(self):
        assert effective_potential_exact(1e-8, 1, BENCH) > 1e15

    def test_approx_finite_at_origin(self):
        assert math.isfinite(effective_potential_approx(0.0, 5, BENCH))

    @pytest.mark.parametrize("fn", [effective_potential_exact, effective_potential_approx])
    def test_nondecreasing_in_l(self, fn):
        r = np.linspace(0.05, 25, 400)
        prev = fn(r, 0, BENCH)
        for l in range(1, 8):
            cur = fn(r, l, BENCH)
            assert np.all(cur >= prev)
            prev = cur


class TestSurrogateFidelity:
    @pytest.mark.parametrize("t", [1.0, 2.0, 5.0, 10.0, 7 / 0.6, 30.0, 100.0])
    def test_taylor_matching(self, t):
        assert max(taylor_residuals(t)) < 1e-8

    def test_deviation_is_l_independent(self):
        assert centrifugal_deviation(1, BENCH) == pytest.approx(centrifugal_deviation(2, BENCH), rel=1e-12)
        assert centrifugal_deviation(0, BENCH) == 0.0

    def test_deviation_scan_value(self):
        # dense direct comparison, independent of the helper's sampling
        x = np.linspace(-0.25, 0.25, 200001) * BENCH.r0
        r = BENCH.r0 + x
        ex = centrifugal_exact(r, 1, BENCH, 1.0, DIMENSIONLESS)
        ap = centrifugal_approx(r, 1, BENCH, 1.0, DIMENSIONLESS)
        worst = float(np.max(np.abs(ap - ex) / ex))
        assert centrifugal_deviation(1, BENCH) == pytest.approx(worst, rel=1e-6)
        assert worst == pytest.approx(0.2245125, abs=1e-6)

    def test_deviation_small_near_radius(self):
        assert centrifugal_deviation(1, BENCH, max_rel_x=0.05) < 0.01
