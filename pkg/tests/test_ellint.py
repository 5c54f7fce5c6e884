"""Special-function kernel against its defining integrals and identities."""

import math

import numpy as np
import pytest

from halfelastica import ellint
from halfelastica.errors import DomainError, QuadratureError


def K_integrand(m):
    return lambda t: 1.0 / np.sqrt(1.0 - m * np.sin(t) ** 2)


def E_integrand(m):
    return lambda t: np.sqrt(1.0 - m * np.sin(t) ** 2)


def Pi_integrand(n, m):
    return lambda t: 1.0 / ((1.0 - n * np.sin(t) ** 2)
                            * np.sqrt(1.0 - m * np.sin(t) ** 2))


class TestCompleteK:
    def test_zero_parameter(self):
        assert ellint.complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_logarithmic_regime(self):
        m = 1.0 - 1e-8
        assert ellint.complete_K(m) == pytest.approx(
            math.log(4.0 / math.sqrt(1.0 - m)), rel=1e-3)

    def test_against_quadrature(self):
        ref = ellint.quad_oracle(K_integrand(0.5), 0.0, math.pi / 2, 1e-13)
        assert ellint.complete_K(0.5) == pytest.approx(ref, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            ellint.complete_K(-0.1)
        with pytest.raises(DomainError):
            ellint.complete_K(1.0)

    def test_monotone_in_m(self):
        vals = [ellint.complete_K(m) for m in np.linspace(0.0, 0.95, 40)]
        assert np.all(np.diff(vals) > 0)


class TestCompleteE:
    def test_endpoints(self):
        assert ellint.complete_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
        assert ellint.complete_E(1.0) == 1.0

    def test_legendre_relation(self):
        m = 0.3
        k, kp = ellint.complete_K(m), ellint.complete_K(1.0 - m)
        e, ep = ellint.complete_E(m), ellint.complete_E(1.0 - m)
        assert e * kp + ep * k - k * kp == pytest.approx(math.pi / 2, abs=1e-11)

    def test_below_K(self):
        for m in np.linspace(0.01, 0.99, 25):
            assert ellint.complete_E(m) < ellint.complete_K(m)


class TestCompletePi:
    def test_zero_characteristic(self):
        assert ellint.complete_Pi(0.0, 0.4) == pytest.approx(
            ellint.complete_K(0.4), rel=1e-14)

    def test_large_negative_characteristic(self):
        n = -1e6
        assert ellint.complete_Pi(n, 0.5) == pytest.approx(
            math.pi / (2.0 * math.sqrt(1.0 - n)), rel=1e-2)

    def test_against_quadrature(self):
        ref = ellint.quad_oracle(Pi_integrand(-0.5, 0.3), 0.0, math.pi / 2, 1e-13)
        assert ellint.complete_Pi(-0.5, 0.3) == pytest.approx(ref, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            ellint.complete_Pi(1.0, 0.5)
        with pytest.raises(DomainError):
            ellint.complete_Pi(0.5, 1.5)


class TestIncompletePi:
    def test_zero_amplitude(self):
        assert ellint.incomplete_Pi(-0.3, 0.0, 0.2) == 0.0

    def test_complete_reduction(self):
        assert ellint.incomplete_Pi(-0.3, math.pi / 2, 0.2) == pytest.approx(
            ellint.complete_Pi(-0.3, 0.2), rel=1e-14)

    def test_against_quadrature(self):
        ref = ellint.quad_oracle(Pi_integrand(-0.4, 0.2), 0.0, 1.0, 1e-13)
        assert ellint.incomplete_Pi(-0.4, 1.0, 0.2) == pytest.approx(ref, rel=1e-12)


class TestJacobi:
    def test_sn_at_zero(self):
        for m in (0.0, 0.3, 0.9):
            assert ellint.jacobi_sn(0.0, m) == 0.0

    def test_degenerate_parameter(self):
        for u in (0.2, 0.9, 1.4):
            assert ellint.jacobi_sn(u, 0.0) == pytest.approx(math.sin(u), abs=1e-15)

    def test_inverse_roundtrip(self):
        u = 0.7
        x = ellint.jacobi_sn(u, 0.3)
        assert ellint.inverse_sn(x, 0.3) == pytest.approx(u, abs=1e-12)

    def test_inverse_endpoints(self):
        assert ellint.inverse_sn(0.0, 0.4) == 0.0
        assert ellint.inverse_sn(1.0, 0.4) == pytest.approx(
            ellint.complete_K(0.4), rel=1e-14)

    def test_inverse_domain(self):
        with pytest.raises(DomainError):
            ellint.inverse_sn(1.2, 0.4)

    def test_amplitude_defines_sn(self):
        for u in np.linspace(0.0, 1.5, 7):
            am = ellint.jacobi_am(u, 0.6)
            assert ellint.jacobi_sn(u, 0.6) == pytest.approx(math.sin(am), abs=1e-15)


class TestQuadOracle:
    def test_constant(self):
        assert ellint.quad_oracle(lambda x: np.ones_like(x), 0.0, 1.0,
                                  1e-13) == pytest.approx(1.0, abs=1e-14)

    def test_arcsine(self):
        # inverse-square-root weight at the right endpoint
        val = ellint.quad_oracle(lambda x: 1.0 / np.sqrt(1.0 + x), 0.0, 1.0,
                                 1e-12, singular=(0.0, -0.5))
        assert val == pytest.approx(math.pi / 2, abs=1e-12)

    def test_double_singular_beta(self):
        val = ellint.quad_oracle(lambda x: np.ones_like(x), 0.0, 1.0, 1e-12,
                                 singular=(-0.5, -0.5))
        assert val == pytest.approx(math.pi, abs=1e-12)

    def test_naive_singular_integrand(self):
        # plain-integrand path on a singular function: the endpoint distances
        # are recomputed by subtraction inside f, which caps the accuracy
        # near 1e-8; the weighted path above is the full-precision route
        with np.errstate(divide="ignore"):
            val = ellint.quad_oracle(lambda x: 1.0 / np.sqrt(1.0 - x * x),
                                     0.0, 1.0, 1e-9)
        assert val == pytest.approx(math.pi / 2, abs=1e-7)

    def test_nonconvergence_reports(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(QuadratureError) as info:
                ellint.quad_oracle(lambda x: np.sin(1.0 / x) / x, 0.0, 1.0,
                                   1e-14)
        assert info.value.achieved is not None


def test_random_grid_against_oracle(rng):
    """Every closed form agrees with the quadrature oracle on a random grid
    of admissible (n, m, phi) tuples."""
    worst = 0.0
    for _ in range(100):
        m = rng.uniform(0.0, 0.95)
        n = rng.uniform(-5.0, 0.9)
        phi = rng.uniform(0.05, math.pi / 2)
        ref_k = ellint.quad_oracle(K_integrand(m), 0.0, math.pi / 2, 1e-13)
        ref_e = ellint.quad_oracle(E_integrand(m), 0.0, math.pi / 2, 1e-13)
        ref_p = ellint.quad_oracle(Pi_integrand(n, m), 0.0, math.pi / 2, 1e-13)
        ref_ip = ellint.quad_oracle(Pi_integrand(n, m), 0.0, phi, 1e-13)
        worst = max(
            worst,
            abs(ellint.complete_K(m) - ref_k) / abs(ref_k),
            abs(ellint.complete_E(m) - ref_e) / abs(ref_e),
            abs(ellint.complete_Pi(n, m) - ref_p) / abs(ref_p),
            abs(ellint.incomplete_Pi(n, phi, m) - ref_ip) / abs(ref_ip),
        )
    assert worst <= 1e-11
