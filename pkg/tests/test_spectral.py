"""Spectral roots, reflection matrices, and physical-point recovery."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heun_rsj import spectral
from heun_rsj.errors import (
    IndexOutOfRange,
    InvalidParams,
    NonPositiveDiscriminant,
)
from heun_rsj.heun_poly import coefficient_matrix, det_scale, spectral_det
from heun_rsj.model import DcheParams
from heun_rsj.spectral import (
    DISC_MARGIN,
    SpectralSet,
    check_factorization,
    lambda_spectrum,
    physical_point,
    spectral_condition,
    symmetry_matrix,
)


def _eigen_oracle(n: int, mu: float) -> np.ndarray:
    """Roots of the determinant via LAPACK on the companion of the system.

    The coefficient matrix is lambda*I + C with C independent of lambda, so
    the determinant's roots are exactly the eigenvalues of -C.  This route
    shares no code with the recurrence-plus-Newton implementation.
    """
    c = coefficient_matrix(DcheParams(n=n, mu=mu, lam=0.0)).dense()
    return np.linalg.eigvals(-c)


class TestSpectrum:
    def test_container(self):
        spectrum = lambda_spectrum(2, 1.0)
        assert isinstance(spectrum, SpectralSet)
        assert spectrum.n == 2 and spectrum.mu == 1.0
        assert len(spectrum.lambdas) == 3
        assert list(spectrum.lambdas) == sorted(spectrum.lambdas)

    @pytest.mark.parametrize("mu", [0.1, 0.5, 1.0, 2.0])
    def test_degree_one_closed_form(self, mu):
        root_hi = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * mu**2))
        root_lo = 0.5 * (1.0 - math.sqrt(1.0 + 4.0 * mu**2))
        lams = lambda_spectrum(1, mu).lambdas
        assert lams[0] == pytest.approx(root_lo, abs=1e-12)
        assert lams[1] == pytest.approx(root_hi, abs=1e-12)

    @pytest.mark.parametrize("n", range(11))
    def test_degenerate_spectrum_at_zero_mu(self, n):
        expected = sorted(j * (n + 1 - j) for j in range(n + 1))
        lams = lambda_spectrum(n, 0.0).lambdas
        assert len(lams) == n + 1
        for got, want in zip(lams, expected):
            assert got == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 10])
    @pytest.mark.parametrize("mu", [0.25, 1.0, 2.5, -1.5])
    def test_matches_eigenvalue_oracle(self, n, mu):
        eigs = _eigen_oracle(n, mu)
        scale = float(np.max(np.abs(eigs))) + 1.0
        assert np.max(np.abs(eigs.imag)) <= 1e-8 * scale
        lams = np.asarray(lambda_spectrum(n, mu).lambdas)
        np.testing.assert_allclose(
            lams, np.sort(eigs.real), atol=1e-8 * scale, rtol=0.0
        )

    @given(
        n=st.integers(min_value=0, max_value=16),
        mu=st.floats(min_value=-5.0, max_value=5.0),
    )
    @settings(max_examples=60, deadline=None)
    def test_trace_identity(self, n, mu):
        lams = lambda_spectrum(n, mu).lambdas
        assert len(lams) == n + 1
        trace = n * (n + 1) * (n + 2) / 6.0
        assert math.fsum(lams) == pytest.approx(
            trace, rel=1e-9, abs=1e-9 * (1.0 + abs(trace))
        )

    @given(mu=st.floats(min_value=0.1, max_value=3.0))
    @settings(max_examples=60, deadline=None)
    def test_product_identity_degree_three(self, mu):
        # The determinant is monic of degree 4 in lam, so its value at
        # lam = 0 equals the plain product of the roots, and a hand
        # expansion gives Delta_3(0, mu) = 9 mu^4 - 36 mu^2.
        lams = lambda_spectrum(3, mu).lambdas
        product = math.prod(lams)
        assert product == pytest.approx(
            9.0 * mu**4 - 36.0 * mu**2, rel=1e-9, abs=1e-9
        )

    @pytest.mark.parametrize("n,mu", [(2, 0.7), (5, 1.3), (9, 3.1)])
    def test_even_in_mu(self, n, mu):
        plus = lambda_spectrum(n, mu).lambdas
        minus = lambda_spectrum(n, -mu).lambdas
        np.testing.assert_allclose(plus, minus, rtol=1e-13, atol=1e-13)

    def test_deterministic(self):
        a = lambda_spectrum(7, 1.7).lambdas
        b = lambda_spectrum(7, 1.7).lambdas
        assert a == b

    def test_frozen_case(self):
        # Spectrum at (n, mu) = (3, 2); the middle root is exactly zero
        # because 9 mu^4 = 36 mu^2 there.
        lams = lambda_spectrum(3, 2.0).lambdas
        expected = [
            -3.4093460986882986,
            0.0,
            4.2075669460562528,
            9.2017791526320458,
        ]
        assert abs(lams[1]) <= 1e-13
        assert lams[0] == pytest.approx(expected[0], rel=1e-12)
        assert lams[2] == pytest.approx(expected[2], rel=1e-12)
        assert lams[3] == pytest.approx(expected[3], rel=1e-12)

    @pytest.mark.parametrize("n", [1, 4, 9, 14, 20])
    @pytest.mark.parametrize("mu", [0.25, 1.0, 3.0, -2.0, 5.0])
    def test_roots_zero_the_determinant(self, n, mu):
        # At large n the determinant is so steep near its roots that its
        # value changes by a sizeable fraction of det_scale between
        # adjacent doubles, so the summand scale alone is not a usable
        # yardstick.  Fold in |lam * Delta'| (finite differences): the
        # bound then certifies each root to ~1e-9 relative accuracy.
        for lam in lambda_spectrum(n, mu).lambdas:
            d = DcheParams(n=n, mu=mu, lam=lam)
            h = 1e-6 * max(1.0, abs(lam))
            slope = (
                spectral_det(DcheParams(n=n, mu=mu, lam=lam + h))
                - spectral_det(DcheParams(n=n, mu=mu, lam=lam - h))
            ) / (2.0 * h)
            scale = max(det_scale(d), abs(lam * slope), abs(h * slope))
            assert abs(spectral_det(d)) <= 1e-9 * scale


class TestSymmetryMatrices:
    def test_hand_entries_degree_zero(self):
        d = DcheParams(n=0, mu=0.8, lam=0.5)
        c = math.sqrt(0.5 + 0.64)
        np.testing.assert_allclose(
            symmetry_matrix(1, d).entries, [[c + 0.8]], rtol=1e-15
        )
        np.testing.assert_allclose(
            symmetry_matrix(-1, d).entries, [[-c + 0.8]], rtol=1e-15
        )

    def test_hand_entries_degree_one(self):
        d = DcheParams(n=1, mu=0.8, lam=0.9)
        c = math.sqrt(0.9 + 0.64)
        np.testing.assert_allclose(
            symmetry_matrix(1, d).entries,
            [[c, 0.8], [0.8, c - 1.0]],
            rtol=1e-15,
        )

    def test_epsilon_validated(self):
        d = DcheParams(n=1, mu=0.8, lam=0.9)
        with pytest.raises(InvalidParams):
            symmetry_matrix(0, d)

    def test_needs_positive_discriminant(self):
        with pytest.raises(NonPositiveDiscriminant):
            symmetry_matrix(1, DcheParams(n=1, mu=0.5, lam=-0.25))

    def test_factorization_hand_case_degree_one(self):
        # G+ G- = [[-lam, -mu], [-mu, 1-lam]] = -(transposed system matrix),
        # exactly, for any positive discriminant.
        d = DcheParams(n=1, mu=0.8, lam=0.9)
        gp = symmetry_matrix(1, d).entries
        gm = symmetry_matrix(-1, d).entries
        phi_t = coefficient_matrix(d).dense().T
        np.testing.assert_allclose(gp @ gm, -phi_t, atol=1e-14)

    @pytest.mark.parametrize("n", [1, 2, 4, 7, 10])
    @pytest.mark.parametrize("lam,mu", [(0.73, 1.1), (2.4, 0.6), (5.9, 2.3)])
    def test_factorization_generic(self, n, lam, mu):
        d = DcheParams(n=n, mu=mu, lam=lam)
        dev, sign = check_factorization(d)
        gp = symmetry_matrix(1, d).entries
        gm = symmetry_matrix(-1, d).entries
        scale = max(1.0, float(np.max(np.abs(gp @ gm))))
        assert sign == -1
        assert dev <= 1e-12 * scale

    def test_condition_splits_determinant(self):
        d = DcheParams(n=3, mu=1.2, lam=1.9)
        det_p, det_m = spectral_condition(d)
        assert abs(det_p * det_m) == pytest.approx(
            abs(spectral_det(d)), rel=1e-10
        )

    def test_one_factor_vanishes_at_root(self):
        n, mu = 3, 1.0
        for lam in lambda_spectrum(n, mu).lambdas:
            d = DcheParams(n=n, mu=mu, lam=lam)
            if d.lam + mu**2 <= DISC_MARGIN:
                continue
            det_p, det_m = spectral_condition(d)
            assert min(abs(det_p), abs(det_m)) <= 1e-10 * det_scale(d)


class TestPhysicalPoint:
    def test_frozen_case(self):
        p, d = physical_point(3, 2.0, 1)
        assert abs(d.lam) <= 1e-13
        assert p.omega == pytest.approx(0.25, rel=1e-14)
        assert p.A == pytest.approx(1.0, rel=1e-14)
        assert p.B == pytest.approx(-1.0, rel=1e-14)

    @pytest.mark.parametrize("n,mu", [(1, 0.5), (2, 1.0), (4, 2.0)])
    def test_recovery_invariants(self, n, mu):
        for index, lam in enumerate(lambda_spectrum(n, mu).lambdas):
            if lam + mu**2 <= 0:
                continue
            p, d = physical_point(n, mu, index)
            assert d == DcheParams(n=n, mu=mu, lam=lam)
            assert p.omega > 0
            assert p.B == -(n + 1) * p.omega
            assert 4.0 * p.omega**2 * (lam + mu**2) == pytest.approx(
                1.0, rel=1e-14
            )

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            physical_point(1, 1.0, 5)


def test_disc_margin_value():
    assert DISC_MARGIN == 1e-9
