import math

import numpy as np
import pytest
from hypothesis import given, settings

from bellopt import (
    BellSettings,
    NotSymmetric,
    ObservableDirection,
    Region,
    TSIRELSON,
    bell_function,
    bmax_x,
    correlation,
    horodecki_bmax,
    settings_set2,
    sym3_eigenvalues,
    validate_density_matrix,
    x_state_eigenvalues,
    x_to_dense,
)
from conftest import random_density, random_x_state, werner, x_states

Z_UP = ObservableDirection(0.0, 0.0)


def all_z_settings():
    return BellSettings(Z_UP, Z_UP, Z_UP, Z_UP)


def random_settings(rng):
    def d():
        return ObservableDirection(rng.uniform(0, math.pi),
                                   rng.uniform(-math.pi, math.pi))
    return BellSettings(d(), d(), d(), d())


class TestCorrelation:
    def test_maximally_mixed_vanishes(self, mixed_rho):
        rng = np.random.default_rng(0)
        for _ in range(10):
            s = random_settings(rng)
            assert correlation(mixed_rho, s.a, s.b) == pytest.approx(0.0, abs=1e-14)

    def test_bell_state_antidiagonal_zz(self, bell_rho):
        # one up, one down: perfectly anti-correlated along z
        assert correlation(bell_rho, Z_UP, Z_UP) == pytest.approx(-1.0, abs=1e-14)

    def test_product_state_zz(self):
        rho = validate_density_matrix(np.diag([1.0, 0.0, 0.0, 0.0]))
        assert correlation(rho, Z_UP, Z_UP) == pytest.approx(1.0, abs=1e-14)


class TestBellFunction:
    def test_maximally_mixed_vanishes(self, mixed_rho):
        rng = np.random.default_rng(1)
        for _ in range(10):
            assert bell_function(mixed_rho, random_settings(rng)) <= 1e-14

    def test_bell_state_at_optimal_equatorial_settings(self, bell_rho, bell_x):
        assert bell_function(bell_rho, settings_set2(bell_x).bell_settings()) \
            == pytest.approx(TSIRELSON, abs=1e-12)

    def test_classical_saturation_all_z(self):
        rho = validate_density_matrix(np.diag([1.0, 0.0, 0.0, 0.0]))
        assert bell_function(rho, all_z_settings()) == pytest.approx(2.0, abs=1e-14)


class TestXStateEigenvalues:
    def test_bell_state(self, bell_x):
        u = x_state_eigenvalues(bell_x)
        assert (u.u1, u.u2, u.u3) == (1.0, 1.0, 1.0)
        assert u.tie and u.region is Region.SET1

    @pytest.mark.parametrize("r", [0.2, 0.5, 0.8, 1.0])
    def test_werner_triple(self, r):
        u = x_state_eigenvalues(werner(r))
        assert u.u1 == pytest.approx(r * r, abs=1e-15)
        assert u.u2 == pytest.approx(r * r, abs=1e-15)
        assert u.u3 == pytest.approx(r * r, abs=1e-15)

    def test_worked_example(self):
        from bellopt import XState

        u = x_state_eigenvalues(XState(0.3, 0.2, 0.2, 0.3, 0.25, 0.1))
        assert u.u1 == pytest.approx(0.49, abs=1e-15)
        assert u.u2 == pytest.approx(0.04, abs=1e-15)
        assert u.u3 == pytest.approx(0.09, abs=1e-15)
        assert u.region is Region.SET2 and not u.tie

    @settings(max_examples=100)
    @given(x_states())
    def test_u1_dominates_u3(self, x):
        u = x_state_eigenvalues(x)
        assert u.u1 >= u.u3


class TestBmaxX:
    def test_bell_state(self, bell_x):
        assert bmax_x(bell_x) == pytest.approx(TSIRELSON, abs=1e-15)

    @pytest.mark.parametrize("r", [0.1 * k for k in range(1, 11)])
    def test_werner_scaling(self, r):
        assert bmax_x(werner(r)) == pytest.approx(TSIRELSON * r, abs=1e-12)

    def test_werner_boundary(self):
        assert bmax_x(werner(1.0 / math.sqrt(2.0))) == pytest.approx(2.0, abs=1e-12)

    def test_pure_bell_like_formula(self):
        from bellopt import XState

        rng = np.random.default_rng(10)
        for _ in range(50):
            a2 = rng.uniform(0.01, 0.99)
            ab = math.sqrt(a2 * (1 - a2))
            x = XState(0.0, 1 - a2, a2, 0.0, 0.0, ab)
            assert bmax_x(x) == pytest.approx(
                2.0 * math.sqrt(1.0 + 4.0 * a2 * (1 - a2)), abs=1e-12)

    @settings(max_examples=100)
    @given(x_states())
    def test_phase_invariance(self, x):
        from bellopt import XState

        rotated = XState(x.rho11, x.rho22, x.rho33, x.rho44,
                         abs(x.rho14) * np.exp(0.73j),
                         abs(x.rho23) * np.exp(-2.11j))
        assert bmax_x(rotated) == pytest.approx(bmax_x(x), abs=1e-12)


class TestSym3Eigenvalues:
    def test_identity(self):
        assert sym3_eigenvalues(np.eye(3)) == (1.0, 1.0, 1.0)

    def test_diagonal(self):
        assert sym3_eigenvalues(np.diag([4.0, 1.0, 0.0])) == (4.0, 1.0, 0.0)

    def test_construct_then_recover(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            lam = np.sort(rng.uniform(-2, 2, 3))[::-1]
            q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            u = q @ np.diag(lam) @ q.T
            got = sym3_eigenvalues(0.5 * (u + u.T))
            assert np.allclose(got, lam, atol=1e-9)

    def test_near_degenerate_spectra(self):
        rng = np.random.default_rng(4)
        for gap in (1e-5, 1e-8, 1e-12, 0.0):
            lam = np.array([1.0, 1.0 - gap, 0.3])
            q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
            u = q @ np.diag(lam) @ q.T
            got = sym3_eigenvalues(0.5 * (u + u.T))
            assert np.allclose(got, lam, atol=1e-10)

    def test_rejects_asymmetric(self):
        m = np.eye(3)
        m[0, 1] = 1e-3
        with pytest.raises(NotSymmetric):
            sym3_eigenvalues(m)


class TestHorodecki:
    def test_maximally_mixed(self, mixed_rho):
        assert horodecki_bmax(mixed_rho) == pytest.approx(0.0, abs=1e-12)

    def test_bell_state(self, bell_rho):
        assert horodecki_bmax(bell_rho) == pytest.approx(TSIRELSON, abs=1e-12)

    def test_matches_closed_form_on_random_x_states(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            x = random_x_state(rng)
            assert abs(horodecki_bmax(x_to_dense(x)) - bmax_x(x)) <= 1e-10

    def test_tsirelson_bound_on_random_states(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            assert horodecki_bmax(random_density(rng)) <= TSIRELSON + 1e-10

    def test_upper_bounds_bell_function(self):
        rng = np.random.default_rng(8)
        states = [random_density(rng) for _ in range(3)]
        states.append(x_to_dense(random_x_state(rng)))
        for rho in states:
            bound = horodecki_bmax(rho)
            for _ in range(2500):
                assert bell_function(rho, random_settings(rng)) <= bound + 1e-9

    def test_product_states_stay_classical(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            bloch_a = rng.normal(size=3)
            bloch_b = rng.normal(size=3)
            bloch_a *= rng.uniform(0, 1) / np.linalg.norm(bloch_a)
            bloch_b *= rng.uniform(0, 1) / np.linalg.norm(bloch_b)
            paulis = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]),
                      np.array([[1, 0], [0, -1]])]
            one = lambda v: 0.5 * (np.eye(2) + sum(c * s for c, s in zip(v, paulis)))
            rho = validate_density_matrix(np.kron(one(bloch_a), one(bloch_b)))
            assert horodecki_bmax(rho) <= 2.0 + 1e-9
