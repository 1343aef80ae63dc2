import itertools
import math

import numpy as np
import pytest
from sympy.physics.wigner import gaunt as sympy_gaunt
from sympy.physics.wigner import wigner_3j as sympy_3j

from helpers import random_kappa
from livatom.errors import DivergentExpectation, InvalidQuantumNumbers
from livatom.hydrogenic import (
    angular_quadratic_element,
    expect_inv_power,
    gaunt,
    radial_matrix_element,
    radial_wavefunction,
    state,
    wigner_3j,
)
from livatom.kf_tensor import KappaMatrix
from livatom.numerics import angular_element_numeric, gauss_laguerre


def quadratic_form(kappa):
    return lambda u: np.einsum("ij,jk,ik->i", u, kappa.entries, u)


class TestQuantumNumbers:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(n=0), dict(n=2, l=2), dict(n=2, l=1, m=2), dict(n=2, l=-1), dict(n=2, l=1, j=2.5),
         dict(n=1, l=0, j=-0.5), dict(n=2, l=1, j=1.0), dict(n=1, Z=0.0), dict(n=1.5)],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidQuantumNumbers):
            state(**kwargs)

    def test_valid_j(self):
        assert state(2, 1, -1, j=0.5).j == 0.5
        assert state(1, 0, 0, j=0.5).j == 0.5


class TestRadialWavefunction:
    def test_origin(self):
        assert radial_wavefunction(state(1), 0.0) == 2.0

    def test_one_bohr(self):
        assert radial_wavefunction(state(1), 1.0) == pytest.approx(2 * math.exp(-1), rel=1e-15)

    def test_z_scaling_at_origin(self):
        assert radial_wavefunction(state(1, Z=3.0), 0.0) == pytest.approx(2 * 3.0**1.5, rel=1e-15)

    @pytest.mark.parametrize("n,l", [(3, 1), (1, 0), (5, 4), (4, 2)])
    def test_normalization_gauss_laguerre(self, n, l):
        z = 1.0
        rule = gauss_laguerre(60)
        r = n * rule.nodes / (2 * z)
        val = np.sum(rule.weights * np.exp(rule.nodes) * radial_wavefunction(state(n, l, Z=z), r) ** 2 * r**2)
        assert val * n / (2 * z) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("l", [0, 1, 2])
    def test_orthonormality(self, l):
        rule = gauss_laguerre(80)
        z = 1.0
        for n, npr in itertools.product(range(l + 1, 6), repeat=2):
            # exp(-Z r (1/n + 1/n')) matches the Laguerre weight after rescaling
            scale = z * (1.0 / n + 1.0 / npr)
            r = rule.nodes / scale
            prod = radial_wavefunction(state(n, l), r) * radial_wavefunction(state(npr, l), r)
            val = np.sum(rule.weights * np.exp(rule.nodes) * prod * r**2) / scale
            assert val == pytest.approx(float(n == npr), abs=1e-10)

    def test_negative_radius(self):
        with pytest.raises(ValueError):
            radial_wavefunction(state(1), -1.0)


class TestExpectInvPower:
    def test_ground_state(self):
        assert expect_inv_power(state(1), 1) == 1.0

    def test_2p_inverse_cube(self):
        assert expect_inv_power(state(2, 1), 3) == pytest.approx(1 / 24, rel=1e-15)

    def test_divergent(self):
        with pytest.raises(DivergentExpectation):
            expect_inv_power(state(2, 0), 3)

    def test_bad_power(self):
        with pytest.raises(ValueError):
            expect_inv_power(state(2, 1), 4)

    @pytest.mark.parametrize("z", [1.0, 2.0, 3.5])
    def test_z_scaling(self, z):
        for k in (1, 2, 3):
            assert expect_inv_power(state(3, 2, Z=z), k) == pytest.approx(z**k * expect_inv_power(state(3, 2), k))


class TestRadialMatrixElement:
    def test_diagonal_closed_form(self):
        assert radial_matrix_element(1.0, 2, 0, 0, 1) == pytest.approx(0.25, rel=1e-12)

    def test_out_of_range(self):
        with pytest.raises(InvalidQuantumNumbers):
            radial_matrix_element(1.0, 2, 0, 2, 1)

    def test_off_diagonal_golden(self):
        # mpmath (30 digits) and scipy.integrate.quad agree on 0.035136418446315326
        assert radial_matrix_element(1.0, 3, 0, 2, 1) == pytest.approx(0.035136418446315326, rel=1e-12)

    def test_divergent(self):
        with pytest.raises(DivergentExpectation):
            radial_matrix_element(1.0, 2, 0, 0, 3)

    def test_symmetric(self):
        for n in range(3, 6):
            for l, lp in itertools.combinations(range(n), 2):
                assert radial_matrix_element(1.0, n, l, lp, 1) == pytest.approx(
                    radial_matrix_element(1.0, n, lp, l, 1), rel=1e-13
                )

    def test_matches_closed_forms(self):
        for n in range(1, 6):
            for l in range(n):
                for k in (1, 2, 3):
                    if k == 3 and l == 0:
                        continue
                    s = state(n, l, Z=2.0)
                    assert radial_matrix_element(2.0, n, l, l, k) == pytest.approx(expect_inv_power(s, k), rel=1e-10)


class TestWigner:
    def test_against_sympy(self):
        for j1, j2, j3 in itertools.product(range(4), repeat=3):
            for m1, m2 in itertools.product(range(-j1, j1 + 1), range(-j2, j2 + 1)):
                m3 = -m1 - m2
                if abs(m3) > j3:
                    continue
                assert wigner_3j(j1, j2, j3, m1, m2, m3) == pytest.approx(
                    float(sympy_3j(j1, j2, j3, m1, m2, m3)), abs=1e-15
                )

    def test_gaunt_against_sympy(self):
        # sympy's gaunt integrates Y Y Y without conjugation
        for l1, l3 in itertools.product(range(5), repeat=2):
            for m1, m3 in itertools.product(range(-l1, l1 + 1), range(-l3, l3 + 1)):
                m2 = m1 - m3
                if abs(m2) > 2:
                    continue
                ref = (-1) ** m1 * float(sympy_gaunt(l1, 2, l3, -m1, m2, m3))
                assert gaunt(l1, m1, 2, m2, l3, m3) == pytest.approx(ref, abs=1e-15)


class TestAngularElement:
    def test_s_state_trace(self, rng):
        for _ in range(10):
            k = random_kappa(rng)
            assert angular_quadratic_element(0, 0, 0, 0, k) == pytest.approx(k.trace / 3, rel=1e-14)

    def test_p0_zz(self):
        assert angular_quadratic_element(1, 0, 1, 0, KappaMatrix(np.diag([0, 0, 0.05]))).real == pytest.approx(
            0.05 * 3 / 5, rel=1e-14
        )

    def test_parity_zero(self, rng):
        assert angular_quadratic_element(0, 0, 1, 0, random_kappa(rng)) == 0

    def test_invalid(self):
        with pytest.raises(InvalidQuantumNumbers):
            angular_quadratic_element(1, 2, 1, 0, KappaMatrix(np.zeros((3, 3))))

    def test_selection_rules(self, rng):
        k = random_kappa(rng)
        for l, lp in itertools.product(range(6), repeat=2):
            for m, mp in itertools.product(range(-l, l + 1), range(-lp, lp + 1)):
                val = angular_quadratic_element(l, m, lp, mp, k)
                if abs(l - lp) not in (0, 2) or abs(m - mp) > 2:
                    assert abs(val) < 1e-14

    def test_hermitian(self, rng):
        k = random_kappa(rng)
        for l, lp in itertools.product(range(5), repeat=2):
            for m, mp in itertools.product(range(-l, l + 1), range(-lp, lp + 1)):
                a = angular_quadratic_element(l, m, lp, mp, k)
                b = angular_quadratic_element(lp, mp, l, m, k)
                assert abs(a - b.conjugate()) <= 1e-18

    def test_isotropy(self):
        c = 0.037
        k = KappaMatrix(c * np.eye(3))
        for l in range(7):
            for m in range(-l, l + 1):
                assert angular_quadratic_element(l, m, l, m, k) == c

    def test_linearity(self, rng):
        for _ in range(20):
            k1, k2 = random_kappa(rng, 1e-2), random_kappa(rng, 1e-2)
            a, b = rng.uniform(-2, 2, 2)
            mixed = KappaMatrix(a * k1.entries + b * k2.entries)
            l, lp = 3, 1
            for m, mp in itertools.product(range(-l, l + 1), range(-lp, lp + 1)):
                lhs = angular_quadratic_element(l, m, lp, mp, mixed)
                rhs = a * angular_quadratic_element(l, m, lp, mp, k1) + b * angular_quadratic_element(l, m, lp, mp, k2)
                assert abs(lhs - rhs) <= 1e-15 * (abs(a) + abs(b)) * 1e-2

    def test_against_angular_quadrature(self, rng):
        worst = 0.0
        for _ in range(100):
            k = random_kappa(rng)
            l, lp = (int(v) for v in rng.integers(0, 5, 2))
            m, mp = int(rng.integers(-l, l + 1)), int(rng.integers(-lp, lp + 1))
            analytic = angular_quadratic_element(l, m, lp, mp, k)
            numeric = angular_element_numeric(l, m, lp, mp, quadratic_form(k))
            worst = max(worst, abs(analytic - numeric))
        assert worst < 1e-8 * 1e-3
