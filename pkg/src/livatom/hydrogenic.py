"""Hydrogen-like bound states and the matrix elements built on them.

Atomic units throughout (hbar = m_e = e = a0 = 1).  Spherical harmonics are
complex with the Condon-Shortley phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre

from .errors import DivergentExpectation, InvalidQuantumNumbers, QuadratureNotConverged
from .kf_tensor import KappaMatrix
from .numerics import gauss_laguerre

DEFAULT_RADIAL_ORDER = 200


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    l: int = 0
    m: int = 0
    j: float | None = None

    def __post_init__(self):
        for name in ("n", "l", "m"):
            if int(getattr(self, name)) != getattr(self, name):
                raise InvalidQuantumNumbers(f"{name} must be an integer")
        if self.n < 1:
            raise InvalidQuantumNumbers(f"n={self.n} must be >= 1")
        if not 0 <= self.l < self.n:
            raise InvalidQuantumNumbers(f"l={self.l} must satisfy 0 <= l < n={self.n}")
        if abs(self.m) > self.l:
            raise InvalidQuantumNumbers(f"|m|={abs(self.m)} exceeds l={self.l}")
        if self.j is not None:
            if self.j not in (self.l - 0.5, self.l + 0.5) or self.j <= 0:
                raise InvalidQuantumNumbers(f"j={self.j} is not l +/- 1/2 for l={self.l}")


@dataclass(frozen=True)
class HydrogenicState:
    Z: float
    qn: QuantumNumbers

    def __post_init__(self):
        if not self.Z > 0:
            raise InvalidQuantumNumbers(f"nuclear charge Z={self.Z} must be positive")

    @property
    def n(self) -> int:
        return self.qn.n

    @property
    def l(self) -> int:
        return self.qn.l

    @property
    def m(self) -> int:
        return self.qn.m

    @property
    def j(self) -> float | None:
        return self.qn.j


def state(n: int, l: int = 0, m: int = 0, Z: float = 1.0, j: float | None = None) -> HydrogenicState:
    """Shorthand constructor."""
    return HydrogenicState(float(Z), QuantumNumbers(n, l, m, j))


def _check_nl(n, l):
    if n < 1 or not 0 <= l < n:
        raise InvalidQuantumNumbers(f"invalid (n, l) = ({n}, {l})")


def _radial_norm(z, n, l):
    return math.sqrt((2.0 * z / n) ** 3 * math.factorial(n - l - 1) / (2.0 * n * math.factorial(n + l)))


def radial_wavefunction(s: HydrogenicState, r):
    """Normalized R_nl(r; Z) from the associated Laguerre polynomials."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    z, n, l = s.Z, s.n, s.l
    rho = 2.0 * z * r / n
    out = _radial_norm(z, n, l) * np.exp(-rho / 2.0) * rho**l * eval_genlaguerre(n - l - 1, 2 * l + 1, rho)
    return out if out.ndim else float(out)


def expect_inv_power(s: HydrogenicState, k: int) -> float:
    """Closed-form <r^-k> in bohr^-k for k in {1, 2, 3}."""
    z, n, l = s.Z, s.n, s.l
    if k == 1:
        return z / n**2
    if k == 2:
        return z**2 / (n**3 * (l + 0.5))
    if k == 3:
        if l == 0:
            raise DivergentExpectation("<r^-3> diverges for l = 0")
        return z**3 / (n**3 * l * (l + 0.5) * (l + 1))
    raise ValueError(f"k={k} not in {{1, 2, 3}}")


def _radial_integral(z, n, l, lp, k, order):
    rule = gauss_laguerre(order)
    x = rule.nodes
    # x = 2 Z r / n absorbs exp(-x) into the Laguerre weight; r^(2-k) dr
    # becomes (n / 2Z)^(3-k) x^(2-k) dx.
    poly = (
        _radial_norm(z, n, l) * x**l * eval_genlaguerre(n - l - 1, 2 * l + 1, x)
        * _radial_norm(z, n, lp) * x**lp * eval_genlaguerre(n - lp - 1, 2 * lp + 1, x)
    )
    return float(rule.weights @ (poly * x ** (2 - k))) * (n / (2.0 * z)) ** (3 - k)


def radial_matrix_element(Z: float, n: int, l: int, lp: int, k: int, order: int = DEFAULT_RADIAL_ORDER) -> float:
    """<R_nl| r^-k |R_nl'> by Gauss-Laguerre with an order-doubling check."""
    _check_nl(n, l)
    _check_nl(n, lp)
    if k not in (1, 2, 3):
        raise ValueError(f"k={k} not in {{1, 2, 3}}")
    if l + lp + 2 - k < 0:
        raise DivergentExpectation(f"<r^-{k}> diverges for l={l}, l'={lp}")
    a = _radial_integral(Z, n, l, lp, k, order)
    b = _radial_integral(Z, n, l, lp, k, 2 * order)
    if abs(a - b) > 1e-10 * max(abs(a), abs(b)) + 1e-300:
        raise QuadratureNotConverged(f"radial integral: order {order} gave {a}, {2 * order} gave {b}")
    return b


# --- angular algebra -------------------------------------------------------

@lru_cache(maxsize=None)
def wigner_3j(j1: int, j2: int, j3: int, m1: int, m2: int, m3: int) -> float:
    """Wigner 3j symbol for integer arguments (Racah formula, exact rationals)."""
    if m1 + m2 + m3 != 0:
        return 0.0
    if not abs(j1 - j2) <= j3 <= j1 + j2:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(m3) > j3:
        return 0.0
    f = math.factorial
    tri = Fraction(f(j1 + j2 - j3) * f(j1 - j2 + j3) * f(-j1 + j2 + j3), f(j1 + j2 + j3 + 1))
    pre = tri * f(j1 + m1) * f(j1 - m1) * f(j2 + m2) * f(j2 - m2) * f(j3 + m3) * f(j3 - m3)
    tmin = max(0, j2 - j3 - m1, j1 - j3 + m2)
    tmax = min(j1 + j2 - j3, j1 - m1, j2 + m2)
    total = Fraction(0)
    for t in range(tmin, tmax + 1):
        den = (
            f(t) * f(j3 - j2 + t + m1) * f(j3 - j1 + t - m2)
            * f(j1 + j2 - j3 - t) * f(j1 - t - m1) * f(j2 - t + m2)
        )
        total += Fraction(-1 if t % 2 else 1, den)
    if total == 0:
        return 0.0
    sign = (-1 if (j1 - j2 - m3) % 2 else 1) * (1 if total > 0 else -1)
    return sign * math.sqrt(pre * total * total)


@lru_cache(maxsize=None)
def gaunt(l1: int, m1: int, l2: int, m2: int, l3: int, m3: int) -> float:
    """Integral of conj(Y_l1m1) Y_l2m2 Y_l3m3 over the unit sphere."""
    w0 = wigner_3j(l1, l2, l3, 0, 0, 0)
    if w0 == 0.0:
        return 0.0
    wm = wigner_3j(l1, l2, l3, -m1, m2, m3)
    if wm == 0.0:
        return 0.0
    phase = -1.0 if m1 % 2 else 1.0
    return phase * math.sqrt((2 * l1 + 1) * (2 * l2 + 1) * (2 * l3 + 1) / (4.0 * math.pi)) * w0 * wm


def _conj_y2_tensors() -> dict[int, np.ndarray]:
    # conj(Y_2mu)(u) = u^T T_mu u on the unit sphere, T_mu symmetric traceless.
    c0 = math.sqrt(5.0 / (16.0 * math.pi))
    c1 = math.sqrt(15.0 / (8.0 * math.pi))
    c2 = math.sqrt(15.0 / (32.0 * math.pi))
    t = {mu: np.zeros((3, 3), dtype=complex) for mu in range(-2, 3)}
    t[0][:] = c0 * np.diag([-1.0, -1.0, 2.0])
    # Y_2,+-1 = -+c1 z (x +- i y)
    for mu, s in ((1, -1.0), (-1, 1.0)):
        t[mu][0, 2] = t[mu][2, 0] = s * c1 / 2.0
        t[mu][1, 2] = t[mu][2, 1] = -mu * s * 1j * c1 / 2.0
    # Y_2,+-2 = c2 (x +- i y)^2
    for mu in (2, -2):
        t[mu][0, 0] = c2
        t[mu][1, 1] = -c2
        t[mu][0, 1] = t[mu][1, 0] = -(mu // 2) * 1j * c2
    return t


_CONJ_Y2 = _conj_y2_tensors()


def quadratic_form_multipoles(kappa: KappaMatrix) -> tuple[float, dict[int, complex]]:
    """Split kappa_jk u^j u^k into trace(kappa)/3 + sum_mu c_mu Y_2mu(u)."""
    k = kappa.entries
    # c_mu = int conj(Y_2mu) kappa_jk u^j u^k dOmega = (8 pi / 15) T_mu : kappa
    coeffs = {mu: complex(8.0 * math.pi / 15.0 * np.sum(t * k)) for mu, t in _CONJ_Y2.items()}
    return float(np.trace(k)) / 3.0, coeffs


def _check_lm(l, m):
    if int(l) != l or int(m) != m or l < 0 or abs(m) > l:
        raise InvalidQuantumNumbers(f"invalid (l, m) = ({l}, {m})")


def angular_quadratic_element(l: int, m: int, lp: int, mp: int, kappa: KappaMatrix) -> complex:
    """<Y_lm| kappa_jk u^j u^k |Y_l'm'> evaluated analytically.

    Only the monopole (trace) and the rank-2 Gaunt terms survive, so the
    element is exactly zero unless |l - l'| is 0 or 2 and |m - m'| <= 2.
    """
    _check_lm(l, m)
    _check_lm(lp, mp)
    l, m, lp, mp = int(l), int(m), int(lp), int(mp)
    mono, quad = quadratic_form_multipoles(kappa)
    value = mono if (l, m) == (lp, mp) else 0.0
    mu = m - mp
    if abs(mu) <= 2:
        g = gaunt(l, m, 2, mu, lp, mp)
        if g:
            value = value + quad[mu] * g
    return complex(value)
