"""Brute-force numerical oracles.

Everything here is deliberately independent of the closed forms and Gaunt
algebra in :mod:`livatom.hydrogenic`: radial integrals go through
Gauss-Laguerre quadrature, angular integrals through a Gauss-Legendre x
trapezoid product rule with spherical harmonics from scipy, and two-electron
integrals through seeded Monte Carlo.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import eigh_tridiagonal
from scipy.special import eval_genlaguerre, sph_harm_y

from .errors import QuadratureNotConverged

RNG_ALGORITHM = "PCG64/SeedSequence(seed, spawn_key=(chunk,))"


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights of a quadrature rule.

    For ``gauss_laguerre`` the nodes are abscissae on [0, inf) and the rule
    integrates against ``exp(-x)``.  For ``angular_product`` the nodes are
    ``(theta, phi)`` rows and the weights already include the solid-angle
    measure.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    params: tuple

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ValueError("nodes and weights differ in length")
        if np.any(self.weights < 0):
            raise ValueError("quadrature weights must be non-negative")

    @property
    def directions(self) -> np.ndarray:
        """Unit vectors for an angular rule, shape (N, 3)."""
        theta, phi = self.nodes[:, 0], self.nodes[:, 1]
        st = np.sin(theta)
        return np.column_stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])


@lru_cache(maxsize=64)
def gauss_laguerre(order: int) -> QuadratureRule:
    if order < 1:
        raise ValueError("order must be >= 1")
    # Golub-Welsch on the Laguerre Jacobi matrix; numpy's laggauss overflows
    # beyond order ~150.  Tail weights underflow to 0, which is harmless.
    i = np.arange(order, dtype=float)
    x, vecs = eigh_tridiagonal(2.0 * i + 1.0, i[1:])
    w = vecs[0] ** 2
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadratureRule(x, w, "gauss_laguerre", (order,))


def angular_quadrature(n_theta: int, n_phi: int) -> QuadratureRule:
    """Gauss-Legendre in cos(theta) times the trapezoid rule in phi."""
    if n_theta < 2 or n_phi < 2:
        raise ValueError("n_theta and n_phi must be >= 2")
    mu, wmu = leggauss(n_theta)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    theta = np.arccos(mu)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    ww = np.outer(wmu, np.full(n_phi, 2.0 * np.pi / n_phi))
    nodes = np.column_stack([tt.ravel(), pp.ravel()])
    return QuadratureRule(nodes, ww.ravel(), "angular_product", (n_theta, n_phi))


def ylm(l: int, m: int, rule: QuadratureRule) -> np.ndarray:
    """Complex Y_lm (Condon-Shortley phase) at the nodes of an angular rule."""
    return sph_harm_y(l, m, rule.nodes[:, 0], rule.nodes[:, 1])


def _radial_poly_sq(z, n, l, lp, x):
    # R_nl(r) R_nl'(r) exp(x) with x = 2 Z r / n, both functions scaled to
    # that common variable.
    def norm(ll):
        return math.sqrt(
            (2.0 * z / n) ** 3 * math.factorial(n - ll - 1) / (2.0 * n * math.factorial(n + ll))
        )

    f = norm(l) * x**l * eval_genlaguerre(n - l - 1, 2 * l + 1, x)
    g = norm(lp) * x**lp * eval_genlaguerre(n - lp - 1, 2 * lp + 1, x)
    return f * g


def _close(a, b, rtol, atol):
    return abs(a - b) <= rtol * max(abs(a), abs(b)) + atol


def _product_element(bra, ket, operator, radial_order, n_theta, n_phi):
    z = float(ket.Z)
    n = ket.n
    rad = gauss_laguerre(radial_order)
    ang = angular_quadrature(n_theta, n_phi)
    x = rad.nodes
    r = n * x / (2.0 * z)
    jac = (n / (2.0 * z)) ** 3
    radial_w = rad.weights * _radial_poly_sq(z, n, bra.l, ket.l, x) * x**2 * jac
    ang_w = ang.weights * np.conj(ylm(bra.l, bra.m, ang)) * ylm(ket.l, ket.m, ang)
    dirs = ang.directions
    rr = np.repeat(r, len(dirs))
    dd = np.tile(dirs, (len(r), 1))
    vals = np.asarray(operator(rr, dd)).reshape(len(r), len(dirs))
    return complex(radial_w @ vals @ ang_w)


def matrix_element_numeric(
    bra,
    ket,
    operator: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rtol: float = 1e-9,
    atol: float = 1e-15,
) -> complex:
    """<bra|operator|ket> for two hydrogenic states sharing Z and n.

    ``operator(r, u)`` receives radii of shape (N,) in bohr and unit vectors
    of shape (N, 3).  The product rule is evaluated at two sizes; the larger
    one is returned if both agree to ``rtol`` (plus ``atol``).
    """
    if bra.n != ket.n or bra.Z != ket.Z:
        raise ValueError("bra and ket must share n and Z")
    lmax = max(bra.l, ket.l)
    sizes = [
        (2 * bra.n + 24, lmax + 8, 2 * lmax + 12),
        (4 * bra.n + 48, 2 * lmax + 16, 4 * lmax + 24),
    ]
    coarse, fine = (_product_element(bra, ket, operator, *s) for s in sizes)
    if not (_close(coarse.real, fine.real, rtol, atol) and _close(coarse.imag, fine.imag, rtol, atol)):
        raise QuadratureNotConverged(f"product quadrature: {coarse} vs {fine}")
    return fine


def expectation_numeric(state, operator, rtol: float = 1e-9, atol: float = 1e-15) -> float:
    """<psi|operator|psi> for a hydrogenic state by product quadrature."""
    return matrix_element_numeric(state, state, operator, rtol, atol).real


@dataclass(frozen=True)
class MCEstimate:
    value: float
    std_error: float
    samples: int
    seed: int
    chunk_size: int
    algorithm: str = RNG_ALGORITHM


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _chunk_stats(args):
    density_sampler, integrand, seed, chunk, count = args
    rng = chunk_rng(seed, chunk)
    vals = np.asarray(integrand(density_sampler(rng, count)), dtype=float)
    mean = float(vals.mean())
    m2 = float(((vals - mean) ** 2).sum())
    return count, mean, m2


def mc_integrate(
    density_sampler: Callable[[np.random.Generator, int], np.ndarray],
    integrand: Callable[[np.ndarray], np.ndarray],
    samples: int,
    seed: int,
    chunk_size: int = 1_000_000,
    workers: int = 1,
) -> MCEstimate:
    """Monte Carlo mean of ``integrand`` over draws from ``density_sampler``.

    The sample budget is split into fixed chunks of ``chunk_size``; chunk
    ``i`` draws from its own generator seeded by ``(seed, i)``.  Chunk
    statistics are merged in chunk order, so the estimate is bit-identical
    for any ``workers``.
    """
    samples = int(samples)
    if samples < 2:
        raise ValueError("need at least 2 samples")
    counts = [chunk_size] * (samples // chunk_size)
    if samples % chunk_size:
        counts.append(samples % chunk_size)
    jobs = [(density_sampler, integrand, seed, i, c) for i, c in enumerate(counts)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(_chunk_stats, jobs))
    else:
        stats = [_chunk_stats(j) for j in jobs]

    # Chan et al. pairwise merge of (count, mean, M2).
    n_tot, mean, m2 = stats[0]
    for n_b, mean_b, m2_b in stats[1:]:
        n_new = n_tot + n_b
        delta = mean_b - mean
        mean = mean + delta * n_b / n_new
        m2 = m2 + m2_b + delta * delta * n_tot * n_b / n_new
        n_tot = n_new
    var = max(m2, 0.0) / (n_tot - 1)
    return MCEstimate(mean, math.sqrt(var / n_tot), n_tot, seed, chunk_size)


def uniform_directions(rng: np.random.Generator, count: int) -> np.ndarray:
    cos_t = rng.uniform(-1.0, 1.0, count)
    phi = rng.uniform(0.0, 2.0 * np.pi, count)
    sin_t = np.sqrt(1.0 - cos_t * cos_t)
    return np.column_stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t])


class OneSRadialSampler:
    """Inverse-CDF sampler of the 1s radial density 4 Z^3 r^2 exp(-2 Z r).

    In x = 2 Z r the density is Gamma(3); its CDF is tabulated once on a
    fine grid and inverted by linear interpolation.
    """

    def __init__(self, z: float, x_max: float = 60.0, grid_points: int = 1 << 18):
        self.z = float(z)
        x = np.linspace(0.0, x_max, grid_points)
        cdf = 1.0 - np.exp(-x) * (1.0 + x + 0.5 * x * x)
        # cdf is flat (to rounding) for tiny x; keep it strictly increasing
        keep = np.concatenate([[True], np.diff(cdf) > 0])
        self._x = x[keep]
        self._cdf = cdf[keep]

    def __call__(self, rng: np.random.Generator, count: int) -> np.ndarray:
        u = rng.uniform(0.0, self._cdf[-1], count)
        return np.interp(u, self._cdf, self._x) / (2.0 * self.z)


def two_electron_1s_sampler(z: float):
    """Sampler of (r1, r2) positions from the 1s x 1s product density.

    Returns an array of shape (count, 2, 3).
    """
    radial = OneSRadialSampler(z)

    def sample(rng, count):
        out = np.empty((count, 2, 3))
        for e in range(2):
            r = radial(rng, count)
            out[:, e, :] = r[:, None] * uniform_directions(rng, count)
        return out

    return sample


def angular_element_numeric(l: int, m: int, lp: int, mp: int, func, n_theta: int | None = None, n_phi: int | None = None) -> complex:
    """Integral of conj(Y_lm) func(u) Y_l'm' over the sphere by product quadrature."""
    lmax = max(l, lp)
    rule = angular_quadrature(n_theta or lmax + 8, n_phi or 2 * lmax + 12)
    vals = np.asarray(func(rule.directions))
    return complex(np.sum(rule.weights * np.conj(ylm(l, m, rule)) * vals * ylm(lp, mp, rule)))
