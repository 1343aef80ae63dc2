"""Helium ground state: first-order shift with a product of 1s orbitals.

The electron-electron term has no closed form once the direction factor is
attached, so it is estimated by Monte Carlo; the nuclear terms are exact.
The unit vector in the electron-electron factor is the direction of
r1 - r2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .constants import HARTREE_EV
from .errors import MonteCarloNotConverged
from .kf_tensor import KFTensor, kappa_matrix, uniform_value
from .numerics import MCEstimate, mc_integrate, two_electron_1s_sampler
from .perturbation import ShiftResult, make_result

DEFAULT_SEED = 20210726
DEFAULT_SAMPLES = 10_000_000


@dataclass(frozen=True)
class HeliumConfig:
    Z: float = 2.0
    mc_samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    chunk_size: int = 1_000_000
    workers: int = 1
    antithetic: bool = True
    rel_tol: float = 1e-3

    def __post_init__(self):
        if not self.Z > 0:
            raise ValueError("Z must be positive")
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@lru_cache(maxsize=8)
def _sampler(z: float):
    return two_electron_1s_sampler(z)


def _symmetrize(f, antithetic):
    if not antithetic:
        return f

    def g(pos):
        swapped = pos[:, ::-1, :]
        return 0.5 * (f(pos) + f(swapped))

    return g


def _inv_r12(pos):
    d = pos[:, 0, :] - pos[:, 1, :]
    return 1.0 / np.sqrt(np.einsum("ij,ij->i", d, d))


def _ee_direction_integrand(kappa):
    def f(pos):
        d = pos[:, 0, :] - pos[:, 1, :]
        r2 = np.einsum("ij,ij->i", d, d)
        # (1/r12) u.kappa.u with u = d/r12
        return np.einsum("ij,jk,ik->i", d, kappa, d) / (r2 * np.sqrt(r2))

    return f


def _integrate(cfg: HeliumConfig, integrand) -> MCEstimate:
    return mc_integrate(
        _sampler(float(cfg.Z)),
        _symmetrize(integrand, cfg.antithetic),
        max(cfg.mc_samples, 2),
        cfg.seed,
        chunk_size=cfg.chunk_size,
        workers=cfg.workers,
    )


def ee_coulomb_integral(cfg: HeliumConfig) -> tuple[float, MCEstimate]:
    """<1/r12> over the 1s^2 density.

    Returns the exact value 5Z/8 together with the Monte Carlo estimate of
    the same integral.
    """
    return 5.0 * cfg.Z / 8.0, _integrate(cfg, _inv_r12)


def helium_ground_shift(cfg: HeliumConfig, t: KFTensor, hartree_ev: float = HARTREE_EV) -> ShiftResult:
    kap = kappa_matrix(t).entries
    z = float(cfg.Z)
    # Two electrons, each <1/r> = Z, angular average trace/3.
    nuclear = 2.0 * z * z * float(np.trace(kap)) / 3.0
    if not np.any(kap):
        ee = MCEstimate(0.0, 0.0, cfg.mc_samples, cfg.seed, cfg.chunk_size)
    else:
        ee = _integrate(cfg, _ee_direction_integrand(kap))
    value = nuclear - ee.value
    if ee.std_error > cfg.rel_tol * abs(value):
        raise MonteCarloNotConverged(
            f"standard error {ee.std_error:.3e} exceeds {cfg.rel_tol} x |{value:.3e}| "
            f"at {cfg.mc_samples} samples"
        )
    k = uniform_value(t)
    return make_result(
        value,
        terms={
            "nuclear": nuclear,
            "electron_electron": ee.value,
            "electron_electron_std_error": ee.std_error,
            "mc_samples": ee.samples,
            "seed": ee.seed,
            "rng": ee.algorithm,
        },
        paper=None if k is None else helium_paper_formula(k),
        hartree_ev=hartree_ev,
        method="monte_carlo",
        error_estimate=ee.std_error,
    )


def helium_paper_formula(k: float) -> float:
    """Published closed form q^2 K 3/(4 a0), in Hartree."""
    return 0.75 * k


def expected_uniform_shift(z: float, k: float) -> float:
    """(2 Z^2 - 5 Z / 8) K: the shift for an isotropic angular average K."""
    return (2.0 * z * z - 5.0 * z / 8.0) * k

