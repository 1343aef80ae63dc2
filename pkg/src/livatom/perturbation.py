"""First-order energy shifts of hydrogen-like levels.

The perturbing operators, in Hartree atomic units:

* spectrum:          +(Z/r) kappa_jk u^j u^k   (correction to -Z/r)
* permanent Stark:   -(Z/r) kappa_jk u^j u^k   (q E_corr . r, kappa part only)
* spin-orbit:        (1/2) r^-3 (2 - 9) kappa_jk u^j u^k  S.L

For a tensor built with ``construct_uniform`` each result also carries the
closed form quoted in the literature for the same inputs, and a flag when
the two disagree by more than 1 %.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .constants import HARTREE_EV
from .errors import DiagonalizationFailure, InvalidQuantumNumbers
from .hydrogenic import (
    HydrogenicState,
    angular_quadratic_element,
    expect_inv_power,
    radial_matrix_element,
)
from .kf_tensor import KFTensor, kappa_matrix, uniform_value

DISCREPANCY_RTOL = 0.01


@dataclass(frozen=True)
class ShiftResult:
    value_hartree: float
    value_eV: float
    terms: dict = field(default_factory=dict)
    method: str = "analytic"
    error_estimate: float = 0.0
    paper_formula_value_hartree: float | None = None
    discrepancy_flag: bool = False
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "value_hartree": self.value_hartree,
            "value_eV": self.value_eV,
            "terms": dict(self.terms),
            "method": self.method,
            "error_estimate": self.error_estimate,
            "paper_formula_value_hartree": self.paper_formula_value_hartree,
            "discrepancy_flag": self.discrepancy_flag,
            "notes": list(self.notes),
        }


def is_discrepant(value: float, reference: float | None, rtol: float = DISCREPANCY_RTOL) -> bool:
    if reference is None:
        return False
    return abs(value - reference) > rtol * abs(reference)


def make_result(
    value: float,
    *,
    terms: dict,
    paper: float | None,
    hartree_ev: float,
    method: str = "analytic",
    error_estimate: float = 0.0,
    notes: tuple[str, ...] = (),
) -> ShiftResult:
    if error_estimate < 0:
        raise ValueError("error estimate must be non-negative")
    return ShiftResult(
        value_hartree=float(value),
        value_eV=float(value) * hartree_ev,
        terms=terms,
        method=method,
        error_estimate=float(error_estimate),
        paper_formula_value_hartree=paper,
        discrepancy_flag=is_discrepant(value, paper),
        notes=notes,
    )


def _diagonal_angular(s: HydrogenicState, t: KFTensor) -> float:
    return angular_quadratic_element(s.l, s.m, s.l, s.m, kappa_matrix(t)).real


def hydrogen_shift_diagonal(s: HydrogenicState, t: KFTensor, hartree_ev: float = HARTREE_EV) -> ShiftResult:
    """<nlm| (Z/r) kappa_jk u^j u^k |nlm>, no mixing inside the n-manifold."""
    inv_r = expect_inv_power(s, 1)
    ang = _diagonal_angular(s, t)
    k = uniform_value(t)
    paper = None if k is None else k * s.Z**2 / s.n**2
    return make_result(
        s.Z * inv_r * ang,
        terms={"Z": s.Z, "inv_r": inv_r, "angular": ang},
        paper=paper,
        hartree_ev=hartree_ev,
    )


def permanent_stark_shift(s: HydrogenicState, t: KFTensor, hartree_ev: float = HARTREE_EV) -> ShiftResult:
    """Shift from q E_corr . r, with E_corr the kappa-dependent part of the field.

    Contracting 2 kappa_jk u^k - 3 (u.kappa.u) u^j with r u^j leaves
    -(u.kappa.u) r, so the operator is -(Z/r) kappa_jk u^j u^k.
    """
    inv_r = expect_inv_power(s, 1)
    ang = _diagonal_angular(s, t)
    contracted = 2.0 * ang - 3.0 * ang
    k = uniform_value(t)
    paper = None if k is None else -7.0 * k * s.Z**2 / s.n**2
    return make_result(
        s.Z * inv_r * contracted,
        terms={"Z": s.Z, "inv_r": inv_r, "angular": ang, "contracted_field": contracted},
        paper=paper,
        hartree_ev=hartree_ev,
    )


def spin_orbit_factor(l: int, j: float) -> float:
    """<S.L> = [j(j+1) - l(l+1) - 3/4] / 2 in units of hbar^2."""
    return (j * (j + 1.0) - l * (l + 1.0) - 0.75) / 2.0


def spin_orbit_shift(s: HydrogenicState, t: KFTensor, hartree_ev: float = HARTREE_EV) -> ShiftResult:
    if s.j is None:
        raise InvalidQuantumNumbers("spin-orbit shift needs j")
    if s.l == 0:
        return make_result(
            0.0, terms={}, paper=0.0, hartree_ev=hartree_ev, notes=("NoFineStructure",)
        )
    ang = _diagonal_angular(s, t)
    bracket = 2.0 * ang - 9.0 * ang
    inv_r3 = expect_inv_power(s, 3)
    sl = spin_orbit_factor(s.l, s.j)
    k = uniform_value(t)
    paper = None
    if k is not None:
        braces = s.l / 2.0 if s.j > s.l else -(s.l + 1) / 2.0
        paper = 0.5 * (-7.0 * k) * braces / (s.n**3 * s.l * (s.l + 1) * (s.l + 0.5))
    return make_result(
        0.5 * bracket * inv_r3 * sl,
        terms={"angular_bracket": bracket, "inv_r3": inv_r3, "spin_orbit_factor": sl},
        paper=paper,
        hartree_ev=hartree_ev,
    )


@dataclass(frozen=True, eq=False)
class ManifoldSpectrum:
    n: int
    eigenvalues_hartree: tuple[float, ...]
    basis_labels: tuple[tuple, ...]
    matrix: np.ndarray


def manifold_basis(n: int) -> list[tuple[int, int]]:
    return [(l, m) for l in range(n) for m in range(-l, l + 1)]


def manifold_matrix(n: int, Z: float, t: KFTensor) -> np.ndarray:
    """Perturbation (Z/r) kappa_jk u^j u^k over the degenerate n-manifold."""
    if n < 1:
        raise InvalidQuantumNumbers(f"n={n} must be >= 1")
    kap = kappa_matrix(t)
    basis = manifold_basis(n)
    radial = {
        (l, lp): radial_matrix_element(Z, n, l, lp, 1)
        for l, lp in itertools.product(range(n), repeat=2)
        if abs(l - lp) in (0, 2)
    }
    v = np.zeros((len(basis), len(basis)), dtype=complex)
    for a, (l, m) in enumerate(basis):
        for b, (lp, mp) in enumerate(basis):
            if (l, lp) in radial:
                v[a, b] = Z * radial[(l, lp)] * angular_quadratic_element(l, m, lp, mp, kap)
    return v


def degenerate_manifold_shifts(n: int, Z: float, t: KFTensor, include_spin: bool = False) -> ManifoldSpectrum:
    v = manifold_matrix(n, Z, t)
    try:
        eig = np.linalg.eigvalsh(v)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationFailure(str(exc)) from exc
    labels = manifold_basis(n)
    if include_spin:
        # The operator is spin-independent; each level is doubly degenerate.
        eig = np.repeat(eig, 2)
        labels = [(l, m, s) for l, m in labels for s in (-0.5, 0.5)]
    return ManifoldSpectrum(n, tuple(float(e) for e in np.sort(eig)), tuple(labels), v)
