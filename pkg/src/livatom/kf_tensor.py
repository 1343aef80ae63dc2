"""Storage for the photon-sector coefficient tensor (K_F)_{abcd}.

The tensor has the index symmetries of the Riemann tensor that matter here:
antisymmetry inside each index pair and symmetry under exchange of the two
pairs.  Only canonical components are stored; every other read is recovered
through the sign rules.

Canonical form: inside each pair the indices are ascending, and the
lexicographically smaller pair comes first.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import IndexOutOfRange, MagnitudeTooLarge, SymmetryConflict

MAGNITUDE_LIMIT = 0.1

# Metric of flat space, signature (+, -, -, -).
METRIC_SIGNATURE = (1.0, -1.0, -1.0, -1.0)
ETA = np.diag(METRIC_SIGNATURE)
ETA.setflags(write=False)

Index4 = tuple[int, int, int, int]


def canonicalize(index: Iterable[int]) -> tuple[Index4, int]:
    """Map an index tuple to its canonical slot.

    Returns ``(canonical, sign)`` with ``sign`` in {-1, 0, +1}.  A sign of 0
    means the component vanishes identically (repeated index inside a pair).
    """
    idx = tuple(int(i) for i in index)
    if len(idx) != 4:
        raise IndexOutOfRange(f"expected 4 indices, got {len(idx)}")
    for i in idx:
        if not 0 <= i <= 3:
            raise IndexOutOfRange(f"index {i} outside 0..3 in {idx}")
    a, b, c, d = idx
    if a == b or c == d:
        return (a, b, c, d), 0
    sign = 1
    if a > b:
        a, b = b, a
        sign = -sign
    if c > d:
        c, d = d, c
        sign = -sign
    if (a, b) > (c, d):
        a, b, c, d = c, d, a, b
    return (a, b, c, d), sign


@dataclass(frozen=True)
class KFTensor:
    """Immutable, symmetry-aware rank-4 coefficient tensor (dimensionless)."""

    canonical_components: Mapping[Index4, float] = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for idx, value in dict(self.canonical_components).items():
            canon, sign = canonicalize(idx)
            if canon != tuple(idx) or sign != 1:
                raise SymmetryConflict(f"{idx} is not a canonical index")
            if value != 0.0:
                comps[canon] = float(value)
        object.__setattr__(self, "canonical_components", MappingProxyType(comps))
        dense = np.zeros((4, 4, 4, 4))
        for idx in itertools.product(range(4), repeat=4):
            canon, sign = canonicalize(idx)
            if sign:
                dense[idx] = sign * comps.get(canon, 0.0)
        dense.setflags(write=False)
        object.__setattr__(self, "_dense", dense)

    def __getitem__(self, index: Iterable[int]) -> float:
        canon, sign = canonicalize(index)
        if sign == 0:
            return 0.0
        return sign * self.canonical_components.get(canon, 0.0)

    @property
    def dense(self) -> np.ndarray:
        """Read-only 4x4x4x4 array of all components."""
        return self._dense

    def is_zero(self) -> bool:
        return not self.canonical_components

    def scaled(self, factor: float) -> "KFTensor":
        return construct_from_components(
            (idx, factor * v) for idx, v in self.canonical_components.items()
        )

    def __eq__(self, other):
        if not isinstance(other, KFTensor):
            return NotImplemented
        return dict(self.canonical_components) == dict(other.canonical_components)

    def __hash__(self):
        return hash(frozenset(self.canonical_components.items()))


def construct_from_components(entries: Iterable[tuple[Iterable[int], float]]) -> KFTensor:
    """Build a tensor from ``(index, value)`` pairs given in any symmetry image.

    Raises
    ------
    IndexOutOfRange
        An index is outside 0..3.
    SymmetryConflict
        Two entries disagree about one canonical slot, or a nonzero value is
        given for a component that must vanish.
    MagnitudeTooLarge
        Some ``|value| >= 0.1``.
    """
    stored: dict[Index4, float] = {}
    for index, value in entries:
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value} at {tuple(index)}")
        if abs(value) >= MAGNITUDE_LIMIT:
            raise MagnitudeTooLarge(
                f"|{value}| at {tuple(index)} is not below {MAGNITUDE_LIMIT}"
            )
        canon, sign = canonicalize(index)
        if sign == 0:
            if value != 0.0:
                raise SymmetryConflict(
                    f"component {tuple(index)} is antisymmetric-zero but given {value}"
                )
            continue
        v = sign * value
        if canon in stored and stored[canon] != v:
            raise SymmetryConflict(
                f"{tuple(index)} implies {v} for slot {canon}, already {stored[canon]}"
            )
        stored[canon] = v
    return KFTensor(stored)


def construct_uniform(k: float) -> KFTensor:
    """Tensor with (K_F)_{0j0k} = k for every spatial j, k and nothing else."""
    return construct_from_components(
        ((0, j, 0, l), k) for j in range(1, 4) for l in range(1, 4)
    )


@dataclass(frozen=True, eq=False)
class KappaMatrix:
    """The symmetric 3x3 slice kappa_{jk} = (K_F)_{0j0k}."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"kappa must be 3x3, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("kappa entries must be finite")
        if not np.array_equal(m, m.T):
            raise SymmetryConflict("kappa must be exactly symmetric")
        if np.any(np.abs(m) >= MAGNITUDE_LIMIT):
            raise MagnitudeTooLarge(f"kappa entries must be below {MAGNITUDE_LIMIT}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    def to_tensor(self) -> KFTensor:
        return construct_from_components(
            ((0, j + 1, 0, k + 1), self.entries[j, k])
            for j in range(3)
            for k in range(3)
        )


def kappa_matrix(t: KFTensor) -> KappaMatrix:
    m = np.array([[t[0, j, 0, k] for k in range(1, 4)] for j in range(1, 4)])
    return KappaMatrix(m)


def uniform_value(t: KFTensor) -> float | None:
    """Return K if ``t`` is exactly ``construct_uniform(K)``, else None."""
    k = t[0, 1, 0, 1]
    if t == construct_uniform(k):
        return k
    return None


def tensor_from_json(obj: Mapping) -> KFTensor:
    """Parse one of the three tensor-file shapes.

    ``{"uniform": K}``, ``{"kappa": [[...], [...], [...]]}`` or
    ``{"components": [{"indices": [a, b, c, d], "value": v}, ...]}``.
    """
    if not isinstance(obj, Mapping):
        raise ValueError("tensor JSON must be an object")
    keys = {"uniform", "kappa", "components"} & set(obj)
    if len(keys) != 1 or len(obj) != 1:
        raise ValueError(
            "tensor JSON needs exactly one of 'uniform', 'kappa', 'components'"
        )
    if "uniform" in obj:
        return construct_uniform(float(obj["uniform"]))
    if "kappa" in obj:
        return KappaMatrix(np.array(obj["kappa"], dtype=float)).to_tensor()
    entries = []
    for item in obj["components"]:
        entries.append((tuple(item["indices"]), float(item["value"])))
    return construct_from_components(entries)


def load_tensor_file(path: str | Path) -> KFTensor:
    with open(path) as fh:
        return tensor_from_json(json.load(fh))


def tensor_to_json(t: KFTensor) -> dict:
    return {
        "components": [
            {"indices": list(idx), "value": v}
            for idx, v in sorted(t.canonical_components.items())
        ]
    }
