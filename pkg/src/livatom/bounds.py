"""Coefficient bounds from energy-shift slopes and a measurement accuracy."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .constants import ACCURACY_SOURCE, DEFAULT_ACCURACY_EV, HARTREE_EV
from .errors import ZeroSlope
from .helium import HeliumConfig, helium_ground_shift, helium_paper_formula
from .hydrogenic import HydrogenicState, state
from .kf_tensor import construct_uniform
from .perturbation import hydrogen_shift_diagonal, permanent_stark_shift, spin_orbit_shift

# Power of two: scaling the probe tensor and dividing back out is exact.
PROBE_K = 2.0**-4

SYSTEMS = ("hydrogen", "helium", "permanent_stark", "spin_orbit")

# Published upper bounds on the coefficient, keyed by system.
PAPER_BOUNDS = {
    "hydrogen": 2.8e-17,
    "helium": 3.8e-17,
    "permanent_stark": 4.1e-18,
    "spin_orbit": 8.7e-13,
}

TABLE_LABELS = {
    "hydrogen": "Hydrogen atom",
    "helium": "Helium atom",
    "permanent_stark": "Stark effect",
    "spin_orbit": "spin-orbit interaction",
}

DEFAULT_STATES = {
    "hydrogen": state(1, 0, 0),
    "permanent_stark": state(1, 0, 0),
    "spin_orbit": state(2, 1, 0, j=1.5),
}


@dataclass(frozen=True)
class AccuracyRecord:
    value_eV: float = DEFAULT_ACCURACY_EV
    source: str = ACCURACY_SOURCE

    def __post_init__(self):
        if not self.value_eV > 0:
            raise ValueError("accuracy must be positive")


@dataclass(frozen=True)
class BoundResult:
    system: str
    label: str
    model: str
    slope_eV_per_K: float
    accuracy_eV: float
    bound: float
    paper_bound: float
    ratio: float
    state: str

    def to_dict(self) -> dict:
        return asdict(self)


def _describe(system, s, cfg):
    if system == "helium":
        return f"1s^2 Z={cfg.Z:g}"
    text = f"n={s.n} l={s.l} m={s.m} Z={s.Z:g}"
    if s.j is not None:
        text += f" j={s.j:g}"
    return text


def shift_slope_hartree(
    system: str,
    s: HydrogenicState | None = None,
    helium_cfg: HeliumConfig | None = None,
    model: str = "computed",
    probe_k: float = PROBE_K,
) -> float:
    """|dE/dK| in Hartree for a uniform coefficient, from one probe evaluation."""
    if system not in SYSTEMS:
        raise ValueError(f"unknown system {system!r}; choose from {SYSTEMS}")
    if model not in ("computed", "paper_formula"):
        raise ValueError(f"unknown model {model!r}")
    probe = construct_uniform(probe_k)
    if system == "helium":
        if model == "paper_formula":
            shift = helium_paper_formula(probe_k)
        else:
            shift = helium_ground_shift(helium_cfg or HeliumConfig(), probe).value_hartree
    else:
        fn = {
            "hydrogen": hydrogen_shift_diagonal,
            "permanent_stark": permanent_stark_shift,
            "spin_orbit": spin_orbit_shift,
        }[system]
        res = fn(s or DEFAULT_STATES[system], probe)
        shift = res.value_hartree if model == "computed" else res.paper_formula_value_hartree
    return abs(shift) / probe_k


def bound_from_accuracy(
    system: str,
    acc: AccuracyRecord = AccuracyRecord(),
    *,
    s: HydrogenicState | None = None,
    helium_cfg: HeliumConfig | None = None,
    model: str = "computed",
    hartree_ev: float = HARTREE_EV,
    probe_k: float = PROBE_K,
) -> BoundResult:
    """Largest |K| whose first-order shift stays below the accuracy."""
    s = s or DEFAULT_STATES.get(system)
    cfg = helium_cfg or HeliumConfig()
    if system == "spin_orbit" and s.l == 0:
        raise ZeroSlope("spin-orbit shift vanishes identically for l = 0")
    slope = shift_slope_hartree(system, s, cfg, model, probe_k) * hartree_ev
    if slope == 0.0:
        raise ZeroSlope(f"{system} shift has zero slope in K for {_describe(system, s, cfg)}")
    bound = acc.value_eV / slope
    paper = PAPER_BOUNDS[system]
    return BoundResult(
        system=system,
        label=TABLE_LABELS[system],
        model=model,
        slope_eV_per_K=slope,
        accuracy_eV=acc.value_eV,
        bound=bound,
        paper_bound=paper,
        ratio=bound / paper,
        state=_describe(system, s, cfg),
    )


def bound_table(
    acc: AccuracyRecord = AccuracyRecord(),
    *,
    helium_cfg: HeliumConfig | None = None,
    model: str = "computed",
    hartree_ev: float = HARTREE_EV,
) -> list[BoundResult]:
    return [
        bound_from_accuracy(system, acc, helium_cfg=helium_cfg, model=model, hartree_ev=hartree_ev)
        for system in SYSTEMS
    ]


def format_table(rows: list[BoundResult]) -> str:
    header = ("Quantum system or Quantum effect", "published bound", "computed bound", "ratio", "slope [eV/K]")
    body = [
        (r.label, f"{r.paper_bound:.1e}", f"{r.bound:.4e}", f"{r.ratio:.4g}", f"{r.slope_eV_per_K:.6g}")
        for r in rows
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)
