"""Command-line front end.

Usage:
    livatom shift hydrogen --n 1 --l 0 --m 0 --uniform-k 1e-6
    livatom shift spin-orbit --n 2 --l 1 --j 1.5 --uniform-k 1e-6
    livatom manifold --n 2 --kf-file kappa.json --format text
    livatom field --charge 1 --at 0,0,1 --uniform-k 0.01
    livatom bound table --accuracy-ev 1e-12
    livatom check consistency --uniform-k 1e-6

Exit status: 0 on success (flagged discrepancies included), 1 when a
computation fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import __version__
from .bounds import AccuracyRecord, bound_from_accuracy, bound_table, format_table
from .constants import BOHR_M, DEFAULT_ACCURACY_EV, HARTREE_EV
from .errors import LIVError
from .fields import (
    DiscretizedSource,
    PointCharge,
    field_sample,
    green_coulomb_consistency_report,
    potential_from_source,
)
from .helium import DEFAULT_SAMPLES, DEFAULT_SEED, HeliumConfig, helium_ground_shift
from .hydrogenic import state
from .kf_tensor import KFTensor, construct_uniform, load_tensor_file, tensor_to_json
from .perturbation import (
    degenerate_manifold_shifts,
    hydrogen_shift_diagonal,
    permanent_stark_shift,
    spin_orbit_shift,
)

SYSTEM_NAMES = {
    "hydrogen": "hydrogen",
    "stark": "permanent_stark",
    "spin-orbit": "spin_orbit",
    "helium": "helium",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    constants: dict = field(default_factory=lambda: {"hartree_eV": HARTREE_EV, "bohr_m": BOHR_M})
    default_accuracy_eV: float = DEFAULT_ACCURACY_EV
    mc_samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    output_format: str = "json"

    def __post_init__(self):
        merged = {"hartree_eV": HARTREE_EV, "bohr_m": BOHR_M}
        merged.update(self.constants)
        self.constants = merged
        for name, value in merged.items():
            if not float(value) > 0:
                raise UsageError(f"constant {name} must be positive, got {value}")
        if not self.default_accuracy_eV > 0:
            raise UsageError("default_accuracy_eV must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise UsageError(f"unknown output_format {self.output_format!r}")

    @property
    def hartree_ev(self) -> float:
        return float(self.constants["hartree_eV"])

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)} in {path!r}")
        return cls(**raw)


def _vector(text: str) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z but got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 components, got {len(parts)}")
    return np.array(parts)


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    tensor = p.add_mutually_exclusive_group()
    tensor.add_argument("--uniform-k", type=float, help="(K_F)_{0j0k} = K for all spatial j, k")
    tensor.add_argument("--kf-file", help="JSON tensor file: uniform, kappa or components")
    p.add_argument("--z", type=float, help="nuclear charge (default 1, helium 2)")
    p.add_argument("--format", choices=("json", "csv", "text"), help="output format")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--mc-samples", type=int, help="Monte Carlo sample count")
    return p


def _state_args(p):
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--j", type=float, help="total angular momentum (spin-orbit)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="livatom", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    shift = sub.add_parser("shift", help="first-order energy shift")
    shift_sub = shift.add_subparsers(dest="system", required=True)
    for name in SYSTEM_NAMES:
        sp = shift_sub.add_parser(name, parents=[common])
        _state_args(sp)

    manifold = sub.add_parser("manifold", parents=[common], help="degenerate n-manifold spectrum")
    manifold.add_argument("--n", type=int, required=True)
    manifold.add_argument("--spin", action="store_true", help="double each level for spin")

    fld = sub.add_parser("field", parents=[common], help="potentials and field of a point charge")
    fld.add_argument("--charge", type=float, default=1.0)
    fld.add_argument("--charge-at", type=_vector, default=np.zeros(3), metavar="X,Y,Z")
    fld.add_argument("--at", type=_vector, required=True, metavar="X,Y,Z")
    fld.add_argument("--source-file", help="discretized 4-current JSON")

    bound = sub.add_parser("bound", help="coefficient bounds")
    bound_sub = bound.add_subparsers(dest="mode", required=True)
    single = bound_sub.add_parser("single", parents=[common])
    single.add_argument("--system", choices=tuple(SYSTEM_NAMES), required=True)
    _state_args(single)
    table = bound_sub.add_parser("table", parents=[common])
    for bp in (single, table):
        bp.add_argument("--accuracy-ev", type=float)
        bp.add_argument("--model", choices=("computed", "paper"), default="computed")

    check = sub.add_parser("check", help="diagnostics")
    check_sub = check.add_subparsers(dest="check", required=True)
    check_sub.add_parser("consistency", parents=[common])
    return parser


def _tensor(args) -> KFTensor:
    if args.uniform_k is not None:
        return construct_uniform(args.uniform_k)
    if args.kf_file:
        try:
            return load_tensor_file(args.kf_file)
        except FileNotFoundError as exc:
            raise UsageError(f"tensor file not found: {args.kf_file}") from exc
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed tensor file {args.kf_file}: {exc}") from exc
    return KFTensor()


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.format:
        cfg.output_format = args.format
    if args.seed is not None:
        cfg.seed = args.seed
    if args.mc_samples is not None:
        cfg.mc_samples = args.mc_samples
    return cfg


def _helium_cfg(args, cfg: RunConfig) -> HeliumConfig:
    return HeliumConfig(Z=args.z if args.z is not None else 2.0, mc_samples=cfg.mc_samples, seed=cfg.seed)


def _hydrogenic_state(args):
    return state(args.n, args.l, args.m, Z=args.z if args.z is not None else 1.0, j=args.j)


def _run_shift(args, cfg, t):
    hev = cfg.hartree_ev
    if args.system == "helium":
        res = helium_ground_shift(_helium_cfg(args, cfg), t, hartree_ev=hev)
        where = {"Z": args.z if args.z is not None else 2.0}
    else:
        s = _hydrogenic_state(args)
        fn = {
            "hydrogen": hydrogen_shift_diagonal,
            "stark": permanent_stark_shift,
            "spin-orbit": spin_orbit_shift,
        }[args.system]
        res = fn(s, t, hartree_ev=hev)
        where = {"Z": s.Z, "n": s.n, "l": s.l, "m": s.m, "j": s.j}
    out = {"command": "shift", "system": SYSTEM_NAMES[args.system], "state": where}
    out.update(res.to_dict())
    return out


def _run_manifold(args, cfg, t):
    z = args.z if args.z is not None else 1.0
    spec = degenerate_manifold_shifts(args.n, z, t, include_spin=args.spin)
    return {
        "command": "manifold",
        "n": spec.n,
        "Z": z,
        "eigenvalues_hartree": list(spec.eigenvalues_hartree),
        "eigenvalues_eV": [e * cfg.hartree_ev for e in spec.eigenvalues_hartree],
        "basis_labels": [list(b) for b in spec.basis_labels],
    }


def _run_field(args, t):
    charge = PointCharge(args.charge, args.charge_at)
    out = {"command": "field", "at": args.at.tolist(), "charge": args.charge,
           "charge_at": charge.position.tolist()}
    sample = field_sample(args.at, charge, t)
    out.update({"A0": sample.A0, "A": list(sample.A), "E": list(sample.E)})
    point_source = DiscretizedSource([charge.position], [[args.charge, 0.0, 0.0, 0.0]], [1.0])
    green = potential_from_source(args.at, point_source, t)
    out["A_green"] = green.tolist()
    out["A0_green_minus_closed_form"] = float(green[0] - sample.A0)
    if args.source_file:
        try:
            src = DiscretizedSource.load(args.source_file)
        except FileNotFoundError as exc:
            raise UsageError(f"source file not found: {args.source_file}") from exc
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed source file {args.source_file}: {exc}") from exc
        out["A_source"] = potential_from_source(args.at, src, t).tolist()
    return out


def _run_bound(args, cfg):
    acc = AccuracyRecord(args.accuracy_ev if args.accuracy_ev is not None else cfg.default_accuracy_eV)
    model = "paper_formula" if args.model == "paper" else "computed"
    hcfg = _helium_cfg(args, cfg)
    if args.mode == "table":
        rows = bound_table(acc, helium_cfg=hcfg, model=model, hartree_ev=cfg.hartree_ev)
    else:
        system = SYSTEM_NAMES[args.system]
        s = None if system == "helium" else _hydrogenic_state(args)
        rows = [bound_from_accuracy(system, acc, s=s, helium_cfg=hcfg, model=model,
                                    hartree_ev=cfg.hartree_ev)]
    return {
        "command": f"bound {args.mode}",
        "accuracy_eV": acc.value_eV,
        "accuracy_source": acc.source,
        "rows": [r.to_dict() for r in rows],
    }


def _flatten(obj, prefix=""):
    flat = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            flat.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, list) and obj and not isinstance(obj[0], (dict, list)):
        flat[prefix[:-1]] = " ".join(str(v) for v in obj)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            flat.update(_flatten(v, f"{prefix}{i}."))
    else:
        flat[prefix[:-1]] = obj
    return flat


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    rows = report.get("rows")
    if fmt == "csv":
        buf = io.StringIO()
        records = [_flatten(r) for r in rows] if rows else [_flatten(report)]
        writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        return buf.getvalue().rstrip("\n")
    if rows and "paper_bound" in rows[0]:
        from .bounds import BoundResult

        head = f"accuracy: {report['accuracy_eV']} eV ({report['accuracy_source']})"
        return head + "\n" + format_table([BoundResult(**r) for r in rows])
    return "\n".join(f"{k}: {v}" for k, v in _flatten(report).items())


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        t = _tensor(args)
        if args.command == "shift":
            report = _run_shift(args, cfg, t)
        elif args.command == "manifold":
            report = _run_manifold(args, cfg, t)
        elif args.command == "field":
            report = _run_field(args, t)
        elif args.command == "bound":
            report = _run_bound(args, cfg)
        else:
            report = {"command": "check consistency", **green_coulomb_consistency_report(t)}
        report["tensor"] = tensor_to_json(t)
        report["constants"] = dict(cfg.constants)
    except UsageError as exc:
        print(f"livatom: error: {exc}", file=sys.stderr)
        return 2
    except LIVError as exc:
        print(f"livatom: {_origin(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"livatom: error: {exc}", file=sys.stderr)
        return 2
    print(render(report, cfg.output_format))
    return 0


def _origin(exc: BaseException) -> str:
    tb = exc.__traceback__
    module = "livatom"
    while tb is not None:
        name = tb.tb_frame.f_globals.get("__name__", "")
        if name.startswith("livatom.") and name != __name__:
            module = name
        tb = tb.tb_next
    return module


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
