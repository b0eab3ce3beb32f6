"""Command-line front end: ``zgkn-dirac {spectrum,groundstate,fields,sommerfeld,check}``.

Exit codes: 0 success, 1 error, 2 empty spectrum without ``--override``
(argparse usage errors also exit 2), 3 sufficient conditions not met (``check``).
Numbers are written with 17 significant digits; reports carry no timestamp,
so identical inputs give byte-identical files whatever the thread count.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import __version__
from .errors import ConfigError, InvalidQuantumNumbers, ZgknError
from .fields import FIELD_GUARD, field_grid
from .geometry import ALPHA_S, ModelParams
from .radial import MIN_RING_RADIUS
from .spectrum import (E_STEP, check_sufficient_conditions, max_nuclear_charge, point_spectrum,
                       sommerfeld_comparison, sommerfeld_energy)
from .numerics import DEFAULT_ATOL, DEFAULT_RTOL

SCHEMA_VERSION = 1
UNITS = {"energy": "mc^2", "length": "hbar/(mc)", "coupling": "gamma = eQ/(hbar c)"}

EXIT_OK, EXIT_ERROR, EXIT_EMPTY, EXIT_CONDITIONS = 0, 1, 2, 3


@dataclass
class RunConfig:
    a: float = 5e-4
    gamma: float | None = None
    Z: float | None = None
    kappa: tuple[float, ...] = (0.5, -0.5)
    E_window: tuple[float, float] = (-1.0, 1.0)
    E_step: float = E_STEP
    branches: int = 1
    max_eigenvalues: int | None = None
    rel_tol: float = DEFAULT_RTOL
    abs_tol: float = DEFAULT_ATOL
    override: bool = False
    r_nodes: int = 12001  # dense enough that an external trapezoid sum of the CSV density is within 1e-6
    theta_nodes: int = 512
    r_range: tuple[float, float] = (-10.0, 10.0)
    theta_range: tuple[float, float] = (0.0, math.pi)
    resolution: tuple[int, int] = (101, 101)
    guard: float = FIELD_GUARD
    current: float | None = None
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)

    @property
    def coupling(self) -> float:
        if self.gamma is not None and self.Z is not None:
            raise ConfigError("give either gamma or Z, not both")
        if self.Z is not None:
            return self.Z * ALPHA_S
        return ALPHA_S if self.gamma is None else self.gamma

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.a, self.coupling)

    def serialized(self) -> dict:
        """Every field except ``threads``, which must not influence results."""
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "threads"}


_TUPLE_KEYS = {"kappa": float, "E_window": float, "r_range": float, "theta_range": float, "resolution": int}
_SCALAR_KEYS = {"a": float, "gamma": float, "Z": float, "E_step": float, "branches": int, "max_eigenvalues": int,
                "rel_tol": float, "abs_tol": float, "override": None, "r_nodes": int, "theta_nodes": int,
                "guard": float, "current": float, "threads": int}


def _coerce(key: str, value):
    if value is None:
        return None
    if key in _TUPLE_KEYS:
        cast = _TUPLE_KEYS[key]
        items = value if isinstance(value, (list, tuple)) else [v for v in str(value).split(",") if v.strip()]
        return tuple(cast(float(v)) if cast is int else cast(v) for v in items)
    if key not in _SCALAR_KEYS:
        raise ConfigError(f"unknown configuration key {key!r}")
    if key == "override":
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in {"1", "true", "yes", "on"}
    cast = _SCALAR_KEYS[key]
    if isinstance(value, str) and value.strip().lower() in {"none", "null", ""}:
        return None
    return cast(float(value)) if cast is int else cast(value)


def read_config_file(path: str) -> dict:
    """Flat ``key = value`` file (``#`` comments allowed), or a JSON report whose ``config`` block is reused."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return {k: _coerce(k, v) for k, v in json.loads(text)["config"].items()}
    out = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = _coerce(key, value)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in list(_TUPLE_KEYS) + list(_SCALAR_KEYS):
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            values[key] = _coerce(key, flag)
    # a flag for one coupling replaces a file value for the other
    if getattr(args, "Z", None) is not None:
        values["gamma"] = None
    if getattr(args, "gamma", None) is not None:
        values["Z"] = None
    cfg = RunConfig(**values)
    cfg.coupling  # validates gamma/Z exclusivity
    return cfg


def _format_number(x: float) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, level: int = 0) -> str:
    """JSON text with every float at 17 significant digits and keys in insertion order."""
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float)):
        return _format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(str(k))}: {to_json(v, indent, level + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_format_number(v) for v in obj) + "]"
        body = ",\n".join(inner + to_json(v, indent, level + 1) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    if hasattr(obj, "item"):
        return to_json(obj.item(), indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _header(command: str, cfg: RunConfig | None) -> dict:
    head = {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": command, "units": UNITS}
    if cfg is not None:
        head["config"] = cfg.serialized()
    return head


def _emit(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _require_solver_params(cfg: RunConfig):
    if abs(cfg.a) < MIN_RING_RADIUS:
        raise ConfigError(f"|a| must be at least {MIN_RING_RADIUS} for the solver; use 'sommerfeld' for a = 0")


def _run_spectrum(cfg: RunConfig):
    return point_spectrum(cfg.params, cfg.kappa, E_window=cfg.E_window, max_branches=cfg.branches,
                          max_eigenvalues=cfg.max_eigenvalues, override=cfg.override, rel_tol=cfg.rel_tol,
                          abs_tol=cfg.abs_tol, E_step=cfg.E_step, threads=cfg.threads)


def _conditions_dict(cond) -> dict:
    return {"cond1": cond.cond1, "cond2": cond.cond2, "threshold": cond.threshold}


def spectrum_document(cfg: RunConfig, report) -> dict:
    doc = _header("spectrum", cfg)
    scan = report.scan
    doc.update({
        "params": {"a": report.params.a, "gamma": report.params.gamma},
        "channels": list(report.channels),
        "conditions": _conditions_dict(report.conditions),
        "overridden": report.overridden,
        "eigenvalues": [{"E": p.E, "lambda": p.lam, "kappa": p.kappa, "n_theta": p.n_theta,
                         "winding": p.winding, "residuals": list(p.residuals)} for p in report.eigenpairs],
        "symmetry_defect": report.symmetry_defect,
        "gap_ok": report.gap_ok,
        "scan_metadata": {
            "E_window": list(scan.E_window), "E_step": scan.E_step, "grid_points": scan.grid_points,
            "evaluations": scan.evaluations, "refinements": scan.refinements,
            "failures": [{"kappa": k, "n_theta": n, "E": E, "error": err} for k, n, E, err in scan.failures],
            "rel_tol": scan.rel_tol, "abs_tol": scan.abs_tol,
            "R_infinity": "max(50, 30/k + 2|gamma|/k^2), k = sqrt(1-E^2)", "R_infinity_scale": scan.r_infinity_scale,
        },
        "sommerfeld_comparison": [r._asdict() for r in sommerfeld_comparison(report.params, report)],
    })
    return doc


def cmd_spectrum(args) -> int:
    cfg = build_config(args)
    _require_solver_params(cfg)
    report = _run_spectrum(cfg)
    _emit(to_json(spectrum_document(cfg, report)) + "\n", args.output)
    if not report.eigenpairs and not cfg.override:
        c = report.conditions
        why = ("sufficient conditions fail "
               f"(2|a| < 1: {c.cond1}; gamma < {c.threshold:.6g}: {c.cond2}); pass --override to search anyway"
               if not (c.cond1 and c.cond2) else "no eigenvalue found in the window")
        print(f"empty spectrum: {why}", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_groundstate(args) -> int:
    from .wavefunction import normalize, reconstruct, marginal_density

    cfg = build_config(args)
    _require_solver_params(cfg)
    report = _run_spectrum(cfg)
    if not report.eigenpairs:
        print("empty spectrum: no state to reconstruct", file=sys.stderr)
        return EXIT_EMPTY if not cfg.override else EXIT_ERROR
    # putative ground state: smallest |E|, the positive member of a symmetric pair first
    pair = min(report.eigenpairs, key=lambda p: (abs(p.E), -p.E, p.kappa, p.n_theta))
    state = normalize(reconstruct(pair, cfg.params, n_r=cfg.r_nodes, n_theta=cfg.theta_nodes,
                                  rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol))
    density = marginal_density(state)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "density", "lnR", "Omega"])
    for r, d, R, om in zip(state.r_nodes, density, state.R, state.Omega):
        lnR = math.log(R) if R > 0 else -math.inf
        writer.writerow([_format_number(float(r)), _format_number(float(d)), _format_number(lnR),
                         _format_number(float(om))])
    _emit(buf.getvalue(), args.csv)
    doc = _header("groundstate", cfg)
    doc.update({
        "E": pair.E, "lambda": pair.lam, "kappa": pair.kappa, "n_theta": pair.n_theta, "winding": pair.winding,
        "label": "putative ground state (smallest |E| found)",
        "norm": state.norm, "sheet_weights": {"w_minus": state.sheet_weights[0], "w_plus": state.sheet_weights[1]},
        "underflow": state.underflow, "rows": len(state.r_nodes),
    })
    _emit(to_json(doc) + "\n", args.output)
    return EXIT_OK


def cmd_fields(args) -> int:
    cfg = build_config(args)
    samples = field_grid(cfg.r_range, cfg.theta_range, cfg.resolution, cfg.params, guard=cfg.guard,
                         current=cfg.current)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "theta", "sheet", "phi_el", "E_r", "E_z", "B_r", "B_z"])
    for s in samples:
        if s is None:
            continue
        writer.writerow([_format_number(s.point.r), _format_number(s.point.theta), s.sheet,
                         _format_number(s.phi_el), *(_format_number(v) for v in (*s.E_vec, *s.B_vec))])
    _emit(buf.getvalue(), args.csv)
    return EXIT_OK


def cmd_sommerfeld(args, parser) -> int:
    try:
        energy = sommerfeld_energy(args.n, args.kappa_s, args.alpha)
    except InvalidQuantumNumbers as exc:
        parser.error(str(exc))
    print(_format_number(energy))
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = build_config(args)
    cond = check_sufficient_conditions(cfg.params)
    doc = _header("check", None)
    doc.update({"params": {"a": cfg.a, "gamma": cfg.coupling}, **_conditions_dict(cond),
                "max_Z": max_nuclear_charge(cfg.a)})
    _emit(to_json(doc) + "\n", args.output)
    return EXIT_OK if cond.cond1 and cond.cond2 else EXIT_CONDITIONS


def _add_params(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file (or a previous JSON report) providing defaults")
    p.add_argument("--a", type=float, help="ring radius in Compton wavelengths")
    coupling = p.add_mutually_exclusive_group()
    coupling.add_argument("--gamma", type=float, help="coupling eQ/(hbar c)")
    coupling.add_argument("--Z", type=float, help="nuclear charge number; gamma = Z/137.036")
    p.add_argument("--output", "-o", help="JSON output path (default: stdout)")
    p.add_argument("--threads", type=int, help="worker threads (results do not depend on it)")


def _add_solver(p: argparse.ArgumentParser):
    p.add_argument("--kappa", help="comma-separated half-integers, e.g. 0.5,-0.5")
    p.add_argument("--E-window", dest="E_window", help="lo,hi inside (-1, 1)")
    p.add_argument("--E-step", dest="E_step", type=float, help="initial energy grid step")
    p.add_argument("--branches", type=int, help="angular branches per sign of lambda")
    p.add_argument("--max-eigenvalues", dest="max_eigenvalues", type=int)
    p.add_argument("--rtol", dest="rel_tol", type=float)
    p.add_argument("--atol", dest="abs_tol", type=float)
    p.add_argument("--override", action="store_true", help="search even if the sufficient conditions fail")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zgkn-dirac", description="Dirac bound states on the zero-G Kerr-Newman "
                                     "double-sheeted spacetime.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalue search, JSON report")
    _add_params(sp)
    _add_solver(sp)

    gs = sub.add_parser("groundstate", help="putative ground state profile (CSV) and summary (JSON)")
    _add_params(gs)
    _add_solver(gs)
    gs.add_argument("--r-nodes", dest="r_nodes", type=int, help="log-spaced |r| nodes per sheet (default 12001)")
    gs.add_argument("--theta-nodes", dest="theta_nodes", type=int)
    gs.add_argument("--csv", help="profile CSV path (default: stdout)")

    fp = sub.add_parser("fields", help="Appell field grid (CSV)")
    _add_params(fp)
    fp.add_argument("--r-range", dest="r_range", help="lo,hi")
    fp.add_argument("--theta-range", dest="theta_range", help="lo,hi")
    fp.add_argument("--resolution", help="n_r,n_theta")
    fp.add_argument("--guard", type=float, help="cells with |rho| below this are skipped")
    fp.add_argument("--current", type=float, help="independent ring current I")
    fp.add_argument("--csv", help="CSV path (default: stdout)")

    sm = sub.add_parser("sommerfeld", help="Dirac-Coulomb level from Sommerfeld's formula")
    sm.add_argument("n", type=int)
    sm.add_argument("kappa_s", type=int)
    sm.add_argument("--alpha", type=float, default=ALPHA_S)

    ck = sub.add_parser("check", help="sufficient conditions for a nonempty point spectrum")
    _add_params(ck)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "spectrum":
            return cmd_spectrum(args)
        if args.command == "groundstate":
            return cmd_groundstate(args)
        if args.command == "fields":
            return cmd_fields(args)
        if args.command == "sommerfeld":
            return cmd_sommerfeld(args, parser)
        return cmd_check(args)
    except (ZgknError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
