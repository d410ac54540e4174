"""Command-line front end: parameter sweeps, closed forms, ray-map profiles,
diffraction studies, observables and the validation suite, emitted as CSV or
JSON.

Exit codes: 0 success, 1 usage error, 2 numerical nonconvergence or failed
validation, 3 I/O error.  ``FOCALFLUC_THREADS`` caps sweep parallelism
(0 or unset = auto); output ordering and bytes are identical regardless of
thread count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

from . import fields, observables
from .diffraction import (
    DiffractionSetup,
    diffraction_residual,
    geometric_wave,
    residual_scaling_exponent,
    strip_scattered_wave,
)
from .geometry import TWO_RAY_LIMIT, FocalPoint, MirrorGeometry, incident_map
from .quadrature import QuadratureNonconvergenceError

__all__ = [
    "SweepSpec",
    "RunRecord",
    "SCAN_COLUMNS",
    "cmd_scan",
    "cmd_exact",
    "cmd_profile",
    "cmd_diffraction",
    "cmd_observables",
    "cmd_validate",
    "main",
]

SCAN_COLUMNS = ("theta0", "gamma", "a", "phi2", "e2", "phi2_scaled",
                "e2_scaled", "method", "families", "status", "err_phi2",
                "err_e2")


@dataclass(frozen=True)
class SweepSpec:
    """A gamma sweep at fixed mirror size."""

    theta0: float
    gamma_min: float = 0.0
    gamma_max: float = math.pi
    steps: int = 101
    a: float = 1.0
    method: str = "series_window"
    xi0: float = 0.2
    tol: float = 1e-10
    b: float = 1e4

    def __post_init__(self):
        if not (0.0 <= self.gamma_min < self.gamma_max <= math.pi):
            raise ValueError("need 0 <= gamma_min < gamma_max <= pi")
        if self.steps < 2:
            raise ValueError("need at least two sweep steps")
        if not 0.0 < self.xi0 < 0.5:
            raise ValueError("window half-width must lie in (0, 0.5)")
        if self.method not in ("series_window", "by_parts", "both"):
            raise ValueError(f"unknown method {self.method!r}")

    def gammas(self) -> list[float]:
        span = self.gamma_max - self.gamma_min
        return [self.gamma_min + span * i / (self.steps - 1)
                for i in range(self.steps)]


@dataclass(frozen=True)
class RunRecord:
    """One sweep output row."""

    theta0: float
    gamma: float
    a: float
    phi2: Optional[float]
    e2: Optional[float]
    phi2_scaled: Optional[float]
    e2_scaled: Optional[float]
    method: str
    families: int
    status: str
    err_phi2: Optional[float]
    err_e2: Optional[float]

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in SCAN_COLUMNS}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".17g")
    return str(value)


def _none_if_nan(x: float) -> Optional[float]:
    return None if math.isnan(x) else x


def _max_workers() -> int:
    raw = os.environ.get("FOCALFLUC_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


def _write_rows(rows: Sequence[dict], columns: Sequence[str], out_path: str,
                fmt: str) -> None:
    if fmt == "json":
        payload = json.dumps([{k: _none_if_nan(v) if isinstance(v, float) else v
                               for k, v in row.items()} for row in rows],
                             indent=2)
        _write_text(payload + "\n", out_path)
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    _write_text(buf.getvalue(), out_path)


def _write_text(text: str, out_path: str) -> None:
    if out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _evaluate_point(spec: SweepSpec, gamma: float) -> RunRecord:
    geom = MirrorGeometry(spec.theta0, spec.b)
    point = FocalPoint(spec.a, gamma)
    rp = fields.phi_squared(geom, point, spec.method, xi0=spec.xi0, tol=spec.tol)
    re = fields.e_squared(geom, point, spec.method, xi0=spec.xi0, tol=spec.tol)
    if rp.status == "edge_singular":
        return RunRecord(spec.theta0, gamma, spec.a, None, None, None, None,
                         spec.method, rp.families_used, rp.status, None, None)
    return RunRecord(spec.theta0, gamma, spec.a,
                     rp.value, re.value, rp.scaled, re.scaled,
                     spec.method, rp.families_used, rp.status,
                     rp.error_estimate, re.error_estimate)


def cmd_scan(spec: SweepSpec, out_path: str = "-", fmt: str = "csv") -> list[RunRecord]:
    """Sweep gamma and emit one row per grid point, in grid order."""
    gammas = spec.gammas()
    workers = _max_workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda g: _evaluate_point(spec, g), gammas))
    else:
        records = [_evaluate_point(spec, g) for g in gammas]
    _write_rows([r.as_dict() for r in records], SCAN_COLUMNS, out_path, fmt)
    return records


def cmd_exact(theta0_min: float = 0.05,
              theta0_max: float = TWO_RAY_LIMIT - 0.05,
              steps: int = 101, a: float = 1.0,
              out_path: str = "-", fmt: str = "csv") -> list[RunRecord]:
    """Closed-form perpendicular-direction values over a mirror-size grid."""
    if not 0.0 < theta0_min < theta0_max < TWO_RAY_LIMIT:
        raise ValueError("mirror-size grid must lie inside (0, 2*pi/3)")
    if theta0_min < 0.1:
        print("note: values grow without bound as theta0 -> 0", file=sys.stderr)
    if theta0_max > TWO_RAY_LIMIT - 0.1:
        print("note: the two-ray model ends at theta0 = 2*pi/3",
              file=sys.stderr)
    records = []
    half_pi = 0.5 * math.pi
    for i in range(steps):
        t0 = theta0_min + (theta0_max - theta0_min) * i / (steps - 1)
        geom = MirrorGeometry(t0)
        rp = fields.phi_squared_perp_exact(geom, a)
        re = fields.e_squared_perp_exact(geom, a)
        records.append(RunRecord(t0, half_pi, a, rp.value, re.value,
                                 rp.scaled, re.scaled, "exact", 1, "ok",
                                 0.0, 0.0))
    _write_rows([r.as_dict() for r in records], SCAN_COLUMNS, out_path, fmt)
    return records


def cmd_profile(gamma_list: Sequence[float],
                theta_min: float = -TWO_RAY_LIMIT,
                theta_max: float = TWO_RAY_LIMIT,
                steps: int = 201,
                out_path: str = "-", fmt: str = "csv") -> list[dict]:
    """Tabulate the incident-angle map over reflection angles, one row per
    (gamma, theta_prime)."""
    rows = []
    for g in gamma_list:
        for i in range(steps):
            t = theta_min + (theta_max - theta_min) * i / (steps - 1)
            rows.append({"gamma": g, "theta_prime": t,
                         "f": incident_map(t, g)})
    _write_rows(rows, ("gamma", "theta_prime", "f"), out_path, fmt)
    return rows


def cmd_diffraction(k: float = 200.0, theta: float = 0.3, b: float = 1.0,
                    y0_list: Sequence[float] = (2.0, 4.0, 8.0, 16.0, 32.0, 64.0),
                    tol: float = 1e-5,
                    out_path: str = "-", fmt: str = "csv") -> dict:
    """Strip-wave magnitudes, residuals and the fitted width-scaling
    exponent for a list of strip half-widths."""
    rows = []
    for y0 in y0_list:
        setup = DiffractionSetup(k, theta, b, y0)
        phi = strip_scattered_wave(setup, tol)
        resid = diffraction_residual(setup, tol)
        row = {"k": k, "theta": theta, "b": b, "y0": y0,
               "phi_re": phi.real, "phi_im": phi.imag, "phi_abs": abs(phi),
               "residual_re": resid.real, "residual_im": resid.imag,
               "residual_abs": abs(resid)}
        try:
            gw = geometric_wave(setup)
            row["delta_vs_geometric"] = abs(phi - gw)
        except Exception:
            row["delta_vs_geometric"] = None
        rows.append(row)
    exponent = residual_scaling_exponent(DiffractionSetup(k, theta, b, y0_list[0]),
                                         list(y0_list), tol)
    result = {"rows": rows, "exponent": exponent}
    if fmt == "json":
        _write_text(json.dumps(result, indent=2) + "\n", out_path)
    else:
        cols = ("k", "theta", "b", "y0", "phi_re", "phi_im", "phi_abs",
                "residual_re", "residual_im", "residual_abs",
                "delta_vs_geometric")
        _write_rows(rows, cols, out_path, fmt)
        print(f"residual_scaling_exponent = {exponent:.6g}", file=sys.stderr)
    return result


def cmd_observables(lambda_coeff: Optional[float] = None,
                    from_theta0: Optional[float] = None,
                    a_microns: float = 1.0, t_millis: float = 1.0,
                    polarizability_ratio: float = 1.0, mass_ratio: float = 1.0,
                    out_path: str = "-", fmt: str = "csv") -> dict:
    """Deflection, phase shift and trap temperature for one configuration.

    The field coefficient comes either directly (``lambda_coeff``) or from
    the closed-form perpendicular field of a mirror (``from_theta0``).
    """
    if (lambda_coeff is None) == (from_theta0 is None):
        raise ValueError("give exactly one of lambda_coeff / from_theta0")
    if from_theta0 is not None:
        geom = MirrorGeometry(from_theta0)
        lambda_coeff = observables.lambda_coefficient(
            fields.e_squared_perp_exact(geom, 1.0).scaled)
    atom = observables.AtomParams(polarizability_ratio, mass_ratio)
    inputs = observables.ObservableInputs(lambda_coeff, a_microns, t_millis)
    row = {"lambda_coeff": lambda_coeff, "a_microns": a_microns,
           "t_millis": t_millis, "polarizability_ratio": polarizability_ratio,
           "mass_ratio": mass_ratio,
           "deflection": observables.beam_deflection(inputs, atom),
           "phase_shift": observables.interferometer_phase(inputs, atom)}
    if lambda_coeff > 0.0:
        row["trap_temperature_k"] = observables.trap_temperature(inputs, atom)
    else:
        row["trap_temperature_k"] = None  # no trap without a positive coefficient
    cols = ("lambda_coeff", "a_microns", "t_millis", "polarizability_ratio",
            "mass_ratio", "deflection", "phase_shift", "trap_temperature_k")
    _write_rows([row], cols, out_path, fmt)
    return row


def cmd_validate(tol_rel: float = 1e-6, out_path: str = "-",
                 fmt: str = "csv") -> list:
    """Run the cross-check suites and write one pass/fail row per check."""
    checks = fields.run_validation_suites(tol_rel=tol_rel)
    rows = [{"suite": c.suite, "case": c.case, "measured": c.measured,
             "threshold": c.threshold, "passed": c.passed} for c in checks]
    _write_rows(rows, ("suite", "case", "measured", "threshold", "passed"),
                out_path, fmt)
    n_bad = sum(1 for c in checks if not c.passed)
    print(f"validation: {len(checks) - n_bad}/{len(checks)} checks passed",
          file=sys.stderr)
    return checks


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1 (argparse default is 2, which we reserve for
    # numerical nonconvergence)
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {line!r}")
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _pick(args, config: dict, name: str, cast, default):
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in config:
        return cast(config[name])
    return default


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="focalfluc",
                     description="Vacuum-fluctuation fields near a parabolic "
                                 "cylinder's focal line")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", default="-",
                       help="output path ('-' for stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--config", help="key=value defaults file")

    p = sub.add_parser("scan", help="sweep gamma at fixed mirror size")
    p.add_argument("--theta0", type=float)
    p.add_argument("--gamma-min", type=float, dest="gamma_min")
    p.add_argument("--gamma-max", type=float, dest="gamma_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--method", choices=("series_window", "by_parts", "both"))
    p.add_argument("--xi0", type=float)
    p.add_argument("--tol", type=float)
    common(p)

    p = sub.add_parser("exact", help="closed forms at the perpendicular direction")
    p.add_argument("--theta0-min", type=float, dest="theta0_min")
    p.add_argument("--theta0-max", type=float, dest="theta0_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--a", type=float)
    common(p)

    p = sub.add_parser("profile", help="tabulate the incident-angle map")
    p.add_argument("--gamma", dest="gamma_list",
                   help="comma-separated gamma values")
    p.add_argument("--theta-min", type=float, dest="theta_min")
    p.add_argument("--theta-max", type=float, dest="theta_max")
    p.add_argument("--steps", type=int)
    common(p)

    p = sub.add_parser("diffraction", help="strip-wave study and width scaling")
    p.add_argument("--k", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--y0-list", dest="y0_list",
                   help="comma-separated strip half-widths")
    p.add_argument("--tol", type=float)
    common(p)

    p = sub.add_parser("observables", help="atom observables from the field "
                                           "coefficient")
    p.add_argument("--lambda-coeff", type=float, dest="lambda_coeff")
    p.add_argument("--from-theta0", type=float, dest="from_theta0")
    p.add_argument("--a-microns", type=float, dest="a_microns")
    p.add_argument("--t-millis", type=float, dest="t_millis")
    p.add_argument("--polarizability-ratio", type=float,
                   dest="polarizability_ratio")
    p.add_argument("--mass-ratio", type=float, dest="mass_ratio")
    common(p)

    p = sub.add_parser("validate", help="run the cross-check suites")
    p.add_argument("--tol-rel", type=float, dest="tol_rel")
    common(p)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _load_config(args.config)
        out, fmt = args.output, args.format
        if args.command == "scan":
            theta0 = _pick(args, config, "theta0", float, None)
            if theta0 is None:
                print("scan requires --theta0", file=sys.stderr)
                return 1
            spec = SweepSpec(
                theta0=theta0,
                gamma_min=_pick(args, config, "gamma_min", float, 0.0),
                gamma_max=_pick(args, config, "gamma_max", float, math.pi),
                steps=_pick(args, config, "steps", int, 101),
                a=_pick(args, config, "a", float, 1.0),
                method=_pick(args, config, "method", str, "series_window"),
                xi0=_pick(args, config, "xi0", float, 0.2),
                tol=_pick(args, config, "tol", float, 1e-10),
                b=_pick(args, config, "b", float, 1e4),
            )
            cmd_scan(spec, out, fmt)
        elif args.command == "exact":
            cmd_exact(
                theta0_min=_pick(args, config, "theta0_min", float, 0.05),
                theta0_max=_pick(args, config, "theta0_max", float,
                                 TWO_RAY_LIMIT - 0.05),
                steps=_pick(args, config, "steps", int, 101),
                a=_pick(args, config, "a", float, 1.0),
                out_path=out, fmt=fmt)
        elif args.command == "profile":
            raw = _pick(args, config, "gamma_list", str,
                        "0.0,0.7853981633974483,1.5707963267948966")
            cmd_profile(
                gamma_list=_float_list(raw),
                theta_min=_pick(args, config, "theta_min", float,
                                -TWO_RAY_LIMIT),
                theta_max=_pick(args, config, "theta_max", float,
                                TWO_RAY_LIMIT),
                steps=_pick(args, config, "steps", int, 201),
                out_path=out, fmt=fmt)
        elif args.command == "diffraction":
            raw = _pick(args, config, "y0_list", str, "2,4,8,16,32,64")
            cmd_diffraction(
                k=_pick(args, config, "k", float, 200.0),
                theta=_pick(args, config, "theta", float, 0.3),
                b=_pick(args, config, "b", float, 1.0),
                y0_list=_float_list(raw),
                tol=_pick(args, config, "tol", float, 1e-5),
                out_path=out, fmt=fmt)
        elif args.command == "observables":
            cmd_observables(
                lambda_coeff=_pick(args, config, "lambda_coeff", float, None),
                from_theta0=_pick(args, config, "from_theta0", float, None),
                a_microns=_pick(args, config, "a_microns", float, 1.0),
                t_millis=_pick(args, config, "t_millis", float, 1.0),
                polarizability_ratio=_pick(args, config,
                                           "polarizability_ratio", float, 1.0),
                mass_ratio=_pick(args, config, "mass_ratio", float, 1.0),
                out_path=out, fmt=fmt)
        elif args.command == "validate":
            checks = cmd_validate(
                tol_rel=_pick(args, config, "tol_rel", float, 1e-6),
                out_path=out, fmt=fmt)
            if any(not c.passed for c in checks):
                return 2
    except QuadratureNonconvergenceError as exc:
        print(f"numerical nonconvergence: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
