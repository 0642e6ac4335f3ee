"""Command-line front end.

Subcommands: `bmax`, `angles`, `scan`, `surface`, `oracle-check`.  Machine
output (JSON or CSV) is deterministic: identical inputs and flags produce
byte-identical files.  Exit codes: 0 success, 2 input/validation error,
3 state valid but not X-structured, 4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .angles import AngleSettings, optimal_settings, settings_set2
from .chsh import (
    Region,
    bell_function,
    bmax_x,
    horodecki_bmax,
    sym3_eigenvalues,
    x_state_eigenvalues,
)
from .dynamics import (
    EWLParams,
    ExponentialModel,
    GridTooCoarse,
    LorentzianModel,
    TabulatedModel,
    crossing_roots,
    ewl_state,
    scan_events,
    time_scan,
)
from .oracle import BudgetExceeded, OracleConfig, brute_force_bmax, certify_settings
from .states import (
    DEFAULT_OFF_X_TOL,
    NotXStructured,
    StateValidationError,
    as_x_state,
    normalize_direction,
    pauli_correlation_matrix,
    validate_density_matrix,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NOT_X = 3
EXIT_ORACLE_MISMATCH = 4

_DEG = 180.0 / math.pi


class InputError(ValueError):
    pass


def fmt9(v: float) -> str:
    """9 significant digits; lowercase scientific when |v| < 1e-4 or >= 1e6."""
    v = float(v)
    if v == 0.0:
        v = 0.0  # normalize -0.0
    if v != 0.0 and (abs(v) < 1e-4 or abs(v) >= 1e6):
        return f"{v:.8e}"
    return f"{v:.9g}"


def _load_density(path: str, off_x_tol_flag):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "rho" not in doc:
        raise InputError(f"{path} must be an object with a 'rho' key")
    raw = doc["rho"]
    try:
        arr = np.array(
            [[complex(cell[0], cell[1]) for cell in row] for row in raw],
            dtype=complex,
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(
            f"'rho' must be a 4x4 array of [re, im] pairs: {exc}"
        ) from exc
    if arr.shape != (4, 4):
        raise InputError(f"'rho' must be 4x4, got {arr.shape}")
    rho = validate_density_matrix(arr)
    off_x_tol = DEFAULT_OFF_X_TOL
    if "off_x_tol" in doc:
        off_x_tol = float(doc["off_x_tol"])
    if off_x_tol_flag is not None:
        off_x_tol = float(off_x_tol_flag)
    return rho, off_x_tol


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(doc: dict, output) -> None:
    _emit(json.dumps(doc, indent=2) + "\n", output)


def _angles_doc(settings) -> dict:
    return {
        "set": int(settings.set_id),
        "theta": list(settings.thetas),
        "phi": list(settings.phis),
    }


def _angle_display(value: float, degrees: bool) -> str:
    return fmt9(value * _DEG if degrees else value)


def cmd_bmax(args) -> int:
    rho, off_x_tol = _load_density(args.input, args.off_x_tol)
    b_horodecki = horodecki_bmax(rho)
    try:
        x = as_x_state(rho, off_x_tol)
    except NotXStructured as exc:
        t = pauli_correlation_matrix(rho).t
        u_desc = sym3_eigenvalues(t.T @ t)
        doc = {
            "version": __version__,
            "bmax": b_horodecki,
            "u": [u_desc[0], u_desc[1], u_desc[2]],
            "region": None,
            "tie": False,
            "violates": b_horodecki > 2.0,
        }
        if args.format == "json":
            _emit_json(doc, args.output)
        else:
            _emit(
                f"state is not X-structured ({exc}); Horodecki value only\n"
                f"B_max = {fmt9(b_horodecki)}\n"
                f"u (sorted) = ({fmt9(u_desc[0])}, {fmt9(u_desc[1])}, {fmt9(u_desc[2])})\n"
                f"violates CHSH (B_max > 2): {'yes' if b_horodecki > 2 else 'no'}\n",
                args.output,
            )
        return EXIT_NOT_X
    u = x_state_eigenvalues(x)
    b = bmax_x(x)
    doc = {
        "version": __version__,
        "bmax": b,
        "u": [u.u1, u.u2, u.u3],
        "region": int(u.region),
        "tie": u.tie,
        "violates": b > 2.0,
    }
    if args.format == "json":
        _emit_json(doc, args.output)
    else:
        tie_note = " (tie)" if u.tie else ""
        _emit(
            f"B_max = {fmt9(b)}\n"
            f"u = ({fmt9(u.u1)}, {fmt9(u.u2)}, {fmt9(u.u3)})   "
            f"region = {int(u.region)}{tie_note}\n"
            f"violates CHSH (B_max > 2): {'yes' if b > 2 else 'no'}\n",
            args.output,
        )
    return EXIT_OK


def cmd_angles(args) -> int:
    rho, off_x_tol = _load_density(args.input, args.off_x_tol)
    try:
        x = as_x_state(rho, off_x_tol)
    except NotXStructured as exc:
        print(f"error: state is not X-structured ({exc})", file=sys.stderr)
        return EXIT_NOT_X
    settings, u = optimal_settings(x)
    certified = bell_function(rho, settings.bell_settings())
    doc = _angles_doc(settings)
    doc["tie"] = u.tie
    doc["bell_value"] = certified
    doc["violates"] = certified > 2.0
    doc["version"] = __version__
    alternatives = []
    if u.tie:
        alt = settings_set2(x)
        alt_value = bell_function(rho, alt.bell_settings())
        alt_doc = _angles_doc(alt)
        alt_doc["bell_value"] = alt_value
        alternatives.append((alt, alt_value))
        doc["tied_alternative"] = alt_doc
    else:
        doc["tied_alternative"] = None
    if args.format == "json":
        _emit_json(doc, args.output)
        return EXIT_OK
    unit = "deg" if args.degrees else "rad"
    lines = [
        f"active set: {int(settings.set_id)}   tie: {'yes' if u.tie else 'no'}",
        "theta ({}) = ({})".format(
            unit, ", ".join(_angle_display(v, args.degrees) for v in settings.thetas)
        ),
        "phi   ({}) = ({})".format(
            unit, ", ".join(_angle_display(v, args.degrees) for v in settings.phis)
        ),
        f"B at settings = {fmt9(certified)}",
    ]
    for alt, alt_value in alternatives:
        lines.append(f"tied set {int(alt.set_id)}:")
        lines.append("theta ({}) = ({})".format(
            unit, ", ".join(_angle_display(v, args.degrees) for v in alt.thetas)
        ))
        lines.append("phi   ({}) = ({})".format(
            unit, ", ".join(_angle_display(v, args.degrees) for v in alt.phis)
        ))
        lines.append(f"B at settings = {fmt9(alt_value)}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _parse_qmodel(spec: str):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "exp":
            return ExponentialModel(gamma=float(rest))
        if kind == "lorentz":
            lam, gamma0 = (float(v) for v in rest.split(","))
            return LorentzianModel(lam=lam, gamma0=gamma0)
        if kind == "table":
            return TabulatedModel.from_csv(rest)
    except (ValueError, OSError) as exc:
        raise InputError(f"bad --qmodel {spec!r}: {exc}") from exc
    raise InputError(
        f"unknown --qmodel kind {kind!r} (use exp:GAMMA, lorentz:LAMBDA,GAMMA0 or table:PATH)"
    )


def _parse_ewl(spec: str) -> EWLParams:
    try:
        alpha2, r, delta = (float(v) for v in spec.split(","))
        return EWLParams(alpha2=alpha2, r=r, delta=delta)
    except ValueError as exc:
        raise InputError(f"bad --ewl {spec!r}: {exc}") from exc


_SCAN_COLUMNS = (
    "t,q2,u1,u2,u3,B1,B2,bmax,active_set,"
    "theta1,theta1p,theta2,theta2p,phi1,phi1p,phi2,phi2p"
)


def _branch_values(u) -> tuple[float, float]:
    b1 = 2.0 * math.sqrt(max(0.0, u.u1 + u.u2))
    b2 = 2.0 * math.sqrt(max(0.0, u.u1 + u.u3))
    return b1, b2


def cmd_scan(args) -> int:
    if (args.ewl is None) == (args.input is None):
        raise InputError("provide exactly one of --ewl or --input")
    if args.samples < 2:
        raise InputError("--samples must be >= 2")
    if args.tmax <= 0:
        raise InputError("--tmax must be > 0")
    if args.ewl is not None:
        x0 = ewl_state(_parse_ewl(args.ewl))
    else:
        rho, off_x_tol = _load_density(args.input, args.off_x_tol)
        try:
            x0 = as_x_state(rho, off_x_tol)
        except NotXStructured as exc:
            print(f"error: state is not X-structured ({exc})", file=sys.stderr)
            return EXIT_NOT_X
    model = _parse_qmodel(args.qmodel)
    t_grid = np.linspace(0.0, args.tmax, args.samples)
    caught: list[str] = []
    with warnings.catch_warnings(record=True) as wlist:
        warnings.simplefilter("always", GridTooCoarse)
        records = time_scan(x0, model, t_grid)
    for w in wlist:
        if issubclass(w.category, GridTooCoarse):
            caught.append(str(w.message))
    events = scan_events(records)

    if args.format == "json":
        rows = []
        for rec in records:
            b1, b2 = _branch_values(rec.u)
            rows.append({
                "t": rec.t, "q2": rec.q2,
                "u1": rec.u.u1, "u2": rec.u.u2, "u3": rec.u.u3,
                "B1": b1, "B2": b2,
                "bmax": rec.bmax,
                "active_set": int(rec.active_set),
                "theta": list(rec.settings.thetas),
                "phi": list(rec.settings.phis),
            })
        doc = {
            "version": __version__,
            "rows": rows,
            "events": [
                {"kind": e.kind.value, "t": e.t, "q2": e.q2} for e in events
            ],
            "warnings": caught,
        }
        _emit_json(doc, args.output)
        return EXIT_OK
    lines = [f"# bellopt scan {__version__}", _SCAN_COLUMNS]
    for rec in records:
        b1, b2 = _branch_values(rec.u)
        numeric = [rec.t, rec.q2, rec.u.u1, rec.u.u2, rec.u.u3, b1, b2, rec.bmax]
        cells = [fmt9(v) for v in numeric] + [str(int(rec.active_set))]
        cells += [fmt9(v) for v in (*rec.settings.thetas, *rec.settings.phis)]
        lines.append(",".join(cells))
    for e in events:
        lines.append(f"# event,{e.kind.value},{fmt9(e.t)},{fmt9(e.q2)}")
    for msg in caught:
        lines.append(f"# warning,GridTooCoarse,{msg.replace(',', ';')}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_surface(args) -> int:
    try:
        n_alpha, n_r = (int(v) for v in args.grid.split(","))
    except ValueError as exc:
        raise InputError(f"bad --grid {args.grid!r}: {exc}") from exc
    if n_alpha < 2 or n_r < 2:
        raise InputError("--grid dimensions must be >= 2")
    lines = [f"# bellopt surface {__version__}", "alpha2,r,x_root1,x_root2"]
    for i in range(n_alpha):
        alpha2 = i / n_alpha
        for j in range(n_r):
            r = (j + 1) / n_r
            roots = crossing_roots(EWLParams(alpha2=alpha2, r=r))
            cells = [fmt9(alpha2), fmt9(r)]
            cells.append(fmt9(roots[0]) if len(roots) > 0 else "")
            cells.append(fmt9(roots[1]) if len(roots) > 1 else "")
            lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    rho, off_x_tol = _load_density(args.input, args.off_x_tol)
    cfg = OracleConfig(
        grid_n=args.grid_n, refine_iters=args.refine,
        restarts=args.restarts, seed=args.seed,
    )
    is_x = True
    try:
        x = as_x_state(rho, off_x_tol)
        analytic = bmax_x(x)
        settings, _ = optimal_settings(x)
    except NotXStructured:
        is_x = False
        analytic = horodecki_bmax(rho)
        settings = None
    result = brute_force_bmax(rho, cfg)
    difference = result.bmax_est - analytic
    if settings is None:
        # certify the oracle's own settings when no closed form applies
        normalized = [normalize_direction(t, p)
                      for t, p in zip(result.thetas, result.phis)]
        settings = AngleSettings(
            *(pair[0] for pair in normalized),
            *(pair[1] for pair in normalized),
            set_id=Region.SET1,
        )
    margin = certify_settings(rho, settings, cfg)
    doc = {
        "version": __version__,
        "is_x": is_x,
        "analytic_bmax": analytic,
        "oracle_bmax": result.bmax_est,
        "difference": difference,
        "certificate_margin": margin,
        "evaluations": result.evaluations,
    }
    if args.format == "json":
        _emit_json(doc, args.output)
    else:
        _emit(
            f"analytic B_max = {fmt9(analytic)}"
            f"{' (closed form)' if is_x else ' (Horodecki, not X-structured)'}\n"
            f"oracle  B_max = {fmt9(result.bmax_est)}\n"
            f"difference    = {fmt9(difference)}\n"
            f"certificate margin = {fmt9(margin)}\n"
            f"evaluations = {result.evaluations}\n",
            args.output,
        )
    if abs(difference) > 1e-3:
        return EXIT_ORACLE_MISMATCH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellopt",
        description=(
            "Maximum CHSH-Bell violation, explicit optimal measurement "
            "settings, and their open-system dynamics for two-qubit X states."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, formats=("json", "csv"), default=None):
        p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--format", choices=formats, default=default,
                       help="machine output format (default: human-readable text)")
        p.add_argument("--degrees", action="store_true",
                       help="display angles in degrees (file formats stay in radians)")

    def add_state(p):
        p.add_argument("--input", metavar="PATH", required=True,
                       help="density-matrix JSON: {\"rho\": 4x4 of [re, im]}")
        p.add_argument("--off-x-tol", type=float, default=None, metavar="FLOAT",
                       help="tolerance for entries outside the X pattern (default 1e-9)")

    p = sub.add_parser("bmax", help="maximum Bell value and violation verdict")
    add_state(p)
    add_io(p, formats=("json",))
    p.set_defaults(func=cmd_bmax)

    p = sub.add_parser("angles", help="optimal measurement settings for an X state")
    add_state(p)
    add_io(p, formats=("json",))
    p.set_defaults(func=cmd_angles)

    p = sub.add_parser("scan", help="trajectory scan with jump/violation events")
    p.add_argument("--input", metavar="PATH",
                   help="density-matrix JSON for the initial state")
    p.add_argument("--off-x-tol", type=float, default=None, metavar="FLOAT")
    p.add_argument("--ewl", metavar="ALPHA2,R,DELTA",
                   help="inline initial state: purity-r mixture of a Bell-like state")
    p.add_argument("--qmodel", required=True,
                   metavar="exp:GAMMA | lorentz:LAMBDA,GAMMA0 | table:PATH")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    add_io(p, formats=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("surface",
                       help="u2 = u3 crossing roots over an (alpha^2, r) grid")
    p.add_argument("--grid", default="50,50", metavar="NA,NR",
                   help="alpha^2 = i/NA (i = 0..NA-1), r = (j+1)/NR (j = 0..NR-1)")
    add_io(p, formats=("csv",), default="csv")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("oracle-check",
                       help="compare closed forms against the brute-force oracle")
    add_state(p)
    p.add_argument("--grid-n", type=int, default=8)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--refine", type=int, default=500)
    p.add_argument("--seed", type=int, default=0, metavar="UINT")
    add_io(p, formats=("json",))
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, StateValidationError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main_entry() -> None:
    raise SystemExit(main())
