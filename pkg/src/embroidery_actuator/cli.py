"""Command-line interface.

Subcommands::

    predict      pressure sweep -> curve CSV + JSON metadata sidecar
    transition   sleeve-fill radius and pressure for a design
    fit          calibrate (g, p0) against a measured pairs CSV
    fit-tube     recover tube geometry from (width, transition pressure) targets
    markers      motion-capture CSV -> quasi-static pairs CSV
    sweep        grid over a design parameter, one curve per value + summary

Units at this boundary are kPa, mm, MPa and degrees; computation is SI
internally.  All outputs are deterministic: identical invocations produce
byte-identical files.  Exit codes: 0 success, 1 usage/schema error, 2 a
sweep or prediction finished with at least one failed sample (the curve is
still written, failures marked in the ``status`` column).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence

from .calibration import (
    CalibrationProblem,
    fit_pressure_angle,
    fit_tube_geometry,
)
from .config import ConfigError, load_config
from .core import (
    Beta0Mode,
    DomainError,
    EmbroideryDesign,
    Pattern,
    TubeMaterial,
    sleeve_radius,
)
from .deformation import model_metadata, sweep_curve
from .inflation import inflation_pressure, make_actuator_model
from .mocap import (
    MocapError,
    load_marker_csv,
    load_pairs_csv,
    process_frames,
    write_pairs_csv,
)
from .units import kpa_to_pa, m_to_mm, mm_to_m, mpa_to_pa, pa_to_kpa

# Built-in tube defaults are fitted placeholders (the real tube properties
# are not published); outputs flag them so downstream users know.
DEFAULTS: Dict[str, object] = {
    "pattern": "zigzag",
    "w_mm": 7.0,
    "alpha0_deg": 45.0,
    "stitch_interval_mm": None,
    "orientation_sign": None,
    "l0_mm": 100.0,
    "rf_mm": 1.0,
    "df_mm": 0.5,
    "ge_mpa": 0.6,
    "g_mpa": 1.0,
    "p0_kpa": None,
    "r0_mm": None,
    "beta0_deg": None,
    "beta0_mode": "verbatim-mm",
}

_TUBE_KEYS = ("l0_mm", "rf_mm", "df_mm", "ge_mpa")


class CliError(ValueError):
    """Invalid flag combination or input file content."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("actuator model (units: mm, kPa, MPa, deg)")
    g.add_argument("--config", help="INI config file; explicit flags override it")
    g.add_argument("--pattern", choices=["zigzag", "cross"], help="embroidery pattern")
    g.add_argument("--w-mm", type=float, help="embroidery width [mm]")
    g.add_argument("--alpha-deg", type=float, help="embroidery angle [deg], cross only")
    g.add_argument("--l0-mm", type=float, help="actuator rest length [mm]")
    g.add_argument("--rf-mm", type=float, help="tube outer rest radius [mm]")
    g.add_argument("--df-mm", type=float, help="tube inner rest radius [mm]")
    g.add_argument("--ge-mpa", type=float, help="tube rubber shear modulus [MPa]")
    g.add_argument("--g-mpa", type=float, help="effective actuator shear modulus [MPa]")
    g.add_argument("--p0-kpa", type=float,
                   help="transition pressure [kPa]; derived from the tube when omitted")
    g.add_argument("--r0-mm", type=float,
                   help="sleeve cavity radius [mm]; derived from w and rf when omitted")
    g.add_argument("--beta0-deg", type=float,
                   help="reference braiding angle [deg]; derived when omitted (cross)")
    g.add_argument("--beta0-mode", choices=["verbatim-mm", "sqrt-corrected"],
                   help="braiding-angle formula mode (default verbatim-mm)")
    g.add_argument("--orientation-sign", choices=["auto", "+1", "-1"],
                   help="reported bending sign convention (default: per-pattern auto)")


def _flag_key(key: str) -> str:
    return {"alpha0_deg": "alpha_deg"}.get(key, key)


def _effective_params(args) -> Dict[str, object]:
    """defaults < config file < explicit flags."""
    params = dict(DEFAULTS)
    sources = {k: "default" for k in params}
    if getattr(args, "config", None):
        for key, value in load_config(args.config).items():
            params[key] = value
            sources[key] = "config"
    for key in DEFAULTS:
        flag_attr = _flag_key(key).replace("-", "_")
        value = getattr(args, flag_attr, None)
        if value is not None:
            if key == "orientation_sign":
                value = None if value == "auto" else int(value)
                sources[key] = "flag"
                params[key] = value
            else:
                params[key] = value
                sources[key] = "flag"
    params["_tube_source"] = (
        "fitted placeholders, not measured values"
        if all(sources[k] == "default" for k in _TUBE_KEYS)
        else "user"
    )
    return params


def _build_model(params: Dict[str, object]):
    tube = TubeMaterial(
        l0=mm_to_m(params["l0_mm"]),
        r_f=mm_to_m(params["rf_mm"]),
        d_f=mm_to_m(params["df_mm"]),
        g_e=mpa_to_pa(params["ge_mpa"]),
    )
    pattern = Pattern(params["pattern"])
    design = EmbroideryDesign(
        pattern=pattern,
        w=mm_to_m(params["w_mm"]),
        alpha0=(
            math.radians(params["alpha0_deg"])
            if pattern is Pattern.CROSS and params["alpha0_deg"] is not None
            else None
        ),
        stitch_interval=(
            mm_to_m(params["stitch_interval_mm"])
            if params.get("stitch_interval_mm") is not None
            else None
        ),
        orientation_sign=params["orientation_sign"],
    )
    return make_actuator_model(
        tube,
        design,
        g=mpa_to_pa(params["g_mpa"]),
        p0=kpa_to_pa(params["p0_kpa"]) if params["p0_kpa"] is not None else None,
        r0=mm_to_m(params["r0_mm"]) if params["r0_mm"] is not None else None,
        beta0=math.radians(params["beta0_deg"]) if params["beta0_deg"] is not None else None,
        beta0_mode=Beta0Mode(params["beta0_mode"]),
    )


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _curve_csv_rows(curve) -> List[List[str]]:
    rows = [["pressure_kpa", "theta_deg", "l_mm", "r_mm", "status"]]
    for s in curve.samples:
        if s.status == "ok":
            rows.append([
                f"{s.pressure / 1e3:.9g}",
                f"{math.degrees(s.theta):.9g}",
                f"{s.l * 1e3:.9g}",
                f"{s.r * 1e3:.9g}",
                "ok",
            ])
        else:
            rows.append([f"{s.pressure / 1e3:.9g}", "", "", "", s.status])
    return rows


def _write_curve(path, curve, extra_meta: Dict[str, object]) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(_curve_csv_rows(curve))
    sidecar = str(path)
    sidecar = sidecar[:-4] + ".json" if sidecar.endswith(".csv") else sidecar + ".json"
    meta = dict(curve.metadata)
    meta.update(extra_meta)
    _write_json(sidecar, meta)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_predict(args) -> int:
    params = _effective_params(args)
    model = _build_model(params)
    curve = sweep_curve(
        model,
        p_max=args.p_max_kpa * 1e3,
        step=args.step_kpa * 1e3,
        metadata={"tube_geometry_source": params["_tube_source"]},
    )
    _write_curve(args.out, curve, {"command": "predict"})
    failed = sum(1 for s in curve.samples if s.status != "ok")
    if failed:
        print(f"{failed} of {len(curve.samples)} samples failed; see status column",
              file=sys.stderr)
        return 2
    return 0


def cmd_transition(args) -> int:
    params = _effective_params(args)
    tube = TubeMaterial(
        l0=mm_to_m(params["l0_mm"]),
        r_f=mm_to_m(params["rf_mm"]),
        d_f=mm_to_m(params["df_mm"]),
        g_e=mpa_to_pa(params["ge_mpa"]),
    )
    # queried on the geometry directly so the degenerate w = 0 case works
    r0 = sleeve_radius(mm_to_m(params["w_mm"]), tube.r_f)
    p0 = 0.0 if r0 <= tube.r_f else inflation_pressure(r0, tube)
    payload = {
        "r0_mm": m_to_mm(r0),
        "p0_kpa": pa_to_kpa(p0),
        "tube_geometry_source": params["_tube_source"],
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    print()
    print(f"{'quantity':<10} {'value':>14}")
    print(f"{'r0_mm':<10} {r0 * 1e3:>14.6f}")
    print(f"{'p0_kpa':<10} {p0 / 1e3:>14.6f}")
    if args.out:
        _write_json(args.out, payload)
    return 0


def cmd_fit(args) -> int:
    params = _effective_params(args)
    model0 = _build_model(params)
    observations = tuple(load_pairs_csv(args.input))
    problem = CalibrationProblem(
        observations=observations,
        free_params=tuple(p.strip() for p in args.free.split(",") if p.strip()),
        bounds={
            "g": (mpa_to_pa(args.g_bounds_mpa[0]), mpa_to_pa(args.g_bounds_mpa[1])),
            "p0": (kpa_to_pa(args.p0_bounds_kpa[0]), kpa_to_pa(args.p0_bounds_kpa[1])),
        },
        loss=args.loss,
        huber_delta=math.radians(args.huber_delta_deg),
        include_down=args.include_down,
        max_eval=args.max_eval,
    )
    result, fitted = fit_pressure_angle(problem, model0)
    payload = {
        "fitted": result.with_units(),
        "n_eval": result.n_eval,
        "converged": result.converged,
        "n_observations_used": len(problem.fitted_observations()),
        "model": model_metadata(fitted),
        "tube_geometry_source": params["_tube_source"],
    }
    if args.out:
        _write_json(args.out, payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_fit_tube(args) -> int:
    targets = []
    with open(args.input, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["w_mm", "p0_kpa"]:
            raise CliError(f"bad header in {args.input}: expected w_mm,p0_kpa")
        for row_no, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise CliError(f"{args.input}: row {row_no}: expected 2 columns")
            try:
                targets.append((mm_to_m(float(row[0])), kpa_to_pa(float(row[1]))))
            except ValueError:
                raise CliError(f"{args.input}: row {row_no}: bad number in {row}")
    fit = fit_tube_geometry(
        targets, g_e=mpa_to_pa(args.ge_mpa) if args.ge_mpa is not None else None
    )
    payload = {
        "rf_mm": m_to_mm(fit.r_f),
        "ge_mpa": fit.g_e / 1e6,
        "rmse_kpa": pa_to_kpa(fit.rmse),
        "n_eval": fit.n_eval,
        "converged": fit.converged,
        "targets": [{"w_mm": m_to_mm(w), "p0_kpa": pa_to_kpa(p)} for w, p in targets],
    }
    if args.out:
        _write_json(args.out, payload)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_markers(args) -> int:
    frames = load_marker_csv(args.input)
    dataset = process_frames(
        frames,
        dwell_min=args.dwell_s,
        pressure_tol=kpa_to_pa(args.tol_kpa),
        row=args.row,
    )
    write_pairs_csv(args.out, dataset.pairs)
    print(f"{len(dataset.plateaus)} plateaus -> {args.out}")
    return 0


def _parse_float_list(text: str, name: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise CliError(f"--{name}: expected comma-separated numbers, got {text!r}")


def cmd_sweep(args) -> int:
    params = _effective_params(args)
    values = _parse_float_list(args.values, "values")
    if not values:
        raise CliError("--values: at least one value required")

    def broadcast(flag_value: Optional[str], name: str) -> List[Optional[float]]:
        if flag_value is None:
            return [None] * len(values)
        items = _parse_float_list(flag_value, name)
        if len(items) == 1:
            return items * len(values)
        if len(items) != len(values):
            raise CliError(
                f"--{name}: expected 1 or {len(values)} values, got {len(items)}"
            )
        return items

    gs = broadcast(args.g_mpa_list, "g-mpa-list")
    p0s = broadcast(args.p0_kpa_list, "p0-kpa-list")

    os.makedirs(args.out_dir, exist_ok=True)
    summary = [["design_param", "theta_at_pmax_deg", "p0_kpa"]]
    any_failed = False
    for value, g_mpa, p0_kpa in zip(values, gs, p0s):
        p = dict(params)
        if args.param == "w":
            p["w_mm"] = value
        else:
            p["pattern"] = "cross"
            p["alpha0_deg"] = value
        if g_mpa is not None:
            p["g_mpa"] = g_mpa
        if p0_kpa is not None:
            p["p0_kpa"] = p0_kpa
        model = _build_model(p)
        curve = sweep_curve(
            model,
            p_max=args.p_max_kpa * 1e3,
            step=args.step_kpa * 1e3,
            metadata={"tube_geometry_source": params["_tube_source"],
                      "sweep_param": args.param, "sweep_value": value},
        )
        name = f"curve_{args.param}_{value:g}.csv"
        _write_curve(os.path.join(args.out_dir, name), curve, {"command": "sweep"})
        last = curve.samples[-1]
        ok = last.status == "ok"
        any_failed = any_failed or any(s.status != "ok" for s in curve.samples)
        summary.append([
            f"{value:.9g}",
            f"{math.degrees(last.theta):.9g}" if ok else "",
            f"{model.p0 / 1e3:.9g}",
        ])
    with open(os.path.join(args.out_dir, "summary.csv"), "w", newline="") as fh:
        csv.writer(fh).writerows(summary)
    return 2 if any_failed else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="embact",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "predict",
        help="pressure sweep -> curve CSV + JSON sidecar",
        description="Sweep pressure from 0 to --p-max-kpa in --step-kpa steps and "
        "write pressure_kpa,theta_deg,l_mm,r_mm,status rows plus a .json metadata "
        "sidecar next to the CSV.",
    )
    _add_model_flags(p)
    p.add_argument("--p-max-kpa", type=float, required=True, help="sweep end [kPa]")
    p.add_argument("--step-kpa", type=float, default=10.0, help="sweep step [kPa]")
    p.add_argument("--out", required=True, help="output curve CSV path")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser(
        "transition",
        help="sleeve-fill radius r0 and transition pressure p0",
        description="Print the sleeve cavity radius [mm] and transition pressure "
        "[kPa] for the design, as JSON and as an aligned table.",
    )
    _add_model_flags(p)
    p.add_argument("--out", help="optional JSON output path")
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser(
        "fit",
        help="calibrate (g, p0) against a measured pairs CSV",
        description="Input schema: pressure_kpa,theta_deg,branch with branch in "
        "{up, down}. Only the up branch is fitted unless --include-down. The "
        "model flags supply fixed parameters and initial guesses.",
    )
    _add_model_flags(p)
    p.add_argument("--input", required=True, help="pairs CSV path")
    p.add_argument("--free", default="g,p0", help="comma list from {g, p0} (default g,p0)")
    p.add_argument("--loss", choices=["l2", "huber"], default="l2")
    p.add_argument("--huber-delta-deg", type=float, default=5.0,
                   help="Huber transition residual [deg]")
    p.add_argument("--include-down", action="store_true",
                   help="fit release-branch rows too")
    p.add_argument("--g-bounds-mpa", type=float, nargs=2, default=[0.01, 50.0],
                   metavar=("LO", "HI"))
    p.add_argument("--p0-bounds-kpa", type=float, nargs=2, default=[0.0, 500.0],
                   metavar=("LO", "HI"))
    p.add_argument("--max-eval", type=int, default=5000)
    p.add_argument("--out", help="JSON output path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser(
        "fit-tube",
        help="recover tube geometry from (w, p0) targets",
        description="Input schema: w_mm,p0_kpa. Fits the tube rest radius and "
        "rubber modulus so the predicted transition pressures match the targets.",
    )
    p.add_argument("--input", required=True, help="targets CSV path")
    p.add_argument("--ge-mpa", type=float, help="fix the rubber modulus [MPa]")
    p.add_argument("--out", help="JSON output path")
    p.set_defaults(func=cmd_fit_tube)

    p = sub.add_parser(
        "markers",
        help="motion-capture CSV -> quasi-static pairs CSV",
        description="Input schema: t,px1,py1,pz1,...,px14,py14,pz14,pressure_kpa "
        "with coordinates in mm (markers 1-7 left row, 8-14 right row; missing "
        "markers as empty fields). Output schema: pressure_kpa,theta_deg,branch.",
    )
    p.add_argument("--input", required=True, help="marker trajectory CSV path")
    p.add_argument("--out", required=True, help="output pairs CSV path")
    p.add_argument("--row", choices=["left", "right", "mean"], default="mean",
                   help="marker row used for the bending metric (default mean)")
    p.add_argument("--dwell-s", type=float, default=3.0,
                   help="minimum plateau dwell [s] (default 3)")
    p.add_argument("--tol-kpa", type=float, default=2.0,
                   help="plateau pressure tolerance [kPa] (default 2)")
    p.set_defaults(func=cmd_markers)

    p = sub.add_parser(
        "sweep",
        help="grid over a design parameter, one curve per value",
        description="Runs predict for each value of --param and writes "
        "curve_<param>_<value>.csv per design plus summary.csv with "
        "design_param,theta_at_pmax_deg,p0_kpa rows. --g-mpa-list/--p0-kpa-list "
        "give per-design parameters (single values broadcast).",
    )
    _add_model_flags(p)
    p.add_argument("--param", choices=["w", "alpha0"], required=True,
                   help="design parameter to grid over (w [mm] or alpha0 [deg])")
    p.add_argument("--values", required=True, help="comma-separated grid values")
    p.add_argument("--g-mpa-list", help="per-design g [MPa], comma list or single value")
    p.add_argument("--p0-kpa-list", help="per-design p0 [kPa], comma list or single value")
    p.add_argument("--p-max-kpa", type=float, required=True)
    p.add_argument("--step-kpa", type=float, default=10.0)
    p.add_argument("--out-dir", required=True, help="output directory")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CliError, ConfigError, DomainError, MocapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
