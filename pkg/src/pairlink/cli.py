"""Command-line front end: every analysis as a verb subcommand.

Outputs are plot-ready CSV (header always, '.' decimals) plus JSON
summaries; no plotting here. All defaults mirror the lab operating point
and can be overridden by a config file (see config.DEFAULTS) and then by
flags. Given the same config and seed, primary output files are
byte-identical across runs.

Exit codes: 0 success, 2 usage/config error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import estimation, franson, pairstats, polarization, qkd, timetags, tomography
from .config import SEED_ENV_VAR, ConfigError, RunConfig
from .photonics import rayleigh_length

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value.is_integer() and abs(value) < 1e15:
            return str(int(value))
        return repr(value)
    return str(value)


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_path(cfg, args_output, default_name) -> str:
    if args_output:
        return args_output
    out_dir = cfg.output_dir()
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, default_name)


# --- beam -----------------------------------------------------------------


def _cmd_beam(args, cfg: RunConfig) -> int:
    rows = []
    for wl_nm, waist_um in cfg.beam_rows():
        zr = rayleigh_length(waist_um * 1e-6, wl_nm * 1e-9)
        rows.append((wl_nm, waist_um, zr * 1e3))
    if args.json:
        path = _out_path(cfg, args.output, "beam.json")
        payload = [
            {"wavelength_nm": wl, "waist_um": w, "rayleigh_mm": zr}
            for wl, w, zr in rows
        ]
        _write_json(path, payload)
    else:
        path = _out_path(cfg, args.output, "beam.csv")
        _write_csv(path, ["wavelength_nm", "waist_um", "rayleigh_mm"], rows)
    print(f"{'wavelength_nm':>14} {'waist_um':>9} {'rayleigh_mm':>12}")
    for wl, w, zr in rows:
        print(f"{wl:>14.1f} {w:>9.1f} {zr:>12.3f}")
    print(f"wrote {path}")
    return EXIT_OK


# --- car-sweep --------------------------------------------------------------


def _car_point_mc(source, ch_a, ch_b, pump, window, duration, offset, seed):
    a, b = timetags.simulate_streams(source, ch_a, ch_b, pump, duration, seed)
    prompt = timetags.count_coincidences(a, b, window, 0.0)
    delayed = timetags.count_coincidences(a, b, window, offset)
    acc_hz = delayed / duration
    true_hz = max(prompt - delayed, 0) / duration
    car_val = prompt / delayed if delayed else float("inf")
    return true_hz, acc_hz, car_val, (a, b)


def _cmd_car_sweep(args, cfg: RunConfig) -> int:
    source = cfg.car_source_spec()
    ch_a = cfg.channel_spec("signal")
    ch_b = cfg.channel_spec("idler")
    window = cfg.getfloat("car", "window_ps") * 1e-12
    p_min = args.p_min if args.p_min is not None else cfg.getfloat("car", "p_min_mw")
    p_max = args.p_max if args.p_max is not None else cfg.getfloat("car", "p_max_mw")
    n = args.n if args.n is not None else cfg.getint("car", "n_points")
    if p_min <= 0 or p_max < p_min or n < 1:
        raise ConfigError("need 0 < p_min <= p_max and n >= 1")
    powers = [p_min] if n == 1 else list(np.linspace(p_min, p_max, n))

    seed = cfg.seed(args.seed)
    duration = cfg.getfloat("car", "montecarlo_duration_s")
    offset = cfg.getfloat("car", "accidental_offset_ns") * 1e-9

    rows = []
    last_streams = None
    for i, p in enumerate(powers):
        if args.mode == "montecarlo":
            true_hz, acc_hz, car_val, last_streams = _car_point_mc(
                source, ch_a, ch_b, p, window, duration, offset, seed + i
            )
        else:
            model = pairstats.count_model(source, ch_a, ch_b, p, window)
            true_hz, acc_hz = model.true_coinc, model.accidental
            car_val = pairstats.car(model)
        rows.append((float(p), true_hz, acc_hz, car_val))

    path = _out_path(cfg, args.output, "car_sweep.csv")
    _write_csv(path, ["pump_mw", "true_coinc_hz", "accidental_hz", "car"], rows)
    print(f"wrote {path}")

    if args.export_tags:
        if last_streams is None:
            a, b = timetags.simulate_streams(
                source, ch_a, ch_b, powers[-1], duration, seed
            )
        else:
            a, b = last_streams
        write = (
            timetags.write_tags_binary
            if args.tag_format == "binary"
            else timetags.write_tags_csv
        )
        for stream in (a, b):
            tag_path = f"{args.export_tags}_{stream.channel_id}.{args.tag_format}"
            write(tag_path, stream)
            print(f"wrote {tag_path}")

    finite = [(r[0], r[3]) for r in rows if np.isfinite(r[3])]
    if len(finite) < 3:
        print("warning: too few points to fit CAR = k/P + b", file=sys.stderr)
        return EXIT_OK
    fit = estimation.fit_inverse_power([f[0] for f in finite], [f[1] for f in finite])
    print(
        f"CAR fit: k = {fit.params['k']:.6g} mW, "
        f"baseline = {fit.params['baseline']:.6g}, "
        f"rms = {fit.residual_rms:.3g}"
    )
    at_125 = pairstats.count_model(source, ch_a, ch_b, 125.0, window)
    print(f"accidental share at 125 mW: {at_125.accidental_share * 100:.3f}%")
    return EXIT_OK


# --- tomo --------------------------------------------------------------------


def _parse_state(text: str):
    if text == "phi_plus":
        return polarization.bell_phi_plus()
    if text.startswith("werner:"):
        try:
            p = float(text.split(":", 1)[1])
        except ValueError:
            raise ConfigError(f"bad werner weight in --state {text!r}")
        return polarization.werner(p)
    raise ConfigError(
        f"unknown state {text!r}; use phi_plus or werner:<p>"
    )


def _cmd_tomo_simulate(args, cfg: RunConfig) -> int:
    state = _parse_state(args.state)
    seed = cfg.seed(args.seed)
    records = tomography.simulate_counts(
        state,
        mean_total=args.mean_total,
        seed=seed,
        exact=args.exact,
    )
    path = _out_path(cfg, args.output, "tomo_counts.csv")
    tomography.write_count_records(path, records)
    print(f"wrote {path} (seed {seed})")
    return EXIT_OK


def _cmd_tomo_fit(args, cfg: RunConfig) -> int:
    try:
        records = tomography.read_count_records(args.counts)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = tomography.mle_reconstruct(
        records, tol=args.tol, max_iter=args.max_iter
    )
    rho = result.state.matrix
    payload = {
        "log_likelihood": result.log_likelihood,
        "iterations": result.iterations,
        "converged": result.converged,
        "purity": polarization.purity(result.state),
        "fidelity_phi_plus": polarization.fidelity_to_pure(
            result.state, polarization.bell_phi_plus()
        ),
        "matrix_real": rho.real.tolist(),
        "matrix_imag": rho.imag.tolist(),
    }
    path = _out_path(cfg, args.output, "tomo_fit.json")
    _write_json(path, payload)
    print(
        f"purity {payload['purity']:.6f}, "
        f"fidelity(phi+) {payload['fidelity_phi_plus']:.6f}, "
        f"wrote {path}"
    )
    if not result.converged:
        print("error: reconstruction did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# --- skr-sweep -----------------------------------------------------------------


def _cmd_skr_sweep(args, cfg: RunConfig) -> int:
    link = cfg.link_spec()
    p_min = args.p_min if args.p_min is not None else cfg.getfloat("qkd", "p_min_mw")
    p_max = args.p_max if args.p_max is not None else cfg.getfloat("qkd", "p_max_mw")
    n = args.n if args.n is not None else cfg.getint("qkd", "n_points")
    try:
        sweep = qkd.pump_sweep(link, p_min, p_max, n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    rows = [
        (pt.pump_mw, pt.sifted_rate, pt.qber_z, pt.qber_x, pt.skr)
        for pt in sweep.points
    ]
    csv_path = _out_path(cfg, args.output, "skr_sweep.csv")
    _write_csv(
        csv_path, ["pump_mw", "sifted_hz", "qber_z", "qber_x", "skr_bps"], rows
    )
    at_125 = qkd.secret_key_rate(link, 125.0)
    summary = {
        "p_opt_mw": sweep.p_opt,
        "skr_opt_bps": sweep.skr_opt,
        "p_at_qberz_5pct_mw": sweep.p_at_qberz_5pct,
        "skr_at_125mw_bps": at_125.skr,
        "qber_z_at_125mw": at_125.qber_z,
    }
    json_path = _out_path(cfg, args.summary, "skr_summary.json")
    _write_json(json_path, summary)
    print(
        f"p_opt = {sweep.p_opt:.1f} mW, skr(p_opt) = {sweep.skr_opt:.1f} bps, "
        f"skr(125 mW) = {at_125.skr:.1f} bps"
    )
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


# --- fringe ----------------------------------------------------------------------


def _cmd_fringe(args, cfg: RunConfig) -> int:
    if args.kind == "polarization":
        vis = cfg.getfloat("fringe", "visibility")
        if not 0.0 <= vis <= 1.0:
            raise ConfigError("[fringe] visibility must be in [0, 1]")
        n = cfg.getint("fringe", "n_points")
        state = polarization.werner(vis)
        scan = polarization.fringe_curve(
            state, cfg.get("fringe", "fixed_arm").strip().upper(), n_points=n
        )
        x, y = scan.swept_angles, scan.probabilities
        header = ["angle_rad", "probability"]
        default_csv = "fringe_polarization.csv"
    else:
        fcfg = cfg.franson_config()
        v_min = cfg.getfloat("franson", "v_min")
        v_max = cfg.getfloat("franson", "v_max")
        n = cfg.getint("franson", "n_points")
        if not v_min < v_max or n < 8:
            raise ConfigError("[franson] needs v_min < v_max and n_points >= 8")
        x = np.linspace(v_min, v_max, n)
        y = franson.fringe_vs_voltage(fcfg, x)
        header = ["voltage", "relative_rate"]
        default_csv = "fringe_franson.csv"

    csv_path = _out_path(cfg, args.output, default_csv)
    _write_csv(csv_path, header, zip(x, y))

    fit = estimation.fit_cos2(x, y)
    fit_path = _out_path(cfg, args.fit_output, default_csv.replace(".csv", "_fit.json"))
    _write_json(fit_path, fit.to_dict())
    print(
        f"fitted visibility = {fit.params['visibility']:.6f} "
        f"(rms {fit.residual_rms:.3g})"
    )
    print(f"wrote {csv_path} and {fit_path}")
    if not fit.converged:
        print("error: fringe fit did not converge", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairlink",
        description=(
            "Pair-source and QKD-link analysis toolkit. Defaults reproduce "
            "the lab operating point; override with --config and flags."
        ),
    )
    parser.add_argument(
        "--config", metavar="FILE", help="INI config file (see config.DEFAULTS)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_beam = sub.add_parser(
        "beam", help="Rayleigh lengths for the focusing design table"
    )
    p_beam.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_beam.add_argument("--output", metavar="PATH")
    p_beam.set_defaults(func=_cmd_beam)

    p_car = sub.add_parser(
        "car-sweep", help="CAR and coincidence rates versus pump power"
    )
    p_car.add_argument("--p-min", type=float, metavar="MW")
    p_car.add_argument("--p-max", type=float, metavar="MW")
    p_car.add_argument("-n", type=int, metavar="N", help="grid points")
    p_car.add_argument(
        "--mode",
        choices=("analytic", "montecarlo"),
        default="analytic",
        help="closed-form rates or time-tag Monte Carlo estimates",
    )
    p_car.add_argument("--seed", type=int, help=f"overrides config and {SEED_ENV_VAR}")
    p_car.add_argument("--output", metavar="PATH")
    p_car.add_argument(
        "--export-tags",
        metavar="PREFIX",
        help="also write simulated tag streams <PREFIX>_signal/_idler",
    )
    p_car.add_argument(
        "--tag-format", choices=("csv", "binary"), default="csv",
        help="tag export format: picosecond integers, one per line or raw u64",
    )
    p_car.set_defaults(func=_cmd_car_sweep)

    p_tomo = sub.add_parser("tomo", help="simulate or reconstruct tomography data")
    tomo_sub = p_tomo.add_subparsers(dest="tomo_command", required=True)
    p_sim = tomo_sub.add_parser("simulate", help="write a 16-setting counts CSV")
    p_sim.add_argument(
        "--state",
        default="phi_plus",
        help="true state: phi_plus or werner:<p> (default phi_plus)",
    )
    p_sim.add_argument("--mean-total", type=float, default=1e6, metavar="N")
    p_sim.add_argument("--seed", type=int, help=f"overrides config and {SEED_ENV_VAR}")
    p_sim.add_argument(
        "--exact", action="store_true", help="record exact means, no sampling"
    )
    p_sim.add_argument("--output", metavar="PATH")
    p_sim.set_defaults(func=_cmd_tomo_simulate)
    p_fit = tomo_sub.add_parser("fit", help="MLE reconstruction from a counts CSV")
    p_fit.add_argument("counts", metavar="COUNTS.csv")
    p_fit.add_argument("--tol", type=float, default=1e-10)
    p_fit.add_argument("--max-iter", type=int, default=2000)
    p_fit.add_argument("--output", metavar="PATH")
    p_fit.set_defaults(func=_cmd_tomo_fit)

    p_skr = sub.add_parser(
        "skr-sweep", help="secret key rate and QBER versus pump power"
    )
    p_skr.add_argument("--p-min", type=float, metavar="MW")
    p_skr.add_argument("--p-max", type=float, metavar="MW")
    p_skr.add_argument("-n", type=int, metavar="N")
    p_skr.add_argument("--output", metavar="PATH", help="sweep CSV path")
    p_skr.add_argument("--summary", metavar="PATH", help="summary JSON path")
    p_skr.set_defaults(func=_cmd_skr_sweep)

    p_fr = sub.add_parser("fringe", help="interference fringe scan plus cos^2 fit")
    p_fr.add_argument("kind", choices=("polarization", "franson"))
    p_fr.add_argument("--output", metavar="PATH", help="scan CSV path")
    p_fr.add_argument("--fit-output", metavar="PATH", help="fit JSON path")
    p_fr.set_defaults(func=_cmd_fringe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.config)
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
