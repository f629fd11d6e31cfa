"""Command-line front end.

Every subcommand maps onto one library operation and writes CSV or JSON
with the full effective configuration in a metadata header. All flags take
SI units (Hz, m, W, W/Hz). Exit codes: 0 success, 1 usage error,
2 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from barewire import __version__
from barewire import channel, dispersion, propagation, specfun, stats
from barewire.capacity import LinkBudget, capacity, dbm_per_hz_to_w
from barewire.tables import render

EXIT_USAGE = 1
EXIT_NUMERIC = 2

NUMERIC_ERRORS = (dispersion.ConvergenceError, dispersion.SweepError, propagation.BracketError,
                  propagation.DegenerateModeError, specfun.PoleError, OverflowError)

DEFAULT_RADII = [0.5e-3, 1e-3, 2e-3, 5e-3, 10e-3, 20e-3]
DEFAULT_DISTANCES = [float(d) for d in range(50, 501, 50)]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_band(text, default_points=100):
    """``lo:hi[:points]`` in Hz."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError("band must be lo:hi[:points]")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        n = int(parts[2]) if len(parts) == 3 else default_points
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not (dispersion.F_MIN <= lo < hi <= dispersion.F_MAX) or n < 2:
        raise argparse.ArgumentTypeError(f"invalid band {text!r}")
    return lo, hi, n


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _float_list(text):
    if not text.strip():
        return []
    return [float(x) for x in text.split(",")]


def _media(args, radius):
    return dispersion.MediumParams(radius_a=radius, sigma_cond=args.sigma)


def _grid(args, spacing=None):
    if getattr(args, "freqs", None) is not None:
        f = np.array(args.freqs, dtype=float)
        if f.size == 0:
            raise UsageError("empty frequency list")
        if np.any(f < dispersion.F_MIN) or np.any(f > dispersion.F_MAX) or np.any(np.diff(f) <= 0):
            raise UsageError("frequencies must be increasing and within [1, 1e16] Hz")
        return f
    if args.band is None:
        raise UsageError("a frequency band (--band lo:hi[:points]) is required")
    lo, hi, n = args.band
    band = channel.BandGrid(lo, hi, n, spacing or args.spacing)
    return band.frequencies()


def _config(args):
    # the destination is not part of the computation, so identical runs
    # written to different directories stay byte-identical
    return {k: v for k, v in vars(args).items() if k not in ("func", "out")}


def _metadata(args, **extra):
    meta = {"program": "barewire", "version": __version__, "command": args.command,
            "config": _config(args), "solver": dispersion.DEFAULT_OPTIONS.as_dict()}
    meta.update(extra)
    return meta


def _emit(args, name, text):
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = "json" if args.format == "json" else "csv"
    (out / f"{name}.{ext}").write_text(text)


def _tag(value):
    return repr(float(value))


def cmd_solve(args):
    media = _media(args, args.radius[0])
    sol = dispersion.solve_dispersion(args.freq, media)
    rec = {
        "freq_hz": sol.freq,
        "re_lambda_a": sol.lambda_a.real, "im_lambda_a": sol.lambda_a.imag,
        "re_lambda_c": sol.lambda_c.real, "im_lambda_c": sol.lambda_c.imag,
        "re_h": sol.h.real, "im_h": sol.h.imag,
        "alpha_np_m": sol.alpha, "alpha_db_m": sol.alpha_db, "beta_rad_m": sol.beta,
        "v_ph_over_c": sol.k0 / sol.beta,
        "residual": sol.residual, "iterations": sol.iterations,
    }
    if args.format == "json":
        _emit(args, "solve", render([rec], list(rec), _metadata(args), "json"))
    elif args.out is not None:
        _emit(args, "solve", render([rec], list(rec), _metadata(args), "csv"))
    else:
        for k, v in rec.items():
            v = int(v) if k == "iterations" else float(v)
            print(f"{k}: {v!r}")


def cmd_sweep(args):
    f = _grid(args)
    for a in args.radius:
        sw = dispersion.sweep(f, _media(args, a))
        meta = _metadata(args, radius_m=a, failed_points=int(np.count_nonzero(~sw.converged)))
        _emit(args, f"sweep_a{_tag(a)}",
              render(sw.records(), dispersion.CSV_COLUMNS, meta, args.format))


def cmd_extent(args):
    f = _grid(args)
    cols = ["freq_hz", "alpha_db_m", "v_ph_over_c", "v_gr_over_c", "r90_m"]
    for a in args.radius:
        sw = dispersion.sweep(f, _media(args, a))
        rows = propagation.propagation_table(sw, args.fraction)
        meta = _metadata(args, radius_m=a, power_fraction=args.fraction)
        _emit(args, f"extent_a{_tag(a)}", render(rows, cols, meta, args.format))


def cmd_velocity(args):
    f = _grid(args)
    cols = ["freq_hz", "v_ph_over_c", "v_gr_over_c"]
    for a in args.radius:
        sw = dispersion.sweep(f, _media(args, a))
        vel = propagation.group_velocity(sw)
        rows = [{"freq_hz": fr, "v_ph_over_c": vp, "v_gr_over_c": vg}
                for fr, vp, vg in zip(vel.freqs, vel.v_phase_over_c, vel.v_group_over_c)]
        _emit(args, f"velocity_a{_tag(a)}", render(rows, cols, _metadata(args, radius_m=a), args.format))


def cmd_tf(args):
    f = _grid(args)
    cols = ["freq_hz", "gain_db", "phase_rad"]
    for a in args.radius:
        sw = dispersion.sweep(f, _media(args, a))
        for d in args.distance:
            resp = channel.transfer_function(sw, d)
            meta = _metadata(args, radius_m=a, distance_m=d)
            _emit(args, f"tf_a{_tag(a)}_d{_tag(d)}", render(resp.records(), cols, meta, args.format))


def cmd_ir(args):
    f = _grid(args, spacing="linear")
    cols = ["t_s", "amplitude"]
    for a in args.radius:
        sw = dispersion.sweep(f, _media(args, a))
        for d in args.distance:
            resp = channel.transfer_function(sw, d)
            ir = channel.impulse_response(resp, n_fft=args.n_fft, window=args.window,
                                          noise_floor_db=args.noise_floor)
            meta = _metadata(args, radius_m=a, distance_m=d, n_fft=ir.n_fft, window=ir.window,
                             noise_floor_db=ir.noise_floor_db, reference_delay_s=ir.reference_delay,
                             rms_ds_s=ir.rms_ds, mean_delay_s=ir.mean_delay,
                             avg_gain_db=channel.average_gain_db(resp))
            _emit(args, f"ir_a{_tag(a)}_d{_tag(d)}", render(ir.records(), cols, meta, args.format))


def cmd_fit(args):
    f = _grid(args)
    rows = []
    for a in args.radius:
        sw = dispersion.sweep(f, _media(args, a))
        fp = channel.fit_loglog(sw, method=args.method)
        rows.append({"radius_m": a, "m": fp.m, "q": fp.q, "r_squared": fp.r_squared})
    cols = ["radius_m", "m", "q", "r_squared"]
    _emit(args, "fit", render(rows, cols, _metadata(args), args.format))


def _budget(args):
    lo, hi, _ = args.band
    n = args.subchannels
    return LinkBudget(total_power=args.power, noise_psd=args.noise_psd, gamma_m=args.gamma_m,
                          gamma_c=args.gamma_c, se_cap=args.se_cap,
                          band=channel.BandGrid(lo, hi, n + 1), n_subchannels=n)


def cmd_capacity(args):
    if args.band is None:
        raise UsageError("--band is required")
    budget = _budget(args)
    centers = budget.subchannel_centers()
    cols = ["f_center_hz", "snr_db", "bits_per_s_per_hz", "capped"]
    summary = []
    for a in args.radius:
        sw = dispersion.sweep(centers, _media(args, a))
        for d in args.distance:
            rep = capacity(channel.transfer_function(sw, d), budget)
            meta = _metadata(args, radius_m=a, distance_m=d, capacity_bps=rep.capacity_bps,
                             budget=budget.as_dict())
            _emit(args, f"capacity_a{_tag(a)}_d{_tag(d)}",
                  render(rep.records(), cols, meta, args.format))
            summary.append({"radius_m": a, "distance_m": d, "capacity_bps": rep.capacity_bps})
    _emit(args, "capacity_summary",
          render(summary, ["radius_m", "distance_m", "capacity_bps"],
                 _metadata(args, budget=budget.as_dict()), args.format))


def cmd_stats(args):
    f = _grid(args, spacing="linear")
    ens = stats.build_ensemble(args.radius, args.distance, f, sigma=args.sigma,
                               noise_floor_db=args.noise_floor, window=args.window)
    cols = ["radius_m", "distance_m", "avg_gain_db", "rms_ds_s"]
    rows = [{"radius_m": r.radius_a, "distance_m": r.distance_d,
             "avg_gain_db": r.avg_gain_db, "rms_ds_s": r.rms_ds_s} for r in ens.records]
    fit = stats.linreg(ens.avg_gain_db, ens.log_rms_ds)
    report = {
        "linreg_log10_rms_ds_vs_gain": {"slope": fit.slope, "intercept": fit.intercept,
                                        "correlation": fit.correlation},
        "anderson_darling_log10_rms_ds": stats.anderson_darling_normal(ens.log_rms_ds).as_dict(),
        "anderson_darling_avg_gain_db": stats.anderson_darling_normal(ens.avg_gain_db).as_dict(),
    }
    meta = _metadata(args, noise_floor_db=args.noise_floor, window=args.window, report=report)
    _emit(args, "stats_scatter", render(rows, cols, meta, args.format))
    if args.out is not None:
        Path(args.out, "stats_report.json").write_text(
            json.dumps({"metadata": _metadata(args), **report}, sort_keys=True, indent=1) + "\n")


def build_parser():
    p = _Parser(prog="barewire", description="Surface-wave channel model of a bare round conductor.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    common = _Parser(add_help=False)
    common.add_argument("--radius", type=_float_list, default=None,
                        help="conductor radius in m (comma-separated list allowed)")
    common.add_argument("--sigma", type=_positive, default=dispersion.COPPER_SIGMA,
                        help="conductivity in S/m (default copper)")
    common.add_argument("--out", default=None, help="output directory (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    def band_opts(sp, default=None):
        sp.add_argument("--band", type=parse_band, default=default, help="lo:hi[:points] in Hz")
        sp.add_argument("--spacing", choices=("linear", "log"), default="linear")

    s = sub.add_parser("solve", parents=[common], help="solve at one frequency")
    s.add_argument("--freq", type=_positive, required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", parents=[common], help="dispersion over a band")
    band_opts(s)
    s.add_argument("--freqs", type=_float_list, default=None, help="explicit comma-separated frequencies")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("extent", parents=[common], help="attenuation, velocities and field extension")
    band_opts(s, (30e9, 100e9, 71))
    s.add_argument("--fraction", type=float, default=0.9)
    s.set_defaults(func=cmd_extent)

    s = sub.add_parser("velocity", parents=[common], help="phase and group velocity")
    band_opts(s, (1e9, 100e9, 100))
    s.set_defaults(func=cmd_velocity)

    s = sub.add_parser("tf", parents=[common], help="transfer function")
    band_opts(s, (1e9, 100e9, 100))
    s.add_argument("--distance", type=_float_list, default=[100.0])
    s.set_defaults(func=cmd_tf)

    s = sub.add_parser("ir", parents=[common], help="impulse response")
    band_opts(s, (1e9, 100e9, 991))
    s.add_argument("--distance", type=_float_list, default=[100.0])
    s.add_argument("--n-fft", type=int, default=None)
    s.add_argument("--window", choices=("none", "raised-cosine-edge"), default="none")
    s.add_argument("--noise-floor", type=float, default=40.0, help="dB below peak")
    s.set_defaults(func=cmd_ir)

    s = sub.add_parser("fit", parents=[common], help="power-law fit of the dB loss")
    band_opts(s, (1e9, 100e9, 991))
    s.add_argument("--method", choices=("db", "loglog"), default="db")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("capacity", parents=[common], help="gap-adjusted capacity")
    s.add_argument("--band", type=parse_band, default=(1e9, 100e9, 9901))
    s.add_argument("--distance", type=_float_list, default=[100.0])
    s.add_argument("--power", type=_positive, default=1.0, help="total transmit power in W")
    s.add_argument("--noise-psd", type=_positive, default=dbm_per_hz_to_w(-120.0), help="W/Hz")
    s.add_argument("--gamma-m", type=float, default=6.0, help="margin in dB")
    s.add_argument("--gamma-c", type=float, default=8.8, help="coding gain in dB")
    s.add_argument("--se-cap", type=_positive, default=12.0, help="bits/s/Hz")
    s.add_argument("--subchannels", type=int, default=9900)
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("stats", parents=[common], help="delay-spread ensemble statistics")
    band_opts(s, (1e9, 100e9, 991))
    s.add_argument("--distance", type=_float_list, default=DEFAULT_DISTANCES)
    s.add_argument("--window", choices=("none", "raised-cosine-edge"), default="none")
    s.add_argument("--noise-floor", type=float, default=40.0)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.radius is None:
        args.radius = list(DEFAULT_RADII) if args.command == "stats" else [1e-3]
    if not args.radius or any(r <= 0 for r in args.radius):
        parser.error("--radius needs positive values")
    if hasattr(args, "distance") and (not args.distance or any(d < 0 for d in args.distance)):
        parser.error("--distance needs non-negative values")
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except NUMERIC_ERRORS as exc:
        print(f"barewire: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"barewire: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
