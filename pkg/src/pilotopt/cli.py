"""Command-line front end.

Subcommands: `optimize` (one config, both objectives), `rate` (evaluate the
rate stack at a given pilot fraction), `figure` (reproduce a built-in
preset), `sweep` (custom one-parameter sweep) and `validate` (Monte Carlo
vs analytic checks).

SNR crosses this boundary in dB (`--snr-db`) and is converted once; the
library works in linear scale throughout.  Records are emitted as CSV
(schema below, 12 significant digits, stable column order, `# schema=1`
header comment) or as a JSON array of flat objects with identical keys;
every record carries the fully resolved configuration, so feeding a record's
fields back as flags reproduces it exactly.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 infeasible
(all-clamped) configuration.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from .channel import ergodic_capacity, mean_inverse_snr, quadrature_capacity
from .estimation import FadingModel, effective_snr, mmse_error
from .montecarlo import jakes_doppler_ratio, mc_capacity_moments, simulate_mmse_mse
from .optimizer import optimize_alpha
from .rate import LinkConfig, perfect_csi_rate, training_rate_curve
from .sweep import DEFAULT_DOPPLER, SweepSpec, built_in_figures, figure_preset, run_sweep

CSV_COLUMNS = (
    "swept_param", "swept_value", "model", "f_d", "n", "snr_db", "epsilon",
    "alpha_finite", "alpha_ergodic", "n_t_finite", "rate_finite_at_finite",
    "rate_finite_at_ergodic", "gain", "clamped",
)

SCHEMA_LINE = "# schema=1"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _records_to_csv(records: list[dict], columns) -> str:
    out = io.StringIO()
    out.write(SCHEMA_LINE + "\n")
    out.write(",".join(columns) + "\n")
    for record in records:
        out.write(",".join(_fmt(record[c]) for c in columns) + "\n")
    return out.getvalue()


def _records_to_json(records: list[dict], columns) -> str:
    def jsonable(v):
        if isinstance(v, (np.integer,)):
            return int(v)
        if isinstance(v, (np.floating,)):
            return float(v)
        return v

    shaped = [{c: jsonable(r[c]) for c in columns} for r in records]
    return json.dumps(shaped, indent=2) + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _gnuplot_script(kind: str, data_path: str) -> str:
    """Companion gnuplot script for a sweep CSV (no plotting dependency)."""
    if kind.startswith("rate"):
        ylabel, plots = "rate [bits/use]", (
            ("rate_finite_at_finite", 11), ("rate_finite_at_ergodic", 12))
    else:
        ylabel, plots = "pilot fraction", (("alpha_finite", 8), ("alpha_ergodic", 9))
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 'swept value'",
        f"set ylabel '{ylabel}'",
        "set grid",
        "plot " + ", \\\n     ".join(
            f"'{data_path}' using 2:{col} with lines title '{name}'"
            for name, col in plots
        ),
    ]
    return "\n".join(lines) + "\n"


def _snr_db_of(cfg: LinkConfig) -> float:
    return 10.0 * float(np.log10(cfg.snr))


def _model_fields(model: FadingModel) -> tuple[str, float | None]:
    return model.kind, (model.doppler if model.kind == "continuous" else None)


def _build_model(args) -> FadingModel:
    if args.model == "block":
        return FadingModel.block()
    return FadingModel.continuous(args.f_d)


def _build_config(args) -> LinkConfig:
    if args.n < 2:
        raise ValueError("n must be ≥ 2")
    return LinkConfig(n=args.n, snr=10.0 ** (args.snr_db / 10.0),
                      epsilon=args.eps, model=_build_model(args))


def _sweep_rows_to_records(rows) -> list[dict]:
    records = []
    for row in rows:
        kind, f_d = _model_fields(row.model)
        records.append({
            "swept_param": row.swept_param,
            "swept_value": row.swept_value,
            "model": kind,
            "f_d": f_d,
            "n": row.config.n,
            "snr_db": _snr_db_of(row.config),
            "epsilon": row.config.epsilon,
            "alpha_finite": row.alpha_finite,
            "alpha_ergodic": row.alpha_ergodic,
            "n_t_finite": row.n_t_finite,
            "rate_finite_at_finite": row.rate_finite_at_finite,
            "rate_finite_at_ergodic": row.rate_finite_at_ergodic,
            "gain": row.gain,
            "clamped": row.clamped,
        })
    return records


def cmd_optimize(args) -> int:
    cfg = _build_config(args)
    fin = optimize_alpha(cfg, "finite")
    erg = optimize_alpha(cfg, "ergodic")
    rate_fe, _ = training_rate_curve(erg.alpha_star, cfg, penalty=True)
    rate_ee, _ = training_rate_curve(erg.alpha_star, cfg, penalty=False)
    if rate_fe > 0.0:
        gain = fin.rate_at_opt / rate_fe - 1.0
    else:
        gain = 0.0 if fin.rate_at_opt <= 0.0 else sys.float_info.max

    kind, f_d = _model_fields(cfg.model)
    record = {
        "n": cfg.n,
        "snr_db": args.snr_db,
        "epsilon": cfg.epsilon,
        "model": kind,
        "f_d": f_d,
        "alpha_finite": fin.alpha_star,
        "n_t_finite": fin.n_t_star,
        "rate_finite_at_finite": fin.rate_at_opt,
        "alpha_ergodic": erg.alpha_star,
        "n_t_ergodic": erg.n_t_star,
        "rate_finite_at_ergodic": rate_fe,
        "rate_ergodic_at_ergodic": rate_ee,
        "gain": gain,
        "clamped": bool(fin.clamped_region),
        "method_finite": fin.method,
        "method_ergodic": erg.method,
        "evaluations_finite": fin.evaluations,
        "evaluations_ergodic": erg.evaluations,
    }
    columns = tuple(record.keys())
    if args.format == "json":
        _emit(_records_to_json([record], columns), args.out)
    else:
        _emit(_records_to_csv([record], columns), args.out)
    infeasible = fin.clamped_region and fin.rate_at_opt <= 0.0
    return EXIT_INFEASIBLE if infeasible else EXIT_OK


def cmd_rate(args) -> int:
    cfg = _build_config(args)
    if not (cfg.alpha_min <= args.alpha <= cfg.alpha_max):
        raise ValueError("alpha must lie in [1/n, 1 - 1/n]")
    breakdown = mmse_error(args.alpha, cfg.n, cfg.snr, cfg.model)
    rho_eff = effective_snr(cfg.snr, breakdown.total)
    rate_tr, clamped_tr = training_rate_curve(args.alpha, cfg, penalty=True)
    rate_erg, _ = training_rate_curve(args.alpha, cfg, penalty=False)
    perfect = perfect_csi_rate(cfg.n, cfg.epsilon, cfg.snr)

    kind, f_d = _model_fields(cfg.model)
    record = {
        "n": cfg.n,
        "snr_db": args.snr_db,
        "epsilon": cfg.epsilon,
        "model": kind,
        "f_d": f_d,
        "alpha": args.alpha,
        "sigma2_noise": breakdown.noise_term,
        "sigma2_doppler": breakdown.doppler_term,
        "sigma2_total": breakdown.total,
        "effective_snr": rho_eff,
        "rate_training": rate_tr,
        "rate_ergodic_training": rate_erg,
        "rate_perfect_csi": perfect.bits_per_use,
        "clamped": bool(clamped_tr),
    }
    columns = tuple(record.keys())
    if args.format == "json":
        _emit(_records_to_json([record], columns), args.out)
    else:
        _emit(_records_to_csv([record], columns), args.out)
    return EXIT_OK


def cmd_figure(args) -> int:
    try:
        spec = figure_preset(args.name, doppler=args.doppler)
    except KeyError:
        valid = ", ".join(s.name for s in built_in_figures())
        print(f"unknown figure {args.name!r}; valid names: {valid}", file=sys.stderr)
        return EXIT_USAGE
    rows = run_sweep(spec, threads=args.threads)
    records = _sweep_rows_to_records(rows)
    if args.format == "json":
        _emit(_records_to_json(records, CSV_COLUMNS), args.out)
    else:
        _emit(_records_to_csv(records, CSV_COLUMNS), args.out)
    if args.gnuplot:
        data = args.out if args.out else "figure.csv"
        _emit(_gnuplot_script(spec.kind, data), args.gnuplot)
    return EXIT_OK


def cmd_sweep(args) -> int:
    values = tuple(float(v) for v in args.values.split(","))
    kind = args.kind
    if kind in ("alpha-vs-blocklength", "rate-vs-blocklength"):
        values = tuple(int(round(v)) for v in values)
    fixed = {"n": args.n, "snr_db": args.snr_db, "epsilon": args.eps}
    swept = {"alpha-vs-epsilon": "epsilon", "alpha-vs-blocklength": "n",
             "alpha-vs-snr": "snr_db", "alpha-vs-doppler": "f_d",
             "rate-vs-blocklength": "n"}[kind]
    fixed.pop(swept, None)
    model = _build_model(args)
    spec = SweepSpec(kind=kind, swept_values=values, models=(model,), **fixed)
    rows = run_sweep(spec, threads=args.threads)
    records = _sweep_rows_to_records(rows)
    if args.format == "json":
        _emit(_records_to_json(records, CSV_COLUMNS), args.out)
    else:
        _emit(_records_to_csv(records, CSV_COLUMNS), args.out)
    if args.gnuplot:
        data = args.out if args.out else "sweep.csv"
        _emit(_gnuplot_script(spec.kind, data), args.gnuplot)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.trials < 1000:
        print("trials must be ≥ 1000", file=sys.stderr)
        return EXIT_USAGE
    lines: list[str] = []
    worst = 0.0

    for pilots in (1, 4, 16):
        for rho in (1.0, 10.0):
            n = 32
            alpha = pilots / n
            est = simulate_mmse_mse(alpha, n, rho, args.trials, args.seed)
            analytic = 1.0 / (1.0 + pilots * rho)
            z = est.z_score(analytic)
            worst = max(worst, abs(z))
            lines.append(
                f"eq2: pilots={pilots} snr={rho:g} mc={est.mean:.8f} "
                f"analytic={analytic:.8f} stderr={est.std_error:.2e} z={z:+.3f}"
            )

    for rho in (1.0, 10.0):
        mean_est, var_est, inv_est = mc_capacity_moments(rho, args.trials, args.seed)
        cap = ergodic_capacity(rho)
        cap_quad = quadrature_capacity(rho)
        z = mean_est.z_score(cap)
        worst = max(worst, abs(z))
        lines.append(
            f"eq6: snr={rho:g} mc={mean_est.mean:.8f} analytic={cap:.8f} "
            f"quadrature={cap_quad:.8f} stderr={mean_est.std_error:.2e} z={z:+.3f}"
        )
        from .channel import capacity_variance

        var_ref = capacity_variance(rho)
        z = var_est.z_score(var_ref)
        worst = max(worst, abs(z))
        lines.append(
            f"eq7: snr={rho:g} mc_var={var_est.mean:.8f} quadrature={var_ref:.8f} "
            f"stderr={var_est.std_error:.2e} z={z:+.3f}"
        )
        inv_ref = mean_inverse_snr(rho)
        z = inv_est.z_score(inv_ref)
        worst = max(worst, abs(z))
        lines.append(
            f"eq7: snr={rho:g} mc_meaninv={inv_est.mean:.8f} analytic={inv_ref:.8f} "
            f"stderr={inv_est.std_error:.2e} z={z:+.3f}"
        )

    if args.jakes:
        report = jakes_doppler_ratio(alpha=0.2, n=10, snr=10.0, f_d=0.01,
                                     trials=min(args.trials, 200_000), seed=args.seed)
        lines.append(
            "jakes: measured_excess={measured_excess:.6f} "
            "predicted_doppler={predicted_doppler:.6f} ratio={ratio:.4f} "
            "(informational)".format(**report)
        )

    ok = worst <= 4.0
    lines.append(f"result: {'PASS' if ok else 'FAIL'} worst|z|={worst:.3f} "
                 f"trials={args.trials} seed={args.seed}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_VALIDATION


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="write output to this path")
    parser.add_argument("--seed", type=int, default=1, help="RNG seed (validate)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweeps")


def _add_config_flags(parser: argparse.ArgumentParser, *, need_n=True,
                      need_eps=True, need_snr=True) -> None:
    if need_n:
        parser.add_argument("--n", type=int, required=True, help="blocklength in symbols")
    if need_snr:
        parser.add_argument("--snr-db", type=float, required=True, dest="snr_db")
    if need_eps:
        parser.add_argument("--eps", type=float, required=True,
                            help="target packet error probability")
    parser.add_argument("--model", choices=("block", "continuous"), default="block")
    parser.add_argument("--f-d", type=float, default=DEFAULT_DOPPLER, dest="f_d",
                        help="normalized Doppler (continuous model)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilotopt",
        description="Optimal pilot overhead for short-packet Rayleigh links",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="optimize the pilot fraction")
    _add_config_flags(p_opt)
    _add_common(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_rate = sub.add_parser("rate", help="evaluate rates at a pilot fraction")
    p_rate.add_argument("--alpha", type=float, required=True)
    _add_config_flags(p_rate)
    _add_common(p_rate)
    p_rate.set_defaults(func=cmd_rate)

    p_fig = sub.add_parser("figure", help="run a built-in figure preset")
    p_fig.add_argument("name", help="fig1..fig8")
    p_fig.add_argument("--doppler", type=float, default=DEFAULT_DOPPLER,
                       help="override f_D for continuous presets")
    p_fig.add_argument("--gnuplot", default=None, metavar="PATH",
                       help="also write a companion gnuplot script")
    _add_common(p_fig)
    p_fig.set_defaults(func=cmd_figure)

    p_sweep = sub.add_parser("sweep", help="run a custom sweep")
    p_sweep.add_argument("--kind", choices=("alpha-vs-epsilon", "alpha-vs-blocklength",
                                            "alpha-vs-snr", "alpha-vs-doppler",
                                            "rate-vs-blocklength"), required=True)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated swept values (increasing)")
    p_sweep.add_argument("--n", type=int, default=None)
    p_sweep.add_argument("--snr-db", type=float, default=None, dest="snr_db")
    p_sweep.add_argument("--eps", type=float, default=None)
    p_sweep.add_argument("--model", choices=("block", "continuous"), default="block")
    p_sweep.add_argument("--f-d", type=float, default=DEFAULT_DOPPLER, dest="f_d")
    p_sweep.add_argument("--gnuplot", default=None, metavar="PATH",
                         help="also write a companion gnuplot script")
    _add_common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="Monte Carlo vs analytic checks")
    p_val.add_argument("--trials", type=int, default=1_000_000)
    p_val.add_argument("--jakes", action="store_true",
                       help="also run the informational Jakes drift experiment")
    _add_common(p_val)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
