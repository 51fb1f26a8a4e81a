"""Golden fixtures: figure CSVs, the randomized optimizer-vs-grid suite, and
the derived-constants table.

Every fixture is regenerable from a recorded command (see fixtures/README.md)
and regeneration is deterministic: running it twice on an unchanged tree
produces byte-identical files.  The derived-constants table is produced by
oracles that are independent of the library code paths (high-precision
adaptive integration via mpmath, bisection on the erfc-based tail function),
so it doubles as the reference record for every frozen constant asserted in
the test suite.

Figure fixtures hold the exact CSV bytes of `pilotopt figure <name>`; the
random-suite fixture freezes 200 configurations spanning n in [2, 200],
SNR in [0, 30] dB, error targets in [1e-12, 1e-1] and Doppler in [0, 0.05],
with the 1e5-point grid-search oracle and the golden-section result side by
side.

Run `python -m pilotopt.fixtures [--only name,...] [--root DIR]`.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .cli import CSV_COLUMNS, _records_to_csv, _sweep_rows_to_records
from .estimation import FadingModel
from .optimizer import grid_search_alpha, optimize_alpha
from .rate import LinkConfig
from .sweep import built_in_figures, run_sweep

SUITE_SEED = 20240817
SUITE_SIZE = 200
SUITE_GRID_POINTS = 100_000

FIGURE_NAMES = tuple(f"fig{i}" for i in range(1, 9))
ALL_NAMES = FIGURE_NAMES + ("random_suite", "derived_constants")

_SUITE_COLUMNS = (
    "idx", "model", "f_d", "n", "snr_db", "epsilon", "cell_width",
    "alpha_grid", "rate_grid", "alpha_opt", "rate_opt", "method",
    "alpha_ergodic", "rate_finite_at_ergodic",
)


def suite_configs() -> list[tuple[int, LinkConfig]]:
    """The frozen 200-config random suite (deterministic in SUITE_SEED)."""
    rng = np.random.default_rng(SUITE_SEED)
    configs = []
    for idx in range(SUITE_SIZE):
        n = int(rng.integers(2, 201))
        snr_db = float(rng.uniform(0.0, 30.0))
        epsilon = float(10.0 ** rng.uniform(-12.0, -1.0))
        if idx % 2 == 0:
            model = FadingModel.block()
        else:
            model = FadingModel.continuous(float(rng.uniform(0.0, 0.05)))
        cfg = LinkConfig(n=n, snr=10.0 ** (snr_db / 10.0), epsilon=epsilon,
                         model=model)
        configs.append((idx, cfg))
    return configs


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def generate_figure(name: str) -> str:
    spec = next(s for s in built_in_figures() if s.name == name)
    rows = run_sweep(spec)
    return _records_to_csv(_sweep_rows_to_records(rows), CSV_COLUMNS)


def generate_random_suite(grid_points: int = SUITE_GRID_POINTS) -> str:
    records = []
    for idx, cfg in suite_configs():
        grid = grid_search_alpha(cfg, "finite", grid_points)
        opt = optimize_alpha(cfg, "finite")
        erg = optimize_alpha(cfg, "ergodic")
        from .rate import training_rate_curve

        rate_fe, _ = training_rate_curve(erg.alpha_star, cfg, penalty=True)
        cell = (cfg.alpha_max - cfg.alpha_min) / (grid_points - 1)
        records.append({
            "idx": idx,
            "model": cfg.model.kind,
            "f_d": cfg.model.doppler if cfg.model.kind == "continuous" else None,
            "n": cfg.n,
            "snr_db": 10.0 * float(np.log10(cfg.snr)),
            "epsilon": cfg.epsilon,
            "cell_width": cell,
            "alpha_grid": grid.alpha_star,
            "rate_grid": grid.rate_at_opt,
            "alpha_opt": opt.alpha_star,
            "rate_opt": opt.rate_at_opt,
            "method": opt.method,
            "alpha_ergodic": erg.alpha_star,
            "rate_finite_at_ergodic": rate_fe,
        })
    return _records_to_csv(records, _SUITE_COLUMNS)


def derived_constants() -> list[dict]:
    """Oracle table for every frozen constant used by the tests.

    Requires mpmath (a dev dependency); each row records the value and the
    oracle that produced it.
    """
    try:
        import mpmath as mp
    except ImportError as exc:  # pragma: no cover
        raise RuntimeError("regenerating derived_constants requires mpmath") from exc

    mp.mp.dps = 40

    def e1_integral(x):
        return mp.quad(lambda t: mp.e ** (-x * t) / t, [1, mp.inf])

    def q_tail(x):
        return mp.erfc(x / mp.sqrt(2)) / 2

    def q_inv(eps):
        eps = mp.mpf(eps)
        lo, hi = mp.mpf(-45), mp.mpf(45)
        while hi - lo > mp.mpf("1e-30"):
            mid = (lo + hi) / 2
            if q_tail(mid) > eps:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2

    def capacity(rho):
        rho = mp.mpf(rho)
        return mp.quad(lambda g: mp.e ** (-g) * mp.log(1 + rho * g, 2), [0, mp.inf])

    def mean_inv(rho):
        rho = mp.mpf(rho)
        return mp.quad(lambda g: mp.e ** (-g) / (1 + rho * g), [0, mp.inf])

    def var_log(rho):
        rho = mp.mpf(rho)
        m1 = capacity(rho)
        m2 = mp.quad(lambda g: mp.e ** (-g) * mp.log(1 + rho * g, 2) ** 2, [0, mp.inf])
        return m2 - m1 * m1

    def disp(rho):
        l2e = mp.log(mp.e, 2)
        return var_log(rho) + l2e ** 2 / 2 * (1 - mean_inv(rho) ** 2)

    rows: list[dict] = []

    def add(name: str, value, oracle: str) -> None:
        rows.append({"name": name, "value": mp.nstr(value, 17), "oracle": oracle})

    for x in ("0.01", "0.1", "1", "10", "50"):
        add(f"E1({x})", e1_integral(mp.mpf(x)),
            "adaptive integration of int_1^inf exp(-x t)/t dt (mpmath, 40 dps)")
    add("Q(5.9978)", q_tail(mp.mpf("5.9978")), "erfc(x/sqrt 2)/2 at 40 dps")
    for eps in ("1e-9", "0.9", "1e-3", "1e-5", "1e-12", "1e-15"):
        add(f"Qinv({eps})", q_inv(eps), "bisection on the high-precision tail function")

    add("C(1)", capacity(1), "adaptive quadrature of E[log2(1+g)], g~Exp(1)")
    add("log2(e)*e*E1(1)", mp.log(mp.e, 2) * mp.e * e1_integral(mp.mpf(1)),
        "closed-form identity target for the order-64 Gauss-Laguerre check")
    add("meaninv(1)", mean_inv(1), "adaptive quadrature of E[1/(1+g)]")
    add("Var_log2(1)", var_log(1), "adaptive quadrature of the two log2 moments")
    add("V(1)", disp(1), "variance plus log2(e)^2/2*(1-meaninv^2)")
    add("perfect_rate_n100_eps1e-3_snr1",
        capacity(1) - mp.sqrt(disp(1) / 100) * q_inv("1e-3"),
        "assembled from the quadrature moments and the bisection quantile")

    snr15 = mp.mpf(10) ** mp.mpf("1.5")
    alpha = mp.mpf("0.5")
    s2 = 1 / (1 + alpha * 30 * snr15)
    reff = snr15 * (1 - s2) / (1 + snr15 * s2)
    add("train_example_sigma2", s2, "exact substitution 1/(1+alpha n rho) at 15 dB")
    add("train_example_rho_eff", reff, "exact substitution of the effective-SNR map")
    add("train_example_C(rho_eff)", capacity(reff), "adaptive quadrature")
    add("train_example_V(rho_eff)", disp(reff), "adaptive quadrature")
    add("train_example_rate",
        (1 - alpha) * capacity(reff) - q_inv("1e-5") * mp.sqrt((1 - alpha) * disp(reff) / 30),
        "printed-formula assembly from oracle moments")
    add("train_example_ergodic_rate", (1 - alpha) * capacity(reff),
        "baseline (1-alpha)*C(rho_eff) from the quadrature oracle")
    add("doppler_example", 2 * (mp.pi * mp.mpf("0.4") / 21) ** 2 * 81,
        "exact substitution alpha=0.2 n=10 snr=10 f_d=0.02")
    add("effsnr_example", mp.mpf(10) * (1 - mp.mpf(1) / 11) / (1 + 10 * mp.mpf(1) / 11),
        "exact substitution snr=10, sigma2=1/11")
    return rows


def _constants_csv() -> str:
    rows = derived_constants()
    out = ["# schema=1", "name,value,oracle"]
    for row in rows:
        out.append("{name},{value},{oracle}".format(**row))
    return "\n".join(out) + "\n"


_README = """\
# Golden fixtures

Regenerate everything with:

    python -m pilotopt.fixtures --root .

Per-fixture recipes (equivalent commands):

| fixture | command |
| --- | --- |
| fig1.csv .. fig8.csv | `pilotopt figure figN` |
| random_suite.csv | `python -m pilotopt.fixtures --only random_suite` |
| derived_constants.csv | `python -m pilotopt.fixtures --only derived_constants` |

Regeneration is deterministic: a second run on an unchanged tree produces a
zero diff (the test suite enforces this for the figure fixtures).  Golden
comparisons are numeric per column for rate-valued fields (1e-9 relative,
so legitimate quadrature-order changes survive) and byte-exact for integer
and flag fields.

`random_suite.csv` freezes 200 random link configurations together with the
10^5-point grid-search oracle and the golden-section optimizer output; the
acceptance suite re-derives both sides live.  `derived_constants.csv` is the
oracle record for every frozen numeric constant asserted in the tests: each
row names the independent oracle (adaptive mpmath integration, bisection on
the Gaussian tail) that produced it.
"""


def regenerate_fixtures(root: Path | str = ".", only: tuple[str, ...] | None = None) -> list[Path]:
    """Rewrite the requested fixtures under <root>/fixtures; returns paths."""
    root = Path(root)
    names = tuple(only) if only else ALL_NAMES
    unknown = set(names) - set(ALL_NAMES)
    if unknown:
        raise ValueError(f"unknown fixtures: {sorted(unknown)}")
    written = []
    fixdir = root / "fixtures"
    for name in names:
        if name == "random_suite":
            path = fixdir / "random_suite.csv"
            _write(path, generate_random_suite())
        elif name == "derived_constants":
            path = fixdir / "derived_constants.csv"
            _write(path, _constants_csv())
        else:
            path = fixdir / f"{name}.csv"
            _write(path, generate_figure(name))
        written.append(path)
    _write(fixdir / "README.md", _README)
    written.append(fixdir / "README.md")
    return written


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="regenerate golden fixtures")
    parser.add_argument("--root", default=".", help="repository root")
    parser.add_argument("--only", default=None,
                        help="comma-separated subset of fixture names")
    args = parser.parse_args(argv)
    only = tuple(args.only.split(",")) if args.only else None
    for path in regenerate_fixtures(args.root, only):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
