"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Criteria 1, 2 and 3b target behaviors that the implemented formulas
provably cannot produce at the stated operating points; they are asserted
exactly as stated and fail honestly rather than with weakened tolerances.
"""

import math
import sys
import time

import numpy as np
import pytest

from pilotopt.channel import (
    ergodic_capacity,
    mean_inverse_snr,
    quadrature_capacity,
    quadrature_mean_inverse,
)
from pilotopt.cli import main as cli_main
from pilotopt.estimation import BLOCK, FadingModel, mmse_error
from pilotopt.fixtures import suite_configs
from pilotopt.optimizer import grid_search_alpha, optimize_alpha, rate_gain
from pilotopt.rate import LinkConfig, training_rate, training_rate_curve
from pilotopt.specfun import exp_integral_e1, q_function, q_inverse
from pilotopt.sweep import built_in_figures, run_sweep

from frozen import E1_TABLE


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def preset_rows():
    rows = {}
    for spec in built_in_figures():
        rows[spec.name] = run_sweep(spec)
    return rows


def _monotone_ok(values, direction: str) -> tuple[bool, str]:
    """Weak monotonicity with at most one violation of magnitude <= 1e-4."""
    steps = np.diff(np.asarray(values, dtype=float))
    if direction == "non-increasing":
        bad = steps[steps > 1e-12]
    else:
        bad = -steps[steps < -1e-12]
    ok = bad.size == 0 or (bad.size == 1 and float(bad[0]) <= 1e-4)
    detail = f"{bad.size} violations" + (
        f", worst {float(bad.max()):.2e}" if bad.size else ""
    )
    return ok, detail


class TestCriterion1InteriorRatePeak:
    def test_fig7_rate_peaks_at_interior_blocklength(self, preset_rows):
        t0 = time.perf_counter()
        rows = preset_rows["fig7"]
        ns = np.array([r.swept_value for r in rows])
        rates = np.array([r.rate_finite_at_finite for r in rows])
        elapsed = time.perf_counter() - t0
        peak = int(np.argmax(rates))
        interior = (
            rates[peak] > 0.0
            and 0 < peak < len(rows) - 1
            and rates[peak] > rates[0]
            and rates[peak] > rates[-1]
        )
        in_window = 24 <= ns[peak] <= 34
        ok = interior and in_window
        report(
            "1 (interior rate peak)",
            ok,
            f"argmax n={int(ns[peak])}, peak rate={rates[peak]:.6f}, "
            f"nonzero rows={int((rates > 0).sum())}/{len(rows)}, {elapsed:.1f}s",
        )
        assert elapsed < 10.0
        assert ok, (
            "fig7 finite-blocklength rate has no positive interior peak in "
            "n=[24,34]: the quadratic Doppler-drift error exceeds the full "
            "channel power for every pilot fraction once n >= 22 at "
            "f_D = 0.02, so the rate column is identically zero there"
        )


class TestCriterion2RateGainMagnitude:
    def test_block_fading_gain_window(self):
        t0 = time.perf_counter()
        gains = []
        for n in range(2, 61):
            cfg = LinkConfig(n=n, snr=10.0 ** 0.7, epsilon=1e-9, model=BLOCK)
            gains.append(rate_gain(cfg))
        elapsed = time.perf_counter() - t0
        finite = [g for g in gains if g < sys.float_info.max]
        top = max(finite)
        ok = 0.02 <= top <= 0.25 and len(finite) == len(gains)
        report(
            "2 (rate-gain magnitude)",
            ok,
            f"max gain={top:.4f} at n={2 + int(np.argmax(gains))}, {elapsed:.1f}s",
        )
        assert elapsed < 10.0
        assert ok, (
            f"max rate gain over n in [2,60] is {top:.4f}, outside [0.02, 0.25]: "
            "the first feasible blocklength (n=24) sits at the edge where the "
            "rate at the ergodic-optimal pilot fraction is nearly zero, so the "
            "relative gain spikes above the window"
        )


class TestCriterion3Monotonicity:
    def test_a_pilot_fraction_nonincreasing_in_snr(self, preset_rows):
        t0 = time.perf_counter()
        rows = preset_rows["fig4"]
        ok_all = True
        details = []
        for kind in ("block", "continuous"):
            curve = [r.alpha_finite for r in rows if r.model.kind == kind]
            ok, detail = _monotone_ok(curve, "non-increasing")
            ok_all &= ok
            details.append(f"{kind}: {detail}")
        elapsed = time.perf_counter() - t0
        report("3a (alpha* vs SNR)", ok_all, "; ".join(details) + f", {elapsed:.1f}s")
        assert ok_all

    def test_b_pilot_fraction_nondecreasing_in_doppler(self, preset_rows):
        t0 = time.perf_counter()
        rows = preset_rows["fig5"]
        curve = [r.alpha_finite for r in rows]
        ok, detail = _monotone_ok(curve, "non-decreasing")
        elapsed = time.perf_counter() - t0
        report("3b (alpha* vs f_D)", ok, detail + f", {elapsed:.1f}s")
        assert ok, (
            "alpha* drifts slightly downward as f_D grows at n=10, 16 dB, "
            "eps=1e-9: the drift error term is insensitive to extra pilots "
            "once alpha*n*rho >> 1, so the optimizer sheds pilots instead of "
            "adding them, and no increase materializes"
        )

    def test_c_alpha_gap_widens_as_error_target_shrinks(self, preset_rows):
        t0 = time.perf_counter()
        rows = preset_rows["fig1"]
        ok_all = True
        details = []
        for kind in ("block", "continuous"):
            curve = [
                abs(r.alpha_finite - r.alpha_ergodic)
                for r in rows
                if r.model.kind == kind
            ]
            # Swept values ascend in eps; the claim reads toward smaller eps.
            ok, detail = _monotone_ok(curve[::-1], "non-decreasing")
            ok_all &= ok
            details.append(f"{kind}: {detail}")
        elapsed = time.perf_counter() - t0
        report("3c (gap vs eps)", ok_all, "; ".join(details) + f", {elapsed:.1f}s")
        assert ok_all


class TestCriterion4ArgmaxDominance:
    def test_presets_and_random_suite(self, preset_rows):
        t0 = time.perf_counter()
        worst = math.inf
        count = 0
        for rows in preset_rows.values():
            for row in rows:
                worst = min(worst, row.rate_finite_at_finite - row.rate_finite_at_ergodic)
                count += 1
        for _, cfg in suite_configs():
            fin = optimize_alpha(cfg, "finite")
            erg = optimize_alpha(cfg, "ergodic")
            at_erg, _ = training_rate_curve(erg.alpha_star, cfg, penalty=True)
            worst = min(worst, fin.rate_at_opt - at_erg)
            count += 1
        elapsed = time.perf_counter() - t0
        ok = worst >= -1e-12
        report(
            "4 (argmax dominance)", ok,
            f"{count} comparisons, worst margin={worst:.3e}, {elapsed:.1f}s",
        )
        assert ok


class TestCriterion5OracleEquivalence:
    def test_optimizer_matches_dense_grid(self):
        t0 = time.perf_counter()
        worst = 0.0
        for _, cfg in suite_configs():
            grid = grid_search_alpha(cfg, "finite", 100_000)
            opt = optimize_alpha(cfg, "finite")
            cell = (cfg.alpha_max - cfg.alpha_min) / (100_000 - 1)
            excess = abs(grid.alpha_star - opt.alpha_star) - (cell + 1e-6)
            worst = max(worst, excess)
        elapsed = time.perf_counter() - t0
        ok = worst <= 0.0 and elapsed < 60.0
        report(
            "5 (oracle equivalence)", ok,
            f"200 configs, worst excess over one cell={worst:.3e}, {elapsed:.1f}s",
        )
        assert worst <= 0.0
        assert elapsed < 60.0


class TestCriterion6TripleAgreement:
    def test_closed_forms_vs_quadrature_and_monte_carlo(self, capsys):
        t0 = time.perf_counter()
        for rho in (0.1, 1.0, 10.0, 100.0):
            cap = ergodic_capacity(rho)
            inv = mean_inverse_snr(rho)
            assert abs(quadrature_capacity(rho) - cap) / cap <= 1e-8
            assert abs(quadrature_mean_inverse(rho) - inv) / inv <= 1e-8
        code = cli_main(["validate", "--trials", "1000000", "--seed", "1"])
        out = capsys.readouterr().out
        elapsed = time.perf_counter() - t0
        zs = [
            abs(float(part.split("=")[1]))
            for line in out.splitlines()
            for part in line.split()
            if part.startswith("z=")
        ]
        ok = code == 0 and max(zs) <= 4.0 and elapsed < 120.0
        with capsys.disabled():
            report(
                "6 (triple agreement)", ok,
                f"validate exit={code}, worst |z|={max(zs):.2f} over {len(zs)} "
                f"checks, {elapsed:.1f}s",
            )
        assert ok

    def test_mmse_estimator_grid(self):
        # Eq-level MSE validation over the (pilots, snr) operating grid.
        from pilotopt.montecarlo import simulate_mmse_mse

        for pilots in (1, 4, 16):
            for rho in (1.0, 10.0):
                est = simulate_mmse_mse(pilots / 32.0, 32, rho, 1_000_000, seed=1)
                target = 1.0 / (1.0 + pilots * rho)
                assert abs(est.mean - target) <= 4.0 * est.std_error


class TestCriterion7SpecialFunctionAccuracy:
    def test_exponential_integral_and_tail_inverse(self):
        worst_e1 = 0.0
        for x, expected in E1_TABLE.items():
            worst_e1 = max(worst_e1, abs(exp_integral_e1(x) - expected) / expected)
        worst_rt = 0.0
        eps = 1e-1
        while eps >= 1e-15:
            back = q_function(q_inverse(eps))
            worst_rt = max(worst_rt, abs(back - eps) / eps)
            eps /= 10.0
        ok = worst_e1 <= 1e-10 and worst_rt <= 1e-8
        report(
            "7 (special functions)", ok,
            f"E1 worst rel={worst_e1:.2e}, Qinv round-trip worst rel={worst_rt:.2e}",
        )
        assert ok


class TestCriterion8DegenerateSuite:
    def test_median_target_collapse(self):
        cfg = LinkConfig(n=30, snr=10 ** 1.5, epsilon=0.5, model=BLOCK)
        fin = optimize_alpha(cfg, "finite")
        erg = optimize_alpha(cfg, "ergodic")
        collapse = abs(fin.alpha_star - erg.alpha_star) <= 1e-6
        for alpha in (cfg.alpha_min, 0.3, 0.77):
            ft, _ = training_rate_curve(alpha, cfg, penalty=True)
            et, _ = training_rate_curve(alpha, cfg, penalty=False)
            collapse &= ft == et
        report("8a (eps=0.5 collapse)", collapse, "finite == ergodic exactly")
        assert collapse

    def test_zero_doppler_collapse(self):
        rng = np.random.default_rng(31)
        cont0 = FadingModel.continuous(0.0)
        identical = True
        for _ in range(1000):
            n = int(rng.integers(2, 120))
            alpha = float(rng.uniform(1.0 / n, 1.0 - 1e-12))
            rho = float(rng.uniform(1e-2, 1e3))
            identical &= (
                mmse_error(alpha, n, rho, BLOCK).total
                == mmse_error(alpha, n, rho, cont0).total
            )
        report("8b (f_D=0 collapse)", identical, "1000 random tuples bit-identical")
        assert identical

    def test_total_uncertainty_clamp(self):
        cfg = LinkConfig(n=10, snr=10.0, epsilon=1e-3,
                         model=FadingModel.continuous(0.1))
        rv = training_rate(0.2, cfg)
        ok = rv.bits_per_use == 0.0 and rv.clamped
        report("8c (sigma2 >= 1 clamp)", ok,
               f"rate={rv.bits_per_use}, clamped={rv.clamped}")
        assert ok
