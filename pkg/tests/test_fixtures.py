"""Golden-fixture checks.

Comparison policy: rate-valued columns numerically at 1e-9 relative (so a
legitimate quadrature-order change survives), pilot-fraction columns at 2e-6
absolute (a 1e-12 objective perturbation can move the argmax by about its
square root), integer and flag columns byte-exact.
"""

import math
from pathlib import Path

import pytest

from pilotopt.fixtures import (
    FIGURE_NAMES,
    generate_figure,
    regenerate_fixtures,
    suite_configs,
)
from pilotopt.optimizer import grid_search_alpha

import frozen

ROOT = Path(__file__).resolve().parent.parent
FIXDIR = ROOT / "fixtures"

RATE_COLUMNS = {"rate_finite_at_finite", "rate_finite_at_ergodic", "gain",
                "rate_grid", "rate_opt", "rate_finite_at_ergodic"}
ALPHA_COLUMNS = {"alpha_finite", "alpha_ergodic", "alpha_grid", "alpha_opt"}


def parse_csv(text: str) -> list[dict]:
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def assert_rows_match(expected: list[dict], actual: list[dict]) -> None:
    assert len(expected) == len(actual)
    for exp, act in zip(expected, actual):
        assert exp.keys() == act.keys()
        for key in exp:
            if key in RATE_COLUMNS:
                e, a = float(exp[key]), float(act[key])
                scale = max(abs(e), abs(a), 1e-30)
                assert abs(e - a) <= 1e-9 * scale, (key, e, a)
            elif key in ALPHA_COLUMNS:
                assert abs(float(exp[key]) - float(act[key])) <= 2e-6, (key, exp, act)
            elif key in ("snr_db", "epsilon", "f_d", "swept_value", "cell_width"):
                e = float(exp[key]) if exp[key] else math.nan
                a = float(act[key]) if act[key] else math.nan
                assert (math.isnan(e) and math.isnan(a)) or e == a, (key, exp, act)
            else:
                assert exp[key] == act[key], (key, exp, act)


class TestRegeneration:
    def test_regeneration_is_deterministic(self, tmp_path):
        first = tmp_path / "a"
        second = tmp_path / "b"
        regenerate_fixtures(first, only=("fig5", "fig8"))
        regenerate_fixtures(second, only=("fig5", "fig8"))
        for name in ("fig5.csv", "fig8.csv", "README.md"):
            assert (first / "fixtures" / name).read_bytes() == (
                second / "fixtures" / name
            ).read_bytes()

    def test_unknown_fixture_name_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            regenerate_fixtures(tmp_path, only=("fig99",))


class TestCommittedFigures:
    @pytest.mark.parametrize("name", ["fig2", "fig5", "fig8"])
    def test_fixture_matches_current_code(self, name):
        committed = (FIXDIR / f"{name}.csv").read_text()
        live = generate_figure(name)
        assert_rows_match(parse_csv(committed), parse_csv(live))

    @pytest.mark.parametrize("name", FIGURE_NAMES)
    def test_all_figures_present_with_schema(self, name):
        text = (FIXDIR / f"{name}.csv").read_text()
        assert text.startswith("# schema=1\n")
        rows = parse_csv(text)
        assert len(rows) >= 20

    def test_fig7_row_count(self):
        rows = parse_csv((FIXDIR / "fig7.csv").read_text())
        assert len(rows) > 20


@pytest.fixture(scope="module")
def table():
    rows = parse_csv((FIXDIR / "derived_constants.csv").read_text())
    return {row["name"]: float(row["value"]) for row in rows}


@pytest.fixture(scope="module")
def suite_rows():
    return parse_csv((FIXDIR / "random_suite.csv").read_text())


class TestDerivedConstantsTable:

    def test_required_entries_present(self, table):
        for needed in ("E1(1)", "Qinv(1e-9)", "Var_log2(1)", "V(1)", "C(1)"):
            assert needed in table

    def test_oracle_commands_recorded(self):
        rows = parse_csv((FIXDIR / "derived_constants.csv").read_text())
        assert all(row["oracle"] for row in rows)

    def test_matches_frozen_test_constants(self, table):
        assert table["E1(1)"] == pytest.approx(frozen.E1_TABLE[1.0], rel=1e-15)
        assert table["E1(50)"] == pytest.approx(frozen.E1_TABLE[50.0], rel=1e-15)
        assert table["Qinv(1e-9)"] == pytest.approx(frozen.QINV_TABLE[1e-9], rel=1e-14)
        assert table["C(1)"] == pytest.approx(frozen.C_AT_1, rel=1e-15)
        assert table["meaninv(1)"] == pytest.approx(frozen.MEANINV_AT_1, rel=1e-15)
        assert table["Var_log2(1)"] == pytest.approx(frozen.VARLOG_AT_1, rel=1e-14)
        assert table["V(1)"] == pytest.approx(frozen.DISPERSION_AT_1, rel=1e-14)
        assert table["train_example_rate"] == pytest.approx(frozen.TRAIN_RATE, rel=1e-14)
        assert table["perfect_rate_n100_eps1e-3_snr1"] == pytest.approx(
            frozen.PERFECT_RATE_EXAMPLE, rel=1e-14
        )
        assert table["doppler_example"] == pytest.approx(
            frozen.DOPPLER_EXAMPLE, rel=1e-14
        )


class TestRandomSuiteFixture:
    def test_covers_two_hundred_configs(self, suite_rows):
        assert len(suite_rows) == 200

    def test_every_row_within_one_grid_cell(self, suite_rows):
        for row in suite_rows:
            gap = abs(float(row["alpha_grid"]) - float(row["alpha_opt"]))
            assert gap <= float(row["cell_width"]) + 1e-6, row["idx"]

    def test_spot_check_against_live_oracle(self, suite_rows):
        configs = dict(suite_configs())
        for row in suite_rows[::25]:
            cfg = configs[int(row["idx"])]
            live = grid_search_alpha(cfg, "finite", 100_000)
            assert abs(live.alpha_star - float(row["alpha_grid"])) <= 1e-12
            scale = max(abs(live.rate_at_opt), 1e-30)
            assert abs(live.rate_at_opt - float(row["rate_grid"])) <= 1e-9 * scale
