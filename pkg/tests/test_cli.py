import json
import math

import pytest
from click.testing import CliRunner

from latmoment import cli
from latmoment.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def lines(result):
    return result.stdout.strip().split("\n")


# ---------------------------------------------------------------- tables


def test_poisson_exact_row(runner):
    r = runner.invoke(main, ["poisson", "--n", "3", "--lambda", "1"])
    assert r.exit_code == 0
    assert r.stdout == "# latmoment-csv v1\nn,lambda,m_n,pm\n3,1,5,0\n"


def test_poisson_rational_rate_stays_exact(runner):
    r = runner.invoke(main, ["poisson", "--n", "2", "--lambda", "1/2"])
    assert r.exit_code == 0
    assert lines(r)[-1] == "2,1/2,3/4,0"


def test_field_info_csv(runner):
    r = runner.invoke(main, ["field-info", "Q(zeta,5)"])
    assert r.exit_code == 0
    assert lines(r)[0] == "# latmoment-csv v1"
    assert lines(r)[1] == "descriptor,kind,degree,r1,r2,unit_rank,discriminant,omega,conductor"
    assert lines(r)[2] == '"Q(zeta,5)",cyclotomic,4,0,2,1,125,10,5'


def test_field_info_json_schema(runner):
    r = runner.invoke(main, ["field-info", "Q", "--format", "json"])
    assert r.exit_code == 0
    d = json.loads(r.stdout)
    assert d["schema"] == 1
    row = d["rows"][0]
    assert row["degree"] == 1 and row["omega"] == 2
    assert row["conductor"] is None


def test_t0_table_default_has_published_targets(runner):
    r = runner.invoke(main, ["t0-table", "--c0", "0.24"])
    assert r.exit_code == 0
    body = lines(r)[2:]
    assert len(body) == 5
    published = [27, 97, 213, 372, 576]
    for row, pub in zip(body, published):
        cells = row.split(",")
        assert int(cells[-1]) == pub
        assert float(cells[2]) < pub
    # the canonical pairs all bind at the counting entry kM + 1/2
    assert [row.split(",")[2] for row in body] == [
        "26.5", "96.5", "210.5", "368.5", "575.5"]
    assert all(row.split(",")[3] == "0" for row in body)


def test_t0_table_length_mismatch(runner):
    r = runner.invoke(main, ["t0-table", "--k", "26,48", "--m", "1"])
    assert r.exit_code != 0


def test_height_golden_ratio(runner):
    r = runner.invoke(main, ["height", "Q(sqrt,5)", "0,1"])
    assert r.exit_code == 0
    cells = lines(r)[-1].split(",")
    # quoted element cell, then kind, height, pm
    assert abs(float(cells[-2]) - 0.24060591252980174) < 1e-12


def test_gr_height_factor_row(runner):
    r = runner.invoke(main, ["gr-height", "Q",
                             "--row", "1 0 1/2", "--row", "0 1 3",
                             "--format", "json"])
    assert r.exit_code == 0
    row = json.loads(r.stdout)["rows"][0]
    assert row["m"] == 2 and row["n"] == 3
    assert row["index"] == 2
    assert abs(row["gr_height"] - row["covolume"] * 2) < 1e-9


def test_zeta_rational_contains_pi_squared_over_six(runner):
    r = runner.invoke(main, ["zeta", "1", "--s", "2"])
    assert r.exit_code == 0
    cells = lines(r)[-1].split(",")
    low, high = float(cells[-2]), float(cells[-1])
    assert low <= math.pi**2 / 6 <= high


def test_zeta_descriptor_backend(runner):
    r = runner.invoke(main, ["zeta", "Q(sqrt,-1)", "--s", "2", "--p", "3000"])
    assert r.exit_code == 0
    cells = lines(r)[-1].split(",")
    low, high = float(cells[-2]), float(cells[-1])
    assert low <= 1.5067030 <= high


def test_moment_bounds_long_format(runner):
    r = runner.invoke(main, ["moment-bounds", "Q", "--t", "40", "--n", "3",
                             "--volume", "1", "--format", "json"])
    assert r.exit_code == 0
    rows = {row["quantity"]: row["value"] for row in json.loads(r.stdout)["rows"]}
    assert rows["lower"] == rows["main"] == 11.0
    assert rows["upper"] > 11.0
    assert rows["component:rank_one_tail"] > 0
    assert "constant:t0_effective" in rows


def test_second_moment_row(runner):
    r = runner.invoke(main, ["second-moment", "Q", "--t", "30", "--volume", "1"])
    assert r.exit_code == 0
    header = lines(r)[1].split(",")
    cells = lines(r)[2].split(",")
    row = dict(zip(header, cells))
    assert row["lower"] == "3" and row["main"] == "3"
    assert 3.0 < float(row["upper"]) < 40.0


# ------------------------------------------------------- config and exits


def test_threshold_violation_exits_2_with_t0(runner):
    r = runner.invoke(main, ["second-moment", "Q(sqrt,-1)", "--t", "3",
                             "--volume", "1"])
    assert r.exit_code == 2
    assert "computed t0 = 4.5" in r.stderr


def test_invalid_element_exits_2(runner):
    r = runner.invoke(main, ["height", "Q", "0"])
    assert r.exit_code == 2
    assert "invalid configuration" in r.stderr


def test_config_file_supplies_defaults_flags_win(runner, tmp_path):
    cfg = tmp_path / "lm.cfg"
    cfg.write_text("t = 6\nvolume = 2 # trailing comment\nformat = json\n\n# note\n")
    r = runner.invoke(main, ["second-moment", "Q", "--config", str(cfg),
                             "--t", "30"])
    assert r.exit_code == 0
    row = json.loads(r.stdout)["rows"][0]
    assert row["t"] == 30.0
    assert row["volume"] == "2"


def test_config_line_without_equals(runner, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just a line\n")
    r = runner.invoke(main, ["poisson", "--n", "1", "--lambda", "1",
                             "--config", str(cfg)])
    assert r.exit_code != 0
    assert "config line without '='" in r.stderr


def test_output_goes_to_file(runner, tmp_path):
    out = tmp_path / "z.csv"
    r = runner.invoke(main, ["poisson", "--n", "2", "--lambda", "1",
                             "--output", str(out)])
    assert r.exit_code == 0
    assert r.stdout == ""
    assert out.read_text().startswith("# latmoment-csv v1\n")


# ------------------------------------------------------------- empirical


def test_empirical_mc_ratio_byte_identical(runner):
    args = ["empirical", "Q", "--kind", "mc-ratio", "--t", "6",
            "--alpha", "2", "--samples", "10000", "--seed", "3"]
    a = runner.invoke(main, args)
    b = runner.invoke(main, args)
    assert a.exit_code == 0
    assert a.stdout == b.stdout
    est = float(lines(a)[-1].split(",")[4])
    assert abs(est - 2.0**-6) < 0.01


def test_empirical_lattice_expected_main_exact(runner):
    r = runner.invoke(main, ["empirical", "--kind", "lattice", "--t", "6",
                             "--n", "2", "--volume", "2", "--p", "101",
                             "--samples", "200", "--seed", "11"])
    assert r.exit_code == 0
    body = lines(r)[2:]
    assert len(body) == 2
    assert body[0].split(",")[7] == "2"
    assert body[1].split(",")[7] == "8"


def test_empirical_mc_ratio_needs_alpha(runner):
    r = runner.invoke(main, ["empirical", "Q", "--kind", "mc-ratio", "--t", "6"])
    assert r.exit_code != 0


# ---------------------------------------------------------------- verify


def test_verify_core_suite_passes(runner):
    r = runner.invoke(main, ["verify", "--suite", "core", "--seed", "7",
                             "--cutoff", "5"])
    assert r.exit_code == 0
    d = json.loads(r.stdout)
    assert d["schema"] == 1 and d["suite"] == "core" and d["seed"] == 7
    assert d["all_pass"] is True
    assert len(d["checks"]) == 14
    assert all(c["verdict"] == "consistent" for c in d["checks"])
    assert r.stderr.count("PASS") == 14


def test_verify_violation_exits_3(runner, monkeypatch):
    stub = [{"check": "stub", "params": {}, "estimate": 2.0, "sigma": 0.0,
             "bound": 1.0, "verdict": "violated"}]
    monkeypatch.setattr(cli, "_core_suite", lambda seed, cutoff: stub)
    r = runner.invoke(main, ["verify"])
    assert r.exit_code == 3
    assert json.loads(r.stdout)["all_pass"] is False
    assert "FAIL stub" in r.stderr


def test_verify_output_file(runner, tmp_path):
    out = tmp_path / "verify.json"
    r = runner.invoke(main, ["verify", "--seed", "7", "--cutoff", "5",
                             "--output", str(out)])
    assert r.exit_code == 0
    assert json.loads(out.read_text())["all_pass"] is True
