import json

import numpy as np
import pytest

from dispest import cli
from dispest.fock import PureStateError


def run_cli(capsys, args):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def load_record(out):
    return json.loads(out)


def read_csv(path):
    config = None
    rows = []
    header = None
    for line in open(path).read().splitlines():
        if line.startswith("# config: "):
            config = json.loads(line[len("# config: "):])
        elif line.startswith("#"):
            continue
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(x) for x in line.split(",")])
    return config, header, np.array(rows)


def test_bounds_coherent_sql(capsys):
    code, out, _ = run_cli(capsys, ["bounds", "--probe", "coherent"])
    assert code == 0
    rec = load_record(out)
    assert rec["results"]["b_mi"] == 2.0
    assert rec["results"]["branch"] == "RLD"
    assert rec["config"]["probe"] == "coherent"


def test_bounds_tmst_json(capsys):
    code, out, _ = run_cli(capsys, ["bounds", "--probe", "tmst",
                                    "--r", "0.3", "--N", "1"])
    rec = load_record(out)
    assert code == 0
    assert rec["results"]["branch"] == "RLD"
    assert abs(rec["results"]["b_mi"] - 8 / (3 * np.cosh(0.6) - 1)) < 1e-12
    assert abs(rec["results"]["r_sql"] - 0.25 * np.log(9)) < 1e-12


def test_bounds_prior_pair(capsys):
    code, out, _ = run_cli(capsys, ["bounds", "--probe", "tmst", "--r", "1",
                                    "--N", "0.5", "--delta", "2"])
    rec = load_record(out)
    d2 = 4.0
    b_s = 2 * 2 * d2 / (2 + 2 * d2 * np.cosh(2))
    b_r = 4 * 0.75 * d2 / (2 * 0.75 + d2 * (2 * np.cosh(2) - 1))
    assert abs(rec["results"]["b_sld"] - b_s) < 1e-12
    assert abs(rec["results"]["b_rld"] - b_r) < 1e-12


def test_bounds_weight_matrix(capsys):
    _, base, _ = run_cli(capsys, ["bounds", "--probe", "tmst",
                                  "--r", "0.5", "--N", "1"])
    _, doubled, _ = run_cli(capsys, ["bounds", "--probe", "tmst", "--r", "0.5",
                                     "--N", "1", "--G", "2,0,2"])
    b, d = load_record(base)["results"], load_record(doubled)["results"]
    assert np.isclose(d["b_sld"], 2 * b["b_sld"])
    assert np.isclose(d["b_rld"], 2 * b["b_rld"])


def test_bounds_csv_format(capsys):
    code, out, _ = run_cli(capsys, ["bounds", "--probe", "single", "--r", "0.2",
                                    "--N", "0.4", "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# tool: dispest")
    header = lines[3].split(",")
    values = dict(zip(header, (float(x) for x in lines[4].split(","))))
    assert np.isclose(values["b_mi"], (2 * 0.4 + 1) * np.cosh(0.4) + 1)


@pytest.mark.parametrize("args", [
    ["bounds", "--probe", "tmst-asym", "--r", "0.5"],
    ["bounds", "--probe", "tmst", "--N1", "0.5", "--r", "0.1"],
    ["bounds", "--probe", "coherent", "--r", "0.5"],
    ["bounds", "--probe", "tmst", "--r", "-1", "--N", "1"],
    ["simulate", "--r", "1", "--N", "0", "--shots", "1000",
     "--q0", "1", "--p0", "0", "--prior-delta", "2"],
    ["simulate", "--shots", "1000", "--q0", "0", "--p0", "0"],
    ["simulate", "--baseline", "--r", "1", "--shots", "1000",
     "--q0", "0", "--p0", "0"],
    ["simulate", "--r", "1", "--N", "0", "--shots", "1000", "--q0", "0",
     "--p0", "0", "--scaling", "bogus"],
    ["sweep", "--quantity", "gap", "--probe", "single"],
    ["figure", "fig2", "--steps", "1"],
    ["nonsense"],
])
def test_usage_errors_exit_2(capsys, args):
    code, _, err = run_cli(capsys, args)
    assert code == 2
    assert err.strip()


def test_numerical_failures_exit_3(capsys, monkeypatch):
    def boom(query):
        raise PureStateError("RLD undefined for pure states")
    monkeypatch.setattr(cli, "bound_most_informative", boom)
    code, _, err = run_cli(capsys, ["bounds", "--probe", "coherent"])
    assert code == 3
    assert "numerical failure" in err


def test_simulate_json_and_reproducibility(capsys):
    args = ["simulate", "--r", "1", "--N", "0.5", "--shots", "100000",
            "--seed", "7", "--q0", "0.7", "--p0", "-0.3"]
    code, out, _ = run_cli(capsys, args)
    rec = load_record(out)
    assert code == 0
    assert abs(rec["results"]["z_vs_target"]) < 4
    assert abs(rec["results"]["target_mse_sum"] - 4 * np.exp(-2)) < 1e-12

    # reconstruct the command from the embedded config and rerun
    cfg = rec["config"]
    args2 = ["simulate", "--r", str(cfg["r"]), "--N", str(cfg["N"]),
             "--shots", str(cfg["shots"]), "--seed", str(cfg["seed"]),
             "--q0", str(cfg["q0"]), "--p0", str(cfg["p0"]),
             "--scaling", cfg["scaling"], "--workers", str(cfg["workers"])]
    code, out2, _ = run_cli(capsys, args2)
    rec2 = load_record(out2)
    assert rec2["results"]["mse_sum"] == rec["results"]["mse_sum"]
    assert rec2["results"]["mean_q"] == rec["results"]["mean_q"]


def test_simulate_baseline_prior(capsys):
    code, out, _ = run_cli(capsys, ["simulate", "--baseline", "--shots",
                                    "100000", "--seed", "5", "--prior-delta",
                                    "1", "--scaling", "coherent"])
    rec = load_record(out)
    assert code == 0
    assert rec["results"]["k_used"] == 0.5
    assert abs(rec["results"]["mse_sum"] - 1.0) < 4 * rec["results"]["se_mse_sum"]
    assert rec["results"]["bound_mi"] == 1.0


def test_simulate_dump_shots(capsys, tmp_path):
    path = tmp_path / "shots.csv"
    code, out, _ = run_cli(capsys, ["simulate", "--r", "0.5", "--N", "0.2",
                                    "--shots", "500", "--seed", "2",
                                    "--q0", "0.1", "--p0", "0.2",
                                    "--dump-shots", str(path)])
    assert code == 0
    config, header, rows = read_csv(path)
    assert header[:3] == ["shot", "q0", "p0"]
    assert rows.shape == (500, 7)
    rec = load_record(out)
    mse = np.mean((rows[:, 5] - rows[:, 1]) ** 2 + (rows[:, 6] - rows[:, 2]) ** 2)
    assert np.isclose(mse, rec["results"]["mse_sum"])


def test_figure_fig2_roundtrip(capsys, tmp_path):
    code, _, _ = run_cli(capsys, ["figure", "fig2", "--out", str(tmp_path),
                                  "--steps", "60"])
    assert code == 0
    config, header, rows = read_csv(tmp_path / "fig2.csv")
    assert header == ["r", "D_N0", "D_N0.5", "D_N2"]
    assert rows.shape == (60, 4)
    # D(r, 0) column is e^{-4r}
    assert np.allclose(rows[:, 1], np.exp(-4 * rows[:, 0]), atol=1e-12)

    # rerun from the embedded config and compare bytes
    original = (tmp_path / "fig2.csv").read_bytes()
    out2 = tmp_path / "again"
    run_cli(capsys, ["figure", "fig2", "--out", str(out2),
                     "--r-min", str(config["r_min"]),
                     "--r-max", str(config["r_max"]),
                     "--steps", str(config["steps"])])
    assert (out2 / "fig2.csv").read_bytes() == original


def test_figure_fig2_kink_for_hot_probe(capsys, tmp_path):
    run_cli(capsys, ["figure", "fig2", "--out", str(tmp_path), "--steps", "301"])
    _, _, rows = read_csv(tmp_path / "fig2.csv")
    r, d2col = rows[:, 0], rows[:, 3]
    diffs = np.diff(d2col)
    assert np.any(diffs > 0)  # non-monotonic
    # the kink sits at the branch threshold of N = 2 (interior local maximum)
    turning = np.where((diffs[:-1] > 0) & (diffs[1:] < 0))[0]
    switch = r[turning[0] + 1]
    assert abs(switch - 1.1462) < 0.02


def test_figure_fig3(capsys, tmp_path):
    code, _, _ = run_cli(capsys, ["figure", "fig3", "--out", str(tmp_path),
                                  "--steps", "80"])
    assert code == 0
    for delta in (1, 2, 3, 5):
        config, header, rows = read_csv(tmp_path / f"fig3_{delta}.csv")
        assert header == ["r", "mse_Kmin", "mse_Kc", "B_MI", "B_SQL"]
        assert np.all(rows[:, 1] <= rows[:, 2] + 1e-12)  # K_min never worse
        assert np.all(rows[:, 1] >= rows[:, 3] - 1e-9)   # bounded below by B_MI
        assert np.allclose(rows[:, 4], 2 * delta ** 2 / (1 + delta ** 2))


def test_figure_env_var_output(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("DISPEST_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run_cli(capsys, ["figure", "fig2", "--steps", "10"])
    assert code == 0
    assert (tmp_path / "fig2.csv").exists()


def test_sweep_monotone_and_identities(capsys, tmp_path):
    b_path = tmp_path / "bs.csv"
    run_cli(capsys, ["sweep", "--quantity", "b_sld", "--N", "1",
                     "--steps", "40", "--out", str(b_path)])
    _, _, rows = read_csv(b_path)
    assert np.all(np.diff(rows[:, 1]) < 0)

    e_path = tmp_path / "e.csv"
    mi_path = tmp_path / "mi.csv"
    duan_path = tmp_path / "duan.csv"
    common = ["--N", "0.7", "--steps", "40"]
    run_cli(capsys, ["sweep", "--quantity", "scheme_variance", *common,
                     "--out", str(e_path)])
    run_cli(capsys, ["sweep", "--quantity", "b_mi", *common,
                     "--out", str(mi_path)])
    run_cli(capsys, ["sweep", "--quantity", "duan_lhs", *common,
                     "--out", str(duan_path)])
    _, _, e_rows = read_csv(e_path)
    _, _, mi_rows = read_csv(mi_path)
    _, _, duan_rows = read_csv(duan_path)
    assert np.all(e_rows[:, 1] - mi_rows[:, 1] >= -1e-12)
    assert np.allclose(duan_rows[:, 1], e_rows[:, 1], atol=1e-12)
