import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from rlad import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_solve_example(tmp_path, capsys):
    out = tmp_path / "p.csv"
    code, _, _ = run(["solve", "--N", "20", "--beta", "0.5", "--alpha", "0", "--i", "190",
                      "--times", "250", "--out", str(out)], capsys)
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "j", "probability"]
    assert len(rows) == 191
    assert abs(sum(float(r[2]) for r in rows) - 1) < 1e-8
    manifest = json.loads((tmp_path / "p.csv.manifest.json").read_text())
    assert manifest["command"] == "solve" and manifest["config"]["beta"] == 0.5
    assert manifest["outputs"] == ["p.csv"]


def test_domain_error(capsys):
    code, _, err = run(["solve", "--N", "20", "--beta", "1.5", "--i", "190", "--times", "250"], capsys)
    assert code == cli.EXIT_CODES["domain"]
    payload = json.loads(err.strip().splitlines()[-1])
    assert payload["error"] == "domain" and payload["parameter"] == "beta"


def test_unknown_flag_usage(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["solve", "--bogus", "1"])
    assert e.value.code == 2
    _, err = capsys.readouterr()
    assert "usage" in err


def test_unknown_figure(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["reproduce", "fig9"])
    assert e.value.code == 2


def test_mlf_eval_stdout(capsys):
    code, out, _ = run(["mlf", "eval", "--beta", "0.5", "--z", "-1", "0"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "z,value"
    assert lines[1] == "-1,0.427583576156"  # 12 significant digits
    assert lines[2] == "0,1"


def test_mlf_sample_and_fpp(tmp_path, capsys):
    code, out, _ = run(["mlf", "sample", "--beta", "0.7", "--count", "5", "--seed", "3"], capsys)
    assert code == 0 and len(out.strip().splitlines()) == 6
    code, out, _ = run(["fpp", "pmf", "--beta", "1", "--times", "2"], capsys)
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert float(rows[1][2]) == pytest.approx(2 * np.exp(-2), rel=1e-11)


def test_chain_commands(capsys):
    code, out, _ = run(["chain", "stationary", "--N", "2"], capsys)
    assert out.splitlines() == ["k,probability", "0,0.5", "1,0.5"]
    code, out, _ = run(["chain", "degree", "--N", "3"], capsys)
    assert out.splitlines()[1:] == ["0,0.25", "1,0.5", "2,0.25"]


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"schema_version": 1, "N": 3, "beta": 0.7, "i": 2, "times": [1.0, 2.0]}, indent=1))
    out = tmp_path / "s.csv"
    code, _, _ = run(["solve", "--config", str(cfg), "--beta", "0.5", "--out", str(out)], capsys)
    assert code == 0
    m = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    assert m["config"]["beta"] == 0.5 and m["config"]["N"] == 3 and m["config"]["times"] == [1.0, 2.0]


def test_config_errors_cite_location(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "N": 3,\n  "beta": 0.5,\n  "colour": 2\n}\n')
    code, _, err = run(["solve", "--config", str(bad), "--i", "1", "--times", "1"], capsys)
    payload = json.loads(err)
    assert code == cli.EXIT_CODES["config"]
    assert payload["field"] == "colour" and payload["line"] == 4
    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "N": 3,\n  "beta": ,\n}\n')
    code, _, err = run(["solve", "--config", str(broken)], capsys)
    assert json.loads(err)["line"] == 3
    typed = tmp_path / "typed.json"
    typed.write_text('{\n  "N": "many"\n}\n')
    code, _, err = run(["chain", "stationary", "--config", str(typed)], capsys)
    assert json.loads(err)["field"] == "N"


def test_missing_required(capsys):
    code, _, err = run(["solve", "--N", "3"], capsys)
    assert code == cli.EXIT_CODES["config"]
    assert "--beta" in json.loads(err)["message"]


def test_simulate_and_sis(tmp_path, capsys):
    out = tmp_path / "sim.csv"
    code, _, _ = run(["simulate", "--N", "5", "--beta", "0.7", "--times", "1", "10", "--replicates", "50",
                      "--out", str(out)], capsys)
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "j", "pmf_estimate", "stderr"]
    assert len(rows) == 22
    out = tmp_path / "sis.csv"
    code, _, _ = run(["sis", "--N", "6", "--law", "pareto", "--delta", "1.5", "--times", "0", "5",
                      "--replicates", "20", "--initial-infected", "2", "--out", str(out)], capsys)
    assert code == 0
    header, rows = read_csv(out)
    assert header[:4] == ["t", "mean_links", "mean_links_stderr", "mean_prevalence"]
    assert float(rows[0][3]) == pytest.approx(2 / 6)


def test_resource_error(capsys):
    code, _, err = run(["simulate", "--N", "5", "--law", "exponential", "--mean", "0.001", "--times", "100",
                        "--replicates", "2", "--event-cap", "10"], capsys)
    assert code == cli.EXIT_CODES["resource"]
    assert json.loads(err)["replicate"] == 0


def test_match_summary(tmp_path, capsys):
    out = tmp_path / "m.csv"
    code, _, _ = run(["match", "--beta", "0.5", "--gridsize", "20", "--out", str(out)], capsys)
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["t", "ml_survival", "pareto_survival"] and len(rows) == 20
    s = json.loads((tmp_path / "m.summary.json").read_text())
    assert s["gamma"] == pytest.approx(np.pi) and s["delta"] == 1.5


def test_reproduce_fig1d(tmp_path, capsys):
    code, _, _ = run(["reproduce", "fig1d", "--gamma-source", "caption", "--outdir", str(tmp_path)], capsys)
    assert code == 0
    header, rows = read_csv(tmp_path / "fig1d.csv")
    assert header == ["t", "beta1", "beta0.7", "beta0.5", "reference"]
    assert float(rows[0][1]) == 190 and float(rows[-1][4]) == 95
    assert abs(float(rows[-1][1]) - 95) < 0.1


def test_replay_byte_identical(tmp_path, capsys):
    first = tmp_path / "a"
    code, _, _ = run(["reproduce", "fig1a", "--replicates", "60", "--seed", "5", "--outdir", str(first)], capsys)
    assert code == 0
    second = tmp_path / "b"
    code, _, _ = run(["replay", str(first / "fig1a.manifest.json"), "--outdir", str(second), "--workers", "2"], capsys)
    assert code == 0
    assert (first / "fig1a.csv").read_bytes() == (second / "fig1a.csv").read_bytes()
    header, rows = read_csv(first / "fig1a.csv")
    assert header == ["j", "binomial", "simulated", "stderr"] and len(rows) == 191


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "rlad.cli", "chain", "degree", "--N", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "degree,probability"
