import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from antibunch.cli import main
from antibunch.dispersion import mu_of_temperature

ZETA = "1.0059"


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(text.splitlines()))


class TestDip:
    def test_triangle(self, capsys):
        code, out, _ = run(["dip", "--zeta", ZETA, "--mu", "0", "--tau-range", "-3:3:121"], capsys)
        assert code == 0
        rows = rows_of(out)
        assert list(rows[0]) == ["tau_ps", "mu_radps", "p_c"]
        assert len(rows) == 121
        assert min(float(r["p_c"]) for r in rows) == 0.0

    def test_detuned_rows_above_half(self, capsys):
        code, out, _ = run(["dip", "--zeta", ZETA, "--mu-over-zeta", "4"], capsys)
        assert code == 0
        assert any(float(r["p_c"]) > 0.5 for r in rows_of(out))

    def test_missing_zeta_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["dip", "--mu", "0"])
        assert exc.value.code == 2

    def test_bad_range_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["dip", "--zeta", ZETA, "--tau-range", "1:2"])
        assert exc.value.code == 2

    def test_negative_zeta_is_domain_error(self, capsys):
        code, _, err = run(["dip", "--zeta", "-1"], capsys)
        assert code == 3 and "zeta" in err

    def test_delta_omega(self, capsys):
        code, out, _ = run(["dip", "--delta-omega", "1.58", "--tau-range", "-1:1:3"], capsys)
        assert code == 0 and len(rows_of(out)) == 3

    def test_counting_columns_and_manifest(self, tmp_path, capsys):
        out = tmp_path / "dip.csv"
        code, _, _ = run(["dip", "--zeta", ZETA, "--mu-over-zeta", "2.2467", "--counting",
                          "--seed", "7", "--tau-range", "-3:3:31", "--out", str(out)], capsys)
        assert code == 0
        text = out.read_bytes()
        assert b"\r" not in text
        rows = rows_of(text.decode())
        assert list(rows[0]) == ["tau_ps", "mu_radps", "p_c", "raw", "baseline", "p_hat", "std_err"]
        manifest = json.loads((tmp_path / "dip.csv.manifest.json").read_text())
        assert manifest["subcommand"] == "dip"
        assert manifest["parameters"]["counting"]["seed"] == 7
        assert manifest["artifacts"] == [str(out)]

    def test_nine_significant_digits(self, capsys):
        _, out, _ = run(["dip", "--zeta", "1", "--mu", "0.7", "--tau-range", "-1:1:7"], capsys)
        for r in rows_of(out):
            digits = r["p_c"].replace(".", "").replace("-", "").lstrip("0").split("e")[0]
            assert len(digits) <= 9

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# counting\npair_rate = 100\ndwell_time = 1\nrng_seed = 3\n")
        _, out, _ = run(["dip", "--zeta", "1", "--counting", "--config", str(cfg),
                         "--tau-range", "-1:1:3"], capsys)
        base = [int(r["baseline"]) for r in rows_of(out)]
        assert all(20 < b < 90 for b in base)  # Poisson(50)
        # flag overrides the file
        _, out2, _ = run(["dip", "--zeta", "1", "--counting", "--config", str(cfg), "--pair-rate",
                          "1e6", "--tau-range", "-1:1:3"], capsys)
        assert all(int(r["baseline"]) > 4e5 for r in rows_of(out2))


class TestBeat:
    def test_degenerate_row_and_peak(self, capsys):
        code, out, _ = run(["beat", "--zeta", ZETA, "--t-range", "28:90:1241", "--tau", "0"], capsys)
        assert code == 0
        rows = rows_of(out)
        by_t = {round(float(r["temperature_c"]), 6): float(r["p_c"]) for r in rows}
        assert by_t[49.2] <= 1e-9
        assert max(by_t.values()) == pytest.approx(0.6086, abs=5e-4)

    def test_outside_calibration_window(self, capsys):
        code, _, _ = run(["beat", "--zeta", ZETA, "--t-range", "10:90:11"], capsys)
        assert code == 3

    def test_calibration_file(self, tmp_path, capsys):
        cal = tmp_path / "cal.txt"
        cal.write_text("anchor = 40, -10\nanchor = 60, 10\ndegenerate_temperature = 50\n")
        _, out, _ = run(["beat", "--zeta", "1", "--calibration", str(cal), "--t-range", "45:55:3"], capsys)
        mus = [float(r["mu_radps"]) for r in rows_of(out)]
        assert mus == pytest.approx([-5.0, 0.0, 5.0])

    def test_cooling(self, capsys):
        _, out, _ = run(["beat", "--zeta", "1", "--cooling", "--time-constant", "300",
                         "--t-range", "28:90:40"], capsys)
        rows = rows_of(out)
        assert list(rows[0])[0] == "time_s"
        T = [float(r["temperature_c"]) for r in rows]
        assert all(b < a for a, b in zip(T, T[1:]))


class TestMap:
    def test_default_grid_size_and_verify(self, tmp_path, capsys):
        out = tmp_path / "map.csv"
        code, _, err = run(["map", "--zeta", ZETA, "--verify", "--out", str(out)], capsys)
        assert code == 0 and "ok" in err
        assert len(out.read_text().splitlines()) == 6562

    def test_verify_fails_on_asymmetric_axis(self, capsys):
        code, _, _ = run(["map", "--zeta", ZETA, "--verify", "--tau-range", "-1:2:11",
                          "--t-range", "40:60:3"], capsys)
        assert code == 1

    def test_slice_matches_dip(self, tmp_path, capsys):
        run(["map", "--zeta", ZETA, "--tau-range", "-3:3:41", "--t-range", "28:90:5",
             "--out", str(tmp_path / "m.csv")], capsys)
        rows = rows_of((tmp_path / "m.csv").read_text())
        target = rows[2 * 41]["temperature_c"]
        mu = rows[2 * 41]["mu_radps"]
        sl = [(r["tau_ps"], r["mu_radps"], r["p_c"]) for r in rows if r["temperature_c"] == target]
        mu_exact = repr(float(mu_of_temperature(float(target))))
        _, dip, _ = run(["dip", "--zeta", ZETA, "--mu", mu_exact, "--tau-range", "-3:3:41"], capsys)
        assert [(r["tau_ps"], r["mu_radps"], r["p_c"]) for r in rows_of(dip)] == sl
        assert mu == sl[0][1]


class TestWitness:
    def test_paper_measurement(self, capsys):
        code, out, _ = run(["witness", "--pc", "0.593", "--sigma", "0.002"], capsys)
        assert code == 0
        human, record = out.splitlines()
        assert human.startswith("ENTANGLED")
        rec = json.loads(record)
        assert rec["entangled"] and rec["significance"] == pytest.approx(46.5)

    def test_not_entangled(self, capsys):
        _, out, _ = run(["witness", "--pc", "0.49", "--sigma", "0.001"], capsys)
        assert json.loads(out.splitlines()[1])["entangled"] is False

    def test_out_of_range(self, capsys):
        code, _, _ = run(["witness", "--pc", "1.2", "--sigma", "0.01"], capsys)
        assert code == 3

    def test_json_file(self, tmp_path, capsys):
        target = tmp_path / "w.json"
        run(["witness", "--pc", "0.6", "--sigma", "0.01", "--k", "12", "--out", str(target)], capsys)
        rec = json.loads(target.read_text())
        assert rec["k"] == 12 and rec["entangled"] is False


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "antibunch", "dip", "--zeta", "1", "--tau-range",
                          "-3:3:7"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "tau_ps,mu_radps,p_c"
    res = subprocess.run([sys.executable, "-m", "antibunch", "witness"], capture_output=True, text=True)
    assert res.returncode == 2
