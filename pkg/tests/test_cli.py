import csv
import io
import json
import math

import numpy as np
import pytest

from conefourier import radial as rd
from conefourier.cli import load_config, main, parse_function_spec, write_rows
from conefourier.errors import ConfigError, SpecParseError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestEval:
    def test_kernel(self, capsys):
        code, out, _ = run(capsys, "eval", "kernel-Klk", "--p", "3", "--q", "3", "--t", "1")
        assert code == 0
        (row,) = csv_rows(out)
        ref = rd.kernel_K_lk(rd.Signature(3, 3), rd.SectorIndex(0, 0), 1.0)
        assert float(row["value"]) == ref
        assert row["value"] == format(ref, ".17g")

    def test_psi_json(self, capsys):
        code, out, _ = run(capsys, "eval", "psi", "--p", "4", "--q", "4", "--l", "1", "--k", "1",
                           "--zeta", "0,2.5", "--format", "json")
        rows = json.loads(out)
        assert code == 0 and len(rows) == 2
        assert rows[0]["real"] == pytest.approx(-1, abs=1e-15)
        assert math.hypot(rows[1]["real"], rows[1]["imag"]) == pytest.approx(1, abs=1e-12)

    def test_flk(self, capsys):
        code, out, _ = run(capsys, "eval", "flk", "--p", "5", "--q", "3", "--l", "1", "--r", "0.5")
        (row,) = csv_rows(out)
        ref = rd.f_lk(rd.Signature(5, 3), rd.SectorIndex(1, 0))(0.5)
        assert float(row["value"]) == pytest.approx(ref, rel=1e-15)

    def test_bessel(self, capsys):
        from scipy.special import kv
        code, out, _ = run(capsys, "eval", "bessel", "--kind", "K", "--nu", "1.5", "--x", "1")
        assert float(csv_rows(out)[0]["value"]) == pytest.approx(kv(1.5, 1.0), rel=1e-14)

    def test_gfun_with_error_estimate(self, capsys):
        code, out, _ = run(capsys, "eval", "gfun", "--m", "1", "--n", "0", "--b", "0,0", "--x", "1",
                           "--format", "json")
        (row,) = json.loads(out)
        from scipy.special import j0
        assert row["value"] == pytest.approx(j0(2.0), rel=1e-10)
        assert 0 < row["error_estimate"] < 1e-8

    def test_bad_signature_exits_2(self, capsys):
        code, _, err = run(capsys, "eval", "psi", "--p", "2", "--q", "4", "--zeta", "0")
        assert code == 2 and "error" in err


class TestTransform:
    def test_builtin_twice(self, capsys, tmp_path):
        out_file = tmp_path / "samples.csv"
        code, out, _ = run(capsys, "transform", "builtin:flk00", "--twice", "--out", str(out_file))
        assert code == 0
        (summary,) = csv_rows(out)
        assert float(summary["involution_residual"]) <= 1e-4
        assert float(summary["norm_in"]) == pytest.approx(0.25, rel=1e-9)
        samples = csv_rows(out_file.read_text())
        assert len(samples) == 8192
        i = 4000
        assert float(samples[i]["output"]) == pytest.approx(float(samples[i]["input"]), rel=1e-5, abs=1e-8)

    def test_fox_norm_ratio(self, capsys, tmp_path):
        spec = tmp_path / "bump.spec"
        spec.write_text("p = 3\nq = 3\ngauss-bump -0.5 0.6\n")
        code, out, _ = run(capsys, "transform", str(spec), "--op", "fox", "--out", str(tmp_path / "o.csv"))
        assert code == 0
        (summary,) = csv_rows(out)
        assert abs(float(summary["norm_ratio"]) - 1) <= 1e-4

    def test_fc_preserves_norm(self, capsys, tmp_path):
        spec = tmp_path / "bump.spec"
        spec.write_text("p = 4\nq = 4\ngauss-bump -1.5 0.6\n")
        code, out, _ = run(capsys, "transform", str(spec), "--op", "fc", "--l", "1", "--twice",
                           "--out", str(tmp_path / "o.csv"))
        (summary,) = csv_rows(out)
        assert code == 0
        assert abs(float(summary["norm_ratio"]) - 1) <= 1e-4
        assert float(summary["involution_residual"]) <= 1e-4

    def test_empty_spec_exits_2(self, capsys, tmp_path):
        spec = tmp_path / "empty.spec"
        spec.write_text("")
        code, _, err = run(capsys, "transform", str(spec))
        assert code == 2 and "SpecParseError" in err

    def test_empty_spec_raises(self):
        with pytest.raises(SpecParseError):
            parse_function_spec("")

    def test_raw_samples(self):
        vals = np.linspace(0.0, 1.0, 256)
        text = "p = 3\nq = 3\nxmin = -8\nxmax = 4\nn = 256\n" + "\n".join(format(v, ".17g") for v in vals)
        f = parse_function_spec(text)
        np.testing.assert_array_equal(f.values, vals)
        assert f.grid.N == 256

    def test_sample_count_mismatch(self):
        with pytest.raises(SpecParseError):
            parse_function_spec("p = 3\nq = 3\nn = 4\n0.1\n0.2\n")


class TestVerify:
    def test_exact_suite(self, capsys):
        code, out, err = run(capsys, "verify", "--suite", "weyl-exact", "--format", "json")
        rows = json.loads(out)
        assert code == 0
        assert {r["status"] for r in rows} <= {"pass", "deviation"}
        assert all(r["tol"] == 0 for r in rows if r["status"] == "pass")
        assert all(r["seed"] == 12345 for r in rows)
        assert "0 failed" in err

    def test_zero_tolerance_forces_failure(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "specfun-identities", "--tol", "0")
        assert code == 1 and "FAIL" in err

    def test_anchor_ids_are_neutral(self, capsys):
        _, out, _ = run(capsys, "verify", "--suite", "gfun-reductions")
        for r in csv_rows(out):
            assert r["anchor"].startswith("gfun.")
            assert r["status"] in ("pass", "deviation")

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# exact algebra only\nsuite = weyl-exact\nseed = 7\nformat = json\n")
        code, out, _ = run(capsys, "verify", "--config", str(cfg))
        rows = json.loads(out)
        assert code == 0 and rows[0]["seed"] == 7

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        with pytest.raises(ConfigError):
            load_config(cfg)

    def test_bad_config_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("grid_n = many\n")
        code, _, err = run(capsys, "verify", "--config", str(cfg))
        assert code == 2 and "config" in err

    def test_report_to_file(self, capsys, tmp_path):
        out_file = tmp_path / "r.csv"
        code, out, _ = run(capsys, "verify", "--suite", "specfun-identities", "--out", str(out_file))
        assert code == 0 and out == ""
        assert len(csv_rows(out_file.read_text())) >= 8


class TestTable:
    def test_eigen_table(self, capsys):
        code, out, _ = run(capsys, "table", "eigen", "--p", "6", "--q", "2", "--lmax", "2", "--kmax", "1")
        rows = csv_rows(out)
        assert code == 0 and rows
        for r in rows:
            sig, idx = rd.Signature(6, 2), rd.SectorIndex(int(r["l"]), int(r["k"]))
            assert int(float(r["eigenvalue"])) == rd.eigenvalue(sig, idx)

    def test_reductions_table(self, capsys):
        code, out, _ = run(capsys, "table", "reductions")
        rows = csv_rows(out)
        assert code == 0
        assert max(float(r["rel_error"]) for r in rows) <= 1e-10


class TestFormatting:
    def test_seventeen_digits_round_trip(self):
        buf = io.StringIO()
        write_rows([{"v": 0.1, "w": math.pi}], "csv", buf)
        row = csv_rows(buf.getvalue())[0]
        assert row["v"] == "0.10000000000000001"
        assert float(row["w"]) == math.pi

    def test_json_infinity_and_bool(self):
        buf = io.StringIO()
        write_rows([{"e": math.inf, "ok": True, "n": 3}], "json", buf)
        (row,) = json.loads(buf.getvalue())
        assert row == {"e": "inf", "ok": True, "n": 3}

    def test_empty_json(self):
        buf = io.StringIO()
        write_rows([], "json", buf)
        assert json.loads(buf.getvalue()) == []
