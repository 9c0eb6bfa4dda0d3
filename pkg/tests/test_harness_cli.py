import json
import os
import subprocess
import sys

import numpy as np
import pytest

from ellpar.cli import main, read_field_csv, write_field_csv
from ellpar.config import ConfigError, parse_config, problem_from_config
from ellpar.harness import (
    jump_initial,
    make_comparison_pair,
    make_jump_scenario,
    validate_class_P,
)
from ellpar.regularize import GridField

JUMP_CFG = """
# jump scenario
op.kind = trace
op.lambda = 1.0
b.kind = positive-part
b.n = 16
u0.kind = jump
grid.n = 201
time.T = 0.1
time.dt = 0.0025
g.lo = -1.0
g.hi = -1.0
"""


class TestConfig:
    def test_parse_types(self):
        cfg = parse_config("a.x = 1\na.y = 2.5\nflag = true\nname = jump\n"
                           "list = 1,2,3\n")
        assert cfg.get("a.x") == 1
        assert cfg.get("a.y") == 2.5
        assert cfg.get("flag") is True
        assert cfg.get("name") == "jump"
        assert cfg.get("list") == (1, 2, 3)

    def test_sections(self):
        cfg = parse_config("op.kind = trace\nop.lambda = 2\n")
        assert cfg.section("op") == {"kind": "trace", "lambda": 2}

    def test_malformed_rejected(self):
        with pytest.raises(ConfigError):
            parse_config("this is not a key value line\n")
        with pytest.raises(ConfigError):
            parse_config("= 3\n")

    def test_problem_roundtrip(self):
        spec = problem_from_config(parse_config(JUMP_CFG))
        assert spec.grid == 201
        assert spec.bn.n == 16
        assert spec.op.kind == "trace"
        u0 = spec.initial_values()
        assert u0[0] == -1.0 and u0[-1] == -1.0

    def test_bad_operator_is_config_error(self):
        with pytest.raises(ConfigError):
            problem_from_config(parse_config("op.kind = nonsense\n"))


class TestScenarios:
    def test_jump_datum_values(self):
        x = np.array([-1.0, -0.3, 0.0, 0.3, 1.0])
        u = jump_initial(x)
        assert u.tolist() == [-1.0, 0.0, 0.5, 0.0, -1.0]

    def test_class_P_validation_passes(self):
        scn = make_jump_scenario(grid=201, n=8)
        assert validate_class_P(scn)

    def test_class_P_warns_on_bad_datum(self):
        scn = make_jump_scenario(grid=201, n=8)
        from dataclasses import replace

        scn.spec = replace(scn.spec, u0=lambda x: np.cos(x) - 0.9,
                           g_lo=np.cos(1.0) - 0.9, g_hi=np.cos(1.0) - 0.9)
        with pytest.warns(UserWarning):
            assert not validate_class_P(scn)

    def test_comparison_pair_strict_separation(self):
        base = make_jump_scenario(grid=201, n=16, T=0.1)
        lower, upper = make_comparison_pair(base, 0.05)
        u_lo = lower.spec.initial_values()
        u_hi = upper.spec.initial_values()
        assert np.all(u_hi - u_lo >= 0.05 / 2 - 1e-12)
        glo_l, _ = lower.spec.boundary(0.0)
        glo_u, _ = upper.spec.boundary(0.0)
        assert glo_u - glo_l == pytest.approx(0.025)

    def test_comparison_pair_infeasible(self):
        base = make_jump_scenario(grid=201, n=16)
        with pytest.raises(ValueError):
            make_comparison_pair(base, 0.8)


class TestFieldCSV:
    def test_roundtrip(self, tmp_path):
        x = np.linspace(-1, 1, 11)
        ts = np.linspace(0, 0.5, 6)
        rng = np.random.default_rng(0)
        fld = GridField(x, ts, rng.standard_normal((6, 11)))
        p = tmp_path / "f.csv"
        write_field_csv(p, fld)
        back = read_field_csv(p)
        assert np.array_equal(back.x, fld.x)
        assert np.array_equal(back.times, fld.times)
        assert np.array_equal(back.values, fld.values)


class TestCLI:
    def _write_cfg(self, tmp_path):
        p = tmp_path / "jump.cfg"
        p.write_text(JUMP_CFG)
        return str(p)

    def test_solve_outputs(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = str(tmp_path / "out")
        assert main(["solve", "--config", cfg, "--out", out]) == 0
        for name in ("field.csv", "front.csv", "summary.json"):
            assert os.path.exists(os.path.join(out, name))
        with open(os.path.join(out, "summary.json")) as fh:
            summary = json.load(fh)
        assert summary["extinction_time"] is not None
        assert summary["max_principle"]["lower_margin"] >= -1e-9
        assert summary["max_principle"]["upper_margin"] >= -1e-9
        fld = read_field_csv(os.path.join(out, "field.csv"))
        assert fld.x.size == 201

    def test_solve_deterministic(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        main(["solve", "--config", cfg, "--out", out1])
        main(["solve", "--config", cfg, "--out", out2])
        for name in ("field.csv", "front.csv", "summary.json"):
            with open(os.path.join(out1, name), "rb") as f1, \
                 open(os.path.join(out2, name), "rb") as f2:
                assert f1.read() == f2.read()

    def test_bad_config_exit_2(self, tmp_path):
        p = tmp_path / "bad.cfg"
        p.write_text("op.kind = nonsense\n")
        assert main(["solve", "--config", str(p), "--out", str(tmp_path)]) == 2
        assert main(["solve", "--config", str(tmp_path / "missing.cfg"),
                     "--out", str(tmp_path)]) == 2

    def test_sweep_n(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = str(tmp_path / "sweep")
        assert main(["sweep-n", "--config", cfg, "--n", "4,8,16", "--out", out]) == 0
        with open(os.path.join(out, "convergence.json")) as fh:
            conv = json.load(fh)
        assert conv["n_list"] == [4, 8, 16]
        assert len(conv["pairwise_sup"]) == 2

    def test_envelope_and_crossing(self, tmp_path):
        x = np.linspace(-1, 1, 81)
        ts = np.linspace(0, 1, 81)
        X, T = np.meshgrid(x, ts)
        fld = GridField(x, ts, np.sin(X) + 0.1 * T)
        fin = str(tmp_path / "in.csv")
        write_field_csv(fin, fld)
        zout = str(tmp_path / "z.csv")
        wout = str(tmp_path / "w.csv")
        assert main(["envelope", "--in", fin, "--r", "0.12", "--kind", "sup",
                     "--out", zout]) == 0
        assert main(["envelope", "--in", fin, "--r", "0.12", "--kind", "inf",
                     "--out", wout]) == 0
        z = read_field_csv(zout)
        w = read_field_csv(wout)
        assert np.all(z.values >= w.values)
        assert main(["crossing", "--z", wout, "--w", zout]) == 0

    def test_verify_barrier(self, tmp_path):
        p = tmp_path / "bar.cfg"
        p.write_text("op.kind = pucci-minus\nop.lambda = 1.0\nop.Lambda = 1.2\n"
                     "op.delta1 = 0.5\nop.delta0 = 0.2\nop.n_dim = 3\n"
                     "barrier.rho0 = 1.0\nbarrier.a_hat = 1.0\n"
                     "barrier.b_hat = -0.5\nbarrier.omega_hat = 0.3\n")
        assert main(["verify-barrier", "--family", "radial",
                     "--config", str(p)]) == 0

    def test_accept_subset(self, tmp_path):
        rep = str(tmp_path / "report.json")
        assert main(["accept", "--criteria", "1,5", "--out", rep]) == 0
        with open(rep) as fh:
            report = json.load(fh)
        assert report["passed"]
        assert [c["index"] for c in report["criteria"]] == [1, 5]

    def test_console_script_help(self):
        proc = subprocess.run([sys.executable, "-m", "ellpar.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        for sub in ("solve", "sweep-n", "verify-barrier", "envelope",
                    "crossing", "compare", "accept"):
            assert sub in proc.stdout
