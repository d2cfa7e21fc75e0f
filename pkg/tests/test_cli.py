import json

import numpy as np
import pytest

from channel_bounds import cli, io
from channel_bounds import linalg as la
from channel_bounds.sampling import random_density


@pytest.fixture
def files(tmp_path, rng):
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps(io.state_to_json(la.max_entangled(2), [2, 2])))
    prod = tmp_path / "prod.json"
    prod.write_text(json.dumps(io.state_to_json(np.kron(random_density(2, rng), random_density(2, rng)), [2, 2])))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dims": [2, 2], "matrix": [[[1, 0], [0, 0]]]}))
    ch = tmp_path / "ch.json"
    ch.write_text(json.dumps({"kind": "depolarizing", "p": 0.2}))
    return {"phi": phi, "prod": prod, "bad": bad, "ch": ch, "dir": tmp_path}


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def field(text, name):
    for tok in text.split():
        if tok.startswith(name + "="):
            return tok.split("=", 1)[1]
    raise KeyError(name)


class TestMeasure:
    def test_mes(self, capsys, files):
        code, out, _ = run(capsys, "measure", files["phi"], "--kind", "rains")
        assert code == 0
        assert abs(float(field(out, "value")) - 1.0) <= 1e-5

    def test_product(self, capsys, files):
        code, out, _ = run(capsys, "measure", files["prod"])
        assert code == 0 and abs(float(field(out, "value"))) <= 1e-6

    def test_parse_error(self, capsys, files):
        code, _, err = run(capsys, "measure", files["bad"])
        assert code == 1 and "not square" in err

    def test_json_output(self, capsys, files):
        out_path = files["dir"] / "m.json"
        run(capsys, "measure", files["phi"], "--kind", "e_ppt", "--out", out_path, "--format", "json")
        assert json.loads(out_path.read_text())["kind"] == "e_ppt"

    def test_flagged_exit(self, capsys, files):
        # a pure non-maximally entangled input cannot reach a 1e-12 gradient tolerance
        v = np.array([np.cos(0.4), 0, 0, np.sin(0.4)])
        path = files["dir"] / "pure.json"
        path.write_text(json.dumps(io.state_to_json(np.outer(v, v), [2, 2])))
        code, out, err = run(capsys, "measure", path, "--tol", "1e-12")
        assert code == 2 and "FLAGGED" in err and field(out, "converged") == "False"

    def test_invalid_tolerance(self, capsys, files):
        assert run(capsys, "--tol", "-1", "measure", files["prod"])[0] == 1


class TestDiamond:
    def test_same_file(self, capsys, files):
        code, out, _ = run(capsys, "diamond", files["ch"], files["ch"])
        assert code == 0 and float(field(out, "value")) == 0.0

    def test_builtin_pair(self, capsys):
        code, out, _ = run(capsys, "diamond", "--np", "0.5", "--np-twirled", "0.5")
        assert code == 0
        assert float(field(out, "value")) <= 0.125 + 1e-6
        assert "lower_bound=" in out and "bracket=" in out

    def test_needs_two_channels(self, capsys, files):
        assert run(capsys, "diamond", files["ch"])[0] == 1


class TestVerify:
    def test_twirl_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "twirl", "--samples", "20", "--seed", "7")
        assert code == 0
        lines = [ln for ln in out.splitlines() if "tp_vs_twirl" in ln]
        assert lines and all(float(field(ln, "value")) <= 1e-10 for ln in lines)

    def test_overlap_suite(self, capsys, files):
        out_path = files["dir"] / "o.csv"
        code, out, _ = run(capsys, "verify", "overlap", "--samples", "100", "--out", out_path)
        assert code == 0 and out.strip().splitlines()[-1].startswith("PASS overlap")
        assert out_path.read_text().startswith("name,value,bound,margin,passed")

    def test_unknown_suite(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "nothing"])
        assert exc.value.code == 1


class TestSweep:
    def test_endpoint(self, capsys, files):
        out_path = files["dir"] / "s.csv"
        code, out, _ = run(capsys, "bounds", "sweep", "--steps", "1", "--out", out_path)
        assert code == 0
        header, row = out_path.read_text().strip().splitlines()
        vals = dict(zip(header.split(","), map(float, row.split(","))))
        for k in ("upper_ska", "upper_ppt_q", "lower_coherent", "lower_rev_coherent"):
            assert abs(vals[k] - 1.0) <= 1e-3

    def test_deterministic_and_parallel(self, capsys, files):
        a, b = files["dir"] / "a.csv", files["dir"] / "b.csv"
        run(capsys, "bounds", "sweep", "--p-max", "0.4", "--steps", "3", "--out", a)
        run(capsys, "--jobs", "2", "bounds", "sweep", "--p-max", "0.4", "--steps", "3", "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_and_json(self, capsys, files):
        code, out, err = run(capsys, "bounds", "sweep", "--steps", "1")
        assert out.startswith("p,upper_ska")
        out_path = files["dir"] / "s.json"
        run(capsys, "bounds", "sweep", "--steps", "1", "--format", "json", "--out", out_path)
        assert json.loads(out_path.read_text())[0]["p"] == 0.0

    def test_bad_config(self, capsys):
        assert run(capsys, "bounds", "sweep", "--p-min", "0.8", "--p-max", "0.2")[0] == 1
        assert run(capsys, "bounds", "sweep", "--steps", "0")[0] == 1


class TestTwirl:
    def test_np_pauli(self, capsys, files):
        out_path = files["dir"] / "t.json"
        code, out, _ = run(capsys, "twirl", "--np", "0.3", "--out", out_path)
        assert code == 0
        assert float(field(out, "teleport_max_deviation")) <= 1e-10
        rec = json.loads(out_path.read_text())
        twirled = io.channel_from_json(rec["twirled_channel"])
        assert twirled.dim_in == 2

    def test_file_ix(self, capsys, files):
        code, out, _ = run(capsys, "twirl", files["ch"], "--rep", "ix")
        assert code == 0 and "teleport_max_deviation" not in out


class TestSeed:
    def test_env_fallback(self, monkeypatch):
        monkeypatch.setenv(cli.SEED_ENV, "11")
        args = cli.build_parser().parse_args(["verify", "twirl"])
        assert cli._resolve_seed(args) == 11
        args = cli.build_parser().parse_args(["verify", "twirl", "--seed", "3"])
        assert cli._resolve_seed(args) == 3

    def test_env_invalid(self, monkeypatch, capsys):
        monkeypatch.setenv(cli.SEED_ENV, "abc")
        assert run(capsys, "verify", "twirl", "--samples", "1")[0] == 1

    def test_fmt(self):
        assert cli.fmt(1 / 3) == "0.333333"
        assert cli.fmt(True) == "True"
