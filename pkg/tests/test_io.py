import json

import numpy as np
import pytest

from channel_bounds import io
from channel_bounds import linalg as la
from channel_bounds.channels import choi_state, mixed_channel_np, random_channel
from channel_bounds.entmeasures import rains
from channel_bounds.sampling import random_density


def test_matrix_round_trip(rng):
    M = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    np.testing.assert_array_equal(io.decode_matrix(io.encode_matrix(M)), M)


@pytest.mark.parametrize("bad", [[[1, 2, 3]], [[[1, 0]], [[1, 0], [0, 0]]], "x", [[[float("nan"), 0]]]])
def test_decode_rejects(bad):
    with pytest.raises(io.FormatError):
        io.decode_matrix(bad)


def test_named_channel():
    ch = io.channel_from_json({"kind": "mixed_np", "p": 0.3, "dim_in": 2, "dim_out": 2})
    np.testing.assert_allclose(choi_state(ch), choi_state(mixed_channel_np(0.3)))


def test_kraus_channel_round_trip(rng, tmp_path):
    N = random_channel(2, 3, rng)
    path = tmp_path / "ch.json"
    path.write_text(json.dumps(io.channel_to_json(N)))
    np.testing.assert_allclose(choi_state(io.channel_from_json(path)), choi_state(N), atol=1e-14)


def test_channel_reports_tp_residual():
    obj = {"kind": "kraus", "kraus": [io.encode_matrix(np.diag([1.0, 0.5]))]}
    with pytest.raises(io.FormatError, match="residual 7.500e-01"):
        io.channel_from_json(obj)


@pytest.mark.parametrize("obj", [
    {"kind": "erasure", "p": 0.1},
    {"kind": "depolarizing"},
    {"kind": "depolarizing", "p": 2},
    {"kind": "depolarizing", "p": 0.1, "dim_in": 3},
    {"kind": "kraus", "kraus": []},
    {"p": 0.1},
])
def test_channel_rejects(obj):
    with pytest.raises(io.FormatError):
        io.channel_from_json(obj)


def test_missing_and_invalid_files(tmp_path):
    with pytest.raises(io.FormatError, match="cannot read"):
        io.state_from_json(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(io.FormatError, match="invalid JSON"):
        io.state_from_json(bad)


def test_state_round_trip(rng):
    rho = random_density(4, rng)
    back, dims = io.state_from_json(io.state_to_json(rho, [2, 2]))
    np.testing.assert_array_equal(back, rho)
    assert dims == [2, 2]


@pytest.mark.parametrize("obj,msg", [
    ({"dims": [2, 2], "matrix": [[[1, 0], [0, 0]]]}, "not square"),
    ({"dims": [2, 3], "matrix": io.encode_matrix(np.eye(4) / 4)}, "does not match"),
    ({"dims": [2], "matrix": io.encode_matrix(np.eye(2))}, "trace"),
    ({"dims": "2", "matrix": io.encode_matrix(np.eye(2) / 2)}, "dims"),
])
def test_state_rejects(obj, msg):
    with pytest.raises(io.FormatError, match=msg):
        io.state_from_json(obj)


def test_rep_formats(tmp_path):
    assert io.rep_from_json("pauli").label == "pauli"
    path = tmp_path / "rep.json"
    path.write_text(json.dumps({"U": [io.encode_matrix(np.eye(2)), io.encode_matrix(la.PAULI_Z)]}))
    assert len(io.rep_from_json(str(path))) == 2
    with pytest.raises(io.FormatError):
        io.rep_from_json("clifford")


def test_result_serialization():
    res = rains(la.max_entangled(2))
    out = json.loads(io.dumps(res))
    assert out["value"] == pytest.approx(1.0) and out["converged"] is True
    assert io.to_jsonable({"a": float("inf"), "b": float("nan"), "c": np.int64(3)}) == {"a": "inf", "b": None, "c": 3}
