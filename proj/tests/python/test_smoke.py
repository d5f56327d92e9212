import json
import os
import pathlib

import pytest

import spot

ROOT = pathlib.Path(__file__).resolve().parents[2]


def test_context_and_hash():
    ctx = spot.Context.setup(112, b"py")
    assert ctx.curve == "alt_bn128"
    assert ctx.order.bit_length() == 254
    h = ctx.hash_to_scalar(b"abc")
    assert len(h) == ctx.scalar_size
    assert int.from_bytes(h, "big") < ctx.order
    a, b = bytes(range(1, 17)), bytes(range(2, 18))
    assert ctx.set_ccm(a, b) == ctx.set_ccm(b, a)
    with pytest.raises(ValueError):
        ctx.set_ccm(b"short", b)
    with pytest.raises(ValueError):
        spot.Context.setup(100, b"x")


def test_minimal_scenario():
    sc = json.loads((ROOT / "tools" / "scenarios" / "minimal.json").read_text())
    rep = spot.simulate(sc)
    assert rep["risk"]["u1"]["exposed"]
    assert rep == spot.simulate(json.dumps(sc))
    with pytest.raises(spot.MalformedInput):
        spot.simulate({"seed": "x"})


def test_bench_rows():
    rep = spot.bench(runs=1, algorithms=["S_Keygen", "Set_CCM"])
    assert [r["algorithm"] for r in rep["rows"]] == ["S_Keygen", "Set_CCM"]
    assert rep["rows"][0]["communication"]["g2"] == 2
    assert len(spot.algorithms()) == 12


def test_cli_in_process(tmp_path):
    d = str(tmp_path / "state")
    code, out, _ = spot.cli(["init", "-d", d, "--seed", "py"])
    assert code == 0 and "initialised" in out
    code, _, err = spot.cli(["risk", "nobody", "-d", d])
    assert code == 3, err
