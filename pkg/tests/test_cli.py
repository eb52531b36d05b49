from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from intmodel.cli import main
from intmodel.dsl import load
from intmodel.integral import build_integral

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
EX44 = os.path.join(ROOT, "workspaces", "ex44.fcat")
CHAIN3 = os.path.join(ROOT, "workspaces", "chain3.fcat")
BAD = os.path.join(ROOT, "workspaces", "bad.fcat")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_exit_codes(capsys):
    assert run(capsys, "validate", EX44)[0] == 0
    assert run(capsys, "validate", CHAIN3)[0] == 0
    code, out, _ = run(capsys, "validate", BAD, "--json")
    assert code == 2
    err = json.loads(out)
    assert err["error"] == "parse" and err["line"] == 4


def test_json_report_shape(capsys):
    code, out, _ = run(capsys, "model-check", EX44, "--model", "ex44", "--json", "--no-timing")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"checks", "stats"}
    assert set(rep["stats"]) == {"categories", "morphisms", "elapsed_ms"} and rep["stats"]["elapsed_ms"] == 0
    assert all(set(c) == {"name", "paper_anchor", "status", "witness"} for c in rep["checks"])


def test_enumerate_i1_lists_three(capsys):
    code, out, _ = run(capsys, "enumerate-models", "--category", "I1", "--json", "--no-timing")
    rep = json.loads(out)
    assert code == 0 and rep["checks"][0]["name"] == "3 model structures"
    assert sum(c["name"].startswith("structure ") for c in rep["checks"]) == 3


def test_verify_integral_on_slice(capsys):
    assert run(capsys, "verify-theorem", "integral", EX44, "--functor", "SLICE")[0] == 0


def test_non_relative_functor_exits_one(capsys):
    code, out, _ = run(capsys, "check-proper-relative", EX44, "--functor", "EXTRIV")
    assert code == 1 and "witness" in out


def test_example_verb_reads_the_fiber_from_the_functor(capsys):
    code, out, _ = run(capsys, "verify-theorem", "example44", EX44, "--functor", "EXTRIV")
    assert code == 0 and "include: not a Quillen equivalence" in out
    assert run(capsys, "verify-theorem", "example44", EX44, "--functor", "SLICE")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys, "model-check", EX44, "--model", "NOPE")[0] == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_integrate_emit_roundtrip(capsys, tmp_path):
    out = tmp_path / "total.fcat"
    code, _, _ = run(capsys, "integrate", EX44, "--functor", "CONSTPT", "--emit", str(out))
    assert code == 0
    ws = load(str(out))
    I = build_integral(load(EX44).get("CONSTPT"))
    model = ws.get("int_CONSTPT", "model")
    assert model.base == I.total
    assert (model.W, model.Cof, model.Fib) == (I.classes.W, I.classes.Cof, I.classes.Fib)
    assert run(capsys, "validate", str(out))[0] == 0


def test_straighten_and_emit(capsys, tmp_path):
    out = tmp_path / "st.fcat"
    assert run(capsys, "straighten", EX44, "--fibration", "PI", "--emit", str(out))[0] == 0
    assert run(capsys, "validate", str(out))[0] == 0


def test_export_dot_to_stdout_and_file(capsys, tmp_path):
    code, out, err = run(capsys, "export-dot", EX44, "--name", "ex44")
    assert code == 0 and out.startswith("digraph") and "weq=true" in out
    target = tmp_path / "s.dot"
    assert run(capsys, "export-dot", EX44, "--name", "SLICE", "-o", str(target))[0] == 0
    assert "cluster_0" in target.read_text(encoding="utf-8")


def test_no_timing_output_is_byte_identical():
    cmd = [sys.executable, "-m", "intmodel.cli", "verify-theorem", "slice", "--json", "--no-timing"]
    outs = []
    for seed in ("3", "11"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs.append(subprocess.run(cmd, capture_output=True, env=env, check=True).stdout)
    assert outs[0] == outs[1] and outs[0]
