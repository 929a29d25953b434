import json
import subprocess
import sys
from pathlib import Path

import pytest

from liouville.cli import main, render_text
from liouville.document import parse_operator
from liouville.operator import decide
from liouville.scalar import QQ_FIELD
from liouville.subgroup import ClosedSubgroup, equals

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv, out=None):
    args = [str(a) for a in argv]
    if out is not None:
        args += ["--out", str(out)]
    code = main(args)
    captured = capsys.readouterr()
    report = json.loads(Path(out).read_text()) if out is not None else None
    return code, captured.out + captured.err, report


def test_decide_dense(capsys, tmp_path):
    code, text, rep = run(capsys, "decide", FIX / "kronecker_dense.json", out=tmp_path / "r.json")
    assert code == 0
    assert rep["verdict"]["liouville"] is True
    assert "liouville: true" in text


def test_decide_lattice(capsys, tmp_path):
    code, _, rep = run(capsys, "decide", FIX / "kronecker_lattice.json", "--verify", out=tmp_path / "r.json")
    assert code == 0
    v = rep["verdict"]
    assert v["liouville"] is False and v["counterexample"]["xi"]
    Q = QQ_FIELD
    G = ClosedSubgroup(2, Q, tuple(Q.vector(x) for x in v["period_group"]["v_basis"]),
                       tuple(Q.vector(x) for x in v["period_group"]["lattice_basis"]))
    assert equals(G, ClosedSubgroup(2, Q, (), (Q.vector(["1/2", "1/3"]), Q.vector(["0", "1/3"]))))
    assert rep["verification"]["annihilator_residual"] <= 1e-10
    assert rep["seed"] == 42


def test_bad_scalar_exit_2(capsys):
    assert run(capsys, "decide", FIX / "bad_radical.json")[0] == 2


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "decide", tmp_path / "nope.json")[0] == 2


@pytest.mark.parametrize("doc", [
    "[1, 2]",
    '{"dimension": 0}',
    '{"dimension": 1, "drift": ["1/0"]}',
    '{"dimension": 1, "drift": [0.5]}',
    '{"dimension": 2, "drift": ["0"]}',
    '{"dimension": 1, "components": [{"type": "cube"}]}',
    '{"dimension": 1, "components": [{"type": "atom", "z": ["1"], "weight": "-1"}]}',
    '{"dimension": 1, "drift_convention": "none"}',
    '{"dimension": 1, "field": {"kind": "multi-quadratic", "radicands": [4]}}',
])
def test_malformed_documents_exit_2(capsys, tmp_path, doc):
    p = tmp_path / "doc.json"
    p.write_text(doc)
    assert run(capsys, "decide", p)[0] == 2


def test_insufficient_precision_exit_3(capsys, tmp_path):
    p = tmp_path / "doc.json"
    p.write_text(json.dumps({
        "dimension": 1,
        "field": {"kind": "transcendental", "symbols": [{"name": "t", "enclosure": "1 +- 0.0000000000000000000000000000001"}]},
        "components": [{"type": "atom", "z": ["t"]}],
    }))
    assert run(capsys, "decide", p)[0] == 3


def test_ball_symbol_check_exit_4(capsys):
    assert run(capsys, "symbol-check", FIX / "ball.json")[0] == 4
    assert run(capsys, "decide", FIX / "ball.json")[0] == 0


def test_period_group_examples(capsys, tmp_path):
    code, _, rep = run(capsys, "period-group", FIX / "shifted_atoms.json", out=tmp_path / "r.json")
    pg = rep["period_group"]
    assert code == 0
    assert pg["v_basis"] == [["1", "0"]] and pg["lattice_basis"] == [["0", "1/2"]]
    assert pg["c_mu"] == ["0", "-1/2"] and pg["effective_drift"] == ["1", "0"]
    _, _, rep = run(capsys, "period-group", FIX / "zero_operator.json", out=tmp_path / "z.json")
    assert rep["period_group"]["v_basis"] == [] and rep["period_group"]["lattice_basis"] == []
    assert any("degenerate" in w for w in rep["assumptions"]["warnings"])
    _, _, rep = run(capsys, "period-group", FIX / "three_d_mixed.json", out=tmp_path / "e.json")
    assert rep["period_group"]["dense"] is True


def test_closure_examples(capsys, tmp_path):
    _, _, rep = run(capsys, "closure", FIX / "gens_kronecker.json", out=tmp_path / "a.json")
    assert rep["closure"]["dense"] is True
    _, _, rep = run(capsys, "closure", FIX / "gens_half_third.json", out=tmp_path / "b.json")
    assert rep["closure"]["lattice_basis"] == [["1/6"]]
    _, _, rep = run(capsys, "closure", FIX / "gens_example_T.json", out=tmp_path / "c.json")
    Q = QQ_FIELD
    G = ClosedSubgroup(2, Q, tuple(Q.vector(x) for x in rep["closure"]["v_basis"]),
                       tuple(Q.vector(x) for x in rep["closure"]["lattice_basis"]))
    assert equals(G, ClosedSubgroup(2, Q, (Q.vector([1, "1/2"]),), (Q.vector([1, 0]),)))


def test_oracle_exit_codes(capsys):
    assert run(capsys, "oracle", FIX / "gens_sqrt2_sqrt3.json")[0] == 0
    assert run(capsys, "oracle", FIX / "gens_overpredicted.json")[0] == 5
    assert run(capsys, "oracle", FIX / "gens_five.json")[0] == 6


def test_oracle_predicted_flag(capsys, tmp_path):
    pred = tmp_path / "pred.json"
    pred.write_text(json.dumps({"v_basis": [], "lattice_basis": [["1"]]}))
    # sqrt2, sqrt3 do not stay within 0.05 of Z
    assert run(capsys, "oracle", FIX / "gens_sqrt2_sqrt3.json", "--predicted", pred)[0] == 5


def test_counterexample_and_symbol_check(capsys, tmp_path):
    code, _, rep = run(capsys, "counterexample", FIX / "shifted_atoms.json", "--verify", out=tmp_path / "c.json")
    assert code == 0 and rep["counterexample"]["xi"] == ["0", "2"]
    assert rep["verification"]["path_equality_max_diff"] <= 1e-9
    code, _, rep = run(capsys, "counterexample", FIX / "kronecker_dense.json", out=tmp_path / "d.json")
    assert code == 0 and rep["counterexample"]["counterexample"] is None
    code, _, rep = run(capsys, "symbol-check", FIX / "mean_value_d3.json", out=tmp_path / "m.json")
    scan = rep["verification"]["zero_set_scan"]
    assert scan["dual_lattice_rank"] == 0 and scan["dual_subspace_dim"] == 0
    assert scan["perturbed_max_re_psi"] < -1e-6


def test_transcendental_assertions_embedded(capsys, tmp_path):
    _, text, rep = run(capsys, "decide", FIX / "transcendental.json", out=tmp_path / "t.json")
    assert rep["assumptions"]["independence"]
    assert rep["assumptions"]["independence"][0] in text


def test_truncation_warning(capsys, tmp_path):
    _, _, rep = run(capsys, "decide", FIX / "truncated.json", out=tmp_path / "t.json")
    assert any("truncation only" in w for w in rep["assumptions"]["warnings"])
    assert rep["input"]["truncation"]


@pytest.mark.parametrize("name", ["kronecker_dense", "kronecker_lattice", "shifted_atoms", "three_d_mixed",
                                  "mean_value_d3", "transcendental", "truncated", "zero_operator", "ball"])
def test_round_trip(capsys, tmp_path, name):
    _, _, rep = run(capsys, "decide", FIX / f"{name}.json", out=tmp_path / "r.json")
    original = parse_operator(json.loads((FIX / f"{name}.json").read_text()))
    echoed = parse_operator(rep["input"])
    assert decide(echoed) == decide(original)


def test_text_mirrors_json(capsys, tmp_path):
    _, text, rep = run(capsys, "decide", FIX / "shifted_atoms.json", "--verify", out=tmp_path / "r.json")
    assert text == render_text(rep)


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "liouville.cli", "closure", str(FIX / "gens_half_third.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "1/6" in proc.stdout
