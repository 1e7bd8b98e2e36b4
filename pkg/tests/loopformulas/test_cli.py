import json
from pathlib import Path

import pytest

from loopformulas import classify, verify
from loopformulas.cli import main
from loopformulas.parser import parse_program
from tests.conftest import broken_shift

PI_1 = "tests/resources/pi-1/program.lp"
PI_2 = "tests/resources/pi-2/program.lp"
PI_3 = "tests/resources/pi-3/program.lp"


def test_analyze(capsys: pytest.CaptureFixture):
    """
    Test analyzing a program file into a JSON report.
    """
    assert main(["analyze", PI_1]) == 0

    report = json.loads(capsys.readouterr().out)
    assert len(report["loops"]) == 7
    assert len(report["elementary_loops"]) == 6
    assert report["stable_models"] == [["p"]]


def test_analyze_classification(capsys: pytest.CaptureFixture):
    """
    Test the classification of a program which is head-elementary-loop-free only.
    """
    assert main(["analyze", PI_2]) == 0

    report = json.loads(capsys.readouterr().out)
    assert report["classification"]["hcf"] is False
    assert report["classification"]["hef"] is True
    assert report["stable_models"] == [["p"], ["q"]]


def test_analyze_empty(tmp_path: Path, capsys: pytest.CaptureFixture):
    """
    Test analyzing an empty program file.
    """
    path = tmp_path / "empty.lp"
    path.write_text("")

    assert main(["analyze", str(path)]) == 0

    report = json.loads(capsys.readouterr().out)
    assert report["rules"] == 0
    assert report["stable_models"] == [[]]


def test_analyze_many(capsys: pytest.CaptureFixture):
    """
    Test that several files produce a list of reports in input order.
    """
    assert main(["analyze", PI_2, PI_1]) == 0

    reports = json.loads(capsys.readouterr().out)
    assert [report["origin"] for report in reports] == [PI_2, PI_1]


def test_analyze_deterministic(capsys: pytest.CaptureFixture):
    """
    Test that repeated runs produce identical output.
    """
    main(["analyze", PI_1, "--models"])
    first = capsys.readouterr().out

    main(["analyze", PI_1, "--models"])
    assert capsys.readouterr().out == first


def test_analyze_text(capsys: pytest.CaptureFixture):
    """
    Test the aligned text output.
    """
    assert main(["analyze", PI_1, "--format", "text"]) == 0
    assert "stable      {p}" in capsys.readouterr().out


def test_analyze_guard(capsys: pytest.CaptureFixture):
    """
    Test that exceeding the guard is reported through the exit code.
    """
    assert main(["analyze", PI_1, "--max-atoms", "2"]) == 1

    captured = capsys.readouterr()
    assert json.loads(captured.out)["refused"] == ["loops", "stable_models"]
    assert "exceeded the guard" in captured.err


def test_analyze_syntax_error(tmp_path: Path, capsys: pytest.CaptureFixture):
    """
    Test that syntax errors are reported with their location.
    """
    path = tmp_path / "broken.lp"
    path.write_text("p.\nq r.\n")

    assert main(["analyze", str(path)]) == 2
    assert f"{path}:2:" in capsys.readouterr().err


def test_analyze_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture):
    """
    Test that unreadable files are reported apart from syntax errors, without stopping other files.
    """
    missing = tmp_path / "missing.lp"

    assert main(["analyze", str(missing), PI_1]) == 2

    captured = capsys.readouterr()
    assert f"cannot read {missing}" in captured.err
    assert "Expected" not in captured.err
    assert len(json.loads(captured.out)) == 1


def test_check_model_missing_file(tmp_path: Path, capsys: pytest.CaptureFixture):
    """
    Test that an unreadable program file is named in the error message.
    """
    missing = tmp_path / "missing.lp"

    assert main(["check-model", str(missing), "p"]) == 2
    assert f"error: cannot read {missing}:" in capsys.readouterr().err


def test_check_model(capsys: pytest.CaptureFixture):
    """
    Test checking a stable and a non-stable model.
    """
    assert main(["check-model", PI_1, "p"]) == 0
    assert json.loads(capsys.readouterr().out)["stable"] is True

    assert main(["check-model", PI_1, "p,q,r"]) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["stable"] is False
    assert report["agreement"] is True
    assert report["witnesses"]["c"] == ["q", "r"]


def test_check_model_criterion(capsys: pytest.CaptureFixture):
    """
    Test checking a single criterion.
    """
    assert main(["check-model", PI_1, "p", "q", "r", "--criterion", "d"]) == 3
    assert list(json.loads(capsys.readouterr().out)["criteria"]) == ["d"]


def test_check_model_not_a_model(capsys: pytest.CaptureFixture):
    """
    Test that sets which are not models are refused.
    """
    assert main(["check-model", PI_1, "q"]) == 5
    assert "is not a model" in capsys.readouterr().err

    assert main(["check-model", PI_1, "x"]) == 5
    assert "does not occur" in capsys.readouterr().err


def test_shift(capsys: pytest.CaptureFixture):
    """
    Test printing the shifted program.
    """
    assert main(["shift", PI_3]) == 0
    assert capsys.readouterr().out == "p :- r, not q.\nq :- r, not p.\nr :- p.\nr :- q.\n"


def test_shift_nondisjunctive(capsys: pytest.CaptureFixture):
    """
    Test that shifting a nondisjunctive program prints its canonical form.
    """
    assert main(["shift", PI_1]) == 0
    assert capsys.readouterr().out == "p :- not s.\np :- r.\nq :- r.\nr :- p, q.\n"


def test_graph(capsys: pytest.CaptureFixture):
    """
    Test DOT export of the dependency graph and an elementary subgraph.
    """
    assert main(["graph", PI_1]) == 0
    assert '"r" -> "p";' in capsys.readouterr().out

    assert main(["graph", PI_1, "--atoms", "p", "q", "r"]) == 0
    out = capsys.readouterr().out
    assert '"p" -> "r";' in out
    assert '"r" -> "p";' not in out


def test_formula(capsys: pytest.CaptureFixture):
    """
    Test printing a loop formula.
    """
    assert main(["formula", PI_1, "q", "r"]) == 0
    assert capsys.readouterr().out == "q & r -> #false\n"


def test_verify(capsys: pytest.CaptureFixture):
    """
    Test a short verification run and an empty one.
    """
    assert main(["verify", "--seed", "1", "--count", "5", "--atoms", "4"]) == 0
    assert main(["verify", "--count", "0"]) == 0


def test_verify_violation(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture):
    """
    Test that a violated property is named, and the counterexample printed.
    """
    program = parse_program(Path(PI_2).read_text())

    monkeypatch.setattr(classify, "shift", broken_shift)
    monkeypatch.setattr(verify, "random_program", lambda rng, atoms, max_rules: program)

    assert main(["verify", "--count", "1"]) == 4

    captured = capsys.readouterr()
    assert "violated: hef_shift_equivalence" in captured.err
    assert parse_program(captured.out).rules
