import json

from superdensity.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_bracket_verb(capsys):
    code, out = run_cli(["bracket", "--n", "1", "--F", "t1", "--G", "t1"], capsys)
    assert code == 0
    assert json.loads(out) == {"bracket": "1/2"}


def test_bracket_parse_error(capsys):
    code = main(["bracket", "--n", "1", "--F", "t1^2", "--G", "x"])
    assert code == 1


def test_act_verb(capsys):
    code, out = run_cli(["act", "--n", "1", "--F", "x", "--density", "t1"], capsys)
    assert code == 0
    assert json.loads(out)["result"] == "(l + 1/2)*t1 @ l"


def test_classify_invariants_verb(capsys):
    code, out = run_cli(["classify-invariants", "--n", "1", "--k", "1/2"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2


def test_classify_linear_verb(capsys):
    code, out = run_cli(["classify-linear", "--n", "0", "--shift", "2"], capsys)
    assert code == 0
    assert json.loads(out)["dimension"] == 1


def test_h1_verb_json(capsys):
    code, out = run_cli(["h1", "--n", "1", "--shift", "3/2", "--no-gates"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dim_H1"] == 1
    assert payload["lambda_mode"] == "symbolic"
    assert payload["discrepancies"] == []


def test_h1_verb_at_value(capsys):
    code, out = run_cli(["h1", "--n", "0", "--shift", "1", "--lambda", "0",
                         "--no-gates"], capsys)
    assert code == 0
    assert json.loads(out)["dim_H1"] == 1


def test_determinism(capsys):
    _, out1 = run_cli(["h1", "--n", "0", "--shift", "2", "--no-gates"], capsys)
    _, out2 = run_cli(["h1", "--n", "0", "--shift", "2", "--no-gates"], capsys)
    assert out1 == out2


def test_emitted_operator_roundtrips(capsys):
    from superdensity.diffop import bi_from_json
    code, out = run_cli(["classify-invariants", "--n", "1", "--k", "1"], capsys)
    payload = json.loads(out)
    for blob in payload["basis"]:
        op = bi_from_json(blob)
        assert op.terms


def test_markdown_format(capsys):
    code, out = run_cli(["--format", "md", "classify-linear", "--n", "1",
                         "--shift", "1/2"], capsys)
    assert code == 0
    assert out.startswith("# aff(1|1)-invariant linear operators")


def test_check_axioms(capsys):
    code, out = run_cli(["check-axioms", "--degree", "1"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert all(payload.values())


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code = main(["--output", str(target), "bracket", "--n", "0", "--F", "1",
                 "--G", "x"])
    assert code == 0
    assert json.loads(target.read_text())["bracket"] == "1"


def test_degree_bound_env(monkeypatch):
    from superdensity.cohomology import default_degree_bound
    assert default_degree_bound(4) == 10
    monkeypatch.setenv("SUPERDENSITY_DEGREE_BOUND", "12")
    assert default_degree_bound(4) == 12


def test_verify_printed_by_id():
    from superdensity.reports import verify_printed
    import pytest
    results = verify_printed("C_{0,1}")
    assert results[0].status == "confirmed"
    with pytest.raises(KeyError):
        verify_printed("no-such-claim")


def test_h1_report_with_gates(capsys):
    code, out = run_cli(["h1", "--n", "0", "--shift", "2"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["gates"] == {
        "delta_delta_zero": True,
        "lemma_aff": True,
        "degree_stability": True,
        "specialization_consistency": True,
    }
