import io
import json
from contextlib import redirect_stderr, redirect_stdout

from ccsp.cli import run
from ccsp.denotational import traces_compensable, traces_standard
from ccsp.parser import parse_compensable, parse_standard
from ccsp.terms import pair_from_tokens, trace_from_tokens


def invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = run(argv)
    return code, out.getvalue(), err.getvalue()


def test_check_equal_exits_zero():
    code, out, _ = invoke(["check", "SKIP ; THROW"])
    assert code == 0
    assert "status: equal" in out


def test_check_null_is_a_parse_error():
    code, _, err = invoke(["check", "0"])
    assert code == 2
    assert "parse error" in err


def test_usage_error_exits_two():
    code, _, _ = invoke(["check"])
    assert code == 2
    code, _, _ = invoke(["bogus"])
    assert code == 2


def test_traces_both_semantics_agree_in_output():
    code, out, _ = invoke(["traces", "a [] b", "--semantics", "both"])
    assert code == 0
    assert (
        out
        == "denotational:\n<a,*>\n<b,*>\noperational:\n<a,*>\n<b,*>\n"
    )


def test_traces_alphabet_violation_is_usage_error():
    code, _, err = invoke(["traces", "a ; b", "--alphabet", "a"])
    assert code == 2
    assert "not in declared alphabet" in err


def test_traces_machine_round_trips():
    code, out, _ = invoke(
        ["traces", "a ; (SKIP [] THROW)", "--format", "machine", "--semantics", "both"]
    )
    assert code == 0
    record = json.loads(out)
    term = parse_standard(record["term"])
    for tokens_set in record["sets"].values():
        assert {trace_from_tokens(t) for t in tokens_set} == traces_standard(term)


def test_traces_machine_round_trips_compensable():
    code, out, _ = invoke(
        ["traces", "a % b [] THROWW", "--kind", "comp", "--format", "machine"]
    )
    assert code == 0
    record = json.loads(out)
    term = parse_compensable(record["term"])
    for tokens_set in record["sets"].values():
        assert {pair_from_tokens(p) for p in tokens_set} == traces_compensable(term)


def test_check_machine_record_fields():
    code, out, _ = invoke(["check", "a % b", "--kind", "comp", "--format", "machine"])
    assert code == 0
    record = json.loads(out)
    assert record["status"] == "equal"
    assert record["only_operational"] == []
    assert record["only_denotational"] == []
    assert record["term"] == "a % b"


def test_lts_dot_to_stdout_and_file(tmp_path):
    code, out, _ = invoke(["lts", "a ; b"])
    assert code == 0
    assert out.startswith("digraph lts {")
    target = tmp_path / "g.dot"
    code, out, _ = invoke(["lts", "a ; b", "--out", str(target)])
    assert code == 0 and out == ""
    assert target.read_text().startswith("digraph lts {")


def test_prop_transcript_is_deterministic():
    args = ["prop", "--seed", "3", "--cases", "40", "--max-depth", "4", "--kind", "both"]
    first = invoke(args)
    second = invoke(args)
    assert first == second
    code, out, _ = first
    assert code == 0
    assert "equal 40/40" in out
    assert "healthy 40/40" in out


def test_prop_with_lemma_suites():
    code, out, _ = invoke(
        ["prop", "--seed", "5", "--cases", "4", "--max-depth", "3", "--lemmas",
         "--lemma-cases", "20"]
    )
    assert code == 0
    assert "lemmas equal 140/140" in out
    for lemma in range(1, 8):
        assert f"lemma {lemma} " in out


def test_enumerate_listing_matches_check_counts():
    code, out, _ = invoke(["enumerate", "--max-ops", "0", "--alphabet", "a,b"])
    assert code == 0
    assert out.splitlines()[1:] == ["a", "b", "SKIP", "THROW", "YIELD"]

    code, out, _ = invoke(["enumerate", "--max-ops", "1", "--alphabet", "a", "--check"])
    assert code == 0
    assert "ops 0: 4 terms, 4 equal" in out
    assert "ops 1: 80 terms, 80 equal" in out
    assert "total 84 terms, 84 equal, 0 mismatches" in out
    assert "healthy 84/84" in out


def test_enumerate_compensable_with_pair_cap():
    code, out, _ = invoke(
        ["enumerate", "--max-ops", "1", "--alphabet", "a", "--kind", "comp",
         "--max-pair-ops", "0", "--check"]
    )
    assert code == 0
    # pairs over leaves only: 16 at zero ops, 3*16*16 binaries at one op
    assert "ops 0: 16 terms, 16 equal" in out
    assert "ops 1: 768 terms, 768 equal" in out


def test_example_warehouse_passes():
    code, out, _ = invoke(["example", "warehouse"])
    assert code == 0
    assert "traces (420):" in out
    assert out.count("pass:") == 5
    assert "FAIL" not in out
