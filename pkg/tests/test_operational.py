import pytest
from hypothesis import given, strategies as st

from ccsp.equivalence import GenConfig, gen_term
from ccsp.operational import (
    CompensableStep,
    Lts,
    Normal,
    StandardStep,
    StateCapExceeded,
    Term,
    build_lts,
    derived_forward,
    derived_traces_compensable,
    derived_traces_standard,
    run_lifted,
    step_compensable,
    step_standard,
)
from ccsp.terms import (
    NULL,
    SKIP,
    THROW,
    YIELD,
    Atom,
    Aux,
    Block,
    CSeq,
    Null,
    Pair,
    Par,
    Seq,
    Terminal,
    TracePair,
    is_standard,
    trace,
)

A = Atom("a")
B = Atom("b")


def labels(steps):
    return {s.label for s in steps}


# -- single steps -----------------------------------------------------------


def test_step_base_rules():
    assert step_standard(A) == (StandardStep(Normal("a"), SKIP),)
    assert step_standard(SKIP) == (StandardStep(Term(Terminal.TICK), NULL),)
    assert step_standard(THROW) == (StandardStep(Term(Terminal.THROW), NULL),)
    assert set(step_standard(YIELD)) == {
        StandardStep(Term(Terminal.TICK), NULL),
        StandardStep(Term(Terminal.YIELD), NULL),
    }


def test_step_null_rejected():
    with pytest.raises(ValueError):
        step_standard(NULL)


def test_step_seq_terminal_composition():
    # first part succeeds, second throws: the composite throws
    assert step_standard(Seq(SKIP, THROW)) == (StandardStep(Term(Terminal.THROW), NULL),)
    # non-success propagates without starting the second part
    assert step_standard(Seq(THROW, A)) == (StandardStep(Term(Terminal.THROW), NULL),)


def test_step_seq_skips_into_second_process():
    # after SKIP's tick, one step of the second process fires in the same
    # transition and the Seq node dissolves
    assert step_standard(Seq(SKIP, A)) == (StandardStep(Normal("a"), SKIP),)


def test_step_par_interleaves_without_lone_terminal():
    steps = step_standard(Par(A, THROW))
    assert steps == (StandardStep(Normal("a"), Par(SKIP, THROW)),)
    # termination only happens jointly
    assert not any(isinstance(s.label, Term) for s in steps)


def test_step_par_joint_termination_joins_terminals():
    assert step_standard(Par(SKIP, THROW)) == (StandardStep(Term(Terminal.THROW), NULL),)
    assert set(step_standard(Par(YIELD, YIELD))) == {
        StandardStep(Term(Terminal.TICK), NULL),
        StandardStep(Term(Terminal.YIELD), NULL),
    }


def test_step_block_absorbs_throw_and_runs_compensation():
    # the forward throw discards the pair's compensation, so the block
    # terminates successfully with nothing to replay
    assert step_standard(Block(Pair(THROW, B))) == (
        StandardStep(Term(Terminal.TICK), NULL),
    )
    # a banked compensation does run: [ a % b ; THROWW ] after the `a` step
    inner = Block(CSeq(Pair(SKIP, B), Pair(THROW, SKIP)))
    assert step_standard(inner) == (StandardStep(Normal("b"), SKIP),)


def test_step_block_prunes_yielding_forward_runs():
    assert step_standard(Block(Pair(YIELD, SKIP))) == (
        StandardStep(Term(Terminal.TICK), NULL),
    )


def test_step_pair_banks_compensation_only_on_success():
    assert step_compensable(Pair(SKIP, B)) == (CompensableStep(Term(Terminal.TICK), B),)
    assert step_compensable(Pair(THROW, B)) == (
        CompensableStep(Term(Terminal.THROW), SKIP),
    )


def test_step_aux_appends_banked_compensation():
    steps = step_compensable(Aux(Pair(SKIP, Atom("q")), Atom("p")))
    assert steps == (CompensableStep(Term(Terminal.TICK), Seq(Atom("q"), Atom("p"))),)


def test_step_cseq_enters_aux_construct():
    steps = step_compensable(CSeq(Pair(SKIP, A), Pair(B, SKIP)))
    assert steps == (CompensableStep(Normal("b"), Aux(Pair(SKIP, SKIP), A)),)


def test_compensable_terminal_steps_yield_standard_terms():
    for term in (Pair(YIELD, A), CSeq(Pair(SKIP, A), Pair(THROW, B))):
        for s in step_compensable(term):
            if isinstance(s.label, Term):
                assert is_standard(s.successor)


def test_steps_are_canonically_ordered():
    steps = step_standard(Par(B, A))
    assert [s.label.event for s in steps] == ["a", "b"]


# -- lifted runs ------------------------------------------------------------


def test_run_lifted_examples():
    assert run_lifted(SKIP, trace("*"))
    assert run_lifted(Seq(A, THROW), trace("a", "!"))
    assert not run_lifted(THROW, trace("*"))
    assert not run_lifted(Seq(A, THROW), trace("a", "*"))
    with pytest.raises(ValueError):
        run_lifted(NULL, trace("*"))


# -- derived traces ---------------------------------------------------------


def test_derived_traces_standard_examples():
    assert derived_traces_standard(SKIP) == {trace("*")}
    assert derived_traces_standard(Seq(A, THROW)) == {trace("a", "!")}
    assert derived_traces_standard(YIELD) == {trace("?"), trace("*")}
    with pytest.raises(ValueError):
        derived_traces_standard(NULL)


def test_derived_forward_examples():
    assert derived_forward(Pair(A, B)) == {(trace("a", "*"), B)}
    assert derived_forward(Pair(THROW, B)) == {(trace("!"), SKIP)}
    # compensations accumulate in reverse composition order
    csq = CSeq(Pair(A, Atom("a'")), Pair(B, Atom("b'")))
    assert derived_forward(csq) == {(trace("a", "b", "*"), Seq(Atom("b'"), Atom("a'")))}


def test_derived_traces_compensable_examples():
    assert derived_traces_compensable(Pair(A, B)) == {
        TracePair(trace("a", "*"), trace("b", "*"))
    }
    assert derived_traces_compensable(Pair(THROW, SKIP)) == {
        TracePair(trace("!"), trace("*"))
    }
    assert derived_traces_compensable(Pair(YIELD, SKIP)) == {
        TracePair(trace("?"), trace("*")),
        TracePair(trace("*"), trace("*")),
    }


def test_every_run_of_derived_trace_set_is_lifted_run():
    term = Seq(Par(A, THROW), B)
    for t in derived_traces_standard(term):
        assert run_lifted(term, t)


# -- transition systems -----------------------------------------------------


def test_lts_of_skip():
    lts = build_lts(SKIP)
    assert lts.nodes == (SKIP, NULL)
    assert lts.edges == ((SKIP, Term(Terminal.TICK), NULL),)


def test_lts_interleaving_diamond():
    # hand enumeration: a||b steps to either order of a and b, the two
    # paths meet at SKIP||SKIP, and a joint tick closes the run: four
    # process states plus the null sink, five edges, one of them terminal.
    lts = build_lts(Par(A, B))
    assert len(lts.nodes) == 5
    assert len(lts.edges) == 5
    terminal_edges = [e for e in lts.edges if isinstance(e[1], Term)]
    assert terminal_edges == [(Par(SKIP, SKIP), Term(Terminal.TICK), NULL)]


def test_lts_block_absorbing_throw_has_only_tick_edge():
    lts = build_lts(Block(Pair(THROW, B)))
    assert [e[1] for e in lts.edges] == [Term(Terminal.TICK)]


def test_lts_compensable_root_continues_into_compensation():
    lts = build_lts(Pair(A, B))
    # forward run, then the banked compensation's own run to null
    assert B in lts.nodes and NULL in lts.nodes


def test_lts_state_cap():
    with pytest.raises(StateCapExceeded) as exc:
        build_lts(Par(Par(A, B), Par(Atom("c"), Atom("d"))), state_cap=3)
    assert "3" in str(exc.value)


def test_lts_deterministic_and_dot_output():
    term = Seq(A, B)
    first, second = build_lts(term), build_lts(term)
    assert first == second
    dot = first.to_dot()
    assert dot.splitlines()[0] == "digraph lts {"
    assert 'n0 [label="a ; b"];' in dot
    assert '[label="a"]' in dot and '[label="*"]' in dot
    assert dot.strip().endswith("}")


def test_dot_renders_all_terminal_glyphs():
    dot = build_lts(YIELD).to_dot()
    assert '[label="*"]' in dot and '[label="?"]' in dot


# -- structural properties ----------------------------------------------------

_seeds = st.integers(0, 2**63 - 1)


@given(_seeds)
def test_standard_terminal_steps_end_in_null(seed):
    term = gen_term(GenConfig(seed=seed, max_depth=4, alphabet=("a", "b"), kind="standard"))
    for s in step_standard(term):
        if isinstance(s.label, Term):
            assert isinstance(s.successor, Null)
        else:
            assert not isinstance(s.successor, Null)


@given(_seeds)
def test_compensable_terminal_steps_bank_standard_compensation(seed):
    term = gen_term(
        GenConfig(seed=seed, max_depth=4, alphabet=("a", "b"), kind="compensable")
    )
    for s in step_compensable(term):
        if isinstance(s.label, Term):
            assert is_standard(s.successor)


@given(_seeds)
def test_derived_healthiness(seed):
    term = gen_term(GenConfig(seed=seed, max_depth=4, alphabet=("a", "b"), kind="standard"))
    terminals = {t.terminal for t in derived_traces_standard(term)}
    assert terminals & {Terminal.TICK, Terminal.THROW}
