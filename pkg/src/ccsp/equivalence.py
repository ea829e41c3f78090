"""Mechanical comparison of the two semantics.

`check_standard` / `check_compensable` compare the derived traces of a term
(read off its maximal operational runs) with its compositional trace set,
by exact set equality in both directions.  `check_lemma` does the same for
the seven decomposition laws relating lifted runs of a composite term to
trace-level operators over the runs of its parts, one law per operator.

Terms come from either a seeded random generator or an exhaustive
enumerator of all user terms up to an operator budget, so the equality can
be tested both broadly and completely at desk scale.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from . import denotational, operational
from .denotational import (
    block_traces,
    check_healthiness,
    pair_traces,
    par_traces,
    seq_traces,
    traces_compensable,
    traces_standard,
)
from .operational import (
    DEFAULT_STATE_CAP,
    derived_forward,
    derived_traces_compensable,
    derived_traces_standard,
    run_lifted,
)
from .terms import (
    Atom,
    Aux,
    Block,
    CChoice,
    CompensableTerm,
    CPar,
    CSeq,
    Choice,
    Event,
    Interrupt,
    Pair,
    Par,
    SKIP,
    Seq,
    StandardTerm,
    Terminal,
    THROW,
    YIELD,
    is_compensable,
    is_standard,
)

# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of comparing the two semantics of one term."""

    term: StandardTerm | CompensableTerm
    only_operational: frozenset
    only_denotational: frozenset

    @property
    def is_equal(self) -> bool:
        return not self.only_operational and not self.only_denotational

    @property
    def status(self) -> str:
        return "equal" if self.is_equal else "mismatch"


@dataclass(frozen=True)
class LemmaVerdict:
    """Outcome of checking one decomposition law on concrete operands.

    The left side is evaluated by operational runs of the composite term,
    the right side by the law's trace-level formula over runs of the
    operands.
    """

    lemma: int
    name: str
    operands: tuple
    only_operational: frozenset
    only_formula: frozenset

    @property
    def is_equal(self) -> bool:
        return not self.only_operational and not self.only_formula

    @property
    def status(self) -> str:
        return "equal" if self.is_equal else "mismatch"


def check_standard(term: StandardTerm, state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    """Exact two-way comparison of derived and compositional traces."""
    derived = derived_traces_standard(term, state_cap)
    denoted = traces_standard(term)
    return Verdict(term, frozenset(derived - denoted), frozenset(denoted - derived))


def check_compensable(term: CompensableTerm, state_cap: int = DEFAULT_STATE_CAP) -> Verdict:
    derived = derived_traces_compensable(term, state_cap)
    denoted = traces_compensable(term)
    return Verdict(term, frozenset(derived - denoted), frozenset(denoted - derived))


def verify_verdict_soundness(verdict: Verdict) -> bool:
    """Confirm a mismatch verdict's evidence: every listed trace must
    belong to exactly the semantics that claims it."""
    term = verdict.term
    if is_compensable(term):
        derived = derived_traces_compensable(term)
        denoted = traces_compensable(term)
        in_operational = lambda t: t in derived
        in_denotational = lambda t: t in denoted
    else:
        denoted = traces_standard(term)
        in_operational = lambda t: run_lifted(term, t)
        in_denotational = lambda t: t in denoted
    return all(
        in_operational(t) and not in_denotational(t) for t in verdict.only_operational
    ) and all(
        in_denotational(t) and not in_operational(t) for t in verdict.only_denotational
    )


# ---------------------------------------------------------------------------
# Decomposition laws
# ---------------------------------------------------------------------------


def _law_seq_standard(p, q):
    lhs = derived_traces_standard(Seq(p, q))
    rhs = frozenset(
        seq_traces(a, b)
        for a in derived_traces_standard(p)
        for b in derived_traces_standard(q)
    )
    return lhs, rhs


def _law_par_standard(p, q):
    lhs = derived_traces_standard(Par(p, q))
    rhs = frozenset(
        t
        for a in derived_traces_standard(p)
        for b in derived_traces_standard(q)
        for t in par_traces(a, b)
    )
    return lhs, rhs


def _law_seq_forward(pp, qq):
    lhs = derived_forward(CSeq(pp, qq))
    rhs = set()
    for p, banked_p in derived_forward(pp):
        for q, banked_q in derived_forward(qq):
            if p.terminal is Terminal.TICK:
                rhs.add((seq_traces(p, q), Seq(banked_q, banked_p)))
            else:
                rhs.add((p, banked_p))
    return lhs, frozenset(rhs)


def _law_aux_removal(qq, p):
    lhs = derived_forward(Aux(qq, p))
    rhs = frozenset((t, Seq(banked, p)) for t, banked in derived_forward(qq))
    return lhs, rhs


def _law_par_forward(pp, qq):
    lhs = derived_forward(CPar(pp, qq))
    rhs = frozenset(
        (t, Par(banked_p, banked_q))
        for p, banked_p in derived_forward(pp)
        for q, banked_q in derived_forward(qq)
        for t in par_traces(p, q)
    )
    return lhs, rhs


def _law_pair(p, q):
    lhs = derived_traces_compensable(Pair(p, q))
    rhs = frozenset(
        pair_traces(a, b)
        for a in derived_traces_standard(p)
        for b in derived_traces_standard(q)
    )
    return lhs, rhs


def _law_block(pp):
    lhs = derived_traces_standard(Block(pp))
    rhs = frozenset(
        t
        for tp in derived_traces_compensable(pp)
        for t in block_traces(tp.forward, tp.compensation)
    )
    return lhs, rhs


#: law id -> (name, operand kinds, implementation)
LAWS: dict[int, tuple[str, tuple[str, ...], object]] = {
    1: ("seq-standard", ("std", "std"), _law_seq_standard),
    2: ("par-standard", ("std", "std"), _law_par_standard),
    3: ("seq-forward", ("comp", "comp"), _law_seq_forward),
    4: ("aux-removal", ("comp", "std"), _law_aux_removal),
    5: ("par-forward", ("comp", "comp"), _law_par_forward),
    6: ("pair", ("std", "std"), _law_pair),
    7: ("block", ("comp",), _law_block),
}


def check_lemma(lemma: int, operands: tuple) -> LemmaVerdict:
    """Check one decomposition law (1-7) on concrete operand terms."""
    if lemma not in LAWS:
        raise ValueError(f"no such law: {lemma}")
    name, kinds, impl = LAWS[lemma]
    if len(operands) != len(kinds):
        raise ValueError(f"law {lemma} takes {len(kinds)} operands, got {len(operands)}")
    for operand, kind in zip(operands, kinds):
        ok = is_standard(operand) if kind == "std" else is_compensable(operand)
        if not ok:
            raise ValueError(f"law {lemma} operand kinds are {kinds}")
    lhs, rhs = impl(*operands)
    return LemmaVerdict(
        lemma, name, operands, frozenset(lhs - rhs), frozenset(rhs - lhs)
    )


# ---------------------------------------------------------------------------
# Term generation
# ---------------------------------------------------------------------------

_STD_LEAVES = ("atom", "skip", "throw", "yield")
_STD_INTERNAL = ("seq", "choice", "par", "interrupt", "block")
_COMP_INTERNAL = ("cseq", "cchoice", "cpar")

DEFAULT_WEIGHTS: Mapping[str, float] = {
    name: 1.0 for name in (*_STD_LEAVES, *_STD_INTERNAL, "pair", *_COMP_INTERNAL)
}


@dataclass(frozen=True)
class GenConfig:
    """Deterministic random-term recipe.

    `max_depth` bounds constructor nesting up to one extra level: a
    compensation pair over two leaves, the minimal compensable term, has
    depth 2 on its own, so terms reach at most max_depth + 1 constructors.
    Leaf probability rises with depth, and the weight of nested parallel
    composition decays, to keep interleaving products at desk scale.  Null
    and the auxiliary construct are never generated.
    """

    seed: int
    max_depth: int
    alphabet: tuple[Event, ...]
    kind: str  # "standard" | "compensable"
    weights: Mapping[str, float] | None = None

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        if self.kind not in ("standard", "compensable"):
            raise ValueError(f"unknown kind: {self.kind!r}")
        if self.weights is not None:
            for name, w in self.weights.items():
                if name not in DEFAULT_WEIGHTS:
                    raise ValueError(f"unknown constructor: {name!r}")
                if w <= 0:
                    raise ValueError(f"weight for {name!r} must be positive")


def gen_term(cfg: GenConfig) -> StandardTerm | CompensableTerm:
    """Generate a valid user term; a pure function of the config."""
    rng = random.Random(cfg.seed)
    weights = dict(DEFAULT_WEIGHTS)
    if cfg.weights:
        weights.update(cfg.weights)
    if cfg.kind == "standard":
        return _gen_std(rng, cfg, weights, cfg.max_depth, 0)
    return _gen_comp(rng, cfg, weights, cfg.max_depth, 0)


def _pick(rng, choices: list[str], weights: list[float]) -> str:
    return rng.choices(choices, weights=weights, k=1)[0]


def _leaf_bias(cfg: GenConfig, remaining: int) -> float:
    depth = cfg.max_depth - remaining  # 0 at the root
    return (depth + 1) ** 2 / 4.0


def _gen_std(rng, cfg, weights, remaining: int, par_depth: int) -> StandardTerm:
    if remaining <= 1:
        kind = _pick(rng, list(_STD_LEAVES), [weights[k] for k in _STD_LEAVES])
    else:
        bias = _leaf_bias(cfg, remaining)
        par_decay = 3.0 ** par_depth
        names = list(_STD_LEAVES) + list(_STD_INTERNAL)
        ws = [weights[k] * bias for k in _STD_LEAVES] + [
            weights[k] / (par_decay if k == "par" else 1.0) for k in _STD_INTERNAL
        ]
        kind = _pick(rng, names, ws)
    if kind == "atom":
        return Atom(rng.choice(cfg.alphabet))
    if kind == "skip":
        return SKIP
    if kind == "throw":
        return THROW
    if kind == "yield":
        return YIELD
    if kind == "block":
        return Block(_gen_comp(rng, cfg, weights, remaining - 1, par_depth))
    left = _gen_std(rng, cfg, weights, remaining - 1, par_depth + (kind == "par"))
    right = _gen_std(rng, cfg, weights, remaining - 1, par_depth + (kind == "par"))
    if kind == "seq":
        return Seq(left, right)
    if kind == "choice":
        return Choice(left, right)
    if kind == "par":
        return Par(left, right)
    return Interrupt(left, right)


def _gen_comp(rng, cfg, weights, remaining: int, par_depth: int) -> CompensableTerm:
    if remaining <= 1:
        kind = "pair"
    else:
        bias = _leaf_bias(cfg, remaining)
        par_decay = 3.0 ** par_depth
        names = ["pair"] + list(_COMP_INTERNAL)
        ws = [weights["pair"] * bias] + [
            weights[k] / (par_decay if k == "cpar" else 1.0) for k in _COMP_INTERNAL
        ]
        kind = _pick(rng, names, ws)
    if kind == "pair":
        budget = max(remaining - 1, 1)
        return Pair(
            _gen_std(rng, cfg, weights, budget, par_depth),
            _gen_std(rng, cfg, weights, budget, par_depth),
        )
    left = _gen_comp(rng, cfg, weights, remaining - 1, par_depth + (kind == "cpar"))
    right = _gen_comp(rng, cfg, weights, remaining - 1, par_depth + (kind == "cpar"))
    if kind == "cseq":
        return CSeq(left, right)
    if kind == "cchoice":
        return CChoice(left, right)
    return CPar(left, right)


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------


def enumerate_terms(
    max_ops: int,
    alphabet: tuple[Event, ...],
    kind: str = "standard",
    max_pair_operand_ops: int | None = None,
) -> Iterator[StandardTerm | CompensableTerm]:
    """Every valid user term with at most `max_ops` operator nodes,
    exactly once, in a deterministic order (by operator count, then by
    constructor, then by operand order).

    Operator counting follows `term_op_count`: compensation pairs are free
    and their operands' operators count toward the budget.
    `max_pair_operand_ops` additionally caps the operator count of each
    pair operand (useful to keep compensable enumeration finite-friendly).
    """
    if max_ops < 0:
        raise ValueError("max_ops must be nonnegative")
    if kind not in ("standard", "compensable"):
        raise ValueError(f"unknown kind: {kind!r}")
    worlds = _EnumWorld(tuple(alphabet), max_pair_operand_ops)
    for k in range(max_ops + 1):
        if kind == "standard":
            yield from worlds.std_exact(k, store=k < max_ops)
        else:
            yield from worlds.comp_exact(k, store=k < max_ops)


class _EnumWorld:
    """Level-by-level term tables; the top level streams without storage."""

    def __init__(self, alphabet: tuple[Event, ...], pair_cap: int | None):
        self.alphabet = alphabet
        self.pair_cap = pair_cap
        self.std_levels: dict[int, list[StandardTerm]] = {}
        self.comp_levels: dict[int, list[CompensableTerm]] = {}

    def std_stored(self, k: int) -> list[StandardTerm]:
        if k not in self.std_levels:
            self.std_levels[k] = list(self.std_exact(k, store=False))
        return self.std_levels[k]

    def comp_stored(self, k: int) -> list[CompensableTerm]:
        if k not in self.comp_levels:
            self.comp_levels[k] = list(self.comp_exact(k, store=False))
        return self.comp_levels[k]

    def std_exact(self, k: int, store: bool) -> Iterator[StandardTerm]:
        if store:
            yield from self.std_stored(k)
            return
        if k == 0:
            for e in sorted(self.alphabet):
                yield Atom(e)
            yield SKIP
            yield THROW
            yield YIELD
            return
        for ctor in (Seq, Choice, Par, Interrupt):
            for i in range(k):
                for left in self.std_stored(i):
                    for right in self.std_stored(k - 1 - i):
                        yield ctor(left, right)
        for body in self.comp_exact(k - 1, store=False):
            yield Block(body)

    def comp_exact(self, k: int, store: bool) -> Iterator[CompensableTerm]:
        if store:
            yield from self.comp_stored(k)
            return
        for i in range(k + 1):
            j = k - i
            if self.pair_cap is not None and (i > self.pair_cap or j > self.pair_cap):
                continue
            for forward in self.std_stored(i):
                for compensation in self.std_stored(j):
                    yield Pair(forward, compensation)
        for ctor in (CSeq, CChoice, CPar):
            for i in range(k):
                for left in self.comp_stored(i):
                    for right in self.comp_stored(k - 1 - i):
                        yield ctor(left, right)


# ---------------------------------------------------------------------------
# Campaign drivers
# ---------------------------------------------------------------------------

#: Trim memo tables once they hold this many entries, to bound memory on
#: very large campaigns; recomputation after a trim is cheap.
CACHE_TRIM_THRESHOLD = 400_000


def maybe_trim_caches() -> None:
    if operational.cache_size() + denotational.cache_size() > CACHE_TRIM_THRESHOLD:
        operational.clear_caches()
        denotational.clear_caches()


@dataclass(frozen=True)
class CaseResult:
    index: int
    kind: str  # "std" | "comp"
    term: StandardTerm | CompensableTerm
    verdict: Verdict
    healthy: bool


def run_prop_campaign(
    seed: int,
    cases: int,
    max_depth: int,
    alphabet: tuple[Event, ...],
    kind: str,  # "std" | "comp" | "both"
    state_cap: int = DEFAULT_STATE_CAP,
) -> Iterator[CaseResult]:
    """Seeded equivalence campaign; `both` alternates the two categories.

    The per-case terms are a pure function of the arguments, so transcripts
    are reproducible.
    """
    rng = random.Random(seed)
    for i in range(cases):
        case_seed = rng.getrandbits(63)
        case_kind = kind if kind != "both" else ("std" if i % 2 == 0 else "comp")
        cfg = GenConfig(
            seed=case_seed,
            max_depth=max_depth,
            alphabet=alphabet,
            kind="standard" if case_kind == "std" else "compensable",
        )
        term = gen_term(cfg)
        if case_kind == "std":
            verdict = check_standard(term, state_cap)
        else:
            verdict = check_compensable(term, state_cap)
        yield CaseResult(i, case_kind, term, verdict, check_healthiness(term))
        maybe_trim_caches()


@dataclass
class LemmaSuiteResult:
    lemma: int
    name: str
    total: int = 0
    equal: int = 0
    failures: list[LemmaVerdict] = field(default_factory=list)
    #: coverage counters, e.g. COND branches for law 3 and forward throws
    #: for law 6
    coverage: dict[str, int] = field(default_factory=dict)


def run_lemma_suite(
    lemma: int,
    cases: int,
    seed: int,
    max_depth: int,
    alphabet: tuple[Event, ...],
) -> LemmaSuiteResult:
    """Check one law on `cases` seeded operand tuples."""
    name, kinds, _ = LAWS[lemma]
    result = LemmaSuiteResult(lemma, name)
    rng = random.Random((seed << 3) ^ lemma)
    for _ in range(cases):
        operands = tuple(
            gen_term(
                GenConfig(
                    seed=rng.getrandbits(63),
                    max_depth=max_depth,
                    alphabet=alphabet,
                    kind="standard" if k == "std" else "compensable",
                )
            )
            for k in kinds
        )
        verdict = check_lemma(lemma, operands)
        result.total += 1
        if verdict.is_equal:
            result.equal += 1
        else:
            result.failures.append(verdict)
        _record_coverage(result, lemma, operands)
        maybe_trim_caches()
    return result


def _record_coverage(result: LemmaSuiteResult, lemma: int, operands: tuple) -> None:
    cov = result.coverage
    if lemma == 3:
        terminals = {t.terminal for t, _ in derived_forward(operands[0])}
        if Terminal.TICK in terminals:
            cov["cond-true"] = cov.get("cond-true", 0) + 1
        if terminals - {Terminal.TICK}:
            cov["cond-false"] = cov.get("cond-false", 0) + 1
    elif lemma == 6:
        terminals = {t.terminal for t in derived_traces_standard(operands[0])}
        if Terminal.THROW in terminals:
            cov["forward-throw"] = cov.get("forward-throw", 0) + 1
