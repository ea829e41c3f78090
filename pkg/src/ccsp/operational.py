"""Small-step operational semantics and derived-trace extraction.

Transitions are labelled either by a normal event or by a terminal.  A
terminal step finishes a standard process (successor is the null process)
and finishes the forward behaviour of a compensable process (successor is
the banked compensation, a standard term).

Lifting single steps over event sequences gives runs; the derived traces
of a term are the labels of its maximal runs.  Both are computed by
exhaustive exploration, which terminates because every step strictly
decreases `term_weight`.  Exploration shares memo tables across calls and
charges each freshly explored term against a state cap so that pathological
terms fail loudly instead of thrashing.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

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
    NULL,
    Null,
    Pair,
    Par,
    SKIP,
    Seq,
    Skip,
    StandardTerm,
    Terminal,
    Throw,
    Trace,
    TracePair,
    Yield,
    is_compensable,
    pretty_print,
    term_weight,
)

DEFAULT_STATE_CAP = 100_000


@dataclass(frozen=True)
class Normal:
    """Transition label for an observable event."""

    event: Event


@dataclass(frozen=True)
class Term:
    """Transition label for a terminal event; always the last step of a run."""

    terminal: Terminal


TransitionLabel = Union[Normal, Term]


@dataclass(frozen=True)
class StandardStep:
    label: TransitionLabel
    successor: StandardTerm


@dataclass(frozen=True)
class CompensableStep:
    """A step of a compensable term.  The successor is compensable for a
    normal step and the banked compensation (standard) for a terminal one."""

    label: TransitionLabel
    successor: CompensableTerm | StandardTerm


class StateCapExceeded(RuntimeError):
    """Exploration touched more fresh states than the configured cap."""

    def __init__(self, cap: int):
        super().__init__(f"state cap exceeded: more than {cap} states explored")
        self.cap = cap


def _label_key(label: TransitionLabel):
    if isinstance(label, Term):
        return (0, label.terminal.value, "")
    return (1, 0, label.event)


def _step_key(step: StandardStep | CompensableStep):
    return (*_label_key(step.label), pretty_print(step.successor))


_STEPS_STD: dict[StandardTerm, tuple[StandardStep, ...]] = {}
_STEPS_COMP: dict[CompensableTerm, tuple[CompensableStep, ...]] = {}


def step_standard(term: StandardTerm) -> tuple[StandardStep, ...]:
    """All single steps of a standard term, in canonical order
    (terminals first by terminal order, then events alphabetically, then
    successor rendering)."""
    hit = _STEPS_STD.get(term)
    if hit is not None:
        return hit
    out: set[StandardStep] = set()
    match term:
        case Atom(e):
            out.add(StandardStep(Normal(e), SKIP))
        case Skip():
            out.add(StandardStep(Term(Terminal.TICK), NULL))
        case Throw():
            out.add(StandardStep(Term(Terminal.THROW), NULL))
        case Yield():
            out.add(StandardStep(Term(Terminal.YIELD), NULL))
            out.add(StandardStep(Term(Terminal.TICK), NULL))
        case Seq(l, r):
            for s in step_standard(l):
                if isinstance(s.label, Normal):
                    out.add(StandardStep(s.label, Seq(s.successor, r)))
                elif s.label.terminal is Terminal.TICK:
                    # The first process is done; one step of the second
                    # happens in the same transition, dropping the Seq node.
                    out.update(step_standard(r))
                else:
                    out.add(StandardStep(s.label, NULL))
        case Choice(l, r):
            out.update(step_standard(l))
            out.update(step_standard(r))
        case Par(l, r):
            lsteps = step_standard(l)
            rsteps = step_standard(r)
            for s in lsteps:
                if isinstance(s.label, Normal):
                    out.add(StandardStep(s.label, Par(s.successor, r)))
            for s in rsteps:
                if isinstance(s.label, Normal):
                    out.add(StandardStep(s.label, Par(l, s.successor)))
            # Termination is synchronised: both sides finish at once and
            # the terminals join.
            for sl in lsteps:
                if isinstance(sl.label, Term):
                    for sr in rsteps:
                        if isinstance(sr.label, Term):
                            joined = sl.label.terminal.join(sr.label.terminal)
                            out.add(StandardStep(Term(joined), NULL))
        case Interrupt(l, r):
            for s in step_standard(l):
                if isinstance(s.label, Normal):
                    out.add(StandardStep(s.label, Interrupt(s.successor, r)))
                elif s.label.terminal is Terminal.THROW:
                    # Control passes to the handler on a throw.
                    out.update(step_standard(r))
                else:
                    out.add(StandardStep(s.label, NULL))
        case Block(body):
            for s in step_compensable(body):
                if isinstance(s.label, Normal):
                    out.add(StandardStep(s.label, Block(s.successor)))
                elif s.label.terminal is Terminal.TICK:
                    # Successful block: discard the banked compensation.
                    out.add(StandardStep(Term(Terminal.TICK), NULL))
                elif s.label.terminal is Terminal.THROW:
                    # The block dissolves and the compensation starts
                    # running; the interrupt itself is not observable.
                    out.update(step_standard(s.successor))
                # A yielding forward run has no transition out of a block.
        case Null():
            raise ValueError("the null process has no transitions")
        case _:
            raise TypeError(f"not a standard term: {term!r}")
    w = term_weight(term)
    assert all(term_weight(s.successor) < w for s in out), "step must shrink the term"
    steps = tuple(sorted(out, key=_step_key))
    _STEPS_STD[term] = steps
    return steps


def step_compensable(term: CompensableTerm) -> tuple[CompensableStep, ...]:
    """All single steps of a compensable term, canonically ordered."""
    hit = _STEPS_COMP.get(term)
    if hit is not None:
        return hit
    out: set[CompensableStep] = set()
    match term:
        case Pair(f, c):
            for s in step_standard(f):
                if isinstance(s.label, Normal):
                    out.add(CompensableStep(s.label, Pair(s.successor, c)))
                elif s.label.terminal is Terminal.TICK:
                    out.add(CompensableStep(s.label, c))
                else:
                    # Unsuccessful forward behaviour banks no compensation.
                    out.add(CompensableStep(s.label, SKIP))
        case CSeq(l, r):
            for s in step_compensable(l):
                if isinstance(s.label, Normal):
                    out.add(CompensableStep(s.label, CSeq(s.successor, r)))
                elif s.label.terminal is Terminal.TICK:
                    banked = s.successor
                    for t in step_compensable(r):
                        if isinstance(t.label, Normal):
                            out.add(CompensableStep(t.label, Aux(t.successor, banked)))
                        else:
                            # Compensations accumulate in reverse order.
                            out.add(CompensableStep(t.label, Seq(t.successor, banked)))
                else:
                    out.add(CompensableStep(s.label, s.successor))
        case CChoice(l, r):
            out.update(step_compensable(l))
            out.update(step_compensable(r))
        case CPar(l, r):
            lsteps = step_compensable(l)
            rsteps = step_compensable(r)
            for s in lsteps:
                if isinstance(s.label, Normal):
                    out.add(CompensableStep(s.label, CPar(s.successor, r)))
            for s in rsteps:
                if isinstance(s.label, Normal):
                    out.add(CompensableStep(s.label, CPar(l, s.successor)))
            for sl in lsteps:
                if isinstance(sl.label, Term):
                    for sr in rsteps:
                        if isinstance(sr.label, Term):
                            joined = sl.label.terminal.join(sr.label.terminal)
                            out.add(
                                CompensableStep(
                                    Term(joined), Par(sl.successor, sr.successor)
                                )
                            )
        case Aux(rest, stored):
            for s in step_compensable(rest):
                if isinstance(s.label, Normal):
                    out.add(CompensableStep(s.label, Aux(s.successor, stored)))
                else:
                    out.add(CompensableStep(s.label, Seq(s.successor, stored)))
        case _:
            raise TypeError(f"not a compensable term: {term!r}")
    w = term_weight(term)
    assert all(term_weight(s.successor) < w for s in out), "step must shrink the term"
    steps = tuple(sorted(out, key=_step_key))
    _STEPS_COMP[term] = steps
    return steps


# ---------------------------------------------------------------------------
# Lifted runs and derived traces
# ---------------------------------------------------------------------------


def run_lifted(term: StandardTerm, t: Trace) -> bool:
    """Does the standard term have a run labelled exactly by `t`?"""
    if isinstance(term, Null):
        raise ValueError("the null process has no runs")
    return _runs(term, t, 0)


def _runs(term: StandardTerm, t: Trace, i: int) -> bool:
    steps = step_standard(term)
    if i == len(t.events):
        return any(
            isinstance(s.label, Term) and s.label.terminal is t.terminal for s in steps
        )
    event = t.events[i]
    return any(
        isinstance(s.label, Normal) and s.label.event == event and _runs(s.successor, t, i + 1)
        for s in steps
    )


class _Budget:
    __slots__ = ("remaining", "cap")

    def __init__(self, cap: int):
        self.remaining = cap
        self.cap = cap

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise StateCapExceeded(self.cap)


_DT_STD: dict[StandardTerm, frozenset[Trace]] = {}
_FORWARD: dict[CompensableTerm, frozenset[tuple[Trace, StandardTerm]]] = {}


def derived_traces_standard(
    term: StandardTerm, state_cap: int = DEFAULT_STATE_CAP
) -> frozenset[Trace]:
    """The labels of all maximal runs of a standard term."""
    if isinstance(term, Null):
        raise ValueError("the null process has no derived traces")
    return _dt_std(term, _Budget(state_cap))


def _dt_std(term: StandardTerm, budget: _Budget) -> frozenset[Trace]:
    hit = _DT_STD.get(term)
    if hit is not None:
        return hit
    budget.spend()
    out: set[Trace] = set()
    for s in step_standard(term):
        if isinstance(s.label, Term):
            out.add(Trace((), s.label.terminal))
        else:
            event = s.label.event
            for t in _dt_std(s.successor, budget):
                out.add(Trace((event,) + t.events, t.terminal))
    result = frozenset(out)
    _DT_STD[term] = result
    return result


def derived_forward(
    term: CompensableTerm, state_cap: int = DEFAULT_STATE_CAP
) -> frozenset[tuple[Trace, StandardTerm]]:
    """All (forward trace, banked compensation) outcomes of a compensable
    term's forward runs."""
    return _forward(term, _Budget(state_cap))


def _forward(term: CompensableTerm, budget: _Budget) -> frozenset[tuple[Trace, StandardTerm]]:
    hit = _FORWARD.get(term)
    if hit is not None:
        return hit
    budget.spend()
    out: set[tuple[Trace, StandardTerm]] = set()
    for s in step_compensable(term):
        if isinstance(s.label, Term):
            out.add((Trace((), s.label.terminal), s.successor))
        else:
            event = s.label.event
            for t, banked in _forward(s.successor, budget):
                out.add((Trace((event,) + t.events, t.terminal), banked))
    result = frozenset(out)
    _FORWARD[term] = result
    return result


def derived_traces_compensable(
    term: CompensableTerm, state_cap: int = DEFAULT_STATE_CAP
) -> frozenset[TracePair]:
    """Forward runs continued through their banked compensations."""
    budget = _Budget(state_cap)
    return frozenset(
        TracePair(t, t2)
        for t, banked in _forward(term, budget)
        for t2 in _dt_std(banked, budget)
    )


# ---------------------------------------------------------------------------
# Labelled transition systems
# ---------------------------------------------------------------------------

LtsNode = Union[StandardTerm, CompensableTerm]
LtsEdge = tuple[LtsNode, TransitionLabel, LtsNode]


@dataclass(frozen=True)
class Lts:
    """The reachable transition graph of a term.

    Nodes appear in breadth-first discovery order (root first) and edges in
    source order, so identical terms always produce identical graphs.
    """

    root: LtsNode
    nodes: tuple[LtsNode, ...]
    edges: tuple[LtsEdge, ...]

    def to_dot(self) -> str:
        """Graphviz rendering; terminal edge labels use `*`, `!`, `?`."""
        index = {node: i for i, node in enumerate(self.nodes)}
        lines = ["digraph lts {", "  rankdir=LR;"]
        for i, node in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{_dot_escape(pretty_print(node))}"];')
        for src, label, dst in self.edges:
            text = label.event if isinstance(label, Normal) else label.terminal.glyph
            lines.append(f'  n{index[src]} -> n{index[dst]} [label="{_dot_escape(text)}"];')
        lines.append("}")
        return "\n".join(lines)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _steps_any(node: LtsNode):
    if isinstance(node, Null):
        return ()
    if is_compensable(node):
        return step_compensable(node)
    return step_standard(node)


def build_lts(term: LtsNode, state_cap: int = DEFAULT_STATE_CAP) -> Lts:
    """Explore the full reachable graph under the step functions.

    Terminal steps of compensable nodes lead into the standard graph of the
    banked compensation, so the graph of a compensable term shows the
    compensation runs as well.
    """
    if isinstance(term, Null):
        raise ValueError("the null process is not a valid root")
    nodes: list[LtsNode] = [term]
    seen = {term}
    edges: list[LtsEdge] = []
    queue = deque([term])
    while queue:
        node = queue.popleft()
        for s in _steps_any(node):
            succ = s.successor
            if succ not in seen:
                if len(seen) >= state_cap:
                    raise StateCapExceeded(state_cap)
                seen.add(succ)
                nodes.append(succ)
                queue.append(succ)
            edges.append((node, s.label, succ))
    return Lts(root=term, nodes=tuple(nodes), edges=tuple(edges))


def clear_caches() -> None:
    """Drop memoized steps and derived traces."""
    _STEPS_STD.clear()
    _STEPS_COMP.clear()
    _DT_STD.clear()
    _FORWARD.clear()


def cache_size() -> int:
    return len(_STEPS_STD) + len(_STEPS_COMP) + len(_DT_STD) + len(_FORWARD)
