"""The MCSAT transition system.

Every rule is a method on :class:`Mcsat` that checks its side conditions and
returns the successor state, raising :class:`RuleError` when the rule does not
apply. :meth:`Mcsat.solve` drives the rules with a fixed CDCL-like strategy and
records every application as a :class:`TraceStep`; :meth:`Mcsat.replay`
re-applies a recorded trace.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .proofcore import (
    BoolAtom, Clause, ClauseSet, Literal, basis_of, canonicalize, resolve,
)
from .theory import LRATheory, Mode, NotInfeasibleError

log = logging.getLogger(__name__)

DECIDE = "Decide"
PROPAGATE = "Propagate"
CONFLICT = "Conflict"
SAT = "Sat"
FORGET = "Forget"
RESTART = "Restart"
RESOLVE = "Resolve"
CONSUME1 = "Consume1"
CONSUME2 = "Consume2"
BACKJUMP = "Backjump"
UNSAT = "Unsat"
LEARN = "Learn"
T_PROPAGATE = "T-Propagate"
T_DECIDE = "T-Decide"
T_CONFLICT = "T-Conflict"
T_CONSUME = "T-Consume"
T_BACKJUMP_DECIDE = "T-Backjump-Decide"

RULES = (
    DECIDE, PROPAGATE, CONFLICT, SAT, FORGET, RESTART,
    RESOLVE, CONSUME1, CONSUME2, BACKJUMP, UNSAT, LEARN,
    T_PROPAGATE, T_DECIDE, T_CONFLICT, T_CONSUME, T_BACKJUMP_DECIDE,
)
THEORY_RULES = frozenset({T_PROPAGATE, T_CONFLICT})
CLAUSE_PRODUCING = frozenset({RESOLVE, T_PROPAGATE, T_CONFLICT})


class RuleError(ValueError):
    """A rule was applied where its side conditions do not hold."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


class ReplayError(ValueError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"trace step {index} does not replay: {cause}")
        self.index = index
        self.cause = cause


# -- trail -------------------------------------------------------------------

@dataclass(frozen=True)
class BoolDecision:
    literal: Literal


@dataclass(frozen=True)
class BoolPropagation:
    reason: Clause
    literal: Literal


@dataclass(frozen=True)
class TheoryDecision:
    var: str
    value: Fraction


@dataclass(frozen=True)
class TheoryPropagation:
    reason: Clause
    literal: Literal


TrailElement = Union[BoolDecision, BoolPropagation, TheoryDecision, TheoryPropagation]
DECISIONS = (BoolDecision, TheoryDecision)
PROPAGATIONS = (BoolPropagation, TheoryPropagation)


class Trail:
    """An immutable trail. ``push`` shares structure with the parent trail."""

    __slots__ = ("elements", "parent", "asserted", "assignment", "_values")

    def __init__(self):
        self.elements: tuple[TrailElement, ...] = ()
        self.parent: Trail | None = None
        self.asserted: frozenset[Literal] = frozenset()
        self.assignment: dict[str, Fraction] = {}
        self._values: dict[Literal, bool | None] = {}

    @classmethod
    def of(cls, elements: Iterable[TrailElement]) -> Trail:
        t = cls()
        for e in elements:
            t = t.push(e)
        return t

    def push(self, element: TrailElement) -> Trail:
        t = Trail.__new__(Trail)
        t.elements = self.elements + (element,)
        t.parent = self
        t._values = {}
        if isinstance(element, TheoryDecision):
            t.asserted = self.asserted
            t.assignment = {**self.assignment, element.var: element.value}
        else:
            t.asserted = self.asserted | {element.literal}
            t.assignment = self.assignment
        return t

    def pop(self) -> Trail:
        if self.parent is None:
            raise IndexError("pop from empty trail")
        return self.parent

    def prefix(self, n: int) -> Trail:
        t = self
        while len(t.elements) > n:
            t = t.parent
        return t

    @property
    def top(self) -> TrailElement | None:
        return self.elements[-1] if self.elements else None

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Trail) and self.elements == other.elements

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"Trail({[describe_element(e) for e in self.elements]})"

    def value(self, lit: Literal) -> bool | None:
        """Value(L, M): asserted literals first, then theory evaluation."""
        try:
            return self._values[lit]
        except KeyError:
            pass
        if lit in self.asserted:
            v = True
        elif lit.neg() in self.asserted:
            v = False
        elif lit.is_linear:
            v = _eval(lit, self.assignment)
        else:
            v = None
        self._values[lit] = v
        return v

    def clause_value(self, clause: Clause) -> bool | None:
        vals = [self.value(l) for l in clause]
        if any(v is True for v in vals):
            return True
        if all(v is False for v in vals):
            return False
        return None

    def all_false(self, lits: Iterable[Literal]) -> bool:
        return all(self.value(l) is False for l in lits)

    def decision_positions(self) -> list[int]:
        return [i for i, e in enumerate(self.elements) if isinstance(e, DECISIONS)]

    def assigned_atoms(self) -> set:
        return {l.atom for l in self.asserted}


def _eval(lit: Literal, assignment) -> bool | None:
    from .theory import eval_literal
    return eval_literal(lit, assignment)


def describe_element(e: TrailElement) -> str:
    if isinstance(e, BoolDecision):
        return f"{e.literal}"
    if isinstance(e, TheoryDecision):
        return f"{e.var} -> {e.value}"
    arrow = "->" if isinstance(e, BoolPropagation) else "=T=>"
    return f"({e.reason}) {arrow} {e.literal}"


# -- states ------------------------------------------------------------------

@dataclass(frozen=True)
class Search:
    trail: Trail
    clauses: ClauseSet
    basis: frozenset[Literal]


@dataclass(frozen=True)
class Conflict:
    trail: Trail
    clauses: ClauseSet
    basis: frozenset[Literal]
    conflict: Clause


@dataclass(frozen=True)
class Sat:
    booleans: dict[str, bool]
    theory: dict[str, Fraction]

    def satisfies(self, clause: Clause) -> bool:
        from .theory import eval_literal
        for l in clause:
            if isinstance(l.atom, BoolAtom):
                if l.atom.name in self.booleans and self.booleans[l.atom.name] == l.positive:
                    return True
            elif eval_literal(l, self.theory):
                return True
        return False


@dataclass(frozen=True)
class Unsat:
    pass


State = Union[Search, Conflict, Sat, Unsat]


def initial_state(clauses: ClauseSet, extra_basis: Iterable[Literal] = ()) -> Search:
    return Search(Trail(), clauses, basis_of(clauses, extra_basis))


# -- trace -------------------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    """One rule application. Operands not used by ``rule`` stay ``None``."""

    rule: str
    literal: Literal | None = None
    clause: Clause | None = None
    var: str | None = None
    value: Fraction | None = None
    position: int | None = None
    basis_added: tuple[Literal, ...] = ()

    @property
    def is_theory(self) -> bool:
        return self.rule in THEORY_RULES


@dataclass(frozen=True)
class StepAccount:
    theory: int = 0
    non_theory: int = 0

    @property
    def total(self) -> int:
        return self.theory + self.non_theory

    def add(self, theory: bool) -> StepAccount:
        if theory:
            return StepAccount(self.theory + 1, self.non_theory)
        return StepAccount(self.theory, self.non_theory + 1)

    @classmethod
    def of(cls, steps: Iterable[TraceStep]) -> StepAccount:
        th = nt = 0
        for s in steps:
            if s.is_theory:
                th += 1
            else:
                nt += 1
        return cls(th, nt)


@dataclass
class Trace:
    inputs: ClauseSet
    mode: Mode = Mode.COMPLETE
    extra_basis: tuple[Literal, ...] = ()
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    @property
    def account(self) -> StepAccount:
        return StepAccount.of(self.steps)


@dataclass
class SolveResult:
    status: str  # "sat", "unsat" or "unknown"
    state: State
    trace: Trace

    @property
    def model(self) -> Sat | None:
        return self.state if isinstance(self.state, Sat) else None


# -- the rules ---------------------------------------------------------------

def _need(state, kind, rule):
    if not isinstance(state, kind):
        raise RuleError(rule, f"expected a {kind.__name__} state, got {type(state).__name__}")


def _added(old: frozenset, new: frozenset) -> tuple[Literal, ...]:
    return tuple(sorted(new - old, key=lambda l: l.sort_key))


class Mcsat:
    """The MCSAT proof system over a theory plug-in.

    ``check_invariants`` re-verifies trail consistency and the conflict-clause
    invariant after every rule (slow; meant for tests).
    """

    def __init__(self, theory=None, check_invariants: bool = False):
        self.theory = theory if theory is not None else LRATheory()
        self.check_invariants = check_invariants

    @property
    def mode(self) -> Mode:
        return self.theory.mode

    def value_of(self, lit: Literal, trail: Trail) -> bool | None:
        return trail.value(lit)

    def _check(self, state: State, rule: str) -> State:
        if not self.check_invariants or not isinstance(state, (Search, Conflict)):
            return state
        trail = state.trail
        seen_atoms, seen_vars = set(), set()
        for e in trail.elements:
            if isinstance(e, TheoryDecision):
                assert e.var not in seen_vars, f"{rule}: {e.var} decided twice"
                seen_vars.add(e.var)
            else:
                assert e.literal.atom not in seen_atoms, f"{rule}: {e.literal} assigned twice"
                seen_atoms.add(e.literal.atom)
        assert self.theory.is_consistent(trail.asserted, trail.assignment), f"{rule}: trail inconsistent"
        if isinstance(state, Conflict) and rule in (CONFLICT, T_CONFLICT, LEARN):
            assert trail.all_false(state.conflict), f"{rule}: conflict clause not false"
        return state

    def _basis_with(self, basis: frozenset, clause: Clause) -> frozenset:
        new = {l for l in clause if l not in basis}
        if not new:
            return basis
        return basis | new | {l.neg() for l in new}

    # -- Boolean reasoning ---------------------------------------------------

    def rule_decide(self, state: State, lit: Literal) -> Search:
        _need(state, Search, DECIDE)
        if lit not in state.basis:
            raise RuleError(DECIDE, f"{lit} is not in the basis")
        if state.trail.value(lit) is not None:
            raise RuleError(DECIDE, f"{lit} is already {state.trail.value(lit)}")
        return self._check(Search(state.trail.push(BoolDecision(lit)), state.clauses, state.basis), DECIDE)

    def rule_propagate(self, state: State, clause: Clause, lit: Literal) -> Search:
        _need(state, Search, PROPAGATE)
        if clause not in state.clauses:
            raise RuleError(PROPAGATE, f"{clause} is not in the clause set")
        if lit not in clause:
            raise RuleError(PROPAGATE, f"{lit} does not occur in {clause}")
        trail = state.trail
        if not trail.all_false(clause.without(lit)):
            raise RuleError(PROPAGATE, f"not all other literals of {clause} are false")
        if trail.value(lit) is not None:
            raise RuleError(PROPAGATE, f"{lit} is not undefined")
        return self._check(Search(trail.push(BoolPropagation(clause, lit)), state.clauses, state.basis), PROPAGATE)

    def rule_conflict(self, state: State, clause: Clause) -> Conflict:
        _need(state, Search, CONFLICT)
        if clause not in state.clauses:
            raise RuleError(CONFLICT, f"{clause} is not in the clause set")
        if not state.trail.all_false(clause):
            raise RuleError(CONFLICT, f"{clause} is not false under the trail")
        return self._check(Conflict(state.trail, state.clauses, state.basis, clause), CONFLICT)

    def is_complete(self, trail: Trail, clauses: ClauseSet) -> bool:
        assigned = trail.assigned_atoms()
        if any(a not in assigned for a in clauses.boolean_atoms()):
            return False
        return all(v in trail.assignment for v in clauses.theory_variables())

    def rule_sat(self, state: State) -> Sat:
        _need(state, Search, SAT)
        trail = state.trail
        if not self.is_complete(trail, state.clauses):
            raise RuleError(SAT, "trail is not complete")
        for c in state.clauses:
            if trail.clause_value(c) is not True:
                raise RuleError(SAT, f"{c} is not satisfied")
        booleans = {l.atom.name: l.positive for l in trail.asserted if isinstance(l.atom, BoolAtom)}
        return Sat(booleans, dict(trail.assignment))

    def rule_forget(self, state: State, clause: Clause) -> Search:
        _need(state, Search, FORGET)
        if clause not in state.clauses:
            raise RuleError(FORGET, f"{clause} is not in the clause set")
        if not state.clauses.is_learned(clause):
            raise RuleError(FORGET, f"{clause} is an input clause")
        return Search(state.trail, state.clauses.remove(clause), state.basis)

    def rule_restart(self, state: State) -> Search:
        _need(state, Conflict, RESTART)
        return Search(Trail(), state.clauses, state.basis)

    # -- conflict analysis ---------------------------------------------------

    def rule_resolve(self, state: State) -> Conflict:
        _need(state, Conflict, RESOLVE)
        top = state.trail.top
        if not isinstance(top, PROPAGATIONS):
            raise RuleError(RESOLVE, "trail does not end with a propagation")
        if top.literal.neg() not in state.conflict:
            raise RuleError(RESOLVE, f"{top.literal.neg()} is not in the conflict clause")
        resolvent = resolve(top.reason, state.conflict, top.literal)
        return Conflict(state.trail.pop(), state.clauses, state.basis, resolvent)

    def rule_consume1(self, state: State) -> Conflict:
        _need(state, Conflict, CONSUME1)
        top = state.trail.top
        if not isinstance(top, PROPAGATIONS):
            raise RuleError(CONSUME1, "trail does not end with a propagation")
        if top.literal.neg() in state.conflict:
            raise RuleError(CONSUME1, f"{top.literal.neg()} is in the conflict clause")
        return Conflict(state.trail.pop(), state.clauses, state.basis, state.conflict)

    def rule_consume2(self, state: State) -> Conflict:
        _need(state, Conflict, CONSUME2)
        top = state.trail.top
        if not isinstance(top, BoolDecision):
            raise RuleError(CONSUME2, "trail does not end with a Boolean decision")
        if top.literal.neg() in state.conflict:
            raise RuleError(CONSUME2, f"{top.literal.neg()} is in the conflict clause")
        return Conflict(state.trail.pop(), state.clauses, state.basis, state.conflict)

    def rule_t_consume(self, state: State) -> Conflict:
        _need(state, Conflict, T_CONSUME)
        top = state.trail.top
        if not isinstance(top, TheoryDecision):
            raise RuleError(T_CONSUME, "trail does not end with a theory decision")
        rest = state.trail.pop()
        if not rest.all_false(state.conflict):
            raise RuleError(T_CONSUME, "conflict clause is not false without the decision")
        return Conflict(rest, state.clauses, state.basis, state.conflict)

    def consume_rule(self, state: State) -> str:
        """Name of the consume variant matching the trail top."""
        top = state.trail.top
        if isinstance(top, PROPAGATIONS):
            return CONSUME1
        if isinstance(top, BoolDecision):
            return CONSUME2
        return T_CONSUME

    def rule_consume(self, state: State) -> Conflict:
        _need(state, Conflict, CONSUME1)
        if state.trail.top is None:
            raise RuleError(CONSUME1, "trail is empty")
        return {CONSUME1: self.rule_consume1, CONSUME2: self.rule_consume2,
                T_CONSUME: self.rule_t_consume}[self.consume_rule(state)](state)

    def _asserting_at(self, trail: Trail, clause: Clause, lit: Literal, pos: int) -> bool:
        if not isinstance(trail.elements[pos], DECISIONS):
            return False
        m = trail.prefix(pos)
        return m.value(lit) is None and m.all_false(clause.without(lit))

    def backjump_target(self, state: Conflict) -> tuple[Literal, int] | None:
        """Earliest decision position at which the conflict clause is asserting."""
        trail = state.trail
        for pos in trail.decision_positions():
            m = trail.prefix(pos)
            undef = [l for l in state.conflict if m.value(l) is None]
            if len(undef) == 1 and m.all_false(state.conflict.without(undef[0])):
                return undef[0], pos
        return None

    def rule_backjump(self, state: State, lit: Literal, position: int | None = None) -> Search:
        _need(state, Conflict, BACKJUMP)
        trail, c = state.trail, state.conflict
        if lit not in c:
            raise RuleError(BACKJUMP, f"{lit} is not in the conflict clause")
        if position is None:
            target = self.backjump_target(state)
            if target is None or target[0] != lit:
                raise RuleError(BACKJUMP, f"no split point makes {c} assert {lit}")
            position = target[1]
        if not 0 <= position < len(trail):
            raise RuleError(BACKJUMP, f"position {position} outside the trail")
        if not isinstance(trail.elements[position], DECISIONS):
            raise RuleError(BACKJUMP, "the popped part does not start with a decision")
        if not self._asserting_at(trail, c, lit, position):
            raise RuleError(BACKJUMP, f"{c} does not assert {lit} at position {position}")
        m = trail.prefix(position)
        return self._check(Search(m.push(BoolPropagation(c, lit)), state.clauses, state.basis), BACKJUMP)

    def rule_unsat(self, state: State) -> Unsat:
        _need(state, Conflict, UNSAT)
        if state.conflict:
            raise RuleError(UNSAT, "conflict clause is not empty")
        return Unsat()

    def rule_learn(self, state: State) -> Conflict:
        _need(state, Conflict, LEARN)
        if state.conflict in state.clauses:
            raise RuleError(LEARN, f"{state.conflict} is already in the clause set")
        new = Conflict(state.trail, state.clauses.add(state.conflict), state.basis, state.conflict)
        return self._check(new, LEARN)

    # -- theory reasoning ----------------------------------------------------

    def rule_t_propagate(self, state: State, lit: Literal, lemma: Clause | None = None) -> Search:
        _need(state, Search, T_PROPAGATE)
        trail = state.trail
        if lit not in state.basis:
            raise RuleError(T_PROPAGATE, f"{lit} is not in the basis")
        if trail.value(lit) is not None:
            raise RuleError(T_PROPAGATE, f"{lit} is not undefined")
        extended = trail.asserted | {lit.neg()}
        if not self.theory.infeasible(extended, trail.assignment):
            raise RuleError(T_PROPAGATE, f"[M, {lit.neg()}] is not infeasible")
        try:
            e = self.theory.explain(extended, trail.assignment, requested=lemma, kind="propagation").clause
        except (NotInfeasibleError, ValueError) as exc:
            raise RuleError(T_PROPAGATE, str(exc)) from exc
        if lit not in e or not trail.all_false(e.without(lit)):
            raise RuleError(T_PROPAGATE, f"explanation {e} does not imply {lit} on this trail")
        basis = self._basis_with(state.basis, e)
        return self._check(Search(trail.push(TheoryPropagation(e, lit)), state.clauses, basis), T_PROPAGATE)

    def rule_t_decide(self, state: State, var: str, value: Fraction) -> Search:
        _need(state, Search, T_DECIDE)
        trail = state.trail
        if var not in state.clauses.theory_variables():
            raise RuleError(T_DECIDE, f"{var} does not occur in the clause set")
        if var in trail.assignment:
            raise RuleError(T_DECIDE, f"{var} already has a value")
        new = trail.push(TheoryDecision(var, Fraction(value)))
        if not self.theory.is_consistent(new.asserted, new.assignment):
            raise RuleError(T_DECIDE, f"{var} -> {value} makes the trail inconsistent")
        return self._check(Search(new, state.clauses, state.basis), T_DECIDE)

    def rule_t_conflict(self, state: State, lemma: Clause | None = None) -> Conflict:
        _need(state, Search, T_CONFLICT)
        trail = state.trail
        if not self.theory.infeasible(trail.asserted, trail.assignment):
            raise RuleError(T_CONFLICT, "trail is not infeasible")
        try:
            e = self.theory.explain(trail.asserted, trail.assignment, requested=lemma).clause
        except (NotInfeasibleError, ValueError) as exc:
            raise RuleError(T_CONFLICT, str(exc)) from exc
        basis = self._basis_with(state.basis, e)
        return self._check(Conflict(trail, state.clauses, basis, e), T_CONFLICT)

    def rule_t_backjump_decide(self, state: State, lit: Literal, position: int | None = None) -> Search:
        _need(state, Conflict, T_BACKJUMP_DECIDE)
        trail, c = state.trail, state.conflict
        if lit not in c:
            raise RuleError(T_BACKJUMP_DECIDE, f"{lit} is not in the conflict clause")
        candidates = [i for i, e in enumerate(trail.elements) if isinstance(e, TheoryDecision)]
        if not candidates:
            raise RuleError(T_BACKJUMP_DECIDE, "trail has no theory decision")
        if position is None:
            position = candidates[-1]
        if position not in candidates:
            raise RuleError(T_BACKJUMP_DECIDE, f"no theory decision at position {position}")
        m = trail.prefix(position)
        if m.value(lit) is not None:
            raise RuleError(T_BACKJUMP_DECIDE, f"{lit} is not undefined before the theory decision")
        if not any(m.value(l) is None for l in c.without(lit)):
            raise RuleError(T_BACKJUMP_DECIDE, "no other conflict literal is undefined")
        return self._check(Search(m.push(BoolDecision(lit)), state.clauses, state.basis), T_BACKJUMP_DECIDE)

    # -- replay --------------------------------------------------------------

    def apply(self, state: State, step: TraceStep) -> State:
        """Apply a recorded step, checking any recorded result clause."""
        r = step.rule
        if r == DECIDE:
            return self.rule_decide(state, step.literal)
        if r == PROPAGATE:
            return self.rule_propagate(state, step.clause, step.literal)
        if r == CONFLICT:
            return self.rule_conflict(state, step.clause)
        if r == SAT:
            return self.rule_sat(state)
        if r == FORGET:
            return self.rule_forget(state, step.clause)
        if r == RESTART:
            return self.rule_restart(state)
        if r == RESOLVE:
            new = self.rule_resolve(state)
            if step.clause is not None and new.conflict != step.clause:
                raise RuleError(RESOLVE, f"resolvent is {new.conflict}, trace says {step.clause}")
            return new
        if r == CONSUME1:
            return self.rule_consume1(state)
        if r == CONSUME2:
            return self.rule_consume2(state)
        if r == T_CONSUME:
            return self.rule_t_consume(state)
        if r == BACKJUMP:
            return self.rule_backjump(state, step.literal, step.position)
        if r == UNSAT:
            return self.rule_unsat(state)
        if r == LEARN:
            new = self.rule_learn(state)
            if step.clause is not None and new.conflict != step.clause:
                raise RuleError(LEARN, f"learned {new.conflict}, trace says {step.clause}")
            return new
        if r == T_PROPAGATE:
            return self.rule_t_propagate(state, step.literal, step.clause)
        if r == T_DECIDE:
            return self.rule_t_decide(state, step.var, step.value)
        if r == T_CONFLICT:
            return self.rule_t_conflict(state, step.clause)
        if r == T_BACKJUMP_DECIDE:
            return self.rule_t_backjump_decide(state, step.literal, step.position)
        raise RuleError(r, "unknown rule")

    def replay(self, trace: Trace, upto: int | None = None) -> State:
        state: State = initial_state(trace.inputs, trace.extra_basis)
        for i, step in enumerate(trace.steps[:upto]):
            try:
                state = self.apply(state, step)
            except (RuleError, AttributeError, TypeError, IndexError, AssertionError) as exc:
                raise ReplayError(i, exc) from exc
        return state

    def replay_states(self, trace: Trace):
        """Yield ``(step, state_before, state_after)`` for every step."""
        state: State = initial_state(trace.inputs, trace.extra_basis)
        for i, step in enumerate(trace.steps):
            try:
                after = self.apply(state, step)
            except (RuleError, AttributeError, TypeError, IndexError, AssertionError) as exc:
                raise ReplayError(i, exc) from exc
            yield step, state, after
            state = after

    # -- driver --------------------------------------------------------------

    def solve(self, clauses: ClauseSet | Iterable[Clause], max_steps: int = 200_000,
              extra_basis: Iterable[Literal] = (), restart_first: int = 16,
              restart_factor: float = 1.5, forget_above: int | None = None) -> SolveResult:
        """Run the rules to SAT or UNSAT.

        Returns status ``"unknown"`` when ``max_steps`` rule applications do
        not suffice. ``forget_above`` enables Forget of learned clauses longer
        than the given size at each restart.
        """
        if not isinstance(clauses, ClauseSet):
            clauses = ClauseSet(clauses)
        extra = tuple(sorted(set(extra_basis), key=lambda l: l.sort_key))
        trace = Trace(clauses, self.mode, extra)
        state: State = initial_state(clauses, extra)
        conflicts = 0
        restart_limit = float(restart_first)
        steps = trace.steps

        def emit(new: State, step: TraceStep) -> State:
            if isinstance(new, (Search, Conflict)) and isinstance(state, (Search, Conflict)):
                if new.basis is not state.basis:
                    step = TraceStep(step.rule, step.literal, step.clause, step.var, step.value,
                                     step.position, _added(state.basis, new.basis))
            steps.append(step)
            return new

        while not isinstance(state, (Sat, Unsat)):
            if len(steps) >= max_steps:
                return SolveResult("unknown", state, trace)
            if isinstance(state, Search):
                before = state
                state = self._search_step(state, emit)
                if isinstance(state, Conflict) and not isinstance(before, Conflict):
                    conflicts += 1
                continue
            # conflict analysis
            c = state.conflict
            if not c:
                state = emit(self.rule_unsat(state), TraceStep(UNSAT))
                continue
            target = self.backjump_target(state)
            top = state.trail.top
            if target is None and isinstance(top, PROPAGATIONS):
                if top.literal.neg() in c:
                    new = self.rule_resolve(state)
                    state = emit(new, TraceStep(RESOLVE, clause=new.conflict))
                else:
                    state = emit(self.rule_consume1(state), TraceStep(CONSUME1))
                continue
            if target is None and isinstance(top, BoolDecision):
                state = emit(self.rule_consume2(state), TraceStep(CONSUME2))
                continue
            if target is None and isinstance(top, TheoryDecision) and state.trail.pop().all_false(c):
                state = emit(self.rule_t_consume(state), TraceStep(T_CONSUME))
                continue
            # about to leave the conflict: learn, then restart, backjump or T-backjump-decide
            if c not in state.clauses:
                state = emit(self.rule_learn(state), TraceStep(LEARN, clause=c))
                continue
            if conflicts >= restart_limit:
                conflicts = 0
                restart_limit *= restart_factor
                state = emit(self.rule_restart(state), TraceStep(RESTART))
                if forget_above is not None:
                    for old in state.clauses.learned():
                        if len(old) > forget_above:
                            state = emit(self.rule_forget(state, old), TraceStep(FORGET, clause=old))
                continue
            if target is not None:
                lit, pos = target
                state = emit(self.rule_backjump(state, lit, pos),
                             TraceStep(BACKJUMP, literal=lit, position=pos))
                continue
            pos = len(state.trail) - 1
            m = state.trail.prefix(pos)
            lit = [l for l in c if m.value(l) is None][-1]
            state = emit(self.rule_t_backjump_decide(state, lit, pos),
                         TraceStep(T_BACKJUMP_DECIDE, literal=lit, position=pos))

        if isinstance(state, Sat):
            for clause in clauses:
                if not state.satisfies(clause):
                    raise AssertionError(f"model does not satisfy input clause {clause}")
            return SolveResult("sat", state, trace)
        return SolveResult("unsat", state, trace)

    def _sorted_basis(self, basis: frozenset) -> list[Literal]:
        cache = getattr(self, "_basis_cache", None)
        if cache is None or cache[0] is not basis:
            cache = (basis, sorted(basis, key=lambda l: l.sort_key))
            self._basis_cache = cache
        return cache[1]

    def _search_step(self, state: Search, emit) -> State:
        trail, clauses = state.trail, state.clauses
        for c in clauses:
            if trail.all_false(c):
                return emit(self.rule_conflict(state, c), TraceStep(CONFLICT, clause=c))
        if self.theory.infeasible(trail.asserted, trail.assignment):
            new = self.rule_t_conflict(state)
            return emit(new, TraceStep(T_CONFLICT, clause=new.conflict))
        for c in clauses:
            undef = None
            for l in c:
                v = trail.value(l)
                if v is True:
                    break
                if v is None:
                    if undef is not None:
                        break
                    undef = l
            else:
                if undef is not None:
                    return emit(self.rule_propagate(state, c, undef),
                                TraceStep(PROPAGATE, literal=undef, clause=c))
        basis = self._sorted_basis(state.basis)
        if isinstance(self.theory, LRATheory):
            new = self._theory_propagation(state, basis)
            if new is not None:
                return emit(new, TraceStep(T_PROPAGATE, literal=new.trail.top.literal,
                                           clause=new.trail.top.reason))
        for l in basis:
            if trail.value(l) is None:
                return emit(self.rule_decide(state, l), TraceStep(DECIDE, literal=l))
        for var in clauses.theory_variables():
            if var not in trail.assignment:
                value = self.theory.pick_value(var, trail.asserted, trail.assignment)
                if value is None:
                    raise AssertionError(f"no consistent value for {var} on a feasible trail")
                return emit(self.rule_t_decide(state, var, value),
                            TraceStep(T_DECIDE, var=var, value=value))
        return emit(self.rule_sat(state), TraceStep(SAT))

    def _theory_propagation(self, state: Search, basis: list[Literal]) -> Search | None:
        trail = state.trail
        live: set[str] = set()
        for l in trail.asserted:
            if l.is_linear:
                live.update(v for v in l.atom.variables if v not in trail.assignment)
        if not live:
            return None
        for l in basis:
            if not l.is_linear or trail.value(l) is not None:
                continue
            if not any(v in live for v in l.atom.variables):
                continue
            if self.theory.infeasible(trail.asserted | {l.neg()}, trail.assignment):
                try:
                    return self.rule_t_propagate(state, l)
                except RuleError:
                    continue
        return None


def solve(clauses, mode: Mode | str = Mode.COMPLETE, max_steps: int = 200_000, **kwargs) -> SolveResult:
    return Mcsat(LRATheory(Mode(mode))).solve(clauses, max_steps=max_steps, **kwargs)


def value_of(lit: Literal, trail: Trail) -> bool | None:
    return trail.value(lit)


__all__ = [
    "Mcsat", "Trail", "Search", "Conflict", "Sat", "Unsat", "TraceStep", "Trace", "StepAccount",
    "SolveResult", "RuleError", "ReplayError", "BoolDecision", "BoolPropagation", "TheoryDecision",
    "TheoryPropagation", "RULES", "THEORY_RULES", "CLAUSE_PRODUCING", "solve", "value_of",
    "initial_state", "canonicalize",
]
