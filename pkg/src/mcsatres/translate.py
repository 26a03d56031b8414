"""Translations between Res*(T) proofs and MCSAT traces, with step accounting.

``res_to_mcsat`` learns every clause of a proof from an empty trail: a
resolvent costs one Decide per literal plus Propagate, Conflict, Resolve,
Learn and Restart; a theory lemma costs one Decide per literal plus
T-Conflict, Learn and Restart. ``mcsat_to_res`` keeps only the
clause-producing rules of a trace (Resolve, T-Propagate, T-Conflict).
"""

from __future__ import annotations

from typing import Iterable

from .engine import (
    CONFLICT, DECIDE, LEARN, PROPAGATE, RESOLVE, RESTART, T_CONFLICT, T_PROPAGATE, UNSAT,
    Conflict, Mcsat, RuleError, Search, StepAccount, Trace, TraceStep, Unsat, initial_state,
)
from .proofcore import Clause, ClauseSet, Literal, canonicalize
from .resstar import (
    RES_STAR_T, STRONG, Input, Resolution, ResStarProof, TheoryDerivation, check, proof_length,
    theory_derivations,
)
from .theory import LRATheory, Mode


class TranslationError(ValueError):
    pass


def _empty_search(state, rule_name: str) -> None:
    if not isinstance(state, Search) or len(state.trail):
        raise TranslationError(f"{rule_name} needs a search state with an empty trail")


def _in_basis(state: Search, clause: Clause) -> None:
    missing = [l for l in clause if l not in state.basis]
    if missing:
        raise TranslationError(f"literals {', '.join(map(str, missing))} are not in the basis")


def simulate_resolution(engine: Mcsat, state: Search, cl: Clause, cr: Clause,
                        pivot: Literal) -> tuple[Search, list[TraceStep]]:
    """Learn the resolvent of ``cl`` (with ``pivot``) and ``cr`` (with its negation).

    Emits no steps when the resolvent is tautological or already known.
    """
    _empty_search(state, "simulate_resolution")
    if cl not in state.clauses or cr not in state.clauses:
        raise TranslationError("both antecedents must be in the clause set")
    if pivot not in cl or pivot.neg() not in cr:
        raise TranslationError(f"{pivot} is not a pivot between {cl} and {cr}")
    side_c, side_d = cl.without(pivot), cr.without(pivot.neg())
    resolvent = canonicalize(side_c + side_d)
    if resolvent.tautological or resolvent in state.clauses:
        return state, []
    if pivot in resolvent or pivot.neg() in resolvent:
        raise TranslationError(f"antecedent is tautological on the pivot {pivot}")
    steps: list[TraceStep] = []
    for lit in resolvent:
        state = engine.rule_decide(state, lit.neg())
        steps.append(TraceStep(DECIDE, literal=lit.neg()))
    state = engine.rule_propagate(state, cl, pivot)
    steps.append(TraceStep(PROPAGATE, literal=pivot, clause=cl))
    state = engine.rule_conflict(state, cr)
    steps.append(TraceStep(CONFLICT, clause=cr))
    state = engine.rule_resolve(state)
    steps.append(TraceStep(RESOLVE, clause=state.conflict))
    state = engine.rule_learn(state)
    steps.append(TraceStep(LEARN, clause=state.conflict))
    state = engine.rule_restart(state)
    steps.append(TraceStep(RESTART))
    return state, steps


def simulate_strong_derivation(engine: Mcsat, state: Search, clause: Clause) -> tuple[Search, list[TraceStep]]:
    """Learn the valid lemma ``clause`` through an artificial theory conflict."""
    _empty_search(state, "simulate_strong_derivation")
    if engine.mode is not Mode.COMPLETE:
        raise TranslationError("lemma simulation needs the complete feasibility check")
    if clause.tautological or clause in state.clauses:
        return state, []
    if not engine.theory.is_valid(clause):
        raise TranslationError(f"{clause} is not a valid theory lemma")
    _in_basis(state, clause)
    steps: list[TraceStep] = []
    for lit in clause:
        state = engine.rule_decide(state, lit.neg())
        steps.append(TraceStep(DECIDE, literal=lit.neg()))
    before = state.basis
    conflict = engine.rule_t_conflict(state, clause)
    if conflict.conflict != clause:
        raise TranslationError(f"explanation {conflict.conflict} differs from the lemma {clause}")
    added = tuple(sorted(conflict.basis - before, key=lambda l: l.sort_key))
    steps.append(TraceStep(T_CONFLICT, clause=clause, basis_added=added))
    state = engine.rule_learn(conflict)
    steps.append(TraceStep(LEARN, clause=clause))
    state = engine.rule_restart(state)
    steps.append(TraceStep(RESTART))
    return state, steps


def res_to_mcsat(proof: ResStarProof, inputs: Iterable[Clause] | None = None,
                 engine: Mcsat | None = None) -> tuple[Trace, StepAccount]:
    """Build an MCSAT trace that learns every clause derived in ``proof``.

    Every literal of the proof is registered in the basis up front. A
    refutation ends with Conflict on the learned empty clause and Unsat.
    """
    clauses = ClauseSet(proof.inputs() if inputs is None else inputs)
    result = check(proof, clauses, RES_STAR_T)
    if not result:
        raise TranslationError(f"proof does not check: {result}")
    engine = engine or Mcsat(LRATheory(Mode.COMPLETE))
    extra = tuple(sorted(proof.literals(), key=lambda l: l.sort_key))
    trace = Trace(clauses, engine.mode, extra)
    state = initial_state(clauses, extra)
    for step in proof.steps:
        if isinstance(step, Input):
            continue
        if isinstance(step, Resolution):
            state, emitted = simulate_resolution(engine, state, proof.clause(step.left),
                                                 proof.clause(step.right), step.pivot)
        else:
            state, emitted = simulate_strong_derivation(engine, state, step.clause)
        trace.steps.extend(emitted)
    if proof.is_refutation:
        empty = Clause()
        conflict = engine.rule_conflict(state, empty)
        trace.steps.append(TraceStep(CONFLICT, clause=empty))
        engine.rule_unsat(conflict)
        trace.steps.append(TraceStep(UNSAT))
    return trace, trace.account


def res_bound(proof: ResStarProof) -> int:
    """Sum of all clause sizes plus five per derived step."""
    return sum(len(s.clause) for s in proof.steps) + 5 * proof_length(proof)


def proof_account(proof: ResStarProof) -> StepAccount:
    th = theory_derivations(proof)
    return StepAccount(th, proof_length(proof) - th)


def mcsat_to_res(trace: Trace, engine: Mcsat | None = None) -> tuple[ResStarProof, StepAccount]:
    """Collect the clauses produced by a trace into a Res*(T) proof.

    The trace is replayed step by step; a step that does not replay raises
    :class:`~mcsatres.engine.ReplayError` naming its index.
    """
    engine = engine or Mcsat(LRATheory(trace.mode))
    proof = ResStarProof()
    index: dict[Clause, int] = {}
    for c in trace.inputs:
        index[c] = proof.add(Input(c))
    for step, before, after in engine.replay_states(trace):
        if step.rule == RESOLVE:
            top = before.trail.top
            left, right = index[top.reason], index[before.conflict]
            index[after.conflict] = proof.add(Resolution(left, right, top.literal, after.conflict))
        elif step.rule == T_CONFLICT:
            index[after.conflict] = proof.add(TheoryDerivation(after.conflict, STRONG))
        elif step.rule == T_PROPAGATE:
            reason = after.trail.top.reason
            index[reason] = proof.add(TheoryDerivation(reason, STRONG))
        elif step.rule == UNSAT:
            proof.conclusion = index[before.conflict]
    return proof, proof_account(proof)


__all__ = [
    "simulate_resolution", "simulate_strong_derivation", "res_to_mcsat", "mcsat_to_res",
    "res_bound", "proof_account", "TranslationError", "RuleError", "Conflict", "Unsat",
]
