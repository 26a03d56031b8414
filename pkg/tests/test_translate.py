import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mcsatres import generators
from mcsatres.engine import (
    CONFLICT, DECIDE, LEARN, PROPAGATE, RESOLVE, RESTART, T_CONFLICT, UNSAT, Mcsat, ReplayError,
    Trace, TraceStep, Unsat, initial_state, solve,
)
from mcsatres.proofcore import Clause, ClauseSet, boolean, canonicalize, linear
from mcsatres.resstar import (
    Input, Resolution, ResStarProof, TheoryDerivation, check, proof_length, theory_derivations,
)
from mcsatres.theory import LRATheory, Mode
from mcsatres.translate import (
    TranslationError, mcsat_to_res, proof_account, res_bound, res_to_mcsat, simulate_resolution,
    simulate_strong_derivation,
)

a, b, L = boolean("a"), boolean("b"), boolean("L")
x_lt_0 = linear({"x": 1}, "<", 0)
x_gt_1 = linear({"x": 1}, ">", 1)
cl = lambda *lits: canonicalize(lits)


def state_with(*clauses, extra=()):
    return initial_state(ClauseSet(clauses), extra)


def test_resolution_example_seven_steps():
    c1, c2 = cl(a, L), cl(b, L.neg())
    s, steps = simulate_resolution(Mcsat(), state_with(c1, c2), c1, c2, L)
    assert [t.rule for t in steps] == [DECIDE, DECIDE, PROPAGATE, CONFLICT, RESOLVE, LEARN, RESTART]
    assert cl(a, b) in s.clauses and len(s.trail) == 0


def test_resolution_to_empty_clause_five_steps():
    s, steps = simulate_resolution(Mcsat(), state_with(cl(L), cl(L.neg())), cl(L), cl(L.neg()), L)
    assert len(steps) == 5
    assert Clause() in s.clauses


def test_trivial_resolutions_emit_nothing():
    c1, c2 = cl(a, L), cl(a.neg(), L.neg())
    s0 = state_with(c1, c2)
    s, steps = simulate_resolution(Mcsat(), s0, c1, c2, L)
    assert steps == [] and s is s0
    s0 = state_with(cl(a, L), cl(a, L.neg()), cl(a))
    assert simulate_resolution(Mcsat(), s0, cl(a, L), cl(a, L.neg()), L)[1] == []


def test_resolution_preconditions():
    engine = Mcsat()
    with pytest.raises(TranslationError):
        simulate_resolution(engine, state_with(cl(a, L)), cl(a, L), cl(b, L.neg()), L)
    with pytest.raises(TranslationError):
        simulate_resolution(engine, state_with(cl(a, L), cl(b, L)), cl(a, L), cl(b, L), L)
    s = engine.rule_decide(state_with(cl(a, L), cl(b, L.neg())), a)
    with pytest.raises(TranslationError):
        simulate_resolution(engine, s, cl(a, L), cl(b, L.neg()), L)


def test_strong_derivation_example():
    lemma = cl(x_lt_0.neg(), x_gt_1.neg())
    with pytest.raises(TranslationError, match="basis"):
        simulate_strong_derivation(Mcsat(), state_with(), lemma)
    s, steps = simulate_strong_derivation(Mcsat(), state_with(extra=lemma.literals), lemma)
    assert [t.rule for t in steps] == [DECIDE, DECIDE, T_CONFLICT, LEARN, RESTART]
    assert lemma in s.clauses
    assert simulate_strong_derivation(Mcsat(), s, lemma)[1] == []


def test_strong_derivation_preconditions():
    with pytest.raises(TranslationError):
        simulate_strong_derivation(Mcsat(), state_with(), cl(x_lt_0))
    with pytest.raises(TranslationError):
        simulate_strong_derivation(Mcsat(LRATheory(Mode.UNIVARIATE)), state_with(extra=[x_lt_0, x_gt_1]),
                                   cl(x_lt_0.neg(), x_gt_1.neg()))


@pytest.mark.parametrize("nc", range(7))
@pytest.mark.parametrize("nd", range(7))
def test_resolution_step_count_is_exact(nc, nd):
    side_c = [boolean(f"c{i}") for i in range(nc)]
    side_d = [boolean(f"d{i}") for i in range(nd)]
    c1, c2 = cl(L, *side_c), cl(L.neg(), *side_d)
    _, steps = simulate_resolution(Mcsat(), state_with(c1, c2), c1, c2, L)
    assert len(steps) == nc + nd + 5
    assert not any(t.is_theory for t in steps)


@pytest.mark.parametrize("size", range(2, 7))
def test_strong_derivation_step_count_is_exact(size):
    lemma = generators.cycle_lemma(size)
    s0 = initial_state(ClauseSet(), lemma.literals)
    _, steps = simulate_strong_derivation(Mcsat(), s0, lemma)
    assert len(steps) == size + 3
    assert sum(t.is_theory for t in steps) == 1


def test_res_to_mcsat_examples():
    proof = ResStarProof([Input(cl(a)), Input(cl(a.neg())), Resolution(0, 1, a, Clause())], 2)
    trace, acc = res_to_mcsat(proof)
    assert [t.rule for t in trace.steps][-2:] == [CONFLICT, UNSAT]
    assert len(trace) == 5 + 2
    assert acc.total <= res_bound(proof)

    lemma = cl(x_lt_0.neg(), x_gt_1.neg())
    trace, acc = res_to_mcsat(ResStarProof([TheoryDerivation(lemma)]))
    assert (acc.total, acc.theory) == (5, 1)

    trace, acc = res_to_mcsat(ResStarProof())
    assert trace.steps == [] and acc.total == 0


def test_res_to_mcsat_rejects_unchecked_proofs():
    with pytest.raises(TranslationError):
        res_to_mcsat(ResStarProof([TheoryDerivation(cl(x_lt_0))]))


def test_mcsat_to_res_examples():
    proof, acc = mcsat_to_res(solve([cl(a), cl(a.neg())]).trace)
    assert check(proof, [cl(a), cl(a.neg())]).refutation
    proof, acc = mcsat_to_res(solve([cl(x_lt_0), cl(x_gt_1)]).trace)
    lemmas = [s.clause for s in proof.steps if isinstance(s, TheoryDerivation)]
    assert lemmas == [cl(x_lt_0.neg(), x_gt_1.neg())]
    proof, acc = mcsat_to_res(solve([cl(a, b)]).trace)
    assert proof_length(proof) == 0 and proof.conclusion is None


def test_mcsat_to_res_reports_bad_step():
    trace = solve(generators.chain(2)).trace
    bad = Trace(trace.inputs, trace.mode, (), list(trace.steps))
    bad.steps[2] = TraceStep(RESOLVE, clause=cl(b))
    with pytest.raises(ReplayError) as err:
        mcsat_to_res(bad)
    assert err.value.index == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_keeps_every_derived_clause(seed):
    proof, inputs = generators.random_refutation(seed)
    trace, acc = res_to_mcsat(proof, inputs)
    assert acc.total <= res_bound(proof)
    assert acc.theory == theory_derivations(proof)
    final = Mcsat().replay(trace)
    back, back_acc = mcsat_to_res(trace)
    assert check(back, inputs).refutation
    derived = {s.clause for s in back.steps}
    learned = set(Mcsat().replay(trace, upto=len(trace) - 2).clauses)
    for step in proof.steps:
        if not isinstance(step, Input) and not step.clause.tautological:
            assert step.clause in learned
            assert any(oracles.entails([c], step.clause) and oracles.entails([step.clause], c)
                       for c in derived)
    assert back_acc.theory == acc.theory == proof_account(proof).theory
    assert final == Unsat()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(list(Mode)))
def test_solver_traces_become_refutations(seed, mode):
    clauses = generators.random_mixed(seed)
    result = solve(clauses, mode, max_steps=20000)
    proof, acc = mcsat_to_res(result.trace, Mcsat(LRATheory(mode)))
    assert check(proof, clauses)
    assert proof.is_refutation == (result.status == "unsat")
    assert proof_length(proof) <= len(result.trace)
    assert acc.theory == result.trace.account.theory
