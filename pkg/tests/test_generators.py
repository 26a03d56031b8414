import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mcsatres import generators
from mcsatres.engine import solve
from mcsatres.proofcore import boolean, canonicalize
from mcsatres.resstar import Input, TheoryDerivation, check
from mcsatres.theory import Mode, infeasible


def test_chain_two():
    a1, a2 = boolean("a1"), boolean("a2")
    assert list(generators.chain(2)) == [canonicalize([a1]), canonicalize([a1.neg(), a2]),
                                         canonicalize([a2.neg()])]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pigeonhole_shape_and_verdict(n):
    php = generators.pigeonhole(n)
    assert len(php) == (n + 1) + n * (n + 1) * n // 2
    assert len(php.boolean_atoms()) == (n + 1) * n
    assert not oracles.bool_satisfiable(list(php))


def test_lra_diamond():
    assert [str(c) for c in generators.lra_diamond(1)] == ["x1 < 0", "x1 > 1"]
    for n in (2, 3, 4):
        lits = [c.literals[0] for c in generators.lra_diamond(n)]
        assert all(len(l.atom.variables) == 2 for l in lits)
        assert not oracles.conjunction_feasible(lits)
        assert not infeasible(lits, {}, Mode.UNIVARIATE)


@pytest.mark.parametrize("family", sorted(generators.FAMILIES))
def test_families_reject_bad_parameters(family):
    with pytest.raises(ValueError):
        generators.FAMILIES[family](0)


def test_random_generators_are_deterministic():
    assert generators.random_cnf(5) == generators.random_cnf(5)
    assert generators.random_lra(5) == generators.random_lra(5)
    p1, i1 = generators.random_refutation(5)
    p2, i2 = generators.random_refutation(5)
    assert p1 == p2 and i1 == i2


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_random_refutations_respect_limits(seed):
    proof, inputs = generators.random_refutation(seed)
    assert len(proof) <= 15
    atoms = {l.atom for l in proof.literals()}
    assert len({a for s in proof.steps for l in s.clause for a in l.atom.variables}) <= 3
    assert check(proof, inputs).refutation
    lemmas = [s.clause for s in proof.steps if isinstance(s, TheoryDerivation)]
    assert len(lemmas) == len(set(lemmas))
    assert len(inputs) == sum(isinstance(s, Input) for s in proof.steps)
    assert atoms


def test_random_refutations_use_theory_lemmas():
    total = sum(sum(isinstance(s, TheoryDerivation) for s in generators.random_refutation(s)[0].steps)
                for s in range(100))
    assert total >= 20


@pytest.mark.parametrize("size", range(2, 7))
def test_cycle_lemmas_are_irredundant(size):
    lemma = generators.cycle_lemma(size)
    assert len(lemma) == size and oracles.clause_valid(lemma)
    for lit in lemma:
        assert not oracles.clause_valid(canonicalize(lemma.without(lit)))


def test_random_valid_lemma():
    for size in range(2, 5):
        lemma = generators.random_valid_lemma(size, size, irredundant=True)
        assert len(lemma) == size and oracles.clause_valid(lemma)


@pytest.mark.parametrize("n", range(1, 5))
def test_generated_unsat_families_solve(n):
    for family in ("chain", "lra-diamond"):
        assert solve(generators.FAMILIES[family](n)).status == "unsat"
