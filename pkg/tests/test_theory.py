import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from mcsatres import fm
from mcsatres.generators import lra_diamond, random_linear_literal
from mcsatres.proofcore import boolean, canonicalize, linear
from mcsatres.theory import (
    BooleanTheory, LRATheory, Mode, NotInfeasibleError, eval_literal, explain, infeasible, is_valid,
    minimal_core, pick_value,
)

x_lt_0 = linear({"x": 1}, "<", 0)
x_gt_1 = linear({"x": 1}, ">", 1)


def lit_lists(max_size=6, n_vars=3):
    return st.builds(
        lambda seed, k: [random_linear_literal(random.Random(seed * 7 + i), ["x", "y", "z"][:n_vars])
                         for i in range(k)],
        st.integers(0, 10**6), st.integers(0, max_size),
    )


def test_fm_rows_and_elimination():
    rows = [fm.make_row([("x", 1)], 0, True), fm.make_row([("x", -1)], -1, True)]
    assert not fm.feasible(rows)
    assert fm.feasible(rows[:1])
    (row,) = fm.eliminate([fm.make_row([("x", 1), ("y", -1)], 0, True), fm.make_row([("y", 1)], 3, False)], "y")
    assert row == fm.make_row([("x", 1)], 3, True)
    assert fm.make_row([("x", 2)], 4, False) == fm.make_row([("x", 1)], 2, False)


def test_disequality_branches():
    rows = [fm.make_row([("x", 1)], 0, False), fm.make_row([("x", -1)], 0, False)]  # x = 0
    assert fm.feasible(rows)
    assert not fm.feasible_with_diseqs(rows, [fm.Diseq((("x", Fraction(1)),), Fraction(0))])
    assert fm.feasible_with_diseqs(rows, [fm.Diseq((("x", Fraction(1)),), Fraction(1))])


@settings(max_examples=300, deadline=None)
@given(lit_lists())
def test_feasibility_matches_oracle(lits):
    assert infeasible(lits, {}) == (not oracles.conjunction_feasible(lits))


@settings(max_examples=60, deadline=None)
@given(lit_lists(max_size=4, n_vars=2))
def test_oracles_agree_without_disequalities(lits):
    lits = [l for l in lits if not (l.atom.rel == "=" and not l.positive)]
    assert oracles.conjunction_feasible(lits) == oracles.lp_feasible(lits)


def test_univariate_mode_ignores_multivariate_constraints():
    cycle = [c.literals[0] for c in lra_diamond(3)]
    assert infeasible(cycle, {}, Mode.COMPLETE)
    assert not infeasible(cycle, {}, Mode.UNIVARIATE)
    # once all but one variable are assigned the cycle becomes univariate
    assert infeasible(cycle, {"x1": Fraction(0), "x2": Fraction(1)}, Mode.UNIVARIATE)
    assert infeasible([x_lt_0, x_gt_1], {}, Mode.UNIVARIATE)


def test_explain_conflict_without_assignment():
    e = explain([x_lt_0, x_gt_1, linear({"y": 1}, "<", 5)], {})
    assert e.clause == canonicalize([x_lt_0.neg(), x_gt_1.neg()])


def test_explain_rejects_feasible_trail():
    with pytest.raises(NotInfeasibleError):
        explain([x_lt_0], {})


def test_explain_with_assignment_projects():
    # x < y and y < 0 with x := 1: the lemma must be false under x = 1
    asserted = [linear({"x": 1, "y": -1}, "<", 0), linear({"y": 1}, "<", 0)]
    e = explain(asserted, {"x": Fraction(1)}).clause
    assert oracles.clause_valid(e)
    assert all(eval_literal(l, {"x": Fraction(1)}) is False or l.neg() in asserted for l in e)
    assert linear({"x": 1}, "<", 0) in e


def test_requested_lemma_is_validated():
    lemma = canonicalize([x_lt_0.neg(), x_gt_1.neg()])
    assert explain([x_lt_0, x_gt_1], {}, requested=lemma).clause == lemma
    with pytest.raises(ValueError):
        explain([x_lt_0, x_gt_1], {}, requested=canonicalize([x_lt_0.neg()]))


@settings(max_examples=150, deadline=None)
@given(lit_lists(), st.dictionaries(st.sampled_from("xyz"), st.integers(-3, 3).map(Fraction), max_size=2))
def test_explanations_are_valid_and_false(lits, assignment):
    lits = [l for l in lits if eval_literal(l, assignment) is not False]
    if not infeasible(lits, assignment):
        return
    e = explain(lits, assignment).clause
    assert oracles.clause_valid(e)
    assert is_valid(e)
    for l in e:
        assert l.neg() in lits or eval_literal(l, assignment) is False
    core = minimal_core(lits, assignment, Mode.COMPLETE)
    for dropped in core:  # greedy minimality: every core literal is needed
        assert not infeasible([l for l in core if l != dropped], assignment)


@settings(max_examples=200, deadline=None)
@given(lit_lists(max_size=4))
def test_validity_matches_oracle(lits):
    cl = canonicalize(lits)
    assert is_valid(cl) == oracles.clause_valid(cl)


def test_validity_examples():
    assert is_valid(canonicalize([x_lt_0.neg(), x_gt_1.neg()]))
    assert not is_valid(canonicalize([x_lt_0]))
    assert is_valid(canonicalize([boolean("a"), boolean("a", False)]))
    assert not is_valid(canonicalize([boolean("a"), x_lt_0, x_lt_0.neg().neg()]))


@pytest.mark.parametrize("lits, expected", [
    ([], 0),
    ([linear({"x": 1}, ">", 0)], 1),
    ([linear({"x": 1}, ">", 0), linear({"x": 1}, "<", 1)], Fraction(1, 2)),
    ([linear({"x": 1}, "<", -2)], -3),
    ([linear({"x": 1}, "!=", 0)], 1),
    ([linear({"x": 1}, "!=", 0), linear({"x": 1}, "!=", 1)], 2),
    ([linear({"x": 1}, "<", 0), linear({"x": 1}, "!=", -1)], -2),
    ([linear({"x": 1}, "=", Fraction(7, 3))], Fraction(7, 3)),
    ([x_lt_0, x_gt_1], None),
])
def test_pick_value(lits, expected):
    assert pick_value("x", lits, {}) == expected


def test_pick_value_uses_assigned_variables():
    lits = [linear({"x": 1, "y": -1}, ">", 0)]  # x > y
    assert pick_value("x", lits, {"y": Fraction(5)}) == 6
    assert pick_value("x", lits, {}) == 0  # not univariate yet


@settings(max_examples=200, deadline=None)
@given(lit_lists(max_size=4, n_vars=1))
def test_pick_value_satisfies_univariate_constraints(lits):
    v = pick_value("x", lits, {})
    if v is None:
        assert infeasible(lits, {})
    else:
        assert all(eval_literal(l, {"x": v}) for l in lits)


def test_theory_objects():
    t = LRATheory("univariate")
    assert t.mode is Mode.UNIVARIATE
    assert t.infeasible([x_lt_0, x_gt_1], {})
    b = BooleanTheory()
    assert not b.infeasible([x_lt_0, x_gt_1], {})
    assert b.is_valid(canonicalize([boolean("a"), boolean("a", False)]))
    with pytest.raises(NotInfeasibleError):
        b.explain([], {})
    with pytest.raises(ValueError):
        b.eval_literal(x_lt_0, {})
