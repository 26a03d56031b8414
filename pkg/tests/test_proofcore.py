from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mcsatres.proofcore import (
    INPUT, LEARNED, Clause, ClauseSet, PivotError, basis_of, boolean, canonicalize, linear, resolve,
)

a, b, c = boolean("a"), boolean("b"), boolean("c")


def test_linear_normalizes_leading_coefficient():
    assert linear({"x": 2}, "<", 4) == linear({"x": 1}, "<", 2)
    assert str(linear({"x": 2, "y": -4}, "<=", 6)) == "x - 2*y <= 3"


def test_negative_leading_coefficient_flips_relation():
    lit = linear({"x": -1}, "<", 1)  # -x < 1  is  x > -1
    assert not lit.positive
    assert lit.atom.rel == "<="
    assert str(lit) == "x > -1"
    assert linear({"x": -1}, ">=", 0) == linear({"x": 1}, "<=", 0)


def test_greater_and_disequality_are_negated_atoms():
    assert linear({"x": 1}, ">", 0) == linear({"x": 1}, "<=", 0).neg()
    assert linear({"x": 1}, ">=", 0) == linear({"x": 1}, "<", 0).neg()
    assert linear({"x": 1}, "!=", 0) == linear({"x": 1}, "=", 0).neg()
    assert str(linear({"x": 1}, "!=", Fraction(1, 2))) == "x != 1/2"


def test_zero_coefficients_rejected():
    with pytest.raises(ValueError):
        linear({"x": 1}, "<", 0) and linear([("x", 1), ("x", -1)], "<", 0)
    with pytest.raises(ValueError):
        linear({}, "<", 0)


def test_variables_sorted_by_name():
    assert linear({"y": 1, "x": 3}, "<", 3) == linear({"x": 1, "y": Fraction(1, 3)}, "<", 1)


def test_literal_strings():
    assert str(a) == "a" and str(a.neg()) == "~a"
    assert -a == a.neg()


def test_canonicalize_sorts_dedupes_and_flags_tautology():
    cl = canonicalize([b, a, b])
    assert cl.literals == (a, b)
    assert not cl.tautological
    assert canonicalize([a, a.neg()]).tautological
    assert str(Clause()) == "false"
    assert Clause().is_empty


def test_negative_literal_sorts_before_positive():
    assert canonicalize([a, a.neg()]).literals == (a.neg(), a)


def test_resolve():
    assert resolve(canonicalize([a, b]), canonicalize([a.neg(), c]), a) == canonicalize([b, c])
    assert resolve(canonicalize([a]), canonicalize([a.neg()]), a) == Clause()
    with pytest.raises(PivotError):
        resolve(canonicalize([a]), canonicalize([b]), a)
    with pytest.raises(PivotError):
        resolve(canonicalize([b]), canonicalize([a.neg()]), a)


def test_clause_set_origins_and_order():
    cs = ClauseSet([canonicalize([b]), canonicalize([a]), canonicalize([b])])
    assert [str(x) for x in cs] == ["b", "a"]
    assert cs.origin(canonicalize([a])) == INPUT
    learned = cs.add(canonicalize([a, b]))
    assert learned.is_learned(canonicalize([a, b]))
    assert learned.origin(canonicalize([a, b])) == LEARNED
    assert len(cs) == 2  # immutable
    assert learned.remove(canonicalize([a, b])) == cs
    with pytest.raises(ValueError):
        learned.remove(canonicalize([a]))
    assert cs.add(canonicalize([a])) is cs


def test_clause_set_variables_and_atoms():
    x = linear({"y": 1, "x": 1}, "<", 0)
    cs = ClauseSet([canonicalize([a, x])])
    assert cs.theory_variables() == ["x", "y"]
    assert cs.boolean_atoms() == {a.atom}


def test_basis_is_negation_closed():
    x = linear({"x": 1}, "<", 0)
    basis = basis_of([canonicalize([a, x])], extra=[b])
    assert basis == {a, a.neg(), x, x.neg(), b, b.neg()}


coeff = st.integers(-3, 3).filter(bool)
rel = st.sampled_from(["<", "<=", "=", ">", ">=", "!="])
_FLIP = {"<": ">", "<=": ">=", "=": "=", ">": "<", ">=": "<=", "!=": "!="}


@given(st.dictionaries(st.sampled_from("xyz"), coeff, min_size=1), rel, st.integers(-5, 5),
       st.integers(1, 4))
def test_scaling_is_invisible(coeffs, r, bound, k):
    lit = linear(coeffs, r, bound)
    assert linear({v: k * q for v, q in coeffs.items()}, r, k * bound) == lit
    assert linear({v: -k * q for v, q in coeffs.items()}, _FLIP[r], -k * bound) == lit
    assert lit.atom.coeffs[0][1] == 1
    assert lit.atom.rel in ("<", "<=", "=")


@given(st.lists(st.sampled_from([a, b, c, a.neg(), b.neg(), c.neg()]), max_size=6))
def test_canonicalize_is_idempotent(lits):
    cl = canonicalize(lits)
    assert canonicalize(cl.literals) == cl
    assert set(cl) == set(lits)
