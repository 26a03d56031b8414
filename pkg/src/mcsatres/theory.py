"""Theory plug-ins: linear rational arithmetic (via Fourier-Motzkin) and the trivial Boolean theory.

Truth values are three-valued throughout: ``True``, ``False`` or ``None``
for undefined.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Iterable, Mapping

from . import fm
from .proofcore import BoolAtom, Clause, LinearAtom, Literal, canonicalize, linear

Assignment = Mapping[str, Fraction]


class Mode(enum.Enum):
    COMPLETE = "complete"
    UNIVARIATE = "univariate"


class NotInfeasibleError(ValueError):
    """Explain was called on a feasible trail."""


@dataclass(frozen=True)
class Explanation:
    clause: Clause
    mode: str = "conflict"  # or "propagation"


def eval_atom(atom: BoolAtom | LinearAtom, assignment: Assignment) -> bool | None:
    if isinstance(atom, BoolAtom):
        return None
    lhs = Fraction(0)
    for var, c in atom.coeffs:
        if var not in assignment:
            return None
        lhs += c * assignment[var]
    if atom.rel == "<":
        return lhs < atom.bound
    if atom.rel == "<=":
        return lhs <= atom.bound
    return lhs == atom.bound


def eval_literal(lit: Literal, assignment: Assignment) -> bool | None:
    v = eval_atom(lit.atom, assignment)
    if v is None:
        return None
    return v if lit.positive else not v


def is_consistent(asserted: Iterable[Literal], assignment: Assignment) -> bool:
    return all(eval_literal(l, assignment) is not False for l in asserted)


def literal_parts(lit: Literal) -> tuple[list[fm.Row], list[fm.Diseq]]:
    """Rows and disequalities equivalent to a linear literal."""
    atom = lit.atom
    assert isinstance(atom, LinearAtom)
    e, b = atom.coeffs, atom.bound
    neg_e = fm.negate_terms(e)
    if lit.positive:
        if atom.rel == "<":
            return [fm.make_row(e, b, True)], []
        if atom.rel == "<=":
            return [fm.make_row(e, b, False)], []
        return [fm.make_row(e, b, False), fm.make_row(neg_e, -b, False)], []
    if atom.rel == "<":
        return [fm.make_row(neg_e, -b, False)], []
    if atom.rel == "<=":
        return [fm.make_row(neg_e, -b, True)], []
    return [], [fm.Diseq(e, b)]


def _substituted(lits: Iterable[Literal], assignment: Assignment) -> tuple[list[fm.Row], list[fm.Diseq]]:
    rows, diseqs = [], []
    for l in lits:
        r, d = literal_parts(l)
        rows.extend(fm.substitute(x, assignment) for x in r)
        diseqs.extend(x.substitute(assignment) for x in d)
    return rows, diseqs


def _unassigned(lit: Literal, assignment: Assignment) -> int:
    return sum(1 for v in lit.atom.variables if v not in assignment)


def relevant(asserted: Iterable[Literal], assignment: Assignment, mode: Mode) -> list[Literal]:
    """Linear literals the feasibility check may look at, in canonical order."""
    lits = sorted({l for l in asserted if l.is_linear}, key=lambda l: l.sort_key)
    if mode is Mode.UNIVARIATE:
        lits = [l for l in lits if _unassigned(l, assignment) <= 1]
    return lits


def _infeasible_core(lits: Iterable[Literal], assignment: Assignment) -> bool:
    rows, diseqs = _substituted(lits, assignment)
    return not fm.feasible_with_diseqs(rows, diseqs)


def infeasible(asserted: Iterable[Literal], assignment: Assignment, mode: Mode = Mode.COMPLETE) -> bool:
    """Whether the asserted linear literals have no solution extending ``assignment``.

    In univariate mode only literals with at most one unassigned variable are
    considered, so multivariate conflicts go undetected until enough
    variables are assigned.
    """
    return _infeasible_core(relevant(asserted, assignment, mode), assignment)


def minimal_core(asserted: Iterable[Literal], assignment: Assignment, mode: Mode) -> list[Literal]:
    core = relevant(asserted, assignment, mode)
    if not _infeasible_core(core, assignment):
        raise NotInfeasibleError("asserted literals are feasible")
    for lit in list(core):
        trial = [l for l in core if l != lit]
        if _infeasible_core(trial, assignment):
            core = trial
    return core


def _row_literal(row: fm.Row) -> Literal:
    return linear(row.coeffs, "<" if row.strict else "<=", row.bound)


def _projection_literals(core: list[Literal], assignment: Assignment) -> list[Literal]:
    """Literals over assigned variables implied by ``core`` and false under ``assignment``.

    One literal per convex branch of the core; a branch that is infeasible on
    its own contributes nothing.
    """
    rows, diseqs = [], []
    for l in core:
        r, d = literal_parts(l)
        rows += r
        diseqs += d
    free = {v for l in core for v in l.atom.variables if v not in assignment}
    out = []
    for branch in fm.diseq_branches(rows, diseqs):
        projected = fm.project(branch, free)
        if any(r.is_constant() and not r.holds_constant() for r in projected):
            continue
        violated = sorted(
            (_row_literal(r) for r in projected if not r.is_constant() and not r.holds(assignment)),
            key=lambda l: l.sort_key,
        )
        if not violated:
            raise RuntimeError("projection does not separate the assignment")
        out.append(violated[0])
    return out


def explain(asserted: Collection[Literal], assignment: Assignment, mode: Mode = Mode.COMPLETE,
            requested: Clause | None = None, kind: str = "conflict") -> Explanation:
    """A valid lemma whose literals are all false under the trail.

    The lemma negates a greedily minimized infeasible core of ``asserted``;
    when variables are assigned it also carries literals over the assigned
    variables obtained by projecting the core onto them. A ``requested``
    lemma is returned as-is after checking that it qualifies.
    """
    if not infeasible(asserted, assignment, mode):
        raise NotInfeasibleError("asserted literals are feasible")
    if requested is not None:
        present = set(asserted)
        for l in requested:
            if l.neg() not in present and eval_literal(l, assignment) is not False:
                raise ValueError(f"requested lemma literal {l} is not false under the trail")
        if not is_valid(requested):
            raise ValueError(f"requested lemma {requested} is not valid")
        return Explanation(requested, kind)
    core = minimal_core(asserted, assignment, mode)
    lits = [l.neg() for l in core] + _projection_literals(core, assignment)
    return Explanation(canonicalize(lits), kind)


def is_valid(clause: Iterable[Literal]) -> bool:
    """T |= clause: a propositional tautology, or the negated linear part is infeasible."""
    lits = list(clause)
    present = set(lits)
    if any(l.neg() in present for l in lits):
        return True
    negated = [l.neg() for l in lits if l.is_linear]
    if not negated:
        return False
    return _infeasible_core(negated, {})


def _simplest_in(lo: Fraction | None, lo_strict: bool, hi: Fraction | None, hi_strict: bool,
                 excluded: set[Fraction]) -> Fraction | None:
    def ok(q: Fraction) -> bool:
        if lo is not None and (q < lo or (lo_strict and q == lo)):
            return False
        if hi is not None and (q > hi or (hi_strict and q == hi)):
            return False
        return q not in excluded

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (lo_strict or hi_strict)):
            return None
        if lo == hi:
            return lo if ok(lo) else None
    budget = len(excluded) + 3
    den = 1
    while True:
        pmin = None if lo is None else math.floor(lo * den)
        pmax = None if hi is None else math.ceil(hi * den)
        p = 0 if pmin is None else max(0, pmin)
        for _ in range(budget):
            if pmax is not None and p > pmax:
                break
            if ok(Fraction(p, den)):
                return Fraction(p, den)
            p += 1
        p = -1 if pmax is None else min(-1, pmax)
        for _ in range(budget):
            if pmin is not None and p < pmin:
                break
            if ok(Fraction(p, den)):
                return Fraction(p, den)
            p -= 1
        den += 1


def pick_value(var: str, asserted: Iterable[Literal], assignment: Assignment) -> Fraction | None:
    """Value for ``var`` satisfying the asserted constraints that become univariate in it.

    Preference: 0, then the smallest denominator; within a denominator the
    non-negative candidates nearest to zero come before the negative ones. Returns ``None`` when the univariate bounds are contradictory.
    """
    lo = hi = None
    lo_strict = hi_strict = False
    excluded: set[Fraction] = set()
    for lit in asserted:
        if not lit.is_linear or var not in lit.atom.variables:
            continue
        if any(v != var and v not in assignment for v in lit.atom.variables):
            continue
        rows, diseqs = _substituted([lit], assignment)
        for r in rows:
            c = r.coeff(var)
            b = r.bound / c
            if c > 0:
                if hi is None or b < hi or (b == hi and r.strict):
                    hi, hi_strict = b, r.strict
            else:
                if lo is None or b > lo or (b == lo and r.strict):
                    lo, lo_strict = b, r.strict
        for d in diseqs:
            excluded.add(d.bound / d.coeffs[0][1])
    return _simplest_in(lo, lo_strict, hi, hi_strict, excluded)


class LRATheory:
    """Linear rational arithmetic with a chosen feasibility mode."""

    name = "lra"

    def __init__(self, mode: Mode = Mode.COMPLETE):
        self.mode = Mode(mode)

    def eval_literal(self, lit: Literal, assignment: Assignment) -> bool | None:
        return eval_literal(lit, assignment)

    def is_consistent(self, asserted, assignment) -> bool:
        return is_consistent(asserted, assignment)

    def infeasible(self, asserted, assignment) -> bool:
        return infeasible(asserted, assignment, self.mode)

    def explain(self, asserted, assignment, requested=None, kind="conflict") -> Explanation:
        return explain(asserted, assignment, self.mode, requested, kind)

    def is_valid(self, clause) -> bool:
        return is_valid(clause)

    def pick_value(self, var, asserted, assignment):
        return pick_value(var, asserted, assignment)


class BooleanTheory:
    """The empty theory: no theory variables, nothing is ever infeasible."""

    name = "bool"
    mode = Mode.COMPLETE

    def eval_literal(self, lit: Literal, assignment: Assignment) -> bool | None:
        if lit.is_linear:
            raise ValueError(f"Boolean theory cannot interpret {lit}")
        return None

    def is_consistent(self, asserted, assignment) -> bool:
        return True

    def infeasible(self, asserted, assignment) -> bool:
        return False

    def explain(self, asserted, assignment, requested=None, kind="conflict") -> Explanation:
        raise NotInfeasibleError("the Boolean theory has no theory conflicts")

    def is_valid(self, clause) -> bool:
        lits = set(clause)
        return any(l.neg() in lits for l in lits)

    def pick_value(self, var, asserted, assignment):
        raise ValueError("the Boolean theory has no theory variables")


def make_theory(mode: Mode | str = Mode.COMPLETE) -> LRATheory:
    return LRATheory(Mode(mode))


__all__ = [
    "Mode", "Explanation", "NotInfeasibleError", "eval_atom", "eval_literal", "is_consistent",
    "infeasible", "explain", "is_valid", "pick_value", "minimal_core", "LRATheory", "BooleanTheory",
    "literal_parts", "make_theory",
]
