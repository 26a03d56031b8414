"""Exact Fourier-Motzkin elimination over the rationals.

A :class:`Row` is ``sum(c * x) < bound`` (strict) or ``<= bound``. Rows are
kept normalized (leading coefficient of magnitude 1) so duplicate rows
produced during elimination collapse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[str, Fraction], ...]
    bound: Fraction
    strict: bool

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def coeff(self, var: str) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return ZERO

    def is_constant(self) -> bool:
        return not self.coeffs

    def holds_constant(self) -> bool:
        return ZERO < self.bound if self.strict else ZERO <= self.bound

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        lhs = sum((c * point[v] for v, c in self.coeffs), ZERO)
        return lhs < self.bound if self.strict else lhs <= self.bound


def make_row(coeffs: Iterable[tuple[str, Fraction]], bound: Fraction, strict: bool) -> Row:
    merged: dict[str, Fraction] = {}
    for v, c in coeffs:
        merged[v] = merged.get(v, ZERO) + c
    terms = sorted((v, c) for v, c in merged.items() if c != 0)
    if terms:
        scale = abs(terms[0][1])
        if scale != 1:
            terms = [(v, c / scale) for v, c in terms]
            bound = bound / scale
    return Row(tuple(terms), Fraction(bound), strict)


def negate_terms(coeffs: Iterable[tuple[str, Fraction]]) -> list[tuple[str, Fraction]]:
    return [(v, -c) for v, c in coeffs]


def substitute(row: Row, assignment: Mapping[str, Fraction]) -> Row:
    bound = row.bound
    rest = []
    for v, c in row.coeffs:
        if v in assignment:
            bound -= c * assignment[v]
        else:
            rest.append((v, c))
    if len(rest) == len(row.coeffs):
        return row
    return make_row(rest, bound, row.strict)


def _choose_var(rows: Sequence[Row], allowed: set[str] | None = None) -> str:
    # fewest generated rows first, ties by name
    pos: dict[str, int] = {}
    neg: dict[str, int] = {}
    for r in rows:
        for v, c in r.coeffs:
            if allowed is not None and v not in allowed:
                continue
            if c > 0:
                pos[v] = pos.get(v, 0) + 1
            else:
                neg[v] = neg.get(v, 0) + 1
    names = sorted(set(pos) | set(neg))
    return min(names, key=lambda v: (pos.get(v, 0) * neg.get(v, 0) - pos.get(v, 0) - neg.get(v, 0), v))


def eliminate(rows: Iterable[Row], var: str) -> list[Row]:
    """One elimination step: the exact projection of ``rows`` along ``var``."""
    upper, lower, keep = [], [], []
    for r in rows:
        c = r.coeff(var)
        if c > 0:
            upper.append(r)
        elif c < 0:
            lower.append(r)
        else:
            keep.append(r)
    out = dict.fromkeys(keep)
    for u, l in product(upper, lower):
        cu, cl = u.coeff(var), -l.coeff(var)
        terms = [(v, c / cu) for v, c in u.coeffs if v != var]
        terms += [(v, c / cl) for v, c in l.coeffs if v != var]
        out[make_row(terms, u.bound / cu + l.bound / cl, u.strict or l.strict)] = None
    return list(out)


def project(rows: Iterable[Row], variables: Iterable[str]) -> list[Row]:
    """Eliminate every variable in ``variables``; constant rows are kept."""
    current = list(dict.fromkeys(rows))
    targets = set(variables)
    while True:
        present = [r for r in current if any(v in targets for v in r.variables)]
        if not present:
            return current
        current = eliminate(current, _choose_var(present, targets))


@lru_cache(maxsize=65536)
def _feasible(rows: frozenset[Row]) -> bool:
    current = list(rows)
    while True:
        for r in current:
            if r.is_constant() and not r.holds_constant():
                return False
        current = [r for r in current if not r.is_constant()]
        if not current:
            return True
        current = eliminate(current, _choose_var(current))


def feasible(rows: Iterable[Row]) -> bool:
    return _feasible(frozenset(rows))


@dataclass(frozen=True)
class Diseq:
    """``sum(c * x) != bound``."""

    coeffs: tuple[tuple[str, Fraction], ...]
    bound: Fraction

    def below(self) -> Row:
        return make_row(self.coeffs, self.bound, True)

    def above(self) -> Row:
        return make_row(negate_terms(self.coeffs), -self.bound, True)

    def substitute(self, assignment: Mapping[str, Fraction]) -> Diseq:
        r = substitute(Row(self.coeffs, self.bound, False), assignment)
        return Diseq(r.coeffs, r.bound)


def feasible_with_diseqs(rows: Iterable[Row], diseqs: Iterable[Diseq]) -> bool:
    # A nonempty rational polyhedron avoids finitely many hyperplanes unless it
    # lies inside one of them.
    rows = frozenset(rows)
    if not _feasible(rows):
        return False
    for d in diseqs:
        if not _feasible(rows | {d.below()}) and not _feasible(rows | {d.above()}):
            return False
    return True


def diseq_branches(rows: Sequence[Row], diseqs: Sequence[Diseq]) -> list[list[Row]]:
    """Convex branches whose union is ``rows`` minus the hyperplanes of ``diseqs``."""
    if not diseqs:
        return [list(rows)]
    return [list(rows) + list(choice) for choice in product(*[(d.below(), d.above()) for d in diseqs])]
