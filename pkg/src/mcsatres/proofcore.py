"""Atoms, literals, clauses and clause sets shared by the engine, checker and translators.

Everything here is immutable and canonical: two objects compare equal exactly
when their stored forms are identical, so set membership and clause lookup can
rely on ``==`` and ``hash``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

INPUT = "input"
LEARNED = "learned"

RELATIONS = ("<", "<=", "=")
_REL_RANK = {rel: i for i, rel in enumerate(RELATIONS)}

# relation written with a negative leading coefficient flips direction
_FLIP = {"<": ">", "<=": ">=", "=": "=", ">": "<", ">=": "<=", "!=": "!="}
# relation -> (stored atom relation, polarity)
_NORMAL = {
    "<": ("<", True),
    "<=": ("<=", True),
    "=": ("=", True),
    ">": ("<=", False),
    ">=": ("<", False),
    "!=": ("=", False),
}
_NEGATED_REL = {"<": ">=", "<=": ">", "=": "!="}


class PivotError(ValueError):
    """Raised when a resolution pivot is missing from one of the clauses."""


@dataclass(frozen=True)
class TheoryVariable:
    id: str
    name: str = ""

    def __str__(self) -> str:
        return self.name or self.id


@dataclass(frozen=True)
class BoolAtom:
    name: str

    @property
    def sort_key(self) -> tuple:
        return (0, self.name)

    @property
    def variables(self) -> tuple[str, ...]:
        return ()

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class LinearAtom:
    """``sum(c * x for x, c in coeffs) <rel> bound`` with the first coefficient equal to 1."""

    coeffs: tuple[tuple[str, Fraction], ...]
    rel: str
    bound: Fraction

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("zero-coefficient atom")
        if self.rel not in _REL_RANK:
            raise ValueError(f"unknown relation {self.rel!r}")

    @property
    def sort_key(self) -> tuple:
        names = tuple(v for v, _ in self.coeffs)
        values = tuple(c for _, c in self.coeffs)
        return (1, names, values, _REL_RANK[self.rel], self.bound)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def __str__(self) -> str:
        return f"{format_expr(self.coeffs)} {self.rel} {format_number(self.bound)}"


Atom = BoolAtom | LinearAtom


@dataclass(frozen=True)
class Literal:
    atom: Atom
    positive: bool = True

    def __neg__(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def neg(self) -> Literal:
        return Literal(self.atom, not self.positive)

    @property
    def sort_key(self) -> tuple:
        return (self.atom.sort_key, self.positive)

    def __lt__(self, other: Literal) -> bool:
        return self.sort_key < other.sort_key

    @property
    def is_linear(self) -> bool:
        return isinstance(self.atom, LinearAtom)

    def __str__(self) -> str:
        atom = self.atom
        if isinstance(atom, BoolAtom):
            return atom.name if self.positive else "~" + atom.name
        rel = atom.rel if self.positive else _NEGATED_REL[atom.rel]
        return f"{format_expr(atom.coeffs)} {rel} {format_number(atom.bound)}"

    def __repr__(self) -> str:
        return f"Literal({str(self)!r})"


def boolean(name: str, positive: bool = True) -> Literal:
    return Literal(BoolAtom(name), positive)


def linear(coeffs: Mapping[str, Fraction | int] | Iterable[tuple[str, Fraction | int]],
           rel: str, bound: Fraction | int | str) -> Literal:
    """Build the canonical literal for ``coeffs . x <rel> bound``.

    ``rel`` may be any of ``<  <=  =  >  >=  !=``; the result is a literal over
    an atom whose relation is one of ``<  <=  =`` and whose first coefficient
    (by variable name) is 1.
    """
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    merged: dict[str, Fraction] = {}
    for var, c in items:
        merged[var] = merged.get(var, Fraction(0)) + Fraction(c)
    terms = sorted((v, c) for v, c in merged.items() if c != 0)
    if not terms:
        raise ValueError("zero-coefficient atom")
    if rel not in _FLIP:
        raise ValueError(f"unknown relation {rel!r}")
    lead = terms[0][1]
    bound = Fraction(bound) / lead
    if lead < 0:
        rel = _FLIP[rel]
    terms = tuple((v, c / lead) for v, c in terms)
    atom_rel, positive = _NORMAL[rel]
    return Literal(LinearAtom(terms, atom_rel, bound), positive)


def format_number(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_expr(coeffs: Iterable[tuple[str, Fraction]]) -> str:
    parts = []
    for i, (var, c) in enumerate(coeffs):
        mag = abs(c)
        term = var if mag == 1 else f"{format_number(mag)}*{var}"
        if i == 0:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals in canonical order. Build with :func:`canonicalize`."""

    literals: tuple[Literal, ...] = ()
    tautological: bool = field(default=False, compare=False)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __contains__(self, lit: object) -> bool:
        return lit in self.literals

    def __bool__(self) -> bool:
        return bool(self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def without(self, lit: Literal) -> tuple[Literal, ...]:
        return tuple(l for l in self.literals if l != lit)

    def __str__(self) -> str:
        if not self.literals:
            return "false"
        return " | ".join(str(l) for l in self.literals)

    def __repr__(self) -> str:
        return f"Clause({str(self)!r})"


def canonicalize(literals: Iterable[Literal]) -> Clause:
    lits = tuple(sorted(set(literals), key=lambda l: l.sort_key))
    present = set(lits)
    taut = any(l.neg() in present for l in lits)
    return Clause(lits, taut)


def resolve(c: Clause, d: Clause, pivot: Literal) -> Clause:
    """Resolvent of ``c`` and ``d`` on ``pivot`` (``pivot`` in ``c``, its negation in ``d``)."""
    if pivot not in c:
        raise PivotError(f"pivot {pivot} not in {c}")
    if pivot.neg() not in d:
        raise PivotError(f"negated pivot {pivot.neg()} not in {d}")
    return canonicalize(c.without(pivot) + d.without(pivot.neg()))


class ClauseSet:
    """An ordered set of clauses, each tagged as an input or a learned clause.

    Instances are immutable; :meth:`add` and :meth:`remove` return new sets.
    Iteration follows insertion order.
    """

    __slots__ = ("_origin", "_hash", "_vars", "_bools")

    def __init__(self, clauses: Iterable[Clause] = (), origin: str = INPUT):
        self._origin: dict[Clause, str] = {}
        for c in clauses:
            self._origin.setdefault(c, origin)
        self._hash = self._vars = self._bools = None

    @classmethod
    def _wrap(cls, origin: dict[Clause, str]) -> ClauseSet:
        cs = cls.__new__(cls)
        cs._origin = origin
        cs._hash = cs._vars = cs._bools = None
        return cs

    def __contains__(self, c: object) -> bool:
        return c in self._origin

    def __iter__(self) -> Iterator[Clause]:
        return iter(self._origin)

    def __len__(self) -> int:
        return len(self._origin)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClauseSet):
            return NotImplemented
        return self._origin == other._origin

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._origin.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"ClauseSet({[str(c) for c in self]})"

    def origin(self, c: Clause) -> str:
        return self._origin[c]

    def is_learned(self, c: Clause) -> bool:
        return self._origin.get(c) == LEARNED

    def learned(self) -> list[Clause]:
        return [c for c, o in self._origin.items() if o == LEARNED]

    def inputs(self) -> list[Clause]:
        return [c for c, o in self._origin.items() if o == INPUT]

    def add(self, c: Clause, origin: str = LEARNED) -> ClauseSet:
        if c in self._origin:
            return self
        new = dict(self._origin)
        new[c] = origin
        return ClauseSet._wrap(new)

    def remove(self, c: Clause) -> ClauseSet:
        if self._origin.get(c) != LEARNED:
            raise ValueError(f"only learned clauses can be removed: {c}")
        new = dict(self._origin)
        del new[c]
        return ClauseSet._wrap(new)

    def literals(self) -> set[Literal]:
        return {l for c in self._origin for l in c}

    def theory_variables(self) -> list[str]:
        if self._vars is None:
            self._vars = sorted({v for c in self._origin for l in c for v in l.atom.variables})
        return self._vars

    def boolean_atoms(self) -> frozenset[BoolAtom]:
        if self._bools is None:
            self._bools = frozenset(l.atom for c in self._origin for l in c if isinstance(l.atom, BoolAtom))
        return self._bools


def basis_of(clauses: Iterable[Clause], extra: Iterable[Literal] = ()) -> frozenset[Literal]:
    """Negation-closed set of every literal in ``clauses`` plus ``extra``."""
    lits = {l for c in clauses for l in c}
    lits.update(extra)
    return frozenset(lits | {l.neg() for l in lits})


def atoms_of(clauses: Iterable[Clause]) -> set[Atom]:
    return {l.atom for c in clauses for l in c}
