"""Instance families and random generators for tests and benchmarks.

All generators are deterministic given their arguments; random ones take a
``random.Random`` or an integer seed.
"""

from __future__ import annotations

import random
from typing import Union

from .proofcore import Clause, ClauseSet, Literal, boolean, canonicalize, linear
from .resstar import Input, Resolution, ResStarProof, TheoryDerivation
from .theory import is_valid

Seed = Union[int, random.Random, None]


def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"family parameter must be a positive integer, got {n!r}")


def pigeonhole(n: int) -> ClauseSet:
    """n+1 pigeons in n holes; ``p{i}_{j}`` means pigeon i sits in hole j."""
    _check_n(n)
    p = lambda i, j, pos=True: boolean(f"p{i}_{j}", pos)
    clauses = [canonicalize(p(i, j) for j in range(1, n + 1)) for i in range(1, n + 2)]
    for j in range(1, n + 1):
        for i in range(1, n + 2):
            for k in range(i + 1, n + 2):
                clauses.append(canonicalize([p(i, j, False), p(k, j, False)]))
    return ClauseSet(clauses)


def chain(n: int) -> ClauseSet:
    """a1, a1 -> a2, ..., a(n-1) -> an, and ~an: n propagations then a conflict."""
    _check_n(n)
    a = lambda i, pos=True: boolean(f"a{i}", pos)
    clauses = [canonicalize([a(1)])]
    clauses += [canonicalize([a(i, False), a(i + 1)]) for i in range(1, n)]
    clauses.append(canonicalize([a(n, False)]))
    return ClauseSet(clauses)


def lra_diamond(n: int) -> ClauseSet:
    """Strict cycle x1 < x2 < ... < xn < x1; for n = 1 the bounds x1 < 0, x1 > 1.

    For n >= 2 every constraint mentions two variables, so no univariate
    reasoning on an empty assignment can refute it.
    """
    _check_n(n)
    if n == 1:
        return ClauseSet([canonicalize([linear({"x1": 1}, "<", 0)]),
                          canonicalize([linear({"x1": 1}, ">", 1)])])
    xs = [f"x{i}" for i in range(1, n + 1)]
    return ClauseSet(canonicalize([linear({xs[i]: 1, xs[(i + 1) % n]: -1}, "<", 0)])
                     for i in range(n))


FAMILIES = {"pigeonhole": pigeonhole, "chain": chain, "lra-diamond": lra_diamond}


def random_cnf(seed: Seed = None, max_vars: int = 5, max_clauses: int = 12,
               max_width: int = 3) -> ClauseSet:
    rng = _rng(seed)
    nvars = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(max_width, nvars))
        names = rng.sample(range(1, nvars + 1), width)
        clauses.append(canonicalize(boolean(f"v{i}", rng.random() < 0.5) for i in names))
    return ClauseSet(clauses)


_RELS = ("<", "<=", ">", ">=", "=", "!=")


def random_linear_literal(rng: random.Random, variables: list[str], max_vars: int = 2,
                          rels=_RELS, max_coeff: int = 2, max_bound: int = 3) -> Literal:
    k = rng.randint(1, min(max_vars, len(variables)))
    coeffs = {}
    for v in rng.sample(variables, k):
        c = 0
        while c == 0:
            c = rng.randint(-max_coeff, max_coeff)
        coeffs[v] = c
    return linear(coeffs, rng.choice(rels), rng.randint(-max_bound, max_bound))


def random_lra(seed: Seed = None, max_vars: int = 3, max_constraints: int = 6,
               diseqs: bool = True) -> ClauseSet:
    """A conjunction of unit linear constraints (no Boolean structure)."""
    rng = _rng(seed)
    variables = [f"x{i}" for i in range(1, rng.randint(1, max_vars) + 1)]
    rels = _RELS if diseqs else _RELS[:5]
    return ClauseSet(canonicalize([random_linear_literal(rng, variables, rels=rels)])
                     for _ in range(rng.randint(1, max_constraints)))


def random_mixed(seed: Seed = None, max_bools: int = 3, max_vars: int = 2,
                 max_clauses: int = 6) -> ClauseSet:
    """Small clauses mixing Boolean atoms and linear literals."""
    rng = _rng(seed)
    bools = [f"b{i}" for i in range(1, rng.randint(1, max_bools) + 1)]
    variables = [f"x{i}" for i in range(1, rng.randint(1, max_vars) + 1)]
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        lits = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.5:
                lits.append(boolean(rng.choice(bools), rng.random() < 0.5))
            else:
                lits.append(random_linear_literal(rng, variables))
        clauses.append(canonicalize(lits))
    return ClauseSet(clauses)


def _atom_pool(rng: random.Random, n_atoms: int, n_vars: int) -> list[Literal]:
    """Positive literals over distinct atoms, mostly linear so lemmas are common."""
    variables = ["x", "y", "z"][:n_vars]
    pool: dict = {}
    attempts = 0
    while len(pool) < n_atoms and attempts < 200:
        attempts += 1
        if rng.random() < 0.25:
            lit = boolean(f"p{len(pool)}")
        else:
            lit = random_linear_literal(rng, variables, rels=("<", "<="), max_coeff=1, max_bound=2)
        pool.setdefault(lit.atom, Literal(lit.atom))
    return list(pool.values())


def random_refutation(seed: Seed = None, max_steps: int = 15, max_atoms: int = 6,
                      max_vars: int = 3) -> tuple[ResStarProof, ClauseSet]:
    """A random Res*(T) refutation together with the inputs it refutes.

    The proof tree is grown backwards from the empty clause: each node is
    either split on a fresh pivot into two premises, closed as a valid
    theory lemma, or closed as an input clause. Clauses are memoized so each
    is derived once, which keeps theory lemmas free of duplicates.
    """
    rng = _rng(seed)
    pool = _atom_pool(rng, rng.randint(2, max_atoms), rng.randint(1, max_vars))
    max_splits = (max_steps - 1) // 2
    proof = ResStarProof()
    memo: dict[Clause, int] = {}
    inputs: list[Clause] = []
    splits = 0

    def leaf(c: Clause) -> int:
        if c.literals and is_valid(c):
            i = proof.add(TheoryDerivation(c))
        else:
            i = proof.add(Input(c))
            inputs.append(c)
        memo[c] = i
        return i

    def build(c: Clause, depth: int) -> int:
        nonlocal splits
        if c in memo:
            return memo[c]
        if c.literals and is_valid(c) and rng.random() < 0.8:
            return leaf(c)
        used = {l.atom for l in c}
        free = [p for p in pool if p.atom not in used]
        if not free or splits >= max_splits or (depth > 0 and rng.random() < 0.25):
            return leaf(c)
        splits += 1
        pivot = rng.choice(free)
        if rng.random() < 0.5:
            pivot = pivot.neg()
        left_side, right_side = [], []
        for lit in c:
            r = rng.random()
            if r < 0.45:
                left_side.append(lit)
            elif r < 0.9:
                right_side.append(lit)
            else:
                left_side.append(lit)
                right_side.append(lit)
        li = build(canonicalize(left_side + [pivot]), depth + 1)
        ri = build(canonicalize(right_side + [pivot.neg()]), depth + 1)
        i = proof.add(Resolution(li, ri, pivot, c))
        memo[c] = i
        return i

    proof.conclusion = build(Clause(), 0)
    return proof, ClauseSet(inputs)


def theory_pool(n_vars: int = 3) -> list[Literal]:
    """Fixed set of small linear literals used to search for valid lemmas."""
    variables = ["x", "y", "z"][:n_vars]
    lits = []
    for v in variables:
        for b in (-1, 0, 1, 2):
            lits += [linear({v: 1}, "<", b), linear({v: 1}, "<=", b)]
    for i, u in enumerate(variables):
        for v in variables[i + 1:]:
            for b in (0, 1):
                lits += [linear({u: 1, v: -1}, "<", b), linear({u: 1, v: 1}, "<=", b)]
    return lits


def cycle_lemma(size: int) -> Clause:
    """Irredundant valid lemma with ``size`` literals.

    Size 2 is ``x >= 0 | x <= 1``; larger sizes negate the strict cycle
    x1 < x2 < ... < xn < x1.
    """
    if size < 2:
        raise ValueError("no linear literal is valid on its own")
    return canonicalize(c.literals[0].neg() for c in lra_diamond(1 if size == 2 else size))


def random_valid_lemma(seed: Seed, size: int, n_vars: int = 3, tries: int = 20000,
                       irredundant: bool = False) -> Clause | None:
    """A valid, non-tautological linear lemma of exactly ``size`` literals.

    With ``irredundant`` every proper sub-clause must be invalid; over three
    variables that caps the size at four.
    """
    rng = _rng(seed)
    pool = theory_pool(n_vars)
    for _ in range(tries):
        lits = []
        atoms = set()
        for lit in rng.sample(pool, min(len(pool), size * 2)):
            if lit.atom not in atoms:
                atoms.add(lit.atom)
                lits.append(lit if rng.random() < 0.5 else lit.neg())
            if len(lits) == size:
                break
        if len(lits) < size:
            continue
        c = canonicalize(lits)
        if not is_valid(c):
            continue
        if not irredundant or not any(is_valid(canonicalize(c.without(l))) for l in c):
            return c
    return None


__all__ = [
    "pigeonhole", "chain", "lra_diamond", "FAMILIES", "random_cnf", "random_lra", "random_mixed",
    "random_linear_literal", "random_refutation", "random_valid_lemma", "theory_pool", "cycle_lemma",
]
