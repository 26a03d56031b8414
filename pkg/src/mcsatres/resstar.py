"""Res(T) and Res*(T) proofs and their checker.

A proof is a list of steps; each step derives one clause and may only refer
to earlier steps. ``check`` re-derives every clause: resolvents are
recomputed and theory lemmas are re-validated with Fourier-Motzkin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .proofcore import Clause, Literal, PivotError, resolve
from .theory import is_valid

RES_T = "res-t"
RES_STAR_T = "res-star-t"

REGULAR = "regular"
STRONG = "strong"

MALFORMED_INDEX = "malformed-index"
NOT_AN_INPUT = "not-an-input"
WRONG_RESOLVENT = "wrong-resolvent"
INVALID_LEMMA = "invalid-lemma"
LITERAL_RESTRICTION = "literal-restriction-violated"
BAD_CONCLUSION = "bad-conclusion"


@dataclass(frozen=True)
class Input:
    clause: Clause


@dataclass(frozen=True)
class Resolution:
    """Resolvent of step ``left`` (containing ``pivot``) and step ``right`` (containing its negation)."""

    left: int
    right: int
    pivot: Literal
    clause: Clause


@dataclass(frozen=True)
class TheoryDerivation:
    clause: Clause
    strength: str = STRONG


ProofStep = Union[Input, Resolution, TheoryDerivation]


@dataclass
class ResStarProof:
    steps: list[ProofStep] = field(default_factory=list)
    conclusion: int | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def clause(self, i: int) -> Clause:
        return self.steps[i].clause

    @property
    def is_refutation(self) -> bool:
        return self.conclusion is not None and self.steps[self.conclusion].clause.is_empty

    def add(self, step: ProofStep) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    def inputs(self) -> list[Clause]:
        return [s.clause for s in self.steps if isinstance(s, Input)]

    def literals(self) -> set[Literal]:
        return {l for s in self.steps for l in s.clause}


@dataclass(frozen=True)
class CheckResult:
    accepted: bool
    index: int | None = None
    reason: str | None = None
    detail: str = ""
    refutation: bool = False

    def __bool__(self) -> bool:
        return self.accepted

    def __str__(self) -> str:
        if self.accepted:
            return "accepted refutation" if self.refutation else "accepted"
        return f"rejected at step {self.index}: {self.reason} ({self.detail})"


def _reject(i, reason, detail=""):
    return CheckResult(False, i, reason, detail)


def check(proof: ResStarProof, inputs: Iterable[Clause], system: str = RES_STAR_T) -> CheckResult:
    """Check every step of ``proof`` against ``inputs`` in the given proof system.

    Under Res(T) a theory lemma may only mention atoms that already occur in
    the input clauses or in earlier steps; Res*(T) drops that restriction.
    """
    if system not in (RES_T, RES_STAR_T):
        raise ValueError(f"unknown proof system {system!r}")
    inputs = set(inputs)
    seen_atoms = {l.atom for c in inputs for l in c}
    for i, step in enumerate(proof.steps):
        if isinstance(step, Input):
            if step.clause not in inputs:
                return _reject(i, NOT_AN_INPUT, str(step.clause))
        elif isinstance(step, Resolution):
            for ref in (step.left, step.right):
                if not isinstance(ref, int) or not 0 <= ref < i:
                    return _reject(i, MALFORMED_INDEX, f"reference {ref}")
            left, right = proof.steps[step.left].clause, proof.steps[step.right].clause
            try:
                expected = resolve(left, right, step.pivot)
            except PivotError as exc:
                return _reject(i, WRONG_RESOLVENT, str(exc))
            if expected != step.clause:
                return _reject(i, WRONG_RESOLVENT, f"expected {expected}, got {step.clause}")
        elif isinstance(step, TheoryDerivation):
            if not is_valid(step.clause):
                return _reject(i, INVALID_LEMMA, str(step.clause))
            if system == RES_T or step.strength == REGULAR:
                fresh = [l for l in step.clause if l.atom not in seen_atoms]
                if fresh:
                    return _reject(i, LITERAL_RESTRICTION, ", ".join(map(str, fresh)))
        else:
            return _reject(i, MALFORMED_INDEX, f"unknown step {step!r}")
        seen_atoms.update(l.atom for l in step.clause)
    if proof.conclusion is not None and not 0 <= proof.conclusion < len(proof.steps):
        return _reject(proof.conclusion, BAD_CONCLUSION, "conclusion outside the proof")
    return CheckResult(True, refutation=proof.is_refutation)


def proof_length(proof: ResStarProof) -> int:
    """Number of rule applications: every step except inputs."""
    return sum(1 for s in proof.steps if not isinstance(s, Input))


def theory_derivations(proof: ResStarProof) -> int:
    return sum(1 for s in proof.steps if isinstance(s, TheoryDerivation))
