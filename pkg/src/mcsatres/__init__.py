"""MCSAT with linear rational arithmetic, Res*(T) proofs, and translations between them."""

from .engine import Mcsat, SolveResult, StepAccount, Trace, TraceStep, solve
from .proofcore import Clause, ClauseSet, Literal, boolean, canonicalize, linear, resolve
from .resstar import RES_STAR_T, RES_T, Input, Resolution, ResStarProof, TheoryDerivation, check
from .theory import LRATheory, Mode, explain, infeasible, is_valid
from .translate import mcsat_to_res, res_to_mcsat, simulate_resolution, simulate_strong_derivation

__version__ = "0.1.0"

__all__ = [
    "Mcsat", "SolveResult", "StepAccount", "Trace", "TraceStep", "solve",
    "Clause", "ClauseSet", "Literal", "boolean", "canonicalize", "linear", "resolve",
    "RES_STAR_T", "RES_T", "Input", "Resolution", "ResStarProof", "TheoryDerivation", "check",
    "LRATheory", "Mode", "explain", "infeasible", "is_valid",
    "mcsat_to_res", "res_to_mcsat", "simulate_resolution", "simulate_strong_derivation",
]
