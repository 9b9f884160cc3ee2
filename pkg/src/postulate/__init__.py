"""Postulation of fat point schemes: exact rank checks and a Horace descent tracer."""

from postulate.gfp import DEFAULT_PRIME, PrimeField, rank, rational_rank
from postulate.induction import InductionTrace, Status, run_induction
from postulate.interpolation import (
    PostulationReport,
    Verdict,
    build_matrix,
    check_postulation,
    oracle_check,
)
from postulate.schemes import (
    FatPointComponent,
    FatPointScheme,
    Support,
    boundary_triples,
    epsilon,
    fat_point_length,
)

__all__ = [
    "DEFAULT_PRIME",
    "FatPointComponent",
    "FatPointScheme",
    "InductionTrace",
    "PostulationReport",
    "PrimeField",
    "Status",
    "Support",
    "Verdict",
    "boundary_triples",
    "build_matrix",
    "check_postulation",
    "epsilon",
    "fat_point_length",
    "oracle_check",
    "rank",
    "rational_rank",
    "run_induction",
]
