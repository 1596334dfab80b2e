"""Witness sets S_xy in Q^8: construction, verification, estimation, export."""
from .build import (
    DEFAULT_BUDGET,
    WitnessSet,
    bound_set,
    build_witness,
    canonical_witness,
    clear_cache,
    transport,
)
from .plan import SizeEstimate, classify, estimate_shape, estimate_size, rule_shape, shape
from .store import PointStore, Provenance
from .verify import VerifyReport, verify_witness

__all__ = [
    "DEFAULT_BUDGET", "PointStore", "Provenance", "SizeEstimate", "VerifyReport", "WitnessSet",
    "bound_set", "build_witness", "canonical_witness", "classify", "clear_cache",
    "estimate_shape", "estimate_size", "rule_shape", "shape", "transport", "verify_witness",
]
