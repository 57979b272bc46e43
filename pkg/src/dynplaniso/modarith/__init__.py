"""Tutte matrices modulo small primes and their low-rank maintenance."""

from __future__ import annotations

from .pool import BundleFamily, PrimePool, canonical_pins, coherent_update, crt_compare, pool_refresh
from .primes import DEFAULT_WINDOW, PrimeSource, is_prime, primes_in_window
from .tutte import (
    DEFAULT_POSITIONS,
    FAULTS,
    Bundle,
    bundle_init,
    embed_coords,
    laplacian,
    set_fault,
    smw_edge,
    smw_merge,
    smw_pair,
    smw_pins,
    smw_split,
    smw_union,
    smw_vertex,
    tutte_matrix,
)
from .zp import det_mod, inv_mod, invert_gauss

__all__ = [
    "DEFAULT_POSITIONS",
    "DEFAULT_WINDOW",
    "FAULTS",
    "Bundle",
    "BundleFamily",
    "PrimePool",
    "PrimeSource",
    "bundle_init",
    "canonical_pins",
    "coherent_update",
    "crt_compare",
    "det_mod",
    "embed_coords",
    "inv_mod",
    "invert_gauss",
    "is_prime",
    "laplacian",
    "pool_refresh",
    "primes_in_window",
    "set_fault",
    "smw_edge",
    "smw_merge",
    "smw_pair",
    "smw_pins",
    "smw_split",
    "smw_union",
    "smw_vertex",
    "tutte_matrix",
]
