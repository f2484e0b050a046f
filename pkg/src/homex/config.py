"""Tunable cutoffs and seeds, bundled so call sites stay tidy."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Cutoffs:
    """Resource bounds for the open-ended searches.

    resolution : max number of projective-cover steps before a resolution
        computation gives up (degrees 0..resolution get certified terms).
    tensor_cap : max tensor power probed when testing nilpotency.
    iso_trials : samples drawn by randomized isomorphism testing.
    seed       : RNG seed; fixed by default so runs are reproducible.
    """

    resolution: int = 32
    tensor_cap: int = 32
    iso_trials: int = 24
    seed: int = 20260822


DEFAULT_CUTOFFS = Cutoffs()
