"""Tunable knobs for the end-to-end progression pipeline."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PipelineParams:
    """Defaults match the acceptance runs; every field is overridable.

    min_element_fraction, when set, drops elements of the pulled-back set
    below that fraction of Nb before counting (the small-element cut some
    density arguments assume); it is off by default because the rehearsal
    wants every progression it can find.
    """

    w_override: float | None = None
    p: float = 2.5
    b1_budget: int = 64
    alpha_source: str = "empirical"
    min_element_fraction: float | None = None
    threads: int | None = None
