"""Fault types shared by both construction implementations."""

from __future__ import annotations


class ConstructionFault(RuntimeError):
    """An internal invariant broke mid-construction.

    Carries the stage and a machine-readable code; the runner turns it
    into a fault event plus a state snapshot.
    """

    def __init__(self, stage: int, code: str, detail: str = ""):
        super().__init__(f"stage {stage}: {code}: {detail}")
        self.stage = stage
        self.code = code
        self.detail = detail


class SoundnessFault(ConstructionFault):
    """A logged non-block pair later shared a label (must be impossible)."""
