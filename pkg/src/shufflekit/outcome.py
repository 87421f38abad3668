"""Structured verdicts returned by every decision procedure."""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import Word, fmt_word


@dataclass(frozen=True)
class DecisionOutcome:
    """Verdict of a decision procedure.

    ``holds`` is the answer to the question named in ``method``.  ``witness``
    carries a concrete word demonstrating the verdict where one exists; every
    witness is re-verified through the relevant membership oracle before the
    outcome is constructed.  ``bounded`` is True when the verdict rests on a
    capped search and is therefore certified only up to the recorded cap.
    ``stats`` holds exploration counters (states built, configurations seen).
    """

    holds: bool
    method: str
    witness: Word | None = None
    bounded: bool = False
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if not self.holds:
            return "fails"
        return "holds-bounded" if self.bounded else "holds"

    def __str__(self) -> str:
        parts = [f"{self.method}: {self.verdict}"]
        if self.witness is not None:
            parts.append(f"witness={fmt_word(self.witness)}")
        return " ".join(parts)
