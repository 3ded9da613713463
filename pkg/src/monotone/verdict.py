"""Outcome record shared by every check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

THEOREM_IDS = (
    "Monotone", "Thm1", "Thm2Identity", "Thm4SM2", "Cor5", "Lemma6",
    "Thm7a", "Thm7b", "Thm7c", "Thm7d", "RemarkChain", "Thm8", "Thm9",
    "RegularityGap",
)


@dataclass
class Verdict:
    """Result of one check.

    ``worst_violation`` is the largest amount by which any probed instance
    missed its criterion (0 when nothing was off); ``holds`` requires it to be
    within ``params["tol"]``.
    """

    theorem_id: str
    holds: bool
    worst_violation: float
    witnesses: list[tuple[str, list[float]]] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem_id not in THEOREM_IDS:
            raise ValueError(f"unknown theorem id {self.theorem_id!r}")
        self.worst_violation = float(self.worst_violation)
        self.holds = bool(self.holds)
        tol = float(self.params.get("tol", 0.0))
        if self.holds and self.worst_violation > tol:
            raise ValueError(
                f"{self.theorem_id}: holds=True with worst_violation "
                f"{self.worst_violation} > tol {tol}")
        self.witnesses = [(str(k), [float(t) for t in np.ravel(v)])
                          for k, v in self.witnesses]

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "holds": self.holds,
            "worst_violation": self.worst_violation,
            "witnesses": [[k, v] for k, v in self.witnesses],
            "params": dict(sorted(self.params.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        return cls(d["theorem_id"], d["holds"], d["worst_violation"],
                   [(k, v) for k, v in d.get("witnesses", [])],
                   dict(d.get("params", {})))

