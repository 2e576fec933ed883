"""Report records shared by the condition checks and the verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

__all__ = ["ConditionReport", "EquivReport"]


@dataclass
class ConditionReport:
    """Outcome of a single weight-condition check.

    best_constant is the empirical sup defining the condition; witness_t the
    location attaining it; boundary_attained marks sups that ran into the
    grid edge (truncation artifact rather than an interior maximum).
    """

    condition: str
    holds: bool
    best_constant: float
    witness_t: float
    boundary_attained: bool = False
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "condition": self.condition,
            "holds": bool(self.holds),
            "best_constant": float(self.best_constant),
            "witness_t": float(self.witness_t),
            "boundary_attained": bool(self.boundary_attained),
        }
        if self.details:
            out["details"] = _jsonify(self.details)
        return out


@dataclass
class EquivReport:
    """Two-sided equivalence check: lower <= quantity_a / quantity_b <= upper
    over the probed inputs, with the witnesses attaining each end."""

    lower: float
    upper: float
    lower_witness: Any = None
    upper_witness: Any = None
    details: dict = field(default_factory=dict)

    @property
    def sup_log_ratio(self) -> float:
        worst = 0.0
        for c in (self.lower, self.upper):
            if c <= 0 or math.isinf(c):
                return math.inf
            worst = max(worst, abs(math.log(c)))
        return worst

    def to_json(self) -> dict:
        return {
            "lower": float(self.lower),
            "upper": float(self.upper),
            "lower_witness": _jsonify(self.lower_witness),
            "upper_witness": _jsonify(self.upper_witness),
            "details": _jsonify(self.details),
        }


def _jsonify(x):
    import numpy as np

    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return [_jsonify(v) for v in x.tolist()]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)
