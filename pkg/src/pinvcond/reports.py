"""Report containers and the binomial statistics used for verdicts.

Reports must be byte-reproducible from (config, seed): serialization uses
sorted keys, shortest-roundtrip float repr, LF endings and no timestamps.
Wilson score intervals are used everywhere a proportion gets an error bar
because they stay honest at and near zero successes, which is where tail
probabilities live.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "Verdict",
    "ExperimentReport",
    "Z_95",
    "wilson_interval",
    "wilson_lower",
    "wilson_upper",
    "format_float",
]

Z_95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z_95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion at z standard normal
    quantiles (z = Z_95 gives the central 95% interval)."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if not (0 <= successes <= trials):
        raise DomainError(f"successes must lie in [0, {trials}], got {successes}")
    if z <= 0.0:
        raise DomainError(f"z must be positive, got {z}")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
    # at the count boundaries center -+ half is exactly 0 or 1 in real
    # arithmetic; pin that so rounding residue cannot leak into one-sided
    # verdicts against bounds near underflow
    lower = 0.0 if successes == 0 else max(center - half, 0.0)
    upper = 1.0 if successes == trials else min(center + half, 1.0)
    return lower, upper


def wilson_lower(successes: int, trials: int, z: float) -> float:
    return wilson_interval(successes, trials, z)[0]


def wilson_upper(successes: int, trials: int, z: float) -> float:
    return wilson_interval(successes, trials, z)[1]


def format_float(x: float) -> str:
    """17 significant digits: lossless for float64, stable across runs."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Verdict:
    """One checked inequality: both sides by name and value, plus the call."""

    name: str
    passed: bool
    lhs_label: str
    lhs_value: float
    rhs_label: str
    rhs_value: float
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "lhs_label": self.lhs_label,
            "lhs_value": float(self.lhs_value),
            "rhs_label": self.rhs_label,
            "rhs_value": float(self.rhs_value),
            "detail": self.detail,
        }


@dataclass
class ExperimentReport:
    """Aggregated result of one experiment command.

    config echoes every input needed to rerun the experiment (including the
    master seed); estimates carry point values with standard errors; tails
    carry per-threshold rows; bounds carry the closed-form values compared
    against; verdicts carry pass/fail per inequality.
    """

    command: str
    config: dict
    estimates: dict = field(default_factory=dict)
    tails: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "estimates": self.estimates,
            "tails": self.tails,
            "rows": self.rows,
            "bounds": self.bounds,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "notes": list(self.notes),
            "all_passed": self.all_passed(),
        }

    def to_json(self) -> str:
        # allow_nan=False: a non-finite value in a report is a bug, not data
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    def write_json(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_json())
