"""Interval result record and method tags shared by the exact and classical
constructions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .binomial import ConfidenceLevel


class MethodId(str, Enum):
    """Closed set of interval constructions; values double as CLI tags."""

    M = "m"
    K1 = "k1"
    K2 = "k2"
    MEE_ANBAR = "mee-anbar"
    K2_PRIME = "k2-prime"
    K3 = "k3"
    K4_HALDANE = "k4-haldane"
    K4_JEFFREYS_PERKS = "k4-jeffreys-perks"
    K5_WILSON = "k5-wilson"
    K5_FLEISS = "k5-fleiss"
    K6 = "k6"
    K7 = "k7"


CLASSICAL_METHODS = tuple(m for m in MethodId if m is not MethodId.M)


@dataclass(frozen=True)
class IntervalEstimate:
    """A two-sided interval estimate for the difference of proportions.

    Classical endpoints may exit [-1, 1]; truncation is a separate, explicit
    operation.  `note` carries numerical diagnostics (clipped radicand,
    removable-singularity fallback) when one applies.
    """

    lower: float
    upper: float
    gamma: ConfidenceLevel
    method: MethodId
    truncated: bool = False
    note: str | None = None

    def __post_init__(self):
        if self.lower > self.upper + 1e-12:
            raise ValueError(
                f"invalid interval: lower {self.lower} exceeds upper {self.upper}"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, theta: float, open_ends: bool = False) -> bool:
        if open_ends:
            return self.lower < theta < self.upper
        return self.lower <= theta <= self.upper
