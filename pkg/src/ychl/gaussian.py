"""Gaussian Y-channel: capacity function, outer bound, shifted target, gap check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .regions import PAIRS, LinearRegion, RateTuple, _tag, as_rates, contains, sum_bound

GAP = 7 / 6
TOL = 1e-9


def cap(x: float) -> float:
    if x < 0:
        raise ValueError(f"cap() needs a non-negative argument, got {x}")
    return 0.5 * math.log2(1 + x)


def cap_plus(x: float) -> float:
    return max(0.0, cap(max(x, 0.0)))


@dataclass(frozen=True)
class ChannelConfig:
    """Real gains ``h1, h2, h3`` and power ``P`` with ``h1² >= h2² >= h3²``.

    ``perm[i]`` is the caller's label of normalized user ``i + 1``; use
    :meth:`normalize` to build a config from gains in arbitrary order.
    """

    h1: float
    h2: float
    h3: float
    P: float
    perm: tuple[int, int, int] = field(default=(1, 2, 3), compare=False)

    def __post_init__(self):
        vals = (self.h1, self.h2, self.h3, self.P)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"channel parameters must be finite, got {vals}")
        if self.P < 0:
            raise ValueError(f"power must be non-negative, got {self.P}")
        if not self.h1**2 >= self.h2**2 >= self.h3**2:
            raise ValueError(
                f"gains must satisfy h1² >= h2² >= h3², got {self.h1}, {self.h2}, {self.h3}; "
                "use ChannelConfig.normalize"
            )
        if sorted(self.perm) != [1, 2, 3]:
            raise ValueError(f"perm must be a permutation of (1,2,3), got {self.perm}")

    @classmethod
    def normalize(cls, gains: Sequence[float], P: float) -> "ChannelConfig":
        order = sorted(range(3), key=lambda i: -gains[i] ** 2)
        h = [float(gains[i]) for i in order]
        return cls(h[0], h[1], h[2], float(P), tuple(i + 1 for i in order))

    @property
    def gains(self) -> tuple[float, float, float]:
        return (self.h1, self.h2, self.h3)

    @property
    def snr(self) -> tuple[float, float, float]:
        """``(h1²P, h2²P, h3²P)``."""
        return tuple(h * h * self.P for h in self.gains)

    @property
    def cross_snr(self) -> float:
        """``(|h2| + |h3|)² P``: the coherent sum seen by the stronger receivers."""
        return (abs(self.h2) + abs(self.h3)) ** 2 * self.P

    def to_normalized_rates(self, r: Sequence) -> RateTuple:
        """Relabel a tuple given in caller labels into normalized labels."""
        r = as_rates(r)
        return RateTuple(*(r.rate(self.perm[a - 1], self.perm[b - 1]) for a, b in PAIRS))

    def to_caller_rates(self, r: Sequence) -> RateTuple:
        r = as_rates(r)
        inv = {orig: i + 1 for i, orig in enumerate(self.perm)}
        return RateTuple(*(r.rate(inv[a], inv[b]) for a, b in PAIRS))

    def to_dict(self) -> dict:
        return {"h1": self.h1, "h2": self.h2, "h3": self.h3, "P": self.P, "perm": list(self.perm)}


def _rows(table) -> LinearRegion:
    return tuple(sum_bound(names, rhs, _tag(kind, names)) for kind, names, rhs in table)


@lru_cache(maxsize=1024)
def build_outer_region_g(cfg: ChannelConfig) -> LinearRegion:
    """Outer bound from six two-rate and six three-rate sum bounds.

    The two min-form two-rate bounds are split into their two constituents,
    so the region has 14 rows.
    """
    s1, s2, s3 = cfg.snr
    c23 = cfg.cross_snr
    table = (
        ("cutset", ("R31", "R32"), cap(s3)),
        ("cutset", ("R13", "R23"), cap(s3)),
        ("cutset", ("R21", "R23"), cap(s2)),
        ("cutset", ("R12", "R32"), cap(s2)),
        ("cutset", ("R12", "R13"), cap(s1)),
        ("cutset-mimo", ("R12", "R13"), cap(s2 + s3)),
        ("cutset", ("R21", "R31"), cap(s1)),
        ("cutset-mimo", ("R21", "R31"), cap(c23)),
        ("genie-3rate", ("R12", "R13", "R32"), cap(s2 + s3)),
        ("genie-3rate", ("R12", "R13", "R23"), cap(s2 + s3)),
        ("genie-3rate", ("R21", "R23", "R13"), cap(s1 + s3)),
        ("genie-3rate", ("R21", "R23", "R31"), cap(c23)),
        ("genie-3rate", ("R31", "R32", "R12"), cap(s1 + s2)),
        ("genie-3rate", ("R31", "R32", "R21"), cap(c23)),
    )
    return LinearRegion(_rows(table), "outer-g")


@lru_cache(maxsize=1024)
def build_inner_target_region(cfg: ChannelConfig) -> LinearRegion:
    """Eight shifted inequalities describing the constructively achievable target.

    Right-hand sides may be negative; the system is still returned whole.
    """
    s1, s2, s3 = cfg.snr
    c23 = cfg.cross_snr
    table = (
        ("target", ("R31", "R32"), cap(s3) - 2),
        ("target", ("R13", "R23"), cap(s3) - 2),
        ("target", ("R12", "R13", "R32"), cap(s2 + s3) - 3),
        ("target", ("R13", "R23", "R12"), cap(s2 + s3) - 3),
        ("target", ("R12", "R31", "R32"), cap(s1 + s2) - 3),
        ("target", ("R13", "R23", "R21"), cap(s1 + s3) - 3),
        ("target", ("R21", "R31", "R23"), cap(c23) - 3.5),
        ("target", ("R21", "R31", "R32"), cap(c23) - 3.5),
    )
    return LinearRegion(_rows(table), "inner-target")


def region_arrays(region: LinearRegion) -> tuple[np.ndarray, np.ndarray]:
    """``(A, b)`` with ``A r <= b`` describing ``region``."""
    a = np.array([ineq.coeffs for ineq in region], dtype=float).reshape(-1, 6)
    b = np.array([float(ineq.rhs) for ineq in region], dtype=float)
    return a, b


@dataclass
class GapReport:
    in_outer_bound: bool
    shifted: tuple[float, ...] | None
    slacks: dict[str, float]
    passed: bool
    outer_violations: list[str] = field(default_factory=list)

    @property
    def min_slack(self) -> float:
        return min(self.slacks.values()) if self.slacks else math.nan

    @property
    def achievable(self) -> tuple[float, ...] | None:
        """Componentwise ``max(0, ·)`` of the shifted tuple."""
        return None if self.shifted is None else tuple(max(0.0, v) for v in self.shifted)

    @property
    def verdict(self) -> str:
        if not self.in_outer_bound:
            return "not in outer bound"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "in_outer_bound": self.in_outer_bound,
            "shifted": None if self.shifted is None else list(self.shifted),
            "achievable": None if self.achievable is None else list(self.achievable),
            "slacks": self.slacks,
            "min_slack": None if not self.slacks else self.min_slack,
            "outer_violations": self.outer_violations,
        }


def check_gap(cfg: ChannelConfig, r: Sequence, tol: float = TOL) -> GapReport:
    """Check that ``r - 7/6`` (unclipped) meets every shifted target inequality."""
    r = as_rates(r)
    outer = build_outer_region_g(cfg)
    if not contains(outer, r, tol):
        bad = [ineq.tag for ineq in outer.violated(r, tol)]
        if any(v < -tol for v in r):
            bad.append("non-negativity")
        return GapReport(False, None, {}, False, bad)
    shifted = tuple(float(v) - GAP for v in r)
    target = build_inner_target_region(cfg)
    slacks = {}
    for i, ineq in enumerate(target):
        slacks[f"{i + 1}:{ineq.tag}"] = ineq.slack(shifted)
    passed = all(s >= -tol for s in slacks.values())
    return GapReport(True, shifted, slacks, passed)


def gap_check_batch(cfg: ChannelConfig, rates: np.ndarray, tol: float = TOL) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`check_gap` over rows of ``rates``: returns ``(passed, min_slack)``.

    Rows outside the outer bound count as not passed with ``min_slack = nan``.
    """
    rates = np.asarray(rates, dtype=float).reshape(-1, 6)
    ao, bo = region_arrays(build_outer_region_g(cfg))
    inside = ((rates @ ao.T) <= bo + tol).all(axis=1) & (rates >= -tol).all(axis=1)
    at, bt = region_arrays(build_inner_target_region(cfg))
    slack = bt - (rates - GAP) @ at.T
    min_slack = np.where(inside, slack.min(axis=1), np.nan)
    return inside & (slack >= -tol).all(axis=1), min_slack
