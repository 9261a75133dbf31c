"""Closed-form power allocation for the Gaussian Y-channel and its verification.

Stream identifiers name the sub-message at its source: ``b12`` is user 1's
bi-directional stream to user 2, ``c23`` a cyclic stream, ``u31`` a
uni-directional one.  ``ct23`` and ``ct13`` are the repeated cyclic copies
sent by the middle user of a cycle (user 2 for 1->2->3->1, user 1 for
1->3->2->1).

Uplink decoding at the relay works in two groups.  The strong group carries
the uni-directional streams of users 1 and 2 plus the lattice sums aligned at
``h2``; the weak group carries user 3's streams and the lattice sums aligned
at ``h3``.  Downlink, user 3 decodes its streams treating everything else as
noise, user 2 strips those and decodes its own, user 1 decodes the rest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .gaussian import TOL, ChannelConfig, build_inner_target_region, cap
from .regions import RateTuple, as_rates, contains
from .scheme import RateSplit

SECTORS = {
    1: (">=", ">=", ">="),
    2: (">=", ">=", "<="),
    3: (">=", "<=", ">="),
    4: (">=", "<=", "<="),
    5: ("<=", ">=", ">="),
    6: ("<=", ">=", "<="),
    7: ("<=", "<=", ">="),
    8: ("<=", "<=", "<="),
}

ALPHA_KEYS = (
    "b12", "b13", "c12", "c13", "ct13", "u12", "u13",
    "b21", "b23", "c21", "c23", "ct23", "u21", "u23",
    "b31", "b32", "c31", "c32", "u31", "u32",
)
SOURCE_STREAMS = {
    1: ("b12", "b13", "c12", "c13", "ct13", "u12", "u13"),
    2: ("b21", "b23", "c21", "c23", "ct23", "u21", "u23"),
    3: ("b31", "b32", "c31", "c32", "u31", "u32"),
}
# relay streams, grouped by the user that decodes them, in decoding order
BETA_ORDER = {
    3: ("u13", "u23", "c132", "c123", "b13", "b23"),
    2: ("u12", "u32", "c123", "c132", "b12"),
    1: ("u21", "u31"),
}


def _pairs(r: RateTuple) -> tuple[tuple, tuple, tuple]:
    return (r.r12, r.r21), (r.r13, r.r31), (r.r23, r.r32)


def _in_sector(r: RateTuple, sector: int) -> bool:
    for (a, b), rel in zip(_pairs(r), SECTORS[sector]):
        if (rel == ">=" and a < b) or (rel == "<=" and a > b):
            return False
    return True


def classify_sector(r: Sequence) -> int:
    """Lowest-numbered sector whose three pairwise comparisons hold."""
    r = as_rates(r)
    if any(v < 0 for v in r):
        raise ValueError(f"rates must be non-negative, got {tuple(r)}")
    return next(s for s in SECTORS if _in_sector(r, s))


@dataclass(frozen=True)
class SubrateAssignment:
    b12: float
    b13: float
    b23: float
    cyc123: float
    cyc132: float
    uni: RateTuple

    def __post_init__(self):
        if self.cyc123 and self.cyc132:
            raise ValueError("at most one cyclic direction can be active")

    @property
    def r21b(self):
        return self.b12

    @property
    def r31b(self):
        return self.b13

    @property
    def r32b(self):
        return self.b23

    def total(self) -> RateTuple:
        return self.as_split().total()

    def as_split(self) -> RateSplit:
        return RateSplit((self.b12, self.b13, self.b23), self.cyc123, self.cyc132, self.uni)

    def stream_rate(self, key: str):
        """Rate of an uplink stream id (``b12``, ``ct23``, ``u31``...)."""
        kind, pair = key[:-2], key[-2:]
        if kind == "b":
            return {"12": self.b12, "21": self.b12, "13": self.b13, "31": self.b13,
                    "23": self.b23, "32": self.b23}[pair]
        if kind in ("c", "ct"):
            return self.cyc123 if pair in ("12", "23", "31") else self.cyc132
        if kind == "u":
            return self.uni.rate(int(pair[0]), int(pair[1]))
        raise KeyError(key)

    def to_dict(self) -> dict:
        return {
            "bidir": {"R12b": self.b12, "R13b": self.b13, "R23b": self.b23},
            "cyc123": self.cyc123,
            "cyc132": self.cyc132,
            "uni": {f"R{j}{k}u": self.uni.rate(j, k) for j, k in ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))},
        }


def assign_subrates(r: Sequence, sector: int | None = None) -> SubrateAssignment:
    """Pairwise minima, then the cyclic minimum, then the remainder."""
    r = as_rates(r)
    if sector is None:
        sector = classify_sector(r)
    elif not _in_sector(r, sector):
        raise ValueError(f"{tuple(r)} does not lie in sector {sector}")
    b12, b13, b23 = min(r.r12, r.r21), min(r.r13, r.r31), min(r.r23, r.r32)
    p12, p21 = r.r12 - b12, r.r21 - b12
    p13, p31 = r.r13 - b13, r.r31 - b13
    p23, p32 = r.r23 - b23, r.r32 - b23
    c123 = min(p12, p23, p31)
    c132 = min(p13, p32, p21)
    uni = RateTuple(p12 - c123, p13 - c132, p21 - c132, p23 - c123, p31 - c123, p32 - c132)
    return SubrateAssignment(b12, b13, b23, c123, c132, uni)


# --------------------------------------------------------------------------
# closed-form allocations

def _over(num: float, s: float) -> float:
    if s > 0:
        return num / s
    return 0.0 if num == 0 else math.inf


def _lat(rate, s, exp) -> float:
    """Lattice-stream power: ``(2^{2R+1}-1)/(2s) * 2^exp``."""
    return _over((2 ** (2 * rate + 1) - 1) * 2.0**exp, 2 * s)


def _uni(rate, s, exp) -> float:
    """Uni-directional power: ``(2^{2R}-1)/s * 2^exp``."""
    return _over((2 ** (2 * rate) - 1) * 2.0**exp, s)


def _case_alphas(sector: int, r: RateTuple, sub: SubrateAssignment, s1, s2, s3) -> dict:
    R12, R13, R21, R23, R31, R32 = r
    if sector == 1:
        return {
            "b32": _lat(R32, s3, 0),
            "b31": _lat(R31, s3, 2 * R32 + 1),
            "b21": _lat(R21, s2, 2 * R31 + 2 * R32 + 2),
            "u23": _uni(R23 - R32, s2, 2 * R21 + 2 * R31 + 2 * R32 + 3),
            "u13": _uni(R13 - R31, s1, 2 * R21 + 2 * R31 + 2 * R23 + 3),
            "u12": _uni(R12 - R21, s1, 2 * R21 + 2 * R13 + 2 * R23 + 3),
        }
    if sector == 2:
        return {
            "b32": _lat(R23, s3, 0),
            "b31": _lat(R31, s3, 2 * R23 + 1),
            "u32": _uni(R32 - R23, s3, 2 * R31 + 2 * R23 + 2),
            "b21": _lat(R21, s2, 2 * R32 + 2 * R31 + 2),
            "u13": _uni(R13 - R31, s1, 2 * R21 + 2 * R32 + 2 * R31 + 3),
            "u12": _uni(R12 - R21, s1, 2 * R21 + 2 * R32 + 2 * R13 + 3),
        }
    if sector == 3:
        c = sub.cyc123
        return {
            "b32": _lat(R32, s3, 0),
            "b31": _lat(R13, s3, 2 * R32 + 1),
            "c31": _lat(c, s3, 2 * R32 + 2 * R13 + 2),
            "u31": _uni(R31 - R13 - c, s3, 2 * c + 2 * R32 + 2 * R13 + 3),
            "b21": _lat(R21, s2, 2 * R31 + 2 * R32 + 3),
            "c23": _lat(c, s2, 2 * R21 + 2 * R31 + 2 * R32 + 4),
            "u23": _uni(R23 - R32 - c, s2, 2 * R21 + 2 * R31 + 2 * c + 2 * R32 + 5),
            "u12": _uni(R12 - R21 - c, s1, 2 * R23 + 2 * R21 + 2 * R31 + 5),
        }
    if sector == 4:
        return {
            "b32": _lat(R23, s3, 0),
            "b31": _lat(R13, s3, 2 * R23 + 1),
            "u32": _uni(R32 - R23, s3, 2 * R13 + 2 * R23 + 2),
            "u31": _uni(R31 - R13, s3, 2 * R32 + 2 * R13 + 2),
            "b21": _lat(R21, s2, 2 * R32 + 2 * R31 + 2),
            "u12": _uni(R12 - R21, s1, 2 * R21 + 2 * R32 + 2 * R31 + 3),
        }
    if sector == 5:
        return {
            "b32": _lat(R32, s3, 0),
            "b31": _lat(R31, s3, 2 * R32 + 1),
            "b21": _lat(R12, s2, 2 * R32 + 2 * R31 + 2),
            "u23": _uni(R23 - R32, s2, 2 * R12 + 2 * R31 + 2 * R32 + 3),
            "u21": _uni(R21 - R12, s2, 2 * R12 + 2 * R31 + 2 * R23 + 3),
            "u13": _uni(R13 - R31, s1, 2 * R21 + 2 * R31 + 2 * R23 + 3),
        }
    if sector == 6:
        c = sub.cyc132
        return {
            "b32": _lat(R23, s3, 0),
            "b31": _lat(R31, s3, 2 * R23 + 1),
            "c32": _lat(c, s3, 2 * R23 + 2 * R31 + 2),
            "u32": _uni(R32 - R23 - c, s3, 2 * c + 2 * R23 + 2 * R31 + 3),
            "b21": _lat(R12, s2, 2 * R32 + 2 * R31 + 3),
            "c21": _lat(c, s2, 2 * R12 + 2 * R32 + 2 * R31 + 4),
            "u21": _uni(R21 - R12 - c, s2, 2 * R12 + 2 * R32 + 2 * c + 2 * R31 + 5),
            "u13": _uni(R13 - R31 - c, s1, 2 * R21 + 2 * R32 + 2 * R31 + 5),
        }
    if sector == 7:
        return {
            "b32": _lat(R32, s3, 0),
            "b31": _lat(R13, s3, 2 * R32 + 1),
            "u31": _uni(R31 - R13, s3, 2 * R13 + 2 * R32 + 2),
            "b21": _lat(R12, s2, 2 * R32 + 2 * R31 + 2),
            "u23": _uni(R23 - R32, s2, 2 * R12 + 2 * R31 + 2 * R32 + 3),
            "u21": _uni(R21 - R12, s2, 2 * R12 + 2 * R31 + 2 * R23 + 3),
        }
    if sector == 8:
        return {
            "b32": _lat(R23, s3, 0),
            "b31": _lat(R13, s3, 2 * R23 + 1),
            "u32": _uni(R32 - R23, s3, 2 * R13 + 2 * R23 + 2),
            "u31": _uni(R31 - R13, s3, 2 * R13 + 2 * R32 + 2),
            "b21": _lat(R12, s2, 2 * R32 + 2 * R31 + 2),
            "u21": _uni(R21 - R12, s2, 2 * R12 + 2 * R31 + 2 * R32 + 3),
        }
    raise ValueError(f"sector must be 1..8, got {sector}")


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def _scale(ratio: float, value: float) -> float:
    return 0.0 if ratio == 0 else ratio * value


# (linked, base, numerator user, denominator user): alpha_linked = (h_num²/h_den²) alpha_base
LINKS = (
    ("b12", "b21", 2, 1),
    ("b13", "b31", 3, 1),
    ("b23", "b32", 3, 2),
    ("c12", "c23", 2, 1),
    ("ct23", "c31", 3, 2),
    ("c13", "c32", 3, 1),
    ("ct13", "c21", 2, 1),
)


def with_links(cfg: ChannelConfig, base: dict) -> dict:
    """Complete a partial alpha map with zeros and the aligned partner powers."""
    alpha = {key: 0.0 for key in ALPHA_KEYS}
    alpha.update(base)
    h2 = [g * g for g in cfg.gains]
    for linked, src, a, b in LINKS:
        alpha[linked] = _scale(_ratio(h2[a - 1], h2[b - 1]), alpha[src])
    return alpha


def solve_betas(cfg: ChannelConfig, sub: SubrateAssignment) -> dict:
    """Relay power fractions meeting every downlink constraint with equality.

    Solved from the last stream decoded at user 1 back to the first decoded
    at user 3, so each stream sees exactly the later streams as interference.
    """
    snr = dict(zip((1, 2, 3), cfg.snr))
    rates = _beta_rates(sub)
    beta, later = {}, 0.0
    for user in (1, 2, 3):
        s = snr[user]
        for key in reversed(BETA_ORDER[user]):
            rate = rates[(user, key)]
            beta[(user, key)] = _over((2 ** (2 * rate) - 1) * (1 + later * s), s) if rate else 0.0
            later += beta[(user, key)]
    return {f"{key}@{user}": beta[(user, key)] for user in (3, 2, 1) for key in BETA_ORDER[user]}


def _beta_rates(sub: SubrateAssignment) -> dict:
    u = sub.uni
    return {
        (3, "u13"): u.r13, (3, "u23"): u.r23, (3, "c132"): sub.cyc132, (3, "c123"): sub.cyc123,
        (3, "b13"): sub.b13, (3, "b23"): sub.b23,
        (2, "u12"): u.r12, (2, "u32"): u.r32, (2, "c123"): sub.cyc123, (2, "c132"): sub.cyc132,
        (2, "b12"): sub.b12,
        (1, "u21"): u.r21, (1, "u31"): u.r31,
    }


def compute_beta_sigma(sub: SubrateAssignment, cfg: ChannelConfig) -> float:
    """Closed-form total relay power fraction."""
    s1, s2, s3 = cfg.snr
    u = sub.uni
    a = u.r13 + u.r23 + sub.cyc132 + sub.cyc123 + sub.b13 + sub.b23
    b = u.r12 + u.r32 + sub.cyc123 + sub.cyc132 + sub.b12
    c = u.r21 + u.r31
    return (
        _over(2 ** (2 * a) - 1, s3)
        + 2 ** (2 * a) * _over(2 ** (2 * b) - 1, s2)
        + 2 ** (2 * (a + b)) * _over(2 ** (2 * c) - 1, s1)
    )


class Infeasible(ValueError):
    pass


@dataclass
class PowerAllocation:
    cfg: ChannelConfig
    sector: int
    alpha: dict
    beta: dict
    literal: dict = field(default_factory=dict, repr=False)

    @property
    def sigma_sq(self) -> float:
        a, s3 = self.alpha, self.cfg.snr[2]
        return 1 + (2 * a["b32"] + 2 * a["b31"] + 2 * a["c31"] + 2 * a["c32"] + a["u32"] + a["u31"]) * s3

    @property
    def beta_sigma(self) -> float:
        return sum(self.beta.values())

    def source_sum(self, user: int) -> float:
        return sum(self.alpha[k] for k in SOURCE_STREAMS[user])

    def to_dict(self) -> dict:
        return {
            "sector": self.sector,
            "alpha": self.alpha,
            "beta": self.beta,
            "sigma_sq": self.sigma_sq,
            "beta_sigma": self.beta_sigma,
        }


def prune(alpha: dict, sub: SubrateAssignment) -> dict:
    return {k: (v if sub.stream_rate(k) > 0 else 0.0) for k, v in alpha.items()}


def allocate_powers(cfg: ChannelConfig, r: Sequence, sector: int | None = None) -> PowerAllocation:
    """Sector formulas, aligned partners, zero-rate pruning, then relay betas.

    ``sector`` defaults to :func:`classify_sector`; at ties any sector that
    contains ``r`` may be forced.
    """
    r = as_rates(r)
    if sector is None:
        sector = classify_sector(r)
    sub = assign_subrates(r, sector)
    if any(v > 0 for v in r) and (cfg.P == 0 or cfg.h1 == 0):
        raise Infeasible("positive rates need positive received power")
    s1, s2, s3 = cfg.snr
    literal = with_links(cfg, _case_alphas(sector, r, sub, s1, s2, s3))
    return PowerAllocation(cfg, sector, prune(literal, sub), solve_betas(cfg, sub), literal)


# --------------------------------------------------------------------------
# checks

@dataclass
class ValidationReport:
    nonnegative: bool
    source_margins: dict
    link_errors: dict
    beta_sigma_margin: float
    tol: float = TOL

    @property
    def valid(self) -> bool:
        return (
            self.nonnegative
            and all(m >= -self.tol for m in self.source_margins.values())
            and all(e <= 1e-12 for e in self.link_errors.values())
            and self.beta_sigma_margin >= -self.tol
        )

    def failures(self) -> list[str]:
        out = [] if self.nonnegative else ["negative power fraction"]
        out += [f"source {u} power" for u, m in self.source_margins.items() if m < -self.tol]
        out += [f"alignment {k}" for k, e in self.link_errors.items() if e > 1e-12]
        if self.beta_sigma_margin < -self.tol:
            out.append("relay power")
        return out

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "source_margins": {str(k): v for k, v in self.source_margins.items()},
            "link_errors": self.link_errors,
            "beta_sigma_margin": self.beta_sigma_margin,
            "failures": self.failures(),
        }


def validate_powers(alloc: PowerAllocation, tol: float = TOL) -> ValidationReport:
    values = list(alloc.alpha.values()) + list(alloc.beta.values())
    nonneg = all(v >= 0 and not math.isnan(v) for v in values)
    margins = {u: 1 - alloc.source_sum(u) for u in (1, 2, 3)}
    h2 = [g * g for g in alloc.cfg.gains]
    errors = {}
    for linked, src, a, b in LINKS:
        lhs = alloc.alpha[linked] * h2[b - 1]
        rhs = alloc.alpha[src] * h2[a - 1]
        scale = max(abs(lhs), abs(rhs))
        errors[f"{linked}~{src}"] = 0.0 if scale == 0 else abs(lhs - rhs) / scale
    return ValidationReport(nonneg, margins, errors, 1 - alloc.beta_sigma, tol)


@dataclass(frozen=True)
class Constraint:
    name: str
    rate: float
    rhs: float

    @property
    def active(self) -> bool:
        return self.rate > 0

    @property
    def slack(self) -> float:
        """Zero-rate constraints are inactive and report slack 0."""
        return self.rhs - self.rate if self.active else 0.0


@dataclass
class ConstraintReport:
    constraints: list[Constraint]
    tol: float = TOL

    @property
    def passed(self) -> bool:
        return all(c.slack >= -self.tol for c in self.constraints)

    @property
    def min_slack(self) -> float:
        return min(c.slack for c in self.constraints)

    def violated(self) -> list[str]:
        return [c.name for c in self.constraints if c.slack < -self.tol]

    def slacks(self) -> dict:
        return {c.name: c.slack for c in self.constraints}

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "constraints": [
                {"name": c.name, "rate": c.rate, "rhs": c.rhs, "slack": c.slack, "active": c.active}
                for c in self.constraints
            ],
        }


def _c(signal: float, noise: float) -> float:
    if signal == 0:
        return 0.0
    if math.isinf(signal) or noise <= 0:
        return math.inf
    return cap(signal / noise)


def uplink_constraints(cfg: ChannelConfig, sub: SubrateAssignment, alpha: dict) -> list[Constraint]:
    s1, s2, s3 = cfg.snr
    a = alpha
    u = sub.uni
    sig = 1 + (2 * a["b32"] + 2 * a["b31"] + 2 * a["c31"] + 2 * a["c32"] + a["u32"] + a["u31"]) * s3
    lat2 = 2 * (a["b21"] + a["c23"] + a["c21"]) * s2
    return [
        Constraint("up:u12", u.r12, _c(a["u12"] * s1, sig + lat2 + a["u13"] * s1 + (a["u21"] + a["u23"]) * s2)),
        Constraint("up:u13", u.r13, _c(a["u13"] * s1, sig + lat2 + (a["u21"] + a["u23"]) * s2)),
        Constraint("up:u21", u.r21, _c(a["u21"] * s2, sig + lat2 + a["u23"] * s2)),
        Constraint("up:u23", u.r23, _c(a["u23"] * s2, sig + lat2)),
        Constraint("up:c132@h2", sub.cyc132, _c(2 * a["c21"] * s2, sig + 2 * (a["b21"] + a["c23"]) * s2) - 0.5),
        Constraint("up:c123@h2", sub.cyc123, _c(2 * a["c23"] * s2, sig + 2 * a["b21"] * s2) - 0.5),
        Constraint("up:b12", sub.b12, _c(2 * a["b21"] * s2, sig) - 0.5),
        Constraint("up:u31", u.r31, _c(a["u31"] * s3, 1 + (2 * a["b32"] + 2 * a["b31"] + 2 * a["c31"] + 2 * a["c32"] + a["u32"]) * s3)),
        Constraint("up:u32", u.r32, _c(a["u32"] * s3, 1 + 2 * (a["b32"] + a["b31"] + a["c31"] + a["c32"]) * s3)),
        Constraint("up:c132@h3", sub.cyc132, _c(2 * a["c32"] * s3, 1 + 2 * (a["b32"] + a["b31"] + a["c31"]) * s3) - 0.5),
        Constraint("up:c123@h3", sub.cyc123, _c(2 * a["c31"] * s3, 1 + 2 * (a["b32"] + a["b31"]) * s3) - 0.5),
        Constraint("up:b13", sub.b13, _c(2 * a["b31"] * s3, 1 + 2 * a["b32"] * s3) - 0.5),
        Constraint("up:b23", sub.b23, _c(2 * a["b32"] * s3, 1) - 0.5),
    ]


def downlink_constraints(cfg: ChannelConfig, sub: SubrateAssignment, beta: dict) -> list[Constraint]:
    snr = dict(zip((1, 2, 3), cfg.snr))
    rates = _beta_rates(sub)
    out = []
    for user in (3, 2, 1):
        keys = BETA_ORDER[user]
        s = snr[user]
        for i, key in enumerate(keys):
            # streams decoded later here, plus everything meant for the stronger users
            rest = sum(beta[f"{k}@{user}"] for k in keys[i + 1 :])
            rest += sum(beta[f"{k}@{v}"] for v in range(user - 1, 0, -1) for k in BETA_ORDER[v])
            out.append(Constraint(f"down:{key}@{user}", rates[(user, key)], _c(beta[f"{key}@{user}"] * s, 1 + rest * s)))
    return out


def eval_rate_constraints(cfg: ChannelConfig, sub: SubrateAssignment, alloc: PowerAllocation) -> ConstraintReport:
    return ConstraintReport(uplink_constraints(cfg, sub, alloc.alpha) + downlink_constraints(cfg, sub, alloc.beta))


@dataclass
class AchievabilityReport:
    rates: RateTuple
    in_target: bool
    target_violations: list[str]
    sector: int | None = None
    subrates: SubrateAssignment | None = None
    allocation: PowerAllocation | None = None
    validation: ValidationReport | None = None
    constraints: ConstraintReport | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return (
            self.in_target
            and self.error is None
            and self.validation is not None
            and self.validation.valid
            and self.constraints is not None
            and self.constraints.passed
        )

    def failures(self) -> list[str]:
        out = [f"target {t}" for t in self.target_violations]
        if self.error:
            out.append(self.error)
        if self.validation is not None:
            out += self.validation.failures()
        if self.constraints is not None:
            out += self.constraints.violated()
        return out

    def to_dict(self) -> dict:
        return {
            "rates": list(self.rates),
            "verdict": "pass" if self.passed else "fail",
            "sector": self.sector,
            "in_target": self.in_target,
            "failures": self.failures(),
            "subrates": None if self.subrates is None else self.subrates.to_dict(),
            "alpha": None if self.allocation is None else self.allocation.alpha,
            "beta": None if self.allocation is None else self.allocation.beta,
            "beta_sigma": None if self.allocation is None else self.allocation.beta_sigma,
            "validation": None if self.validation is None else self.validation.to_dict(),
            "slacks": None if self.constraints is None else self.constraints.slacks(),
        }


def verify_achievability(cfg: ChannelConfig, r: Sequence, tol: float = TOL) -> AchievabilityReport:
    """Classify, split, allocate, validate and evaluate every decoding constraint.

    Passing also requires ``r`` to satisfy the shifted target inequalities,
    which is the region the closed forms are guaranteed to serve.
    """
    r = as_rates(r)
    target = build_inner_target_region(cfg)
    violations = [f"{i + 1}:{ineq.tag}" for i, ineq in enumerate(target) if ineq.slack(r) < -tol]
    if any(v < -tol for v in r):
        violations.append("non-negativity")
    report = AchievabilityReport(r, not violations, violations)
    if any(v < 0 for v in r):
        report.error = "negative rate"
        return report
    report.sector = classify_sector(r)
    report.subrates = assign_subrates(r, report.sector)
    try:
        alloc = allocate_powers(cfg, r)
    except Infeasible as exc:
        report.error = str(exc)
        return report
    report.allocation = alloc
    report.validation = validate_powers(alloc, tol)
    report.constraints = eval_rate_constraints(cfg, report.subrates, alloc)
    report.constraints.tol = tol
    return report


def in_target(cfg: ChannelConfig, r: Sequence, tol: float = TOL) -> bool:
    return contains(build_inner_target_region(cfg), r, tol)
