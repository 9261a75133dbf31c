"""Rate tuples, linear bound regions and the deterministic-channel bounds.

A region is the set ``{R >= 0 : coeffs . R <= rhs for every inequality}`` over
the six rates in canonical order (R12, R13, R21, R23, R31, R32).  Regions built
from integer levels carry exact ``Fraction``/``int`` right-hand sides so that
membership and integer enumeration involve no rounding.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .deterministic import DycParams

VARS = ("R12", "R13", "R21", "R23", "R31", "R32")
PAIRS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))
INDEX = {pair: i for i, pair in enumerate(PAIRS)}


class RateTuple(NamedTuple):
    r12: Real
    r13: Real
    r21: Real
    r23: Real
    r31: Real
    r32: Real

    def rate(self, j: int, k: int) -> Real:
        return self[INDEX[(j, k)]]

    def scaled(self, factor) -> "RateTuple":
        return RateTuple(*(factor * v for v in self))

    def is_integral(self) -> bool:
        return all(_is_integral(v) for v in self)


def _is_integral(value) -> bool:
    if isinstance(value, bool):
        return False
    if isinstance(value, (int, np.integer)):
        return True
    if isinstance(value, Fraction):
        return value.denominator == 1
    return False


def as_rates(values: Iterable, *, exact: bool = False) -> RateTuple:
    """Build a validated ``RateTuple``.

    With ``exact=True`` every entry must be an int, a ``Fraction`` or a string
    parseable by ``Fraction`` (``"3"``, ``"3/2"``, ``"0.5"``); integral
    fractions are normalized to ``int``.
    """
    vals = list(values)
    if len(vals) != 6:
        raise ValueError(f"a rate tuple has 6 components, got {len(vals)}")
    out = []
    for v in vals:
        if exact:
            if isinstance(v, float):
                raise TypeError(f"exact rates must be rational, got float {v!r}")
            v = Fraction(v) if not isinstance(v, (int, np.integer)) else int(v)
            if isinstance(v, Fraction) and v.denominator == 1:
                v = int(v)
        elif isinstance(v, str):
            v = float(Fraction(v))
        if v < 0:
            raise ValueError(f"rates must be non-negative, got {v}")
        out.append(v)
    return RateTuple(*out)


def parse_rates(text: str, *, exact: bool = False) -> RateTuple:
    """Parse ``"r12,r13,r21,r23,r31,r32"``; entries may be ints, decimals or ``p/q``."""
    parts = [p.strip() for p in text.split(",")]
    if exact:
        return as_rates(parts, exact=True)
    return as_rates([float(Fraction(p)) for p in parts])


@dataclass(frozen=True)
class Inequality:
    coeffs: tuple
    rhs: Real
    tag: str

    def lhs(self, r: Sequence) -> Real:
        return sum(c * v for c, v in zip(self.coeffs, r) if c)

    def slack(self, r: Sequence) -> Real:
        return self.rhs - self.lhs(r)

    def describe(self) -> str:
        terms = " + ".join(
            (name if c == 1 else f"{c}*{name}") for c, name in zip(self.coeffs, VARS) if c
        )
        return f"{terms} <= {self.rhs}"


def sum_bound(names: Iterable[str], rhs, tag: str) -> Inequality:
    """Inequality ``sum of the named rates <= rhs``."""
    coeffs = [0] * 6
    for name in names:
        coeffs[VARS.index(name)] += 1
    return Inequality(tuple(coeffs), rhs, tag)


def _tag(kind: str, names: Sequence[str]) -> str:
    return f"{kind}-{'+'.join(names)}"


@dataclass(frozen=True)
class LinearRegion:
    inequalities: tuple[Inequality, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        for ineq in self.inequalities:
            if len(ineq.coeffs) != 6:
                raise ValueError(f"inequality {ineq.tag!r} must have 6 coefficients")
            if any(c < 0 for c in ineq.coeffs):
                raise ValueError(f"inequality {ineq.tag!r} has a negative coefficient")

    def __len__(self) -> int:
        return len(self.inequalities)

    def __iter__(self):
        return iter(self.inequalities)

    def __and__(self, other: "LinearRegion") -> "LinearRegion":
        name = f"{self.name}&{other.name}" if self.name and other.name else self.name or other.name
        return LinearRegion(self.inequalities + other.inequalities, name)

    @property
    def rhs(self) -> tuple:
        return tuple(ineq.rhs for ineq in self.inequalities)

    def slacks(self, r: Sequence) -> list:
        return [ineq.slack(r) for ineq in self.inequalities]

    def violated(self, r: Sequence, tol=0) -> list[Inequality]:
        return [ineq for ineq in self.inequalities if ineq.slack(r) < -tol]

    def is_exact(self) -> bool:
        return all(
            isinstance(v, (int, Rational, np.integer)) and not isinstance(v, bool)
            for ineq in self.inequalities
            for v in (*ineq.coeffs, ineq.rhs)
        )

    def to_dict(self) -> dict:
        return {
            "vars": list(VARS),
            "inequalities": [
                {
                    "coeffs": [_json_number(c) for c in ineq.coeffs],
                    "rhs": _json_number(ineq.rhs, as_string=True),
                    "tag": ineq.tag,
                }
                for ineq in self.inequalities
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "LinearRegion":
        if list(data.get("vars", VARS)) != list(VARS):
            raise ValueError(f"region vars must be {list(VARS)}, got {data.get('vars')}")
        ineqs = []
        for item in data["inequalities"]:
            coeffs = tuple(_parse_number(c) for c in item["coeffs"])
            ineqs.append(Inequality(coeffs, _parse_number(item["rhs"]), item.get("tag", "")))
        return cls(tuple(ineqs))

    @classmethod
    def from_json(cls, text: str) -> "LinearRegion":
        return cls.from_dict(json.loads(text))


def _json_number(value, as_string: bool = False):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value)) if as_string else int(value)
    if isinstance(value, Fraction):
        if value.denominator == 1 and not as_string:
            return int(value)
        return str(value)
    return float(value)


def _parse_number(value):
    if isinstance(value, str):
        try:
            v = Fraction(value)
        except ValueError:
            return float(value)
        return int(v) if v.denominator == 1 else v
    if isinstance(value, float):
        return value
    return int(value)


def contains(region: LinearRegion, r: Sequence, tol=0) -> bool:
    """True iff ``r`` is non-negative and satisfies every inequality, both within ``tol``."""
    if len(r) != 6:
        raise ValueError(f"expected 6 rates, got {len(r)}")
    if any(v < -tol for v in r):
        return False
    return all(ineq.slack(r) >= -tol for ineq in region.inequalities)


# --------------------------------------------------------------------------
# deterministic-channel bounds

def build_single_rate_region(params: DycParams) -> LinearRegion:
    n = params.levels
    ineqs = [
        sum_bound([f"R{j}{k}"], min(n[j - 1], n[k - 1]), _tag("single", [f"R{j}{k}"]))
        for j, k in PAIRS
    ]
    return LinearRegion(tuple(ineqs), "single-rate")


def cutset_pair_bounds(params: DycParams, users: Iterable[int] = (1, 2, 3)) -> list[Inequality]:
    """Outgoing and incoming two-rate cut-set bounds around each user in ``users``."""
    n = params.levels
    out = []
    for j in users:
        k, l = (u for u in (1, 2, 3) if u != j)
        rhs = min(n[j - 1], max(n[k - 1], n[l - 1]))
        tx = [f"R{j}{k}", f"R{j}{l}"]
        rx = [f"R{k}{j}", f"R{l}{j}"]
        out.append(sum_bound(tx, rhs, _tag("cutset-tx", tx)))
        out.append(sum_bound(rx, rhs, _tag("cutset-rx", rx)))
    return out


def build_cutset_region(params: DycParams) -> LinearRegion:
    """All six two-rate cut-set bounds followed by the six single-rate bounds."""
    single = build_single_rate_region(params)
    return LinearRegion(tuple(cutset_pair_bounds(params)) + single.inequalities, "cutset")


def redundant_cutset_region(params: DycParams) -> LinearRegion:
    """The cut-set bounds around users 1 and 2, implied by the three-rate genie bounds."""
    return LinearRegion(tuple(cutset_pair_bounds(params, users=(1, 2))), "cutset-users12")


OUTER_D_ROWS = (
    ("cutset", ("R31", "R32"), 3),
    ("cutset", ("R13", "R23"), 3),
    ("genie-3rate", ("R12", "R32", "R13"), 2),
    ("genie-3rate", ("R12", "R32", "R31"), 1),
    ("genie-3rate", ("R21", "R31", "R32"), 2),
    ("genie-3rate", ("R21", "R31", "R23"), 2),
    ("genie-3rate", ("R13", "R23", "R12"), 2),
    ("genie-3rate", ("R13", "R23", "R21"), 1),
)


def build_outer_region_d(params: DycParams) -> LinearRegion:
    """The eight-inequality outer bound, which is the capacity region of the DYC."""
    n = params.levels
    ineqs = tuple(
        sum_bound(names, n[level - 1], _tag(kind, names)) for kind, names, level in OUTER_D_ROWS
    )
    return LinearRegion(ineqs, "outer-d")


# --------------------------------------------------------------------------
# integer points

class UnboundedRegionError(ValueError):
    pass


def _integer_system(region: LinearRegion) -> tuple[np.ndarray, np.ndarray]:
    """Scale every exact inequality to integer coefficients (same solution set)."""
    rows, rhs = [], []
    for ineq in region.inequalities:
        vals = [Fraction(v) for v in (*ineq.coeffs, ineq.rhs)]
        scale = math.lcm(*(v.denominator for v in vals))
        ints = [int(v * scale) for v in vals]
        rows.append(ints[:6])
        rhs.append(ints[6])
    return np.array(rows, dtype=np.int64).reshape(-1, 6), np.array(rhs, dtype=np.int64)


def variable_upper_bounds(region: LinearRegion) -> list[int]:
    """Largest integer value each rate can take given the others are >= 0."""
    bounds = []
    for i, name in enumerate(VARS):
        caps = [
            math.floor(Fraction(ineq.rhs) / Fraction(ineq.coeffs[i]))
            if region.is_exact()
            else math.floor(ineq.rhs / ineq.coeffs[i])
            for ineq in region.inequalities
            if ineq.coeffs[i] > 0
        ]
        if not caps:
            raise UnboundedRegionError(f"{name} is not bounded by any inequality")
        bounds.append(min(caps))
    return bounds


def integer_point_array(region: LinearRegion) -> np.ndarray:
    """All points of ``N^6`` inside ``region`` as an ``(m, 6)`` array in lexicographic order."""
    ub = variable_upper_bounds(region)
    if min(ub) < 0:
        return np.zeros((0, 6), dtype=np.int64)
    if region.is_exact():
        a, b = _integer_system(region)
    else:
        a = np.array([ineq.coeffs for ineq in region.inequalities], dtype=float).reshape(-1, 6)
        b = np.array([float(ineq.rhs) for ineq in region.inequalities], dtype=float)
    inner = np.stack(
        np.meshgrid(*(np.arange(u + 1) for u in ub[1:]), indexing="ij"), axis=-1
    ).reshape(-1, 5)
    chunks = []
    # outermost variable drives the partition; results are order-independent
    for first in range(ub[0] + 1):
        pts = np.concatenate([np.full((len(inner), 1), first), inner], axis=1)
        ok = np.all(pts @ a.T <= b, axis=1)
        chunks.append(pts[ok])
    return np.concatenate(chunks).astype(np.int64)


def integer_points(region: LinearRegion) -> set[RateTuple]:
    return {RateTuple(*map(int, row)) for row in integer_point_array(region)}


def grid_equal(a: LinearRegion, b: LinearRegion) -> bool:
    """True iff both regions contain exactly the same integer rate tuples."""
    pa, pb = integer_point_array(a), integer_point_array(b)
    return pa.shape == pb.shape and bool(np.array_equal(pa, pb))
