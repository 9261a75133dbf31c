"""Capacity-achieving level assignment for the deterministic Y-channel.

A rate tuple is served in three stages, each consuming relay levels:

* bi-directional pairs, one level per exchanged bit pair;
* at most one 3-cycle, two levels per three bits (the middle user repeats);
* the uni-directional remainder, one level per bit.

Levels use the relay enumeration of :mod:`ychl.deterministic` (level 1 is
seen by everyone in both directions).  Bi-directional and cyclic chunks use
the same level in the uplink and the downlink, so after those stages the free
uplink and downlink level sets coincide and the uni-directional stage works on
a reduced channel given by the free-level counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .deterministic import (
    DycParams,
    RelayMap,
    apply_relay_map,
    downlink_receive,
    read_downlink_level,
    transmit_position,
    uplink_receive,
)
from .regions import PAIRS, RateTuple, as_rates, build_outer_region_d, contains

MAX_SCALED_LEVEL = 64


class Infeasible(Exception):
    """Raised when the planner runs out of relay levels."""

    def __init__(self, resource: str):
        super().__init__(f"out of relay levels: {resource}")
        self.resource = resource


def _require_integral(r: Sequence) -> RateTuple:
    vals = []
    for v in r:
        if isinstance(v, Fraction) and v.denominator == 1:
            v = int(v)
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise TypeError(f"integer rates required, got {v!r}")
        vals.append(int(v))
    return as_rates(vals, exact=True)


@dataclass(frozen=True)
class RateSplit:
    bidir: tuple[int, int, int]  # (R12b, R13b, R23b)
    cyc123: int
    cyc132: int
    uni: RateTuple

    def bidir_tuple(self) -> RateTuple:
        b12, b13, b23 = self.bidir
        return RateTuple(b12, b13, b12, b23, b13, b23)

    def cyclic_tuple(self) -> RateTuple:
        c, d = self.cyc123, self.cyc132
        # 1->2->3->1 feeds R12, R23, R31; 1->3->2->1 feeds R13, R32, R21
        return RateTuple(c, d, d, c, c, d)

    def total(self) -> RateTuple:
        return RateTuple(
            *(b + c + u for b, c, u in zip(self.bidir_tuple(), self.cyclic_tuple(), self.uni))
        )

    def part_offsets(self, j: int, k: int) -> tuple[int, int]:
        """First bit index of the cyclic part and of the uni part of message ``m_jk``."""
        i = PAIRS.index((j, k))
        b = self.bidir_tuple()[i]
        return b, b + self.cyclic_tuple()[i]


def split_rates(r: Sequence) -> RateSplit:
    """Pairwise minima, then the cyclic minimum, then the uni-directional remainder."""
    r = _require_integral(r)
    b12 = min(r.r12, r.r21)
    b13 = min(r.r13, r.r31)
    b23 = min(r.r23, r.r32)
    p = RateTuple(r.r12 - b12, r.r13 - b13, r.r21 - b12, r.r23 - b23, r.r31 - b13, r.r32 - b23)
    c123 = min(p.r12, p.r23, p.r31)
    c132 = min(p.r13, p.r32, p.r21)
    uni = RateTuple(
        p.r12 - c123, p.r13 - c132, p.r21 - c132, p.r23 - c123, p.r31 - c123, p.r32 - c132
    )
    return RateSplit((b12, b13, b23), c123, c132, uni)


@dataclass(frozen=True)
class ReducedParams:
    n1p: int
    n2p: int
    n3p: int
    n1pp: int
    n2pp: int
    n3pp: int

    @property
    def after_bidir(self) -> tuple[int, int, int]:
        return (self.n1p, self.n2p, self.n3p)

    @property
    def after_cyclic(self) -> tuple[int, int, int]:
        return (self.n1pp, self.n2pp, self.n3pp)


def reduce_params(params: DycParams, split: RateSplit) -> ReducedParams:
    """Levels left after the bi-directional stage and after the cyclic stage."""
    n1, n2, n3 = params.levels
    b12, b13, b23 = split.bidir
    used = b12 + b13 + b23
    n1p, n2p = n1 - used, n2 - used
    n3p = min(n3 - b13 - b23, n2p)
    c = split.cyc123 + split.cyc132
    n1pp, n2pp = n1p - 2 * c, n2p - 2 * c
    n3pp = min(n3p - c, n2pp)
    out = ReducedParams(n1p, n2p, n3p, n1pp, n2pp, n3pp)
    if min(out.after_bidir + out.after_cyclic) < 0:
        raise ValueError(f"negative level count {out}; the tuple lies outside the outer bound")
    return out


@dataclass(frozen=True)
class Chunk:
    """A block of consecutive relay levels carrying one superposition.

    Bit ``i`` of the chunk travels on uplink level ``uplink[0] + i`` and is
    forwarded on downlink level ``downlink[0] + i``; it carries the XOR of
    ``m_src,dst[offset + i]`` over ``carries``.
    """

    id: str
    kind: str
    users: tuple[int, ...]
    rate: int
    uplink: tuple[int, int]
    downlink: tuple[int, int]
    carries: tuple[tuple[int, int, int], ...]

    def uplink_levels(self) -> range:
        return range(self.uplink[0], self.uplink[1] + 1)

    def downlink_levels(self) -> range:
        return range(self.downlink[0], self.downlink[1] + 1)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "users": list(self.users),
            "rate": self.rate,
            "uplink_levels": list(self.uplink),
            "downlink_levels": list(self.downlink),
            "carries": [list(c) for c in self.carries],
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Chunk":
        return cls(
            d["id"],
            d["kind"],
            tuple(d["users"]),
            int(d["rate"]),
            tuple(d["uplink_levels"]),
            tuple(d["downlink_levels"]),
            tuple(tuple(c) for c in d["carries"]),
        )


@dataclass(frozen=True)
class LevelPlan:
    params: DycParams
    rates: RateTuple
    split: RateSplit
    chunks: tuple[Chunk, ...]
    relay_map: RelayMap
    reduced: ReducedParams | None = field(default=None, compare=False)

    def uplink_levels_used(self) -> list[int]:
        return sorted(lvl for c in self.chunks for lvl in c.uplink_levels())

    def downlink_levels_used(self) -> list[int]:
        return sorted(lvl for c in self.chunks for lvl in c.downlink_levels())

    def to_dict(self) -> dict:
        return {
            "levels": list(self.params.levels),
            "rates": [int(v) for v in self.rates],
            "streams": [c.to_dict() for c in self.chunks],
            "relay_map": self.relay_map.pairs(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "LevelPlan":
        params = DycParams(*d["levels"])
        rates = _require_integral(d["rates"])
        chunks = tuple(Chunk.from_dict(c) for c in d["streams"])
        return cls(params, rates, split_rates(rates), chunks, RelayMap.from_pairs(params.q, d["relay_map"]))


class _FreeLevels:
    """Ascending list of unused relay levels, addressed by reduced (1-based) index."""

    def __init__(self, levels: Iterable[int]):
        self.levels = sorted(levels)

    def count_upto(self, n: int) -> int:
        return sum(1 for lvl in self.levels if lvl <= n)

    def reduced(self, params: DycParams) -> tuple[int, int, int]:
        return tuple(self.count_upto(n) for n in params.levels)

    def take(self, reduced_idx: Sequence[int]) -> list[int]:
        chosen = [self.levels[i - 1] for i in reduced_idx]
        taken = set(chosen)
        self.levels = [lvl for lvl in self.levels if lvl not in taken]
        return chosen


def _runs(up: Sequence[int], down: Sequence[int]) -> list[tuple[int, int]]:
    """Split paired level lists into ``(start, stop)`` index ranges where both are consecutive."""
    runs, start = [], 0
    for i in range(1, len(up) + 1):
        if i == len(up) or up[i] != up[i - 1] + 1 or down[i] != down[i - 1] + 1:
            runs.append((start, i))
            start = i
    return runs


def build_plan(params: DycParams, r: Sequence) -> LevelPlan:
    """Assign relay levels to every stream of the integer tuple ``r``.

    Raises :class:`Infeasible` naming the first exhausted resource.  For
    integer tuples this happens exactly when ``r`` lies outside the outer
    bound; the tests check that equivalence exhaustively rather than assuming
    it here.
    """
    r = _require_integral(r)
    split = split_rates(r)
    n1, n2, n3 = params.levels
    free = _FreeLevels(range(1, params.q + 1))
    chunks: list[Chunk] = []
    mapping: dict[int, int] = {}

    def add(chunk_id, kind, users, up, down, carries):
        for u, d in zip(up, down):
            mapping[u] = d
        for a, b in _runs(up, down):
            suffix = "" if (a, b) == (0, len(up)) else f".{a}"
            chunks.append(
                Chunk(
                    chunk_id + suffix,
                    kind,
                    users,
                    b - a,
                    (up[a], up[b - 1]),
                    (down[a], down[b - 1]),
                    tuple((s, t, off + a) for s, t, off in carries),
                )
            )

    # bi-directional pairs: 1<->3 then 2<->3 from the bottom, 1<->2 at the top of the n2 band
    b12, b13, b23 = split.bidir
    if b13 + b23 > n3:
        raise Infeasible("bi-directional: levels 1..n3 seen by user 3")
    if b12 + b13 + b23 > n2:
        raise Infeasible("bi-directional: levels 1..n2 seen by users 1 and 2")
    for (j, k), idx in (
        ((1, 3), range(1, b13 + 1)),
        ((2, 3), range(b13 + 1, b13 + b23 + 1)),
        ((1, 2), range(n2 - b12 + 1, n2 + 1)),
    ):
        if len(idx):
            lv = free.take([free.levels.index(i) + 1 for i in idx])
            add(f"b{j}{k}", "bidir", (j, k), lv, lv, ((j, k, 0), (k, j, 0)))
    n1p, n2p, n3p = free.reduced(params)

    # cyclic: one chunk in 1..n3' shared with user 3, one at the top of 1..n2'
    c = split.cyc123 + split.cyc132
    if c:
        if c > n3p:
            raise Infeasible("cyclic: reduced levels 1..n3' seen by user 3")
        if 2 * c > n2p:
            raise Infeasible("cyclic: reduced levels 1..n2' seen by users 1 and 2")
        hi = free.take(range(n2p - c + 1, n2p + 1))
        lo = free.take(range(1, c + 1))
        if split.cyc123:
            off12, off23, off31 = (split.part_offsets(*p)[0] for p in ((1, 2), (2, 3), (3, 1)))
            add("c123-hi", "cyc123", (1, 2), hi, hi, ((1, 2, off12), (2, 3, off23)))
            add("c123-lo", "cyc123", (2, 3), lo, lo, ((2, 3, off23), (3, 1, off31)))
        else:
            off13, off21, off32 = (split.part_offsets(*p)[0] for p in ((1, 3), (2, 1), (3, 2)))
            add("c132-hi", "cyc132", (1, 2), hi, hi, ((1, 3, off13), (2, 1, off21)))
            add("c132-lo", "cyc132", (1, 3), lo, lo, ((1, 3, off13), (3, 2, off32)))
    reduced_pp = free.reduced(params)

    # uni-directional: most constrained end first, lowest free levels first
    streams = [(j, k, split.uni[i]) for i, (j, k) in enumerate(PAIRS) if split.uni[i]]
    npp = dict(zip((1, 2, 3), reduced_pp))
    up_idx = _greedy_prefix(streams, npp, end=0, what="uplink")
    down_idx = _greedy_prefix(streams, npp, end=1, what="downlink")
    up_levels = {key: [free.levels[i - 1] for i in idx] for key, idx in up_idx.items()}
    down_levels = {key: [free.levels[i - 1] for i in idx] for key, idx in down_idx.items()}
    for j, k, _ in streams:
        off = split.part_offsets(j, k)[1]
        add(f"u{j}{k}", "uni", (j, k), up_levels[(j, k)], down_levels[(j, k)], ((j, k, off),))

    reduced = ReducedParams(n1p, n2p, n3p, *reduced_pp)
    chunks.sort(key=lambda ch: (ch.uplink[0], ch.id))
    return LevelPlan(params, r, split, tuple(chunks), RelayMap(params.q, mapping), reduced)


def _greedy_prefix(streams, npp, end: int, what: str) -> dict[tuple[int, int], list[int]]:
    """Nested-window assignment: user ``u`` may only use reduced levels ``1..npp[u]``."""
    order = sorted(streams, key=lambda s: (npp[s[end]], PAIRS.index((s[0], s[1]))))
    out, used = {}, 0
    for j, k, width in order:
        user = (j, k)[end]
        if used + width > npp[user]:
            raise Infeasible(f"uni-directional {what}: reduced levels 1..n{user}'' of user {user}")
        out[(j, k)] = list(range(used + 1, used + width + 1))
        used += width
    return out


def expand_rational(params: DycParams, r: Sequence) -> tuple[int, DycParams, RateTuple]:
    """Blow a rational tuple up over ``Q`` channel uses so that it becomes integral.

    ``Q`` is the least common multiple of the denominators.
    """
    r = as_rates(r, exact=True)
    if not contains(build_outer_region_d(params), r):
        raise ValueError(f"{tuple(map(str, r))} lies outside the outer bound of {params}")
    q_factor = math.lcm(*(Fraction(v).denominator for v in r))
    if q_factor * params.n1 > MAX_SCALED_LEVEL:
        raise ValueError(
            f"expansion needs Q={q_factor}, giving {q_factor * params.n1} levels (> {MAX_SCALED_LEVEL})"
        )
    scaled = RateTuple(*(int(Fraction(v) * q_factor) for v in r))
    return q_factor, params.scaled(q_factor), scaled


# --------------------------------------------------------------------------
# simulation

@dataclass
class DecodingReport:
    payloads: int
    errors: dict[tuple[int, int], int]
    failed_payloads: int

    @property
    def ok(self) -> bool:
        return self.failed_payloads == 0

    @property
    def decoded(self) -> int:
        return self.payloads - self.failed_payloads

    def to_dict(self) -> dict:
        return {
            "payloads": self.payloads,
            "decoded": self.decoded,
            "errors": {f"R{j}{k}": n for (j, k), n in self.errors.items()},
            "ok": self.ok,
        }


def _decode_recipes(plan: LevelPlan, user: int) -> dict:
    """Peel the plan's level contents into XOR recipes for ``user``'s wanted bits.

    Each recipe is ``(downlink levels to read, own message bits)``; the wanted
    bit is the XOR of both.  Only downlink levels visible to ``user`` are used.
    """
    n = plan.params.level(user)
    pending = []
    for ch in plan.chunks:
        for i, level in enumerate(ch.downlink_levels()):
            if level <= n:
                bits = frozenset((s, t, off + i) for s, t, off in ch.carries)
                pending.append((level, bits))
    learned: dict[tuple[int, int, int], tuple[frozenset, frozenset]] = {}

    def known(bit):
        return bit[0] == user or bit in learned

    progress = True
    while progress:
        progress = False
        for level, bits in pending:
            unknown = [b for b in bits if not known(b)]
            if len(unknown) != 1:
                continue
            levels, own = frozenset({level}), frozenset()
            for b in bits:
                if b == unknown[0]:
                    continue
                if b[0] == user:
                    own ^= {b}
                else:
                    levels ^= learned[b][0]
                    own ^= learned[b][1]
            learned[unknown[0]] = (levels, own)
            progress = True
    return learned


def simulate_end_to_end(
    params: DycParams, plan: LevelPlan, messages: Mapping[tuple[int, int], np.ndarray]
) -> DecodingReport:
    """Push ``messages`` through encoder, channel, relay map and decoders.

    ``messages[(j, k)]`` holds the bits of ``m_jk`` with shape
    ``(payloads, R_jk)``; all six entries share the leading axis.
    """
    if params != plan.params:
        raise ValueError(f"plan was built for {plan.params}, not {params}")
    q = params.q
    msgs = {}
    batch = None
    for i, (j, k) in enumerate(PAIRS):
        arr = np.asarray(messages.get((j, k), np.zeros((0, 0))), dtype=np.uint8)
        if arr.ndim == 1:
            arr = arr[None, :]
        rate = int(plan.rates[i])
        if arr.shape[-1] != rate and not (rate == 0 and arr.size == 0):
            raise ValueError(f"payload for m{j}{k} has {arr.shape[-1]} bits, plan expects {rate}")
        if rate:
            if batch is not None and arr.shape[0] != batch:
                raise ValueError("all payload arrays must have the same number of rows")
            batch = arr.shape[0]
        msgs[(j, k)] = arr
    batch = batch or 1
    for key, arr in msgs.items():
        if arr.size == 0:
            msgs[key] = np.zeros((batch, 0), dtype=np.uint8)

    x = {u: np.zeros((batch, q), dtype=np.uint8) for u in (1, 2, 3)}
    for ch in plan.chunks:
        for i, level in enumerate(ch.uplink_levels()):
            for s, t, off in ch.carries:
                pos = transmit_position(params, s, level)
                if pos is not None:
                    x[s][:, pos] ^= msgs[(s, t)][:, off + i]
    y_r = uplink_receive(params, x[1], x[2], x[3])
    x_r = apply_relay_map(plan.relay_map, y_r)

    errors = {}
    failed = np.zeros(batch, dtype=bool)
    for user in (1, 2, 3):
        y = downlink_receive(params, x_r, user)
        recipes = _decode_recipes(plan, user)
        for s in (1, 2, 3):
            if s == user:
                continue
            want = msgs[(s, user)]
            bad = np.zeros(batch, dtype=bool)
            for t in range(want.shape[1]):
                recipe = recipes.get((s, user, t))
                if recipe is None:
                    bad[:] = True
                    continue
                est = np.zeros(batch, dtype=np.uint8)
                for level in recipe[0]:
                    est ^= read_downlink_level(params, y, user, level)
                for a, b, idx in recipe[1]:
                    est ^= msgs[(a, b)][:, idx]
                bad |= est != want[:, t]
            errors[(s, user)] = int(bad.sum())
            failed |= bad
    errors = {pair: errors[pair] for pair in PAIRS}
    return DecodingReport(batch, errors, int(failed.sum()))


def _split_payload_bits(plan: LevelPlan, bits: np.ndarray) -> dict:
    out, col = {}, 0
    for i, pair in enumerate(PAIRS):
        rate = int(plan.rates[i])
        out[pair] = bits[:, col : col + rate]
        col += rate
    return out


def exhaustive_payloads(plan: LevelPlan, max_bits: int = 20) -> dict:
    """Every combination of message bits, one payload per row."""
    total = sum(int(v) for v in plan.rates)
    if total > max_bits:
        raise ValueError(f"{total} payload bits is too many for exhaustive simulation")
    codes = np.arange(1 << total, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(total)[::-1]) & 1).astype(np.uint8)
    return _split_payload_bits(plan, bits)


def random_payloads(plan: LevelPlan, trials: int, seed: int | None = None) -> dict:
    total = sum(int(v) for v in plan.rates)
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(trials, total), dtype=np.uint8)
    return _split_payload_bits(plan, bits)


def simulate_exhaustive(plan: LevelPlan) -> DecodingReport:
    return simulate_end_to_end(plan.params, plan, exhaustive_payloads(plan))
