"""Random configurations, rate tuples and reproducible sweeps.

Every sample draws from its own generator seeded by ``(global seed, index)``,
so results do not depend on how samples are spread over workers.
"""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .allocation import SECTORS
from .gaussian import ChannelConfig, build_inner_target_region, build_outer_region_g, gap_check_batch, region_arrays
from .regions import VARS

SWEEP_HEADER = ("seed", "h1", "h2", "h3", "P") + VARS + ("min_slack", "verdict")


def sample_rng(seed: int, index: int) -> tuple[int, np.random.Generator]:
    """Per-sample generator and the 32-bit seed that reproduces it."""
    derived = int(np.random.SeedSequence([seed, index]).generate_state(1)[0])
    return derived, np.random.default_rng(derived)


def random_config(rng: np.random.Generator, hp_range: tuple[float, float] = (1e-2, 1e8)) -> ChannelConfig:
    """Log-uniform ``h_j²P`` in ``hp_range`` with random signs, at ``P = 1``."""
    lo, hi = hp_range
    snr = np.exp(rng.uniform(math.log(lo), math.log(hi), size=3))
    signs = rng.choice((-1.0, 1.0), size=3)
    return ChannelConfig.normalize(list(signs * np.sqrt(snr)), 1.0)


def random_target_config(rng: np.random.Generator, hp_range=(15.0, 1e8), max_tries: int = 10_000) -> ChannelConfig:
    """Random config whose shifted target inequalities all have rhs >= 0."""
    for _ in range(max_tries):
        cfg = random_config(rng, hp_range)
        if min(build_inner_target_region(cfg).rhs) >= 0:
            return cfg
    raise RuntimeError(f"no config with a non-empty target found in {max_tries} tries")


def random_direction(rng: np.random.Generator, sparsity: float = 0.3) -> np.ndarray:
    d = rng.exponential(size=6) * (rng.random(6) >= sparsity)
    if not d.any():
        d[rng.integers(6)] = 1.0
    return d


def order_for_sector(d: np.ndarray, sector: int) -> np.ndarray:
    """Swap entries within each (R12,R21), (R13,R31), (R23,R32) pair to match ``sector``."""
    d = d.copy()
    for (i, j), rel in zip(((0, 2), (1, 4), (3, 5)), SECTORS[sector]):
        hi, lo = max(d[i], d[j]), min(d[i], d[j])
        d[i], d[j] = (hi, lo) if rel == ">=" else (lo, hi)
    return d


def point_along(a: np.ndarray, b: np.ndarray, d: np.ndarray, frac: float) -> np.ndarray:
    """``t d`` with ``t = frac * t_max``, the largest step keeping ``A t d <= b``."""
    load = a @ d
    steps = np.full(len(b), np.inf)
    np.divide(b, load, out=steps, where=load > 0)
    t_max = max(0.0, float(steps.min()))
    if not math.isfinite(t_max):
        raise ValueError("direction is unbounded in the region")
    return frac * t_max * d


def sample_in_region(rng, a, b, count: int, boundary_share: float = 0.1, sectors: Sequence[int] | None = None):
    """``count`` points of ``{r >= 0 : A r <= b}`` from random rays, some on the boundary."""
    out = np.empty((count, 6))
    for i in range(count):
        d = random_direction(rng)
        if sectors is not None:
            d = order_for_sector(d, sectors[i % len(sectors)])
        frac = 1.0 if rng.random() < boundary_share else rng.random()
        out[i] = point_along(a, b, d, frac)
    return out


@dataclass(frozen=True)
class SweepRecord:
    seed: int
    cfg: ChannelConfig
    rates: tuple[float, ...]
    min_slack: float
    verdict: str

    def row(self) -> list:
        return [self.seed, *(repr(float(v)) for v in (*self.cfg.gains, self.cfg.P)),
                *(repr(float(v)) for v in self.rates), repr(float(self.min_slack)), self.verdict]


def gap_sample(seed: int, index: int, tuples: int = 1, hp_range=(1e-2, 1e8)) -> list[SweepRecord]:
    """One random config and ``tuples`` random points of its outer bound, gap-checked."""
    derived, rng = sample_rng(seed, index)
    cfg = random_config(rng, hp_range)
    a, b = region_arrays(build_outer_region_g(cfg))
    rates = sample_in_region(rng, a, b, tuples)
    passed, slack = gap_check_batch(cfg, rates)
    return [
        SweepRecord(derived, cfg, tuple(r), s, "pass" if p else "fail")
        for r, s, p in zip(rates, slack, passed)
    ]


def worker_count() -> int:
    cpus = os.cpu_count() or 1
    env = os.environ.get("YCHL_THREADS")
    if env:
        try:
            cap_ = int(env)
        except ValueError:
            raise ValueError(f"YCHL_THREADS must be a positive integer, got {env!r}") from None
        if cap_ < 1:
            raise ValueError(f"YCHL_THREADS must be a positive integer, got {env!r}")
        return min(cpus, cap_)
    return cpus


def _call(args):
    fn, seed, index, kwargs = args
    return fn(seed, index, **kwargs)


def run_indexed(fn: Callable, seed: int, count: int, workers: int | None = None, **kwargs) -> list:
    """``[fn(seed, i, **kwargs) for i in range(count)]``, optionally across processes."""
    workers = worker_count() if workers is None else workers
    jobs = [(fn, seed, i, kwargs) for i in range(count)]
    if workers <= 1 or count < 2:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, jobs, chunksize=max(1, count // (4 * workers))))


def sweep_gap(samples: int, seed: int, hp_range=(1e-2, 1e8), workers: int | None = None) -> list[SweepRecord]:
    nested = run_indexed(gap_sample, seed, samples, workers, hp_range=tuple(hp_range))
    return [rec for group in nested for rec in group]


def write_sweep(records: Iterable[SweepRecord], out) -> None:
    """Write records as CSV to a path or text stream, in the given order."""
    if isinstance(out, (str, os.PathLike)):
        with open(out, "w", newline="") as fh:
            write_sweep(records, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for rec in records:
        writer.writerow(rec.row())


def sweep_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    write_sweep(records, buf)
    return buf.getvalue()
