"""Exact path simulation for centered compound-Poisson (+ diffusion) models.

A realization is stored as a :class:`JumpRecord`: sorted jump times with
sizes over a horizon.  Everything downstream (scaled paths, suprema,
coupled paths) is evaluated from that one record, so a single realization
can serve every prefix of a whole schedule without re-simulation.

Jump times are sampled as sorted uniforms given a Poisson count, which is
exact for a homogeneous Poisson process.  A jump at exactly time t counts
in V(t) (cadlag convention).  The Brownian component, when present, is
pre-sampled on a fine uniform grid and linearly interpolated in between;
that is an approximation and exact suprema are refused for such models.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .model import LevyModel

__all__ = [
    "RngProvenance",
    "derive_rng",
    "JumpRecord",
    "PathGrid",
    "UnsupportedForDiffusion",
    "sample_jumps",
    "path_value",
    "scale_path",
    "exact_sup",
    "abs_sup_before",
    "build_coupled_path",
    "simulate_wiener",
    "sample_v_values",
    "export_jumps_csv",
]


class UnsupportedForDiffusion(ValueError):
    """Raised by exact-supremum operations when the model has a diffusion part."""


@dataclass(frozen=True)
class RngProvenance:
    """Deterministic stream id: (master seed, experiment tag, replica index)."""

    master_seed: int
    tag: str = "default"
    index: int = 0

    def __post_init__(self):
        if self.master_seed < 0 or self.index < 0:
            raise ValueError("master_seed and index must be >= 0")


def derive_rng(provenance: RngProvenance) -> np.random.Generator:
    """Fresh generator for a stream id; same id always gives the same stream."""
    key = zlib.crc32(provenance.tag.encode("utf-8"))
    ss = np.random.SeedSequence([provenance.master_seed, key, provenance.index])
    return np.random.default_rng(ss)


def _as_provenance(seed) -> RngProvenance:
    if isinstance(seed, RngProvenance):
        return seed
    return RngProvenance(int(seed))


@dataclass(frozen=True)
class PathGrid:
    """A path sampled at x_j = j/m, j = 0..m, on [0, 1]."""

    m: int
    values: np.ndarray

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.m + 1,):
            raise ValueError(f"values must have length m+1 = {self.m + 1}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class JumpRecord:
    """One exact realization of the jump part of V over [0, horizon].

    ``jump_times`` is strictly increasing with values in (0, horizon].
    ``diffusion_times``/``diffusion_values`` hold the pre-sampled Brownian
    component at fixed grid nodes (both None for pure-jump models).
    """

    horizon: float
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    model: LevyModel
    provenance: RngProvenance
    diffusion_times: np.ndarray | None = None
    diffusion_values: np.ndarray | None = None
    _cumsum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be > 0")
        times = np.asarray(self.jump_times, dtype=float)
        sizes = np.asarray(self.jump_sizes, dtype=float)
        if times.shape != sizes.shape or times.ndim != 1:
            raise ValueError("jump_times and jump_sizes must be equal-length 1-d arrays")
        if times.size and (times[0] <= 0 or times[-1] > self.horizon):
            raise ValueError("jump times must lie in (0, horizon]")
        if times.size > 1 and np.any(np.diff(times) < 0):
            raise ValueError("jump times must be sorted")
        for arr in (times, sizes):
            arr.setflags(write=False)
        object.__setattr__(self, "jump_times", times)
        object.__setattr__(self, "jump_sizes", sizes)
        csum = np.concatenate([[0.0], np.cumsum(sizes)])
        csum.setflags(write=False)
        object.__setattr__(self, "_cumsum", csum)

    @property
    def jump_count(self) -> int:
        return int(self.jump_times.size)

    def digest(self) -> str:
        """Stable hash of the realization, for report provenance."""
        import hashlib

        h = hashlib.sha256()
        h.update(np.float64(self.horizon).tobytes())
        h.update(self.jump_times.tobytes())
        h.update(self.jump_sizes.tobytes())
        if self.diffusion_values is not None:
            h.update(self.diffusion_values.tobytes())
        return h.hexdigest()[:16]


def sample_jumps(
    model: LevyModel,
    horizon: float,
    seed,
    diffusion_steps: int = 4096,
) -> JumpRecord:
    """Draw one realization over (0, horizon]; fully determined by the seed.

    Jump count ~ Poisson(rate * horizon); times are sorted uniforms on
    (0, horizon]; sizes are i.i.d. from the model's jump law.  Draw order is
    fixed (count, times, sizes, diffusion) so identical seeds give identical
    records.
    """
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    prov = _as_provenance(seed)
    rng = derive_rng(prov)
    count = int(rng.poisson(model.rate * horizon))
    times = np.sort(horizon * (1.0 - rng.random(count)))  # values in (0, horizon]
    sizes = model.jump_law.sample(count, rng)
    diff_t = diff_v = None
    if model.diffusion_sd > 0:
        diff_t = np.linspace(0.0, horizon, diffusion_steps + 1)
        incs = rng.normal(0.0, model.diffusion_sd * np.sqrt(horizon / diffusion_steps), diffusion_steps)
        diff_v = np.concatenate([[0.0], np.cumsum(incs)])
    return JumpRecord(
        horizon=horizon,
        jump_times=times,
        jump_sizes=sizes,
        model=model,
        provenance=prov,
        diffusion_times=diff_t,
        diffusion_values=diff_v,
    )


def _check_in_horizon(record: JumpRecord, t: np.ndarray, lo: float = 0.0):
    if np.any(t < lo) or np.any(t > record.horizon):
        raise ValueError(
            f"time outside [{lo}, horizon]: need horizon >= {float(np.max(t))}, "
            f"record has {record.horizon}"
        )


def path_value(record: JumpRecord, t):
    """V(t): jumps with time <= t, plus drift*t, plus diffusion if present.

    Right-continuous: a jump at exactly t is included.  Accepts a scalar or
    an array of times in [0, horizon].
    """
    t_arr = np.asarray(t, dtype=float)
    _check_in_horizon(record, t_arr)
    idx = np.searchsorted(record.jump_times, t_arr, side="right")
    out = record._cumsum[idx] + record.model.drift * t_arr
    if record.diffusion_values is not None:
        out = out + np.interp(t_arr, record.diffusion_times, record.diffusion_values)
    return float(out) if t_arr.ndim == 0 else out


def scale_path(record: JumpRecord, t: float, m: int) -> PathGrid:
    """Scaled path X_t on a grid: values[j] = V(t*j/m) / sqrt(t)."""
    if t <= 0:
        raise ValueError("t must be > 0")
    if t > record.horizon:
        raise ValueError(f"scaling time {t} needs horizon >= {t}, record has {record.horizon}")
    if m < 1:
        raise ValueError("m must be >= 1")
    xs = np.arange(m + 1) / m
    values = path_value(record, t * xs) / np.sqrt(t)
    return PathGrid(m=m, values=values)


def _jump_extrema(record: JumpRecord):
    """Right values and left limits of the jump path at each jump time."""
    d = record.model.drift
    right = record._cumsum[1:] + d * record.jump_times
    left = right - record.jump_sizes
    return right, left


def exact_sup(record: JumpRecord, t):
    """sup over x in [0,1] of X_t(x) = V(t*x)/sqrt(t), exact for pure-jump paths.

    Between jumps the path is linear, so the supremum is attained at segment
    endpoints: candidates are 0, V at each jump time <= t, the left limits
    there, and V(t).  Accepts a scalar or an array of times in (0, horizon]
    (prefix suprema for a whole schedule come from one running maximum).
    """
    if record.model.diffusion_sd > 0:
        raise UnsupportedForDiffusion(
            "exact supremum is only defined for pure-jump models; use a dense grid"
        )
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("t must be > 0")
    _check_in_horizon(record, t_arr)

    right, left = _jump_extrema(record)
    best = np.maximum(right, left)
    idx = np.searchsorted(record.jump_times, t_arr, side="right")
    if best.size:
        run_best = np.maximum.accumulate(best)
        jump_best = np.where(idx > 0, run_best[np.maximum(idx - 1, 0)], -np.inf)
    else:
        jump_best = np.full_like(t_arr, -np.inf)
    endpoint = record._cumsum[idx] + record.model.drift * t_arr
    sup = np.maximum(0.0, np.maximum(jump_best, endpoint)) / np.sqrt(t_arr)
    return float(sup) if t_arr.ndim == 0 else sup


def abs_sup_before(record: JumpRecord, t):
    """sup over u in [0, t) of |V(u)| for pure-jump paths (left-open at t).

    The candidates are 0, both one-sided values at each jump time < t, and
    the left limit at t itself.  Accepts a scalar or array of times.
    """
    if record.model.diffusion_sd > 0:
        raise UnsupportedForDiffusion(
            "exact supremum is only defined for pure-jump models; use a dense grid"
        )
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("t must be > 0")
    _check_in_horizon(record, t_arr)

    right, left = _jump_extrema(record)
    mags = np.maximum(np.abs(right), np.abs(left))
    idx = np.searchsorted(record.jump_times, t_arr, side="left")  # jumps strictly before t
    if mags.size:
        run_mags = np.maximum.accumulate(mags)
        jump_best = np.where(idx > 0, run_mags[np.maximum(idx - 1, 0)], 0.0)
    else:
        jump_best = np.zeros_like(t_arr)
    left_limit = np.abs(record._cumsum[idx] + record.model.drift * t_arr)
    out = np.maximum(jump_best, left_limit)
    return float(out) if t_arr.ndim == 0 else out


def build_coupled_path(record: JumpRecord, s_l: float, s_k: float, m: int) -> PathGrid:
    """Path that zeroes the [0, s_l/s_k) prefix and re-anchors the remainder.

    values[j] = 0 where j/m < s_l/s_k, otherwise
    V(s_k*j/m)/sqrt(s_k) - V(s_l)/sqrt(s_k).  The result depends only on
    increments of V after s_l, so it is independent of the path before s_l.
    """
    if not 0 < s_l < s_k:
        raise ValueError("need 0 < s_l < s_k")
    if s_k > record.horizon:
        raise ValueError(f"s_k = {s_k} needs horizon >= {s_k}, record has {record.horizon}")
    if m < 1:
        raise ValueError("m must be >= 1")
    xs = np.arange(m + 1) / m
    anchor = path_value(record, s_l) / np.sqrt(s_k)
    tail = path_value(record, s_k * xs) / np.sqrt(s_k) - anchor
    values = np.where(xs < s_l / s_k, 0.0, tail)
    return PathGrid(m=m, values=values)


def simulate_wiener(sigma: float, m: int, count: int, seed) -> list[PathGrid]:
    """Independent scaled Wiener paths on the m-grid.

    Increments are N(0, sigma^2/m); values[0] = 0.  This sampler never
    touches the jump machinery, so it serves as an independent oracle for
    the limiting distributions.
    """
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    if m < 1 or count < 1:
        raise ValueError("m and count must be >= 1")
    rng = derive_rng(_as_provenance(seed))
    incs = rng.normal(0.0, sigma / np.sqrt(m), (count, m))
    values = np.concatenate([np.zeros((count, 1)), np.cumsum(incs, axis=1)], axis=1)
    return [PathGrid(m=m, values=row) for row in values]


def sample_v_values(model: LevyModel, t: float, count: int, seed) -> np.ndarray:
    """i.i.d. draws of V(t), vectorized across replicas.

    Distributionally identical to evaluating ``sample_jumps`` records at t,
    but draws all jump sizes in one batch.  Draw order is fixed (counts,
    sizes, diffusion).
    """
    if t <= 0:
        raise ValueError("t must be > 0")
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = derive_rng(_as_provenance(seed))
    n_jumps = rng.poisson(model.rate * t, count)
    total = int(n_jumps.sum())
    sizes = model.jump_law.sample(total, rng)
    owner = np.repeat(np.arange(count), n_jumps)
    sums = np.bincount(owner, weights=sizes, minlength=count)
    out = sums + model.drift * t
    if model.diffusion_sd > 0:
        out = out + rng.normal(0.0, model.diffusion_sd * np.sqrt(t), count)
    return out


def export_jumps_csv(record: JumpRecord, path) -> None:
    """Write the realization as CSV: a metadata header line, then time,size rows."""
    law = record.model.jump_law
    meta = (
        f"# law={law.kind}{law.params} rate={record.model.rate} "
        f"diffusion_sd={record.model.diffusion_sd} drift={record.model.drift} "
        f"horizon={record.horizon} seed={record.provenance.master_seed} "
        f"stream={record.provenance.tag}:{record.provenance.index}"
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(meta + "\n")
        fh.write("time,size\n")
        for t, s in zip(record.jump_times, record.jump_sizes):
            fh.write(f"{float(t)!r},{float(s)!r}\n")
