"""Weighted empirical measures, path functionals and target laws.

Weak convergence of path laws is tested through scalar pushforwards: a
panel of continuous functionals (endpoint, supremum, value at a point)
turns each path into a number, a weighted empirical measure collects those
numbers, and a weighted Kolmogorov-Smirnov distance compares the measure
with the closed-form law of the same functional of a Wiener process.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .simulate import PathGrid, derive_rng, _as_provenance

__all__ = [
    "WeightedSample",
    "PathFunctional",
    "TargetLaw",
    "apply_functional",
    "target_cdf",
    "weighted_ks",
    "log_average_measure",
    "integral_average_measure",
    "wiener_functional_sample",
]


@dataclass(frozen=True)
class WeightedSample:
    """Atoms with nonnegative weights; possibly an unnormalized measure.

    ``prefactor`` records the scale the measure carries as defined (for the
    log-average it is 1/ln n, so the nominal mass is prefactor *
    total_weight); CDF comparisons always renormalize the weights to 1.
    """

    values: np.ndarray
    weights: np.ndarray
    prefactor: float = 1.0
    normalized: bool = False
    total_weight: float = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if values.shape != weights.shape or values.ndim != 1:
            raise ValueError("values and weights must be equal-length 1-d arrays")
        if values.size == 0:
            raise ValueError("a weighted sample needs at least one atom")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        total = float(weights.sum())
        if total <= 0:
            raise ValueError("at least one weight must be positive")
        for arr in (values, weights):
            arr.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "total_weight", total)

    @classmethod
    def from_values(cls, values) -> "WeightedSample":
        values = np.asarray(values, dtype=float)
        return cls(values, np.ones_like(values), prefactor=1.0, normalized=True)

    def cdf(self, v):
        """Weight-normalized empirical CDF at v (right-continuous)."""
        order = np.argsort(self.values, kind="stable")
        sorted_vals = self.values[order]
        cum = np.cumsum(self.weights[order]) / self.total_weight
        idx = np.searchsorted(sorted_vals, np.asarray(v, dtype=float), side="right")
        out = np.concatenate([[0.0], cum])[idx]
        return float(out) if np.ndim(v) == 0 else out

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("value,weight\n")
            for v, w in zip(self.values, self.weights):
                fh.write(f"{v!r},{w!r}\n")

    def to_json(self) -> str:
        return json.dumps(
            {
                "values": self.values.tolist(),
                "weights": self.weights.tolist(),
                "prefactor": self.prefactor,
                "normalized": self.normalized,
                "total_weight": self.total_weight,
            }
        )


@dataclass(frozen=True)
class PathFunctional:
    """Continuous functional of a path on [0, 1]: endpoint, supremum, or value_at."""

    kind: str
    x0: float | None = None

    def __post_init__(self):
        if self.kind not in ("endpoint", "supremum", "value_at"):
            raise ValueError(f"unknown functional kind {self.kind!r}")
        if self.kind == "value_at":
            if self.x0 is None or not 0.0 <= self.x0 <= 1.0:
                raise ValueError("value_at requires x0 in [0, 1]")

    @classmethod
    def endpoint(cls) -> "PathFunctional":
        return cls("endpoint")

    @classmethod
    def supremum(cls) -> "PathFunctional":
        return cls("supremum")

    @classmethod
    def value_at(cls, x0: float) -> "PathFunctional":
        return cls("value_at", x0=x0)

    def grid_point(self, m: int) -> float:
        """For value_at, the grid point floor(x0*m)/m actually evaluated."""
        if self.kind != "value_at":
            raise ValueError("grid_point is only defined for value_at")
        return math.floor(self.x0 * m) / m

    def label(self) -> str:
        return f"value_at({self.x0:g})" if self.kind == "value_at" else self.kind


def apply_functional(path: PathGrid, functional: PathFunctional) -> float:
    """Evaluate the functional on the grid.

    value_at uses the nearest grid point at or below x0 (the path is
    right-continuous, so the grid carries the value from the left node).
    For suprema of pure-jump paths prefer ``simulate.exact_sup``; the grid
    maximum here is the fallback and can only under-estimate.
    """
    if functional.kind == "endpoint":
        return float(path.values[-1])
    if functional.kind == "supremum":
        return float(path.values.max())
    j = math.floor(functional.x0 * path.m)
    return float(path.values[min(j, path.m)])


@dataclass(frozen=True)
class TargetLaw:
    """Limit law of a scalar functional: exact Gaussian/supremum CDFs or an oracle sample."""

    kind: str
    scale: float | None = None
    sample: WeightedSample | None = None

    def __post_init__(self):
        if self.kind not in ("gaussian", "wiener_sup", "empirical"):
            raise ValueError(f"unknown target law kind {self.kind!r}")
        if self.kind in ("gaussian", "wiener_sup"):
            if self.scale is None or self.scale <= 0:
                raise ValueError(f"{self.kind} target requires a positive scale")
        elif self.sample is None:
            raise ValueError("empirical target requires an oracle sample")

    @classmethod
    def gaussian(cls, sd: float) -> "TargetLaw":
        return cls("gaussian", scale=sd)

    @classmethod
    def wiener_sup(cls, sigma: float) -> "TargetLaw":
        return cls("wiener_sup", scale=sigma)

    @classmethod
    def empirical_oracle(cls, sample: WeightedSample) -> "TargetLaw":
        return cls("empirical", sample=sample)

    def label(self) -> str:
        if self.kind == "empirical":
            return f"empirical[{self.sample.values.size} atoms]"
        return f"{self.kind}(scale={self.scale:g})"


def target_cdf(law: TargetLaw, v):
    """CDF of the target law, vectorized over v.

    gaussian: Phi(v / sd).  wiener_sup: 0 for v < 0, else 2*Phi(v/sigma) - 1
    (the running maximum of a Wiener path starting at 0 is nonnegative and
    its law follows from the reflection principle).  empirical: the
    weight-normalized CDF of the oracle atoms.
    """
    v_arr = np.asarray(v, dtype=float)
    if law.kind == "gaussian":
        out = ndtr(v_arr / law.scale)
    elif law.kind == "wiener_sup":
        out = np.where(v_arr < 0.0, 0.0, 2.0 * ndtr(v_arr / law.scale) - 1.0)
    else:
        out = law.sample.cdf(v_arr)
    return float(out) if v_arr.ndim == 0 else out


def weighted_ks(sample: WeightedSample, law: TargetLaw) -> float:
    """Sup distance between the weight-normalized empirical CDF and the target.

    At every atom both one-sided empirical values are compared:
    max(|F_hat(v) - F(v)|, |F_hat(v-) - F(v)|).  Invariant under positive
    rescaling of all weights.
    """
    order = np.argsort(sample.values, kind="stable")
    vals = sample.values[order]
    w = sample.weights[order] / sample.total_weight
    cdf_right = np.cumsum(w)
    cdf_left = cdf_right - w
    target = np.asarray(target_cdf(law, vals))
    return float(np.maximum(np.abs(cdf_right - target), np.abs(cdf_left - target)).max())


def log_average_measure(values) -> WeightedSample:
    """Log-averaged empirical measure: atom k gets weight 1/k, k = 1..n.

    The total weight is the harmonic number H_n; the measure as defined
    carries the prefactor 1/ln n (recorded, not applied), so its nominal
    mass H_n / ln n tends to 1.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 2:
        raise ValueError("need n >= 2 atoms (ln 1 = 0)")
    weights = 1.0 / np.arange(1, n + 1, dtype=float)
    return WeightedSample(values, weights, prefactor=1.0 / math.log(n), normalized=False)


def integral_average_measure(value_fn, w, S: float, dt: float) -> WeightedSample:
    """Riemann-sum discretization of the weighted integral average over [1, S].

    Atoms sit at cell midpoints of [1, S] with step dt (last cell may be
    shorter) and carry weight d(midpoint) * cell width, so the total weight
    approximates D(S) up to quadrature error; the prefactor 1/D(S) is
    recorded.  ``w`` is a :class:`~levylim.conditions.WeightFunction`.
    """
    if S <= 1.0:
        raise ValueError("S must be > 1")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    edges = np.append(np.arange(1.0, S, dt), S)
    mids = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    vals = np.asarray(value_fn(mids), dtype=float)
    if vals.ndim == 0:
        vals = np.full(mids.shape, float(vals))
    weights = np.asarray(w.d(mids)) * widths
    return WeightedSample(vals, weights, prefactor=1.0 / w.big_d(S), normalized=False)


def wiener_functional_sample(
    sigma: float,
    functional: PathFunctional,
    m: int,
    count: int,
    seed,
    chunk_size: int = 4096,
) -> WeightedSample:
    """Equal-weight sample of the functional over independent Wiener paths.

    Simulates in chunks so large oracle samples never hold full path
    matrices in memory; used to build empirical target laws for functionals
    without a closed-form limit CDF.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = derive_rng(_as_provenance(seed))
    out = np.empty(count)
    done = 0
    while done < count:
        k = min(chunk_size, count - done)
        incs = rng.normal(0.0, sigma / np.sqrt(m), (k, m))
        paths = np.cumsum(incs, axis=1)
        if functional.kind == "endpoint":
            out[done:done + k] = paths[:, -1]
        elif functional.kind == "supremum":
            out[done:done + k] = np.maximum(paths.max(axis=1), 0.0)
        else:
            j = math.floor(functional.x0 * m)
            out[done:done + k] = paths[:, j - 1] if j > 0 else 0.0
        done += k
    return WeightedSample.from_values(out)
