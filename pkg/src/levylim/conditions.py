"""Structural hypotheses on schedules, time changes and weight functions.

The limit harnesses only run when their inputs satisfy three requirements:

* schedule: s_k > 0 and s_k / k**beta nondecreasing over the evaluated range
  (which forces s_k to diverge for beta > 0);
* time change: f(x) > 0 and f(x) / x**beta nondecreasing on the checked points;
* weight: d(s) positive and nonincreasing on [1, inf), with
  integral of d over [k, k+1] at most ln(sqrt((k+1)/k)) for every k, and a
  divergent total integral (so the averaged mass keeps growing).

"Increasing" is implemented as nondecreasing: the canonical schedule
s_k = k with beta = 1 has a constant ratio and must pass.  Every check runs
on a finite evaluation range; a pass means "verified on this range", never
a proof, and the range is echoed into the report.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

__all__ = [
    "Schedule",
    "TimeChange",
    "WeightFunction",
    "ConditionReport",
    "check_schedule",
    "check_time_change",
    "check_weight",
    "default_schedule",
    "default_time_change",
    "default_weight",
]

# Ratio comparisons allow this much relative float slack before flagging a drop.
_RTOL = 1e-12
# check_weight treats an interval integral exceeding the bound by <= this as equality.
_INTERVAL_SLACK = 1e-9


@dataclass(frozen=True)
class Schedule:
    """Evaluation-time schedule s_k, either closed-form coeff*k**power or a table."""

    beta: float = 1.0
    n_max: int = 10_000
    coeff: float = 1.0
    power: float = 1.0
    table: np.ndarray | None = None

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.table is not None:
            table = np.asarray(self.table, dtype=float)
            table.setflags(write=False)
            object.__setattr__(self, "table", table)
            object.__setattr__(self, "n_max", int(table.size))
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")

    def values(self, n: int | None = None) -> np.ndarray:
        """s_1 .. s_n (defaults to the full range)."""
        n = self.n_max if n is None else int(n)
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n must be in [1, {self.n_max}]")
        if self.table is not None:
            return self.table[:n]
        k = np.arange(1, n + 1, dtype=float)
        return self.coeff * k ** self.power

    def value(self, k: int) -> float:
        return float(self.values(k)[-1])


@dataclass(frozen=True)
class TimeChange:
    """Time change f(x), closed-form coeff*x**power or a table of (x, f(x))."""

    beta: float = 1.0
    coeff: float = 1.0
    power: float = 1.0
    table: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be > 0")
        if self.table is not None:
            xs, fs = (np.asarray(a, dtype=float) for a in self.table)
            if xs.shape != fs.shape or xs.ndim != 1 or np.any(np.diff(xs) <= 0):
                raise ValueError("table must be (sorted x, f(x)) arrays of equal length")
            object.__setattr__(self, "table", (xs, fs))

    def f(self, x):
        x = np.asarray(x, dtype=float)
        if self.table is not None:
            out = np.interp(x, self.table[0], self.table[1])
        else:
            out = self.coeff * x ** self.power
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class WeightFunction:
    """Averaging weight d(s) on [1, inf): closed-form 1/(coeff*s) or a table.

    For the closed form, D(S) = integral of d over [1, S] = ln(S)/coeff and the
    total integral diverges for any coeff > 0.  For tables d is piecewise
    linear, D(S) is a trapezoid accumulation, and divergence is unverifiable.
    """

    coeff: float = 2.0
    table: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.table is None:
            if self.coeff <= 0:
                raise ValueError("coeff must be > 0")
        else:
            ss, ds = (np.asarray(a, dtype=float) for a in self.table)
            if ss.shape != ds.shape or ss.ndim != 1 or np.any(np.diff(ss) <= 0):
                raise ValueError("table must be (sorted s, d(s)) arrays of equal length")
            if ss[0] > 1.0:
                raise ValueError("table must start at or before s = 1")
            object.__setattr__(self, "table", (ss, ds))

    def d(self, s):
        s = np.asarray(s, dtype=float)
        if self.table is not None:
            out = np.interp(s, self.table[0], self.table[1])
        else:
            out = 1.0 / (self.coeff * s)
        return float(out) if out.ndim == 0 else out

    def big_d(self, S: float) -> float:
        """D(S): integral of d over [1, S]."""
        if S <= 1.0:
            raise ValueError("S must be > 1")
        if self.table is None:
            return math.log(S) / self.coeff
        ss, ds = self.table
        grid = np.unique(np.concatenate([[1.0, S], ss[(ss > 1.0) & (ss < S)]]))
        return float(np.trapezoid(self.d(grid), grid))

    @property
    def divergent(self) -> bool | None:
        """True if the total integral provably diverges; None if unverifiable."""
        return True if self.table is None else None


@dataclass
class ConditionReport:
    """Outcome of one hypothesis check, JSON-serializable."""

    condition: str
    passed: bool
    checked_range: str
    first_violation: float | None = None
    message: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "condition": self.condition,
            "passed": bool(self.passed),
            "checked_range": self.checked_range,
            "first_violation": self.first_violation,
            "message": self.message,
        }
        out.update(self.details)
        return out

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _first_ratio_drop(ratios: np.ndarray) -> int | None:
    """Index (into ratios) of the first strict decrease, or None."""
    drops = ratios[1:] < ratios[:-1] * (1.0 - _RTOL)
    where = np.flatnonzero(drops)
    return int(where[0] + 1) if where.size else None


def check_schedule(schedule: Schedule) -> ConditionReport:
    """Verify s_k > 0 and s_k / k**beta nondecreasing for k = 1..n_max."""
    s = schedule.values()
    if np.any(s <= 0):
        raise ValueError("schedule values must be > 0")
    k = np.arange(1, s.size + 1, dtype=float)
    ratios = s / k ** schedule.beta
    drop = _first_ratio_drop(ratios)
    passed = drop is None
    return ConditionReport(
        condition="schedule-growth",
        passed=passed,
        checked_range=f"k in [1, {s.size}]",
        first_violation=None if passed else float(drop + 1),  # 1-based k of the drop
        message="" if passed else (
            f"s_k / k^beta decreases at k = {drop + 1} "
            f"(ratio {ratios[drop]:.6g} < {ratios[drop - 1]:.6g})"
        ),
        details={"beta": schedule.beta},
    )


def check_time_change(tc: TimeChange, x_points) -> ConditionReport:
    """Verify f(x) > 0 and f(x) / x**beta nondecreasing along sorted x_points."""
    x = np.asarray(x_points, dtype=float)
    if x.size < 2 or np.any(x <= 0) or np.any(np.diff(x) <= 0):
        raise ValueError("x_points must be >= 2 sorted positive values")
    fx = np.asarray(tc.f(x))
    if np.any(fx <= 0):
        raise ValueError("time change must be positive on the checked points")
    ratios = fx / x ** tc.beta
    drop = _first_ratio_drop(ratios)
    passed = drop is None
    return ConditionReport(
        condition="time-change-growth",
        passed=passed,
        checked_range=f"x in [{x[0]:g}, {x[-1]:g}] ({x.size} points)",
        first_violation=None if passed else float(x[drop]),
        message="" if passed else f"f(x) / x^beta decreases at x = {x[drop]:g}",
        details={"beta": tc.beta},
    )


def check_weight(w: WeightFunction, k_max: int) -> ConditionReport:
    """Verify the weight is admissible on [1, k_max + 1].

    Three sub-checks, reported separately in the details:
    * shape: d positive and nonincreasing on the sampled points;
    * intervals: integral of d over [k, k+1] (adaptive quadrature, abs tol
      1e-10) at most ln(sqrt((k+1)/k)) for k = 1..k_max, with per-k margins;
    * divergence: analytic for the closed form, "unverifiable" for tables.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")

    pts = np.concatenate([np.arange(1.0, k_max + 1.0), [k_max + 1.0], np.arange(1.5, k_max + 1.0)])
    pts = np.sort(pts)
    d_vals = np.asarray(w.d(pts))
    shape_violation = None
    shape_msg = ""
    if np.any(d_vals <= 0):
        shape_violation = float(pts[np.flatnonzero(d_vals <= 0)[0]])
        shape_msg = f"d(s) is not positive at s = {shape_violation:g}"
    else:
        rises = d_vals[1:] > d_vals[:-1] * (1.0 + _RTOL)
        where = np.flatnonzero(rises)
        if where.size:
            shape_violation = float(pts[where[0] + 1])
            shape_msg = f"d(s) increases at s = {shape_violation:g}"
    if shape_violation is not None:
        # Shape failure is its own verdict; the interval test is not run.
        return ConditionReport(
            condition="weight-admissible",
            passed=False,
            checked_range=f"s in [1, {k_max + 1}]",
            first_violation=shape_violation,
            message=shape_msg,
            details={"shape_ok": False, "intervals_ok": None, "divergence": None, "margins": []},
        )
    shape_ok = True

    ks = np.arange(1, k_max + 1)
    integrals = np.array([quad(w.d, k, k + 1, epsabs=1e-10, epsrel=1e-12)[0] for k in ks])
    bounds = 0.5 * np.log((ks + 1.0) / ks)
    margins = bounds - integrals
    bad = np.flatnonzero(margins < -_INTERVAL_SLACK)
    intervals_ok = bad.size == 0
    first_bad_k = None if intervals_ok else int(ks[bad[0]])

    if w.divergent is True:
        divergence = "pass"
    elif w.divergent is False:
        divergence = "fail"
    else:
        divergence = "unverifiable"

    passed = intervals_ok and divergence != "fail"
    return ConditionReport(
        condition="weight-admissible",
        passed=passed,
        checked_range=f"k in [1, {k_max}]",
        first_violation=None if intervals_ok else float(first_bad_k),
        message="" if intervals_ok else (
            f"interval integral over [{first_bad_k}, {first_bad_k + 1}] is "
            f"{integrals[bad[0]]:.6g}, above the bound {bounds[bad[0]]:.6g}"
        ),
        details={
            "shape_ok": shape_ok,
            "intervals_ok": intervals_ok,
            "divergence": divergence,
            "margins": margins.tolist(),
        },
    )


def default_schedule(n_max: int = 10_000) -> Schedule:
    """s_k = k with beta = 1: constant ratio, passes with equality."""
    return Schedule(beta=1.0, n_max=n_max, coeff=1.0, power=1.0)


def default_time_change() -> TimeChange:
    """f(x) = x with beta = 1."""
    return TimeChange(beta=1.0, coeff=1.0, power=1.0)


def default_weight() -> WeightFunction:
    """d(s) = 1/(2s): meets the interval bound with equality, D(S) = ln(S)/2."""
    return WeightFunction(coeff=2.0)
