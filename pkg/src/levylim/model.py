"""Centered independent-increment process models.

A model is a compound Poisson process (i.i.d. jumps arriving at Poisson
times) plus an optional independent Brownian component, centered by a
deterministic drift so that ``E V(t) = 0`` for all t.  The jump-size law is
one of four closed-form kinds, which keeps the mean, second moment and
characteristic function exact; those closed forms are the reference side of
every simulation check in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "JumpLaw",
    "LevyModel",
    "centered_poisson",
    "random_sum",
    "variance_rate",
    "theoretical_cf",
    "empirical_cf",
]

_LAW_KINDS = ("degenerate", "gaussian", "exponential", "uniform")


@dataclass(frozen=True)
class JumpLaw:
    """Jump-size distribution with closed-form moments.

    Use the classmethod constructors; ``params`` is positional per kind:
    degenerate(c), gaussian(mean, sd), exponential(rate), uniform(lo, hi).
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in _LAW_KINDS:
            raise ValueError(f"unknown jump law kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        p = self.params
        if self.kind == "gaussian" and p[1] <= 0:
            raise ValueError("gaussian jump law requires sd > 0")
        if self.kind == "exponential" and p[0] <= 0:
            raise ValueError("exponential jump law requires rate > 0")
        if self.kind == "uniform" and not p[0] < p[1]:
            raise ValueError("uniform jump law requires lo < hi")

    @classmethod
    def degenerate(cls, c: float) -> "JumpLaw":
        return cls("degenerate", (c,))

    @classmethod
    def gaussian(cls, mean: float, sd: float) -> "JumpLaw":
        return cls("gaussian", (mean, sd))

    @classmethod
    def exponential(cls, rate: float) -> "JumpLaw":
        return cls("exponential", (rate,))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "JumpLaw":
        return cls("uniform", (lo, hi))

    def mean(self) -> float:
        p = self.params
        if self.kind == "degenerate":
            return p[0]
        if self.kind == "gaussian":
            return p[0]
        if self.kind == "exponential":
            return 1.0 / p[0]
        return 0.5 * (p[0] + p[1])

    def second_moment(self) -> float:
        p = self.params
        if self.kind == "degenerate":
            return p[0] ** 2
        if self.kind == "gaussian":
            return p[1] ** 2 + p[0] ** 2
        if self.kind == "exponential":
            return 2.0 / p[0] ** 2
        lo, hi = p
        return (lo * lo + lo * hi + hi * hi) / 3.0

    def variance(self) -> float:
        return self.second_moment() - self.mean() ** 2

    def cf(self, u):
        """Characteristic function E exp(i u xi), vectorized over u."""
        u = np.asarray(u, dtype=float)
        p = self.params
        if self.kind == "degenerate":
            out = np.exp(1j * u * p[0])
        elif self.kind == "gaussian":
            out = np.exp(1j * u * p[0] - 0.5 * (p[1] * u) ** 2)
        elif self.kind == "exponential":
            out = p[0] / (p[0] - 1j * u)
        else:
            lo, hi = p
            # exp(iu(lo+hi)/2) * sin(u(hi-lo)/2) / (u(hi-lo)/2); sinc handles u=0
            out = np.exp(1j * u * 0.5 * (lo + hi)) * np.sinc(u * (hi - lo) / (2.0 * np.pi))
        return complex(out) if out.ndim == 0 else out

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        p = self.params
        if self.kind == "degenerate":
            return np.full(size, p[0])
        if self.kind == "gaussian":
            return rng.normal(p[0], p[1], size)
        if self.kind == "exponential":
            return rng.exponential(1.0 / p[0], size)
        return rng.uniform(p[0], p[1], size)


@dataclass(frozen=True)
class LevyModel:
    """Compound Poisson + optional diffusion, centered by construction.

    The drift is always ``-rate * E[jump]`` and cannot be set by callers;
    a model whose drift were anything else would not be centered and every
    Wiener-limit statement about it would be void.
    """

    jump_law: JumpLaw
    rate: float = 1.0
    diffusion_sd: float = 0.0
    drift: float = field(init=False)

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("rate must be > 0")
        if self.diffusion_sd < 0:
            raise ValueError("diffusion_sd must be >= 0")
        object.__setattr__(self, "drift", -self.rate * self.jump_law.mean())


def centered_poisson(rate: float = 1.0) -> LevyModel:
    """Unit-jump model: Poisson counting process minus its mean.

    Its scaled paths converge to a standard Wiener process
    (variance_rate == rate, so 1 at the default rate).
    """
    return LevyModel(JumpLaw.degenerate(1.0), rate=rate)


def random_sum(jump_law: JumpLaw, rate: float = 1.0) -> LevyModel:
    """Centered random-sum model: compound Poisson with the given jump law."""
    return LevyModel(jump_law, rate=rate)


def variance_rate(model: LevyModel) -> float:
    """Variance of V(1): rate * E[jump^2] + diffusion_sd^2.

    This is also the squared scale of the limiting Wiener process, so its
    square root is the target sd of every Gaussian comparison downstream.
    """
    return model.rate * model.jump_law.second_moment() + model.diffusion_sd ** 2


def theoretical_cf(model: LevyModel, t: float, u):
    """Closed-form characteristic function of V(t), vectorized over u.

    exp(t * [rate * (cf_jump(u) - 1) + i*u*drift - diffusion_sd^2 * u^2 / 2]).
    Modulus is <= 1 everywhere and the value at u = 0 is exactly 1.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    u = np.asarray(u, dtype=float)
    exponent = t * (
        model.rate * (np.asarray(model.jump_law.cf(u)) - 1.0)
        + 1j * u * model.drift
        - 0.5 * (model.diffusion_sd * u) ** 2
    )
    out = np.exp(exponent)
    return complex(out) if out.ndim == 0 else out


def empirical_cf(samples, u):
    """Sample mean of exp(i u v) over the samples; modulus <= 1."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("empirical_cf needs at least one sample")
    u = np.asarray(u, dtype=float)
    out = np.exp(1j * np.multiply.outer(u, samples)).mean(axis=-1)
    return complex(out) if out.ndim == 0 else out
