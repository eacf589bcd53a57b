"""Univariate marginal models for Sklar composition.

All sampling goes through :meth:`UnivariateModel.quantile` applied to
uniform draws, so one code path serves both ``rand`` and the Sklar sampler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .core import _check_count, as_generator
from .errors import DomainError, EstimationError

__all__ = [
    "UnivariateModel",
    "Normal",
    "Gamma",
    "Pareto",
    "Binomial",
    "Exponential",
    "Uniform",
    "MARGINALS",
    "make_marginal",
    "m_fit",
]


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.isnan(u).any() or ((u < 0) | (u > 1)).any():
        raise DomainError("quantile levels must lie in [0, 1]")
    return u


def _scalar(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


class UnivariateModel:
    family: str = ""
    discrete = False

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar(self._pdf(x), x)

    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar(np.clip(self._cdf(x), 0.0, 1.0), x)

    def quantile(self, u):
        u = _check_u(u)
        return _scalar(self._quantile(u), u)

    def rand(self, rng, n: int) -> np.ndarray:
        return self._quantile(as_generator(rng).random(_check_count(n)))

    def params(self) -> dict:
        raise NotImplementedError

    def to_dict(self) -> dict:
        return {"family": self.family, **self.params()}

    @property
    def support(self) -> tuple[float, float]:
        raise NotImplementedError


@dataclass(frozen=True, repr=True)
class Normal(UnivariateModel):
    mu: float = 0.0
    sigma: float = 1.0
    family = "normal"

    def __post_init__(self):
        if not (self.sigma > 0 and math.isfinite(self.sigma) and math.isfinite(self.mu)):
            raise DomainError(f"Normal needs finite mu and sigma > 0, got mu={self.mu}, sigma={self.sigma}")

    def _pdf(self, x):
        z = (x - self.mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2 * math.pi))

    def _cdf(self, x):
        return special.ndtr((x - self.mu) / self.sigma)

    def _quantile(self, u):
        return self.mu + self.sigma * special.ndtri(u)

    def params(self):
        return {"mu": self.mu, "sigma": self.sigma}

    @property
    def support(self):
        return -math.inf, math.inf


@dataclass(frozen=True, repr=True)
class Gamma(UnivariateModel):
    """Gamma with shape ``shape`` and scale ``scale`` (mean shape * scale)."""

    shape: float = 1.0
    scale: float = 1.0
    family = "gamma"

    def __post_init__(self):
        if not (self.shape > 0 and self.scale > 0 and math.isfinite(self.shape) and math.isfinite(self.scale)):
            raise DomainError(f"Gamma needs shape > 0 and scale > 0, got {self.shape}, {self.scale}")

    def _pdf(self, x):
        a, s = self.shape, self.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            logp = (a - 1) * np.log(x / s) - x / s - special.gammaln(a) - math.log(s)
            out = np.exp(logp)
        out = np.where(x > 0, out, 0.0)
        if a == 1.0:
            out = np.where(x == 0, 1.0 / s, out)
        return out

    def _cdf(self, x):
        return special.gammainc(self.shape, np.maximum(x, 0.0) / self.scale)

    def _quantile(self, u):
        return self.scale * special.gammaincinv(self.shape, u)

    def params(self):
        return {"shape": self.shape, "scale": self.scale}

    @property
    def support(self):
        return 0.0, math.inf


@dataclass(frozen=True, repr=True)
class Pareto(UnivariateModel):
    """Pareto with tail index ``shape`` and scale fixed at 1 (support x >= 1)."""

    shape: float = 1.0
    family = "pareto"

    def __post_init__(self):
        if not (self.shape > 0 and math.isfinite(self.shape)):
            raise DomainError(f"Pareto needs shape > 0, got {self.shape}")

    def _pdf(self, x):
        a = self.shape
        with np.errstate(divide="ignore", invalid="ignore"):
            out = a * np.power(np.where(x >= 1, x, 1.0), -a - 1)
        return np.where(x >= 1, out, 0.0)

    def _cdf(self, x):
        with np.errstate(divide="ignore", invalid="ignore"):
            out = -np.expm1(-self.shape * np.log(np.where(x >= 1, x, 1.0)))
        return np.where(x >= 1, out, 0.0)

    def _quantile(self, u):
        with np.errstate(divide="ignore"):
            return np.exp(-np.log1p(-u) / self.shape)

    def params(self):
        return {"shape": self.shape}

    @property
    def support(self):
        return 1.0, math.inf


@dataclass(frozen=True, repr=True)
class Binomial(UnivariateModel):
    trials: int = 1
    p: float = 0.5
    family = "binomial"
    discrete = True

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 0:
            raise DomainError(f"Binomial trials must be a nonnegative integer, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"Binomial p must lie in [0, 1], got {self.p}")
        k = np.arange(self.trials + 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            logm = (
                special.gammaln(self.trials + 1)
                - special.gammaln(k + 1)
                - special.gammaln(self.trials - k + 1)
                + special.xlogy(k, self.p)
                + special.xlog1py(self.trials - k, -self.p)
            )
        masses = np.exp(logm)
        cum = np.minimum(np.cumsum(masses), 1.0)
        cum[-1] = 1.0
        object.__setattr__(self, "_masses", masses)
        object.__setattr__(self, "_cum", cum)

    def _pdf(self, x):
        k = np.rint(x)
        ok = (k == x) & (k >= 0) & (k <= self.trials)
        return np.where(ok, self._masses[np.clip(k, 0, self.trials).astype(int)], 0.0)

    def _cdf(self, x):
        k = np.floor(np.clip(x, -1.0, self.trials)).astype(int)
        return np.where(k >= 0, self._cum[np.maximum(k, 0)], 0.0)

    def _quantile(self, u):
        idx = np.searchsorted(self._cum, u, side="left")
        return np.minimum(idx, self.trials).astype(float)

    def params(self):
        return {"trials": self.trials, "p": self.p}

    @property
    def support(self):
        return 0.0, float(self.trials)


@dataclass(frozen=True, repr=True)
class Exponential(UnivariateModel):
    scale: float = 1.0
    family = "exponential"

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"Exponential needs scale > 0, got {self.scale}")

    def _pdf(self, x):
        return np.where(x >= 0, np.exp(-np.maximum(x, 0.0) / self.scale) / self.scale, 0.0)

    def _cdf(self, x):
        return np.where(x >= 0, -np.expm1(-np.maximum(x, 0.0) / self.scale), 0.0)

    def _quantile(self, u):
        return -self.scale * np.log1p(-u)

    def params(self):
        return {"scale": self.scale}

    @property
    def support(self):
        return 0.0, math.inf


@dataclass(frozen=True, repr=True)
class Uniform(UnivariateModel):
    a: float = 0.0
    b: float = 1.0
    family = "uniform"

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"Uniform needs finite a < b, got a={self.a}, b={self.b}")

    def _pdf(self, x):
        return np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0)

    def _cdf(self, x):
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def _quantile(self, u):
        return self.a + u * (self.b - self.a)

    def params(self):
        return {"a": self.a, "b": self.b}

    @property
    def support(self):
        return self.a, self.b


MARGINALS = {
    cls.family: cls for cls in (Normal, Gamma, Pareto, Binomial, Exponential, Uniform)
}


def make_marginal(family: str, **params) -> UnivariateModel:
    family = family.lower()
    if family not in MARGINALS:
        raise DomainError(f"unknown marginal family {family!r}; expected one of {sorted(MARGINALS)}")
    try:
        return MARGINALS[family](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {family}: {exc}") from None


def _gamma_shape_mle(s: float) -> float:
    """Solve log(a) - digamma(a) = s by Newton's method."""
    if not s > 0:
        raise EstimationError("Gamma fit needs non-constant data (log-mean gap must be positive)")
    a = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    for _ in range(100):
        f = math.log(a) - special.digamma(a) - s
        fp = 1.0 / a - special.polygamma(1, a)
        step = f / fp
        new = a - step
        if new <= 0:
            new = a / 2.0
        if abs(new - a) <= 1e-10 * max(1.0, a):
            return new
        a = new
    raise EstimationError("Gamma shape Newton iteration did not converge in 100 steps")


def m_fit(family: str, data, **fixed) -> UnivariateModel:
    """Maximum-likelihood fit of a marginal family.

    Binomial takes the structural ``trials`` keyword; when omitted the
    sample maximum is used.
    """
    family = family.lower()
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 2:
        raise DomainError(f"fitting {family} needs at least 2 observations, got {x.size}")
    bad = np.flatnonzero(~np.isfinite(x))
    if bad.size:
        raise DomainError(f"{family} fit: non-finite value at index {bad[0]}")

    def support_check(mask, what):
        idx = np.flatnonzero(~mask)
        if idx.size:
            raise DomainError(f"{family} fit: value {x[idx[0]]!r} at index {idx[0]} is outside {what}")

    if family == "normal":
        sigma = float(np.sqrt(np.mean((x - x.mean()) ** 2)))
        if sigma == 0:
            raise EstimationError("Normal fit of constant data has zero variance")
        return Normal(float(x.mean()), sigma)
    if family == "exponential":
        support_check(x >= 0, "the support [0, inf)")
        return Exponential(float(x.mean()))
    if family == "uniform":
        if x.min() == x.max():
            raise EstimationError("Uniform fit of constant data is degenerate")
        return Uniform(float(x.min()), float(x.max()))
    if family == "gamma":
        support_check(x > 0, "the support (0, inf)")
        mean = float(x.mean())
        shape = _gamma_shape_mle(math.log(mean) - float(np.mean(np.log(x))))
        return Gamma(shape, mean / shape)
    if family == "pareto":
        support_check(x >= 1, "the support [1, inf)")
        total = float(np.sum(np.log(x)))
        if total == 0:
            raise EstimationError("Pareto fit of data all equal to 1 has infinite shape")
        return Pareto(x.size / total)
    if family == "binomial":
        support_check((x >= 0) & (x == np.rint(x)), "the nonnegative integers")
        trials = int(fixed.get("trials", int(x.max())))
        support_check(x <= trials, f"[0, {trials}]")
        if trials == 0:
            return Binomial(0, 0.0)
        return Binomial(trials, float(x.mean() / trials))
    raise DomainError(f"unknown marginal family {family!r}; expected one of {sorted(MARGINALS)}")
