"""Copula contract, the fundamental copulas, and rank-based helpers.

Every copula works on points of ``[0, 1]^d``. Point arguments may be a
single point of shape ``(d,)`` (scalar result) or a batch of shape ``(n, d)``
(array result of shape ``(n,)``).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.stats import kendalltau, rankdata

from .errors import DomainError, UnsupportedOperationError

__all__ = [
    "Copula",
    "IndependenceCopula",
    "ComonotoneCopula",
    "CountermonotoneCopula",
    "as_generator",
    "pseudo_observations",
    "kendall_tau_sample",
]


def as_generator(rng) -> np.random.Generator:
    """Return ``rng`` as a numpy Generator; ints are treated as seeds."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        return np.random.default_rng(rng)
    raise TypeError(f"expected a numpy Generator or an integer seed, got {type(rng).__name__}")


def _check_count(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"sample count must be a positive integer, got {n!r}")
    return int(n)


def _points(u, dim: int, *, open_interval: bool = False):
    arr = np.asarray(u, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise DomainError(f"expected points of dimension {dim}, got array of shape {np.shape(u)}")
    if np.isnan(arr).any():
        raise DomainError("points contain NaN")
    if open_interval:
        if ((arr <= 0.0) | (arr >= 1.0)).any():
            raise DomainError("density is only defined for points strictly inside (0, 1)^d")
    elif ((arr < 0.0) | (arr > 1.0)).any():
        raise DomainError("copula arguments must lie in [0, 1]")
    return arr, single


def _finish(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


class Copula:
    """A d-variate distribution on the unit hypercube with uniform marginals.

    Subclasses implement ``_cdf`` (and ``_pdf`` when absolutely continuous)
    on validated ``(n, d)`` batches, plus ``_sample``.
    """

    absolutely_continuous = True

    def __init__(self, dim: int):
        if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 2:
            raise DomainError(f"copula dimension must be an integer >= 2, got {dim!r}")
        self.dim = int(dim)

    def cdf(self, u):
        arr, single = _points(u, self.dim)
        return _finish(self._cdf(arr), single)

    def pdf(self, u):
        if not self.absolutely_continuous:
            raise UnsupportedOperationError(f"{type(self).__name__} is singular and has no density")
        arr, single = _points(u, self.dim, open_interval=True)
        return _finish(self._pdf(arr), single)

    def logpdf(self, u):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(u))

    def loglikelihood(self, data) -> float:
        arr = np.asarray(data, dtype=float)
        if arr.size == 0:
            return 0.0
        return float(np.sum(self.logpdf(np.atleast_2d(arr))))

    def sample(self, rng, n: int) -> np.ndarray:
        """Draw an ``(n, d)`` sample; the same seed always gives the same matrix."""
        return self._sample(as_generator(rng), _check_count(n))

    def tau(self) -> float:
        raise UnsupportedOperationError(f"Kendall's tau is not available for {type(self).__name__}")

    def _cdf(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _pdf(self, u: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class IndependenceCopula(Copula):
    def _cdf(self, u):
        return np.prod(u, axis=1)

    def _pdf(self, u):
        return np.ones(u.shape[0])

    def _sample(self, rng, n):
        return rng.random((n, self.dim))

    def tau(self) -> float:
        return 0.0


class ComonotoneCopula(Copula):
    """Upper Fréchet–Hoeffding bound M(u) = min u_i."""

    absolutely_continuous = False

    def _cdf(self, u):
        return np.min(u, axis=1)

    def _sample(self, rng, n):
        return np.repeat(rng.random((n, 1)), self.dim, axis=1)

    def tau(self) -> float:
        return 1.0


class CountermonotoneCopula(Copula):
    """Lower Fréchet–Hoeffding bound W(u, v) = max(u + v - 1, 0); bivariate only."""

    absolutely_continuous = False

    def __init__(self, dim: int = 2):
        super().__init__(dim)
        if self.dim != 2:
            raise DomainError("the countermonotone copula exists only in dimension 2")

    def _cdf(self, u):
        return np.maximum(u[:, 0] + u[:, 1] - 1.0, 0.0)

    def _sample(self, rng, n):
        v = rng.random(n)
        return np.column_stack([v, 1.0 - v])

    def tau(self) -> float:
        return -1.0


def pseudo_observations(data) -> np.ndarray:
    """Column-wise ranks divided by ``n + 1``; ties receive their average rank."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise DomainError("pseudo_observations needs a non-empty (n, d) matrix")
    if np.isnan(arr).any():
        raise DomainError("data contain NaN")
    n = arr.shape[0]
    return rankdata(arr, method="average", axis=0) / (n + 1.0)


def _tied_pairs(v: np.ndarray) -> int:
    _, counts = np.unique(v, return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


def kendall_tau_sample(x, y) -> float:
    """Kendall's tau-a: (concordant - discordant) / (n choose 2).

    Tied pairs count as neither concordant nor discordant. The signed pair
    count is recovered from scipy's O(n log n) tau-b and the tie counts.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise DomainError(f"length mismatch: {x.size} vs {y.size}")
    n = x.size
    if n < 2:
        raise DomainError("Kendall's tau needs at least two observations")
    if np.isnan(x).any() or np.isnan(y).any():
        raise DomainError("Kendall's tau input contains NaN")
    total = n * (n - 1) / 2.0
    untied_x = total - _tied_pairs(x)
    untied_y = total - _tied_pairs(y)
    if untied_x == 0 or untied_y == 0:
        return 0.0
    tau_b = kendalltau(x, y).statistic
    # concordant minus discordant is an integer; rounding makes the result exact
    signed = round(tau_b * math.sqrt(untied_x * untied_y))
    return signed / total
