"""Joint distributions F(x) = C(F_1(x_1), ..., F_d(x_d))."""

from __future__ import annotations

import warnings

import numpy as np

from .core import Copula, _check_count, as_generator
from .errors import DomainError, UnsupportedOperationError
from .marginals import UnivariateModel

__all__ = ["SklarDistribution", "SklarDist"]


class SklarDistribution:
    """A copula glued to an ordered tuple of univariate marginals.

    Density and likelihood need every marginal to be continuous; with a
    discrete marginal only ``cdf`` and ``rand`` are available (the joint law
    then has mixed type and its density would require rectangle volumes).
    """

    def __init__(self, copula: Copula, marginals):
        marginals = tuple(marginals)
        if not isinstance(copula, Copula):
            raise DomainError(f"expected a Copula, got {type(copula).__name__}")
        if len(marginals) != copula.dim:
            raise DomainError(
                f"copula has dimension {copula.dim} but {len(marginals)} marginals were given"
            )
        for i, m in enumerate(marginals):
            if not isinstance(m, UnivariateModel):
                raise DomainError(f"marginal {i} is not a UnivariateModel: {m!r}")
        self.copula = copula
        self.marginals = marginals

    @property
    def dim(self) -> int:
        return self.copula.dim

    def _points(self, x):
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        if single:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise DomainError(f"expected points of dimension {self.dim}, got shape {np.shape(x)}")
        if np.isnan(arr).any():
            raise DomainError("points contain NaN")
        return arr, single

    def _uniforms(self, arr):
        return np.column_stack([m.cdf(arr[:, j]) for j, m in enumerate(self.marginals)])

    def cdf(self, x):
        arr, single = self._points(x)
        vals = self.copula.cdf(self._uniforms(arr))
        return float(vals[0]) if single else vals

    def pdf(self, x):
        discrete = [i for i, m in enumerate(self.marginals) if m.discrete]
        if discrete:
            raise UnsupportedOperationError(
                f"joint density is undefined with discrete marginal(s) at position(s) {discrete}; "
                "use cdf or rand instead"
            )
        arr, single = self._points(x)
        marg = np.column_stack([m.pdf(arr[:, j]) for j, m in enumerate(self.marginals)])
        u = self._uniforms(arr)
        prod = np.prod(marg, axis=1)
        interior = np.all((u > 0) & (u < 1), axis=1) & (prod > 0)
        dens = np.zeros(arr.shape[0])
        if interior.any():
            dens[interior] = self.copula.pdf(u[interior]) * prod[interior]
        return float(dens[0]) if single else dens

    def logpdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(x))

    def loglikelihood(self, data) -> float:
        arr = np.asarray(data, dtype=float)
        if arr.size == 0:
            return 0.0
        logs = np.atleast_1d(self.logpdf(np.atleast_2d(arr)))
        zero = int(np.sum(np.isneginf(logs)))
        if zero:
            warnings.warn(f"{zero} of {logs.size} rows have zero density", RuntimeWarning, stacklevel=2)
            return -np.inf
        return float(np.sum(logs))

    def rand(self, rng, n: int) -> np.ndarray:
        rng = as_generator(rng)
        u = self.copula.sample(rng, _check_count(n))
        return np.column_stack([m.quantile(u[:, j]) for j, m in enumerate(self.marginals)])

    sample = rand

    def __repr__(self):
        return f"SklarDistribution({self.copula!r}, {self.marginals!r})"


SklarDist = SklarDistribution
