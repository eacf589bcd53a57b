"""Williamson d-transform and the radial x simplex sampler for Archimedean copulas.

A d-monotone generator is the Williamson transform of a nonnegative radial
law R::

    phi(t) = E[(1 - t / R)_+^(d-1)]

and conversely the radial law is recovered from the first d-1 derivatives
of phi. With S uniform on the unit simplex, ``U_i = phi(R * S_i)`` is a draw
from the copula, whatever the sign of the dependence.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from .core import _check_count, as_generator
from .errors import DomainError, QuadratureError, UnsupportedOperationError
from .archimedean import ArchimedeanGenerator

__all__ = [
    "RadialDistribution",
    "WilliamsonGenerator",
    "erlang_radial",
    "point_mass_radial",
    "williamson_transform",
    "inverse_williamson",
    "radial_quantile",
    "sample_radial",
    "sample_simplex",
    "arch_sample_williamson",
    "arch_sample_frailty",
]

MAX_DOUBLINGS = 1024


class RadialDistribution:
    """Law of a nonnegative random variable R with P(R = 0) = 0.

    Either pass a vectorized ``cdf`` (continuous or with jumps), or ``atoms``
    and ``weights`` for a discrete law. ``sampler(rng, n)`` overrides numeric
    quantile inversion; ``upper`` is a known bound on the support.
    """

    def __init__(self, cdf=None, *, atoms=None, weights=None, sampler=None, upper=math.inf):
        if (cdf is None) == (atoms is None):
            raise DomainError("give exactly one of cdf or atoms")
        self._cdf_fn = cdf
        self._sampler = sampler
        self.upper = float(upper)
        self.atoms = None
        if atoms is not None:
            atoms = np.asarray(atoms, dtype=float).ravel()
            weights = (
                np.full(atoms.size, 1.0 / atoms.size)
                if weights is None
                else np.asarray(weights, dtype=float).ravel()
            )
            if atoms.size == 0 or atoms.shape != weights.shape:
                raise DomainError("atoms and weights must be non-empty and of equal length")
            if (atoms <= 0).any() or not np.isfinite(atoms).all():
                raise DomainError("radial atoms must be finite and strictly positive")
            if (weights < 0).any() or abs(weights.sum() - 1.0) > 1e-12:
                raise DomainError("radial weights must be nonnegative and sum to 1")
            order = np.argsort(atoms)
            self.atoms = atoms[order]
            self.weights = weights[order]
            self._cumw = np.minimum(np.cumsum(self.weights), 1.0)
            self._cumw[-1] = 1.0
            self.upper = float(self.atoms[-1])

    @property
    def is_discrete(self) -> bool:
        return self.atoms is not None

    def cdf_raw(self, x):
        """Unclamped cdf values as produced by the underlying formula."""
        x = np.asarray(x, dtype=float)
        if self.is_discrete:
            idx = np.searchsorted(self.atoms, x, side="right")
            return np.where(idx > 0, self._cumw[np.maximum(idx - 1, 0)], 0.0)
        return np.asarray(self._cdf_fn(x), dtype=float)

    def cdf(self, x):
        """cdf clamped to [0, 1] and made non-decreasing across the batch."""
        x = np.asarray(x, dtype=float)
        vals = np.clip(self.cdf_raw(x), 0.0, 1.0)
        if vals.ndim and vals.size > 1:
            flat_x = x.ravel()
            order = np.argsort(flat_x, kind="stable")
            flat = vals.ravel()
            flat[order] = np.maximum.accumulate(flat[order])
            vals = flat.reshape(vals.shape)
        return vals

    def rvs(self, rng, n: int) -> np.ndarray:
        rng = as_generator(rng)
        if self._sampler is not None:
            return np.asarray(self._sampler(rng, n), dtype=float)
        if self.is_discrete:
            u = rng.random(n)
            return self.atoms[np.minimum(np.searchsorted(self._cumw, u, side="left"), self.atoms.size - 1)]
        return radial_quantile(self, rng.random(n))


def erlang_radial(d: int) -> RadialDistribution:
    """Radial law Erlang(d, 1) of the independence copula."""
    return RadialDistribution(
        lambda x: np.where(np.asarray(x) > 0, special.gammainc(d, np.maximum(x, 0.0)), 0.0),
        sampler=lambda rng, n: rng.gamma(d, 1.0, size=n),
    )


def point_mass_radial(x0: float = 1.0) -> RadialDistribution:
    return RadialDistribution(atoms=[x0], weights=[1.0])


class WilliamsonGenerator(ArchimedeanGenerator):
    """Generator obtained as the Williamson d-transform of a radial law."""

    def __init__(self, radial: RadialDistribution, d: int):
        if d < 2:
            raise DomainError("Williamson transform needs d >= 2")
        super().__init__()
        self.radial = radial
        self.d = int(d)
        self.max_dim = self.d
        self.support_end = radial.upper

    def _phi_scalar(self, t: float) -> float:
        if t <= 0.0:
            return 1.0
        if t >= self.support_end:
            return 0.0
        d = self.d
        r = self.radial
        # substitute R = t / y: phi(t) = int_0^1 (d-1)(1-y)^(d-2) (1 - F(t/y)) dy
        def f(y):
            if y <= 0.0:
                return 0.0
            surv = 1.0 - float(r.cdf_raw(t / y))
            return (d - 1) * (1.0 - y) ** (d - 2) * min(max(surv, 0.0), 1.0)

        pts = None
        if math.isfinite(r.upper) and t / r.upper < 1.0:
            pts = [t / r.upper]
        val, err = integrate.quad(f, 0.0, 1.0, points=pts, epsabs=1e-14, epsrel=1e-12, limit=400)
        if err > 1e-8:
            raise QuadratureError(f"Williamson transform quadrature at t={t:g} reached only {err:.3g}")
        return val

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        if self.radial.is_discrete:
            a = self.radial.atoms
            w = self.radial.weights
            base = np.clip(1.0 - t[..., None] / a, 0.0, None)
            return np.sum(w * base ** (self.d - 1), axis=-1)
        flat = np.array([self._phi_scalar(float(v)) for v in t.ravel()])
        return flat.reshape(t.shape)

    def phi_deriv(self, k, t):
        if not self.radial.is_discrete:
            return super().phi_deriv(k, t)
        t = np.asarray(t, dtype=float)
        d = self.d
        if k >= d:
            raise UnsupportedOperationError(
                f"a discrete radial law gives a generator that is only {d - 1} times differentiable"
            )
        a = self.radial.atoms
        w = self.radial.weights
        coef = math.factorial(d - 1) / math.factorial(d - 1 - k)
        inside = t[..., None] < a
        base = np.where(inside, 1.0 - t[..., None] / a, 0.0)
        term = coef * (-1.0 / a) ** k * np.where(inside, base ** (d - 1 - k), 0.0)
        return np.sum(w * term, axis=-1)

    def radial_law(self, d):
        return self.radial if d == self.d else None

    def __repr__(self):
        return f"WilliamsonGenerator(d={self.d})"


def williamson_transform(r: RadialDistribution, d: int) -> WilliamsonGenerator:
    """phi(t) = E[(1 - t/R)_+^(d-1)] as a generator object."""
    return WilliamsonGenerator(r, d)


def inverse_williamson(g: ArchimedeanGenerator, d: int, *, exact: bool = True) -> RadialDistribution:
    """Radial law whose Williamson d-transform is ``g.phi``.

    F_R(x) = 1 - sum_{k<d-1} (-1)^k x^k phi^(k)(x) / k! - (-1)^(d-1) x^(d-1) phi_+^(d-1)(x) / (d-1)!

    With ``exact=True`` a family-supplied radial law takes precedence.
    """
    if d < 2:
        raise DomainError("inverse Williamson transform needs d >= 2")
    if d > g.max_dim:
        raise DomainError(f"{g!r} is not {d}-monotone")
    if exact:
        law = g.radial_law(d)
        if law is not None:
            return law

    def cdf(x):
        x = np.asarray(x, dtype=float)
        pos = np.isfinite(x) & (x > 0)
        xs = np.where(pos, x, 1.0)
        acc = np.ones_like(xs)
        for k in range(d):
            with np.errstate(invalid="ignore", over="ignore"):
                acc = acc - (-1.0) ** k * xs**k * g.phi_deriv(k, xs) / math.factorial(k)
        out = np.where(pos, acc, np.where(x == np.inf, 1.0, 0.0))
        return np.where(np.isnan(out), 1.0, out)

    return RadialDistribution(cdf, upper=g.support_end)


def radial_quantile(r: RadialDistribution, u) -> np.ndarray:
    """inf{x : F_R(x) >= u} by doubling from x = 1 then bisection to relative width 1e-12."""
    u = np.asarray(u, dtype=float)
    flat = u.ravel()
    out = np.empty_like(flat)
    if r.is_discrete:
        idx = np.minimum(np.searchsorted(r._cumw, flat, side="left"), r.atoms.size - 1)
        return r.atoms[idx].reshape(u.shape)
    lo = np.zeros_like(flat)
    hi = np.ones_like(flat)
    if math.isfinite(r.upper):
        hi[:] = min(1.0, r.upper)
    active = np.flatnonzero(np.clip(r.cdf_raw(hi), 0.0, 1.0) < flat)
    steps = 0
    while active.size:
        steps += 1
        if steps > MAX_DOUBLINGS:
            raise DomainError(f"radial cdf never reaches {flat[active].max():.17g}")
        lo[active] = hi[active]
        with np.errstate(over="ignore"):
            hi[active] *= 2.0
        if math.isfinite(r.upper):
            hi[active] = np.minimum(hi[active], r.upper)
        sub = np.clip(r.cdf_raw(hi[active]), 0.0, 1.0) < flat[active]
        if math.isfinite(r.upper):
            # F_R(upper) = 1 up to rounding
            sub &= hi[active] < r.upper
        active = active[sub]
    active = np.arange(flat.size)
    for _ in range(1200):
        active = active[hi[active] - lo[active] > 1e-12 * hi[active]]
        if not active.size:
            break
        mid = 0.5 * (lo[active] + hi[active])
        reached = np.clip(r.cdf_raw(mid), 0.0, 1.0) >= flat[active]
        hi[active] = np.where(reached, mid, hi[active])
        lo[active] = np.where(reached, lo[active], mid)
    out[:] = hi
    return out.reshape(u.shape)


def sample_radial(r: RadialDistribution, rng, n: int | None = None):
    """One draw (``n=None``) or ``n`` draws from the radial law."""
    rng = as_generator(rng)
    if n is None:
        return float(r.rvs(rng, 1)[0])
    return r.rvs(rng, _check_count(n))


def sample_simplex(d: int, rng, n: int | None = None) -> np.ndarray:
    """Uniform point(s) on the unit simplex: normalized standard exponentials."""
    if d < 2:
        raise DomainError("simplex dimension must be >= 2")
    rng = as_generator(rng)
    e = rng.exponential(1.0, size=(1 if n is None else _check_count(n), d))
    s = e / e.sum(axis=1, keepdims=True)
    return s[0] if n is None else s


def arch_sample_williamson(C, rng, n: int) -> np.ndarray:
    """U_i = phi(R * S_i) with R from the radial law and S uniform on the simplex."""
    rng = as_generator(rng)
    n = _check_count(n)
    r = inverse_williamson(C.generator, C.dim)
    radius = r.rvs(rng, n)
    s = sample_simplex(C.dim, rng, n)
    u = C.generator.phi(radius[:, None] * s)
    return np.clip(u, 0.0, 1.0)


def arch_sample_frailty(C, rng, n: int) -> np.ndarray:
    """U_i = phi(E_i / W) with W the frailty whose Laplace transform is phi."""
    rng = as_generator(rng)
    n = _check_count(n)
    w = C.generator.frailty(rng, n)
    e = rng.exponential(1.0, size=(n, C.dim))
    with np.errstate(divide="ignore"):
        u = C.generator.phi(e / w[:, None])
    return np.clip(u, 0.0, 1.0)
