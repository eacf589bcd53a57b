"""Archimedean copulas C(u) = phi(phi_inv(u_1) + ... + phi_inv(u_d)).

The generator ``phi`` maps ``[0, inf)`` onto ``[0, 1]`` with ``phi(0) = 1``.
A user-defined family only needs to subclass :class:`ArchimedeanGenerator`
and implement :meth:`~ArchimedeanGenerator.phi`; the inverse, derivatives,
Kendall's tau and the sampler all have numeric defaults that can be
overridden for speed or accuracy::

    class MyGenerator(ArchimedeanGenerator):
        def phi(self, t):
            return np.exp(-t * self.theta)

    C = ArchimedeanCopula(2, MyGenerator(3.0))
    u = C.sample(rng, 1000)
    C.cdf(u), C.pdf(u), C.loglikelihood(u)
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate

from .core import Copula, ComonotoneCopula, CountermonotoneCopula, IndependenceCopula
from .errors import (
    DomainError,
    NumericalError,
    QuadratureError,
    UnsupportedOperationError,
)

__all__ = [
    "ArchimedeanGenerator",
    "IndependenceGenerator",
    "ClaytonGenerator",
    "FrankGenerator",
    "GumbelGenerator",
    "ArchimedeanCopula",
    "ClaytonCopula",
    "FrankCopula",
    "GumbelCopula",
    "FAMILIES",
    "make_copula",
    "phi_deriv_generic",
    "tau_numeric",
    "tau_inv",
    "frank_tau",
    "debye1",
]

MAX_GENERIC_ORDER = 10
_EPS = np.finfo(float).eps


def phi_deriv_generic(g: "ArchimedeanGenerator", k: int, t):
    """k-th derivative of ``g.phi`` by finite differences of order k.

    Central differences with step ``max(t, 1) * eps**(1/(k+2))``; switches to
    forward differences when the central stencil would reach negative t.
    """
    if k < 0:
        raise DomainError(f"derivative order must be >= 0, got {k}")
    t = np.asarray(t, dtype=float)
    if k == 0:
        return g.phi(t)
    if k > MAX_GENERIC_ORDER:
        raise UnsupportedOperationError(
            f"finite-difference derivatives are limited to order {MAX_GENERIC_ORDER}; "
            f"{type(g).__name__} must supply phi_deriv for order {k}"
        )
    h = np.maximum(t, 1.0) * _EPS ** (1.0 / (k + 2))
    central = t - 0.5 * k * h >= 0.0
    offsets = np.where(central, 0.5 * k, float(k))
    acc = np.zeros(np.broadcast(t, h).shape)
    for j in range(k + 1):
        acc = acc + (-1) ** j * math.comb(k, j) * g.phi(t + (offsets - j) * h)
    return acc / h**k


def _bisect_phi_inv(g: "ArchimedeanGenerator", u: np.ndarray) -> np.ndarray:
    # phi is non-increasing; find t with phi(t) = u
    u = np.asarray(u, dtype=float)
    flat = u.ravel()
    out = np.zeros_like(flat)
    zero = flat <= 0.0
    out[zero] = g.support_end
    todo = np.flatnonzero((flat > 0.0) & (flat < 1.0))
    if todo.size:
        target = flat[todo]
        lo = np.zeros_like(target)
        hi = np.ones_like(target)
        for _ in range(1100):
            mask = g.phi(hi) > target
            if not mask.any():
                break
            lo[mask] = hi[mask]
            hi[mask] *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            above = g.phi(mid) > target
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
            if np.all(hi - lo <= 4 * _EPS * hi):
                break
        out[todo] = 0.5 * (lo + hi)
    return out.reshape(u.shape)


def tau_numeric(g: "ArchimedeanGenerator") -> float:
    """Kendall's tau as ``1 - 4 * int_0^inf s * phi'(s)^2 ds``.

    The integral is split on dyadic intervals [0, 1], [1, 2], [2, 4], ... and
    truncated at the first T with phi(T) < 1e-14. The first piece is
    integrated in x = -log(s).
    """

    def integrand(s):
        return s * float(g.phi_deriv(1, s)) ** 2

    edges = [0.0, 1.0]
    while float(g.phi(edges[-1])) >= 1e-14 and edges[-1] < 1e300:
        edges.append(edges[-1] * 2.0)
    end = g.support_end
    if math.isfinite(end):
        edges = [e for e in edges if e < end] + [end]
    def log_integrand(x):
        # s = e^-x on the first piece smooths algebraic singularities at s = 0;
        # squaring s * phi'(s) avoids overflow of phi'(s)^2 there
        s = math.exp(-x)
        return (s * float(g.phi_deriv(1, s))) ** 2

    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if a == 0.0 and b <= 1.0:
            val, err = integrate.quad(log_integrand, -math.log(b), 700.0, epsabs=1e-15, epsrel=1e-12, limit=200)
        else:
            val, err = integrate.quad(integrand, a, b, epsabs=1e-15, epsrel=1e-12, limit=200)
        if not math.isfinite(val) or err > 1e-10 + 1e-8 * abs(val):
            raise QuadratureError(
                f"tau quadrature did not converge on [{a:g}, {b:g}]: estimated error {err:.3g}"
            )
        total += val
    return 1.0 - 4.0 * total


class ArchimedeanGenerator:
    """Base class for generators; subclasses must implement :meth:`phi`."""

    #: largest dimension for which phi is d-monotone
    max_dim: float = math.inf
    #: point where phi first reaches 0 (inf for strict generators)
    support_end: float = math.inf

    def __init__(self, theta: float = float("nan")):
        self.theta = float(theta)

    def phi(self, t):
        raise NotImplementedError

    def phi_inv(self, u):
        return _bisect_phi_inv(self, np.asarray(u, dtype=float))

    def phi_deriv(self, k: int, t):
        return phi_deriv_generic(self, k, t)

    def phi_1(self, t):
        return self.phi_deriv(1, t)

    def tau(self) -> float:
        return tau_numeric(self)

    def radial_law(self, d: int):
        """Exact radial law for dimension d, or None to use the derivative formula."""
        return None

    def frailty(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n values of the latent factor W whose Laplace transform is phi."""
        raise UnsupportedOperationError(f"{type(self).__name__} has no frailty representation")

    def __repr__(self) -> str:
        return f"{type(self).__name__}(theta={self.theta!r})"


class IndependenceGenerator(ArchimedeanGenerator):
    """phi(t) = exp(-t)."""

    def __init__(self, theta: float = float("nan")):
        super().__init__(theta)

    def phi(self, t):
        return np.exp(-np.asarray(t, dtype=float))

    def phi_inv(self, u):
        with np.errstate(divide="ignore"):
            return -np.log(np.asarray(u, dtype=float))

    def phi_deriv(self, k, t):
        return (-1.0) ** k * np.exp(-np.asarray(t, dtype=float))

    def tau(self) -> float:
        return 0.0

    def radial_law(self, d):
        from .williamson import erlang_radial

        return erlang_radial(d)

    def frailty(self, rng, n):
        return np.ones(n)


class ClaytonGenerator(ArchimedeanGenerator):
    """phi(t) = (1 + theta t)_+^(-1/theta); theta = 0 is independence.

    Negative theta gives a non-strict generator that hits zero at -1/theta;
    it is d-monotone for d <= 1 - 1/theta.
    """

    def __init__(self, theta: float):
        theta = float(theta)
        if not math.isfinite(theta) or theta < -1.0:
            raise DomainError(f"Clayton parameter must lie in [-1, inf), got {theta}")
        super().__init__(theta)
        if theta < 0:
            self.support_end = -1.0 / theta
            self.max_dim = math.floor(1.0 - 1.0 / theta + 1e-9)

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        th = self.theta
        if th == 0.0:
            return np.exp(-t)
        base = th * t
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            out = np.exp(-np.log1p(base) / th)
        if th < 0:
            out = np.where(1.0 + base > 0.0, out, 0.0)
        return out

    def phi_inv(self, u):
        u = np.asarray(u, dtype=float)
        th = self.theta
        with np.errstate(divide="ignore", over="ignore"):
            if th == 0.0:
                return -np.log(u)
            return np.expm1(-th * np.log(u)) / th

    def phi_deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        th = self.theta
        if k == 0:
            return self.phi(t)
        if th == 0.0:
            return (-1.0) ** k * np.exp(-t)
        coef = (-1.0) ** k * math.prod(1.0 + j * th for j in range(k))
        base = th * t
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            out = coef * np.exp((-1.0 / th - k) * np.log1p(base))
        # strict inequality: at the support end this yields the right derivative
        return np.where(1.0 + base > 0.0, out, 0.0)

    def tau(self) -> float:
        return self.theta / (self.theta + 2.0)

    def radial_law(self, d):
        if self.theta == 0.0:
            from .williamson import erlang_radial

            return erlang_radial(d)
        return None

    def frailty(self, rng, n):
        th = self.theta
        if th < 0:
            raise UnsupportedOperationError(
                "Clayton with negative theta has no frailty law; use the Williamson sampler"
            )
        if th == 0.0:
            return np.ones(n)
        # Laplace transform of Gamma(1/theta, scale theta) is (1 + theta t)^(-1/theta)
        return rng.gamma(1.0 / th, th, size=n)


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _polylog_neg(n: int, x, one_minus_x=None):
    """Li_{-n}(x) for integer n >= 0, valid for every x < 1."""
    q = x / ((1.0 - x) if one_minus_x is None else one_minus_x)
    acc = np.zeros_like(q)
    for j in range(n + 1):
        acc = acc + math.factorial(j) * _stirling2(n + 1, j + 1) * q ** (j + 1)
    return acc


def debye1(x: float) -> float:
    """First Debye function D_1(x) = (1/x) int_0^x t / (e^t - 1) dt."""
    if x == 0.0:
        return 1.0

    def f(t):
        if t == 0.0:
            return 1.0
        if t > 0.0:
            return t * math.exp(-t) / -math.expm1(-t)
        return t / math.expm1(t)

    # beyond t = 60 the positive integrand is below 1e-24
    upper = min(x, 60.0)
    val, _ = integrate.quad(f, 0.0, upper, epsabs=1e-15, epsrel=1e-13, limit=200)
    return val / x


def frank_tau(theta: float) -> float:
    if theta == 0.0:
        return 0.0
    return 1.0 - 4.0 / theta * (1.0 - debye1(theta))


class FrankGenerator(ArchimedeanGenerator):
    """phi(t) = -log(1 - (1 - e^-theta) e^-t) / theta; theta = 0 is independence.

    Completely monotone for theta > 0; only 2-monotone for theta < 0.
    """

    def __init__(self, theta: float):
        theta = float(theta)
        if not math.isfinite(theta):
            raise DomainError(f"Frank parameter must be finite, got {theta}")
        super().__init__(theta)
        self._a = -math.expm1(-theta)
        if theta < 0:
            self.max_dim = 2

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        if self.theta == 0.0:
            return np.exp(-t)
        x = self._a * np.exp(-t)
        with np.errstate(divide="ignore", invalid="ignore"):
            # near t = 0 and large theta, 1 - x cancels badly; use the exact rewrite
            near = -np.log(self._one_minus(t))
        out = np.where(x > 0.5, near, -np.log1p(-x)) / self.theta
        # log(exp(-theta)) need not round back to -theta; pin phi(0) = 1
        return np.where(t == 0.0, 1.0, out)

    def _one_minus(self, t):
        # 1 - (1 - e^-theta) e^-t, without cancellation
        return -np.expm1(-t) + np.exp(-self.theta - t)

    def phi_inv(self, u):
        u = np.asarray(u, dtype=float)
        th = self.theta
        with np.errstate(divide="ignore"):
            if th == 0.0:
                return -np.log(u)
            return np.where(u == 1.0, 0.0, -np.log(np.expm1(-th * u) / math.expm1(-th)))

    def phi_deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        th = self.theta
        if k == 0:
            return self.phi(t)
        if th == 0.0:
            return (-1.0) ** k * np.exp(-t)
        x = self._a * np.exp(-t)
        return (-1.0) ** k / th * _polylog_neg(k - 1, x, self._one_minus(t))

    def tau(self) -> float:
        return frank_tau(self.theta)

    def radial_law(self, d):
        if self.theta == 0.0:
            from .williamson import erlang_radial

            return erlang_radial(d)
        return None

    def frailty(self, rng, n):
        th = self.theta
        if th < 0:
            raise UnsupportedOperationError("Frank with negative theta has no frailty law")
        if th == 0.0:
            return np.ones(n)
        # logarithmic series on {1, 2, ...} with p = 1 - e^-theta
        return rng.logseries(self._a, size=n).astype(float)


class GumbelGenerator(ArchimedeanGenerator):
    """phi(t) = exp(-t^(1/theta)), theta >= 1; theta = 1 is independence."""

    def __init__(self, theta: float):
        theta = float(theta)
        if not math.isfinite(theta) or theta < 1.0:
            raise DomainError(f"Gumbel parameter must lie in [1, inf), got {theta}")
        super().__init__(theta)
        self._alpha = 1.0 / theta

    def phi(self, t):
        return np.exp(-np.asarray(t, dtype=float) ** self._alpha)

    def phi_inv(self, u):
        with np.errstate(divide="ignore"):
            return (-np.log(np.asarray(u, dtype=float))) ** self.theta

    def phi_deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        a = self._alpha
        if k == 0:
            return self.phi(t)
        if a == 1.0:
            return (-1.0) ** k * np.exp(-t)
        # derivatives of exp(g) with g(t) = -t^a:
        # y^(n+1) = sum_i C(n, i) y^(n-i) g^(i+1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            gder = []
            falling = 1.0
            for m in range(1, k + 1):
                falling *= a - (m - 1)
                gder.append(-falling * t ** (a - m))
            ys = [self.phi(t)]
            for n in range(k):
                acc = np.zeros_like(t)
                for i in range(n + 1):
                    acc = acc + math.comb(n, i) * ys[n - i] * gder[i]
                ys.append(acc)
        return ys[k]

    def tau(self) -> float:
        return 1.0 - 1.0 / self.theta

    def radial_law(self, d):
        if self.theta == 1.0:
            from .williamson import erlang_radial

            return erlang_radial(d)
        return None

    def frailty(self, rng, n):
        a = self._alpha
        if a == 1.0:
            return np.ones(n)
        # one-sided stable with Laplace transform exp(-t^a), Chambers-Mallows-Stuck form
        theta_u = rng.uniform(0.0, math.pi, size=n)
        w = rng.exponential(1.0, size=n)
        return (
            np.sin(a * theta_u)
            / np.sin(theta_u) ** (1.0 / a)
            * (np.sin((1.0 - a) * theta_u) / w) ** ((1.0 - a) / a)
        )


class ArchimedeanCopula(Copula):
    """Archimedean copula of dimension ``dim`` built from ``generator``."""

    family = "archimedean"

    def __init__(self, dim: int, generator: ArchimedeanGenerator):
        super().__init__(dim)
        if self.dim > generator.max_dim:
            raise DomainError(
                f"{generator!r} is only {generator.max_dim}-monotone; cannot build a "
                f"{self.dim}-dimensional copula"
            )
        self.generator = generator

    @property
    def theta(self) -> float:
        return self.generator.theta

    def _inv_sum(self, u):
        # sorting makes the sum exactly permutation invariant
        return np.sum(np.sort(self.generator.phi_inv(u), axis=1), axis=1)

    def _cdf(self, u):
        out = self.generator.phi(self._inv_sum(u))
        return np.clip(out, 0.0, 1.0)

    def _pdf(self, u):
        g = self.generator
        t = g.phi_inv(u)
        s = np.sum(np.sort(t, axis=1), axis=1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            top = g.phi_deriv(self.dim, s)
            inner = g.phi_deriv(1, t)
            dens = top / np.prod(inner, axis=1)
        inside = s < g.support_end
        dens = np.where(inside, dens, 0.0)
        bad = ~np.isfinite(dens)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise NumericalError(
                f"density overflow for {self!r} at u={u[i].tolist()} "
                f"(phi^({self.dim}) = {np.atleast_1d(top)[i]!r})"
            )
        return np.maximum(dens, 0.0)

    def tau(self) -> float:
        return self.generator.tau()

    def williamson_dist(self):
        """Radial law R with U = phi(R * S), S uniform on the simplex."""
        from .williamson import inverse_williamson

        return inverse_williamson(self.generator, self.dim)

    def sample_frailty(self, rng, n):
        from .williamson import arch_sample_frailty

        return arch_sample_frailty(self, rng, n)

    def sample_williamson(self, rng, n):
        from .williamson import arch_sample_williamson

        return arch_sample_williamson(self, rng, n)

    def _sample(self, rng, n):
        from .williamson import arch_sample_frailty, arch_sample_williamson

        try:
            return arch_sample_frailty(self, rng, n)
        except UnsupportedOperationError:
            return arch_sample_williamson(self, rng, n)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, generator={self.generator!r})"


class ClaytonCopula(ArchimedeanCopula):
    family = "clayton"

    def __init__(self, dim: int, theta: float):
        lower = -1.0 / (dim - 1) if isinstance(dim, (int, np.integer)) and dim >= 2 else -1.0
        if not (theta >= lower - 1e-12) or not math.isfinite(theta):
            raise DomainError(
                f"Clayton theta must lie in [{lower:g}, inf) for dimension {dim}, got {theta}"
            )
        super().__init__(dim, ClaytonGenerator(max(theta, lower)))

    def __repr__(self):
        return f"ClaytonCopula({self.dim}, {self.theta!r})"


class FrankCopula(ArchimedeanCopula):
    family = "frank"

    def __init__(self, dim: int, theta: float):
        theta = float(theta)
        if not math.isfinite(theta) or (dim != 2 and theta < 0):
            interval = "(-inf, inf)" if dim == 2 else "[0, inf)"
            raise DomainError(f"Frank theta must lie in {interval} for dimension {dim}, got {theta}")
        super().__init__(dim, FrankGenerator(theta))

    def __repr__(self):
        return f"FrankCopula({self.dim}, {self.theta!r})"


class GumbelCopula(ArchimedeanCopula):
    family = "gumbel"

    def __init__(self, dim: int, theta: float):
        theta = float(theta)
        if not math.isfinite(theta) or theta < 1.0:
            raise DomainError(f"Gumbel theta must lie in [1, inf), got {theta}")
        super().__init__(dim, GumbelGenerator(theta))

    def __repr__(self):
        return f"GumbelCopula({self.dim}, {self.theta!r})"


FAMILIES = {"clayton": ClaytonCopula, "frank": FrankCopula, "gumbel": GumbelCopula}


def family_bounds(family: str, dim: int) -> tuple[float, float]:
    """Closed parameter interval of a one-parameter family in dimension ``dim``."""
    family = family.lower()
    if family == "clayton":
        return -1.0 / (dim - 1), math.inf
    if family == "frank":
        return (-math.inf if dim == 2 else 0.0), math.inf
    if family == "gumbel":
        return 1.0, math.inf
    raise DomainError(f"unknown Archimedean family {family!r}; expected one of {sorted(FAMILIES)}")


def make_copula(family: str, dim: int, theta: float | None = None) -> Copula:
    """Build any supported copula from its family tag."""
    family = family.lower()
    if family == "independence":
        return IndependenceCopula(dim)
    if family == "comonotone":
        return ComonotoneCopula(dim)
    if family == "countermonotone":
        return CountermonotoneCopula(dim)
    if family not in FAMILIES:
        raise DomainError(
            f"unknown copula family {family!r}; expected one of "
            "independence, comonotone, countermonotone, " + ", ".join(FAMILIES)
        )
    if theta is None:
        raise DomainError(f"{family} copula needs a theta parameter")
    return FAMILIES[family](dim, theta)


def tau_inv(family: str, tau: float) -> float:
    """Parameter theta whose Kendall's tau equals ``tau``."""
    family = family.lower()
    tau = float(tau)
    if not math.isfinite(tau):
        raise DomainError(f"tau must be finite, got {tau}")
    if family == "clayton":
        if not -1.0 <= tau < 1.0:
            raise DomainError(f"Clayton attains tau in [-1, 1), got {tau}")
        return 2.0 * tau / (1.0 - tau)
    if family == "gumbel":
        if not 0.0 <= tau < 1.0:
            raise DomainError(f"Gumbel attains tau in [0, 1), got {tau}")
        return 1.0 / (1.0 - tau)
    if family == "frank":
        if not -1.0 < tau < 1.0:
            raise DomainError(f"Frank attains tau in (-1, 1), got {tau}")
        if tau == 0.0:
            return 0.0
        # frank_tau is odd and increasing in theta
        target = abs(tau)
        lo, hi = 0.0, 1.0
        while frank_tau(hi) < target:
            lo, hi = hi, hi * 2.0
            if hi > 1e12:
                raise DomainError(f"tau {tau} is too close to 1 for Frank inversion")
        mid = 0.5 * (lo + hi)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            val = frank_tau(mid)
            if abs(val - target) <= 1e-12:
                break
            if val < target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * hi:
                break
        return math.copysign(mid, tau)
    raise DomainError(f"no tau inversion for family {family!r}")
