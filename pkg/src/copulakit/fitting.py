"""Copula and Sklar-model estimation.

The default copula estimator inverts the average pairwise sample Kendall's
tau; ``method="mle"`` maximizes the pseudo-log-likelihood by golden-section
search. Marginals are fitted separately by maximum likelihood and the
copula always sees rank-based pseudo-observations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .archimedean import FAMILIES, family_bounds, make_copula, tau_inv
from .core import kendall_tau_sample, pseudo_observations
from .errors import CopulaError, DomainError, EstimationError
from .marginals import m_fit
from .sklar import SklarDistribution

__all__ = [
    "FitReport",
    "fit_copula_tau",
    "fit_copula_mle",
    "fit_copula",
    "fit_sklar",
    "pseudo_loglik",
    "CLIP_TOLERANCE",
]

CLIP_TOLERANCE = 0.05
# search range for MLE: parameters whose tau reaches 0.999
_TAU_CAP = 0.999
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class FitReport:
    family: str
    copula_theta: float
    method: str
    n: int
    tau_hat: float
    loglik: float | None = None
    clipped: bool = False
    marginal_params: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["theta"] = out.pop("copula_theta")
        if out["loglik"] is not None and not math.isfinite(out["loglik"]):
            out["loglik"] = None
        return out


def _check_pseudo(pseudo) -> np.ndarray:
    u = np.asarray(pseudo, dtype=float)
    if u.ndim != 2:
        raise DomainError(f"pseudo-observations must be an (n, d) matrix, got shape {u.shape}")
    n, d = u.shape
    if d < 2:
        raise DomainError(f"copula fitting needs at least 2 columns, got {d}")
    if n < 2:
        raise DomainError(f"copula fitting needs at least 2 rows, got {n}")
    if np.isnan(u).any() or ((u <= 0) | (u >= 1)).any():
        raise DomainError("pseudo-observations must lie strictly inside (0, 1)")
    return u


def _check_family(family: str) -> str:
    family = family.lower()
    if family not in FAMILIES:
        raise DomainError(f"cannot fit family {family!r}; expected one of {sorted(FAMILIES)}")
    return family


def average_tau(u: np.ndarray) -> float:
    pairs = list(itertools.combinations(range(u.shape[1]), 2))
    return float(np.mean([kendall_tau_sample(u[:, i], u[:, j]) for i, j in pairs]))


def pseudo_loglik(family: str, dim: int, theta: float, u: np.ndarray) -> float:
    """Copula log-likelihood, -inf where the parameter is infeasible or overflows."""
    try:
        val = make_copula(family, dim, theta).loglikelihood(u)
    except CopulaError:
        return -math.inf
    return val if not math.isnan(val) else -math.inf


def _tau_range(family: str, dim: int) -> float:
    lo, _ = family_bounds(family, dim)
    if family == "clayton":
        return lo / (lo + 2.0)
    if family == "frank":
        return -1.0 if dim == 2 else 0.0
    return 0.0


def _theta_from_tau(family: str, dim: int, tau_hat: float) -> tuple[float, bool]:
    lo, _ = family_bounds(family, dim)
    tau_lo = _tau_range(family, dim)
    if tau_hat >= 1.0:
        raise EstimationError(f"sample tau {tau_hat:g} implies an infinite {family} parameter")
    if tau_hat < tau_lo or (family == "frank" and dim == 2 and tau_hat <= -1.0):
        if tau_lo - tau_hat > CLIP_TOLERANCE or not math.isfinite(lo):
            raise EstimationError(
                f"sample tau {tau_hat:g} is outside the range [{tau_lo:g}, 1) attainable by "
                f"{family} in dimension {dim}"
            )
        return lo, True
    return max(tau_inv(family, tau_hat), lo), False


def fit_copula_tau(family: str, pseudo) -> FitReport:
    """theta = tau_inv(family, mean pairwise Kendall tau)."""
    family = _check_family(family)
    u = _check_pseudo(pseudo)
    n, d = u.shape
    tau_hat = average_tau(u)
    theta, clipped = _theta_from_tau(family, d, tau_hat)
    ll = pseudo_loglik(family, d, theta, u)
    return FitReport(family, theta, "tau_inversion", n, tau_hat, ll, clipped)


def _golden_max(f, a: float, b: float, tol: float = 1e-8):
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc, fe = f(c), f(e)
    while abs(b - a) > tol * max(1.0, abs(c)):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + _INVPHI * (b - a)
            fe = f(e)
    return (c, fc) if fc >= fe else (e, fe)


def fit_copula_mle(family: str, pseudo) -> FitReport:
    """Maximize the pseudo-log-likelihood over theta.

    The bracket grows by doubling steps from the tau-inversion estimate
    until the likelihood drops, then golden-section search refines to
    1e-8 in theta.
    """
    family = _check_family(family)
    u = _check_pseudo(pseudo)
    n, d = u.shape
    lo, _ = family_bounds(family, d)
    hi = tau_inv(family, _TAU_CAP)
    if not math.isfinite(lo):
        lo = -hi
    tau_hat = average_tau(u)

    seen: dict[float, float] = {}

    def f(theta):
        theta = min(max(theta, lo), hi)
        if theta not in seen:
            seen[theta] = pseudo_loglik(family, d, theta, u)
        return seen[theta]

    tau_clamped = min(max(tau_hat, _tau_range(family, d) + 1e-9), _TAU_CAP)
    try:
        start, _ = _theta_from_tau(family, d, tau_clamped)
    except EstimationError:
        start = lo
    start = min(max(start, lo), hi)
    neutral = 1.0 if family == "gumbel" else 0.0
    candidates = [start, neutral, 0.5 * (start + neutral)]
    x0 = max(candidates, key=f)
    if not math.isfinite(f(x0)):
        raise EstimationError(f"{family} log-likelihood is not finite at any probe point")

    step = 0.1 * max(1.0, abs(x0))
    right, prev, s = x0, x0, step
    while right < hi:
        right = min(prev + s, hi)
        if f(right) <= f(prev):
            break
        prev, s = right, s * 2.0
    left, prev, s = x0, x0, step
    while left > lo:
        left = max(prev - s, lo)
        if f(left) <= f(prev):
            break
        prev, s = left, s * 2.0

    theta, _ = _golden_max(f, left, right)
    theta = min(max(theta, lo), hi)
    best = max(seen, key=seen.get)
    if seen[best] > f(theta):
        theta = best
    return FitReport(family, theta, "mle", n, tau_hat, f(theta), False)


def fit_copula(family: str, pseudo, method: str = "tau") -> FitReport:
    method = method.lower()
    if method in ("tau", "tau_inversion"):
        return fit_copula_tau(family, pseudo)
    if method == "mle":
        return fit_copula_mle(family, pseudo)
    raise DomainError(f"unknown fitting method {method!r}; expected 'tau' or 'mle'")


def _marginal_spec(spec):
    if isinstance(spec, str):
        return spec, {}
    name, fixed = spec
    return name, dict(fixed)


def fit_sklar(copula_family: str, marginal_families, data, method: str = "tau"):
    """Two-stage fit: marginals by MLE, copula on rank pseudo-observations.

    ``marginal_families`` holds family names, or ``(name, fixed_params)``
    pairs such as ``("binomial", {"trials": 10})``.
    Returns ``(SklarDistribution, FitReport)``.
    """
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise DomainError(f"data must be an (n, d) matrix, got shape {x.shape}")
    specs = [_marginal_spec(s) for s in marginal_families]
    if x.shape[1] < 2:
        raise DomainError(f"a copula needs at least 2 columns, got {x.shape[1]}")
    if len(specs) != x.shape[1]:
        raise DomainError(f"{len(specs)} marginal families given for {x.shape[1]} data columns")
    marginals = []
    for j, (name, fixed) in enumerate(specs):
        try:
            marginals.append(m_fit(name, x[:, j], **fixed))
        except CopulaError as exc:
            raise type(exc)(f"column {j}: {exc}") from None
    report = fit_copula(copula_family, pseudo_observations(x), method)
    report.marginal_params = [m.to_dict() for m in marginals]
    model = SklarDistribution(make_copula(copula_family, x.shape[1], report.copula_theta), marginals)
    return model, report
