"""Copulas as distributions of random vectors.

Archimedean families (Clayton, Frank, Gumbel and user-defined generators)
with Williamson d-transform sampling, Sklar composition with univariate
marginals, and rank-based fitting.
"""

from .archimedean import (
    ArchimedeanCopula,
    ArchimedeanGenerator,
    ClaytonCopula,
    ClaytonGenerator,
    FrankCopula,
    FrankGenerator,
    GumbelCopula,
    GumbelGenerator,
    IndependenceGenerator,
    make_copula,
    phi_deriv_generic,
    tau_inv,
    tau_numeric,
)
from .core import (
    ComonotoneCopula,
    Copula,
    CountermonotoneCopula,
    IndependenceCopula,
    kendall_tau_sample,
    pseudo_observations,
)
from .errors import (
    CopulaError,
    DomainError,
    EstimationError,
    NumericalError,
    QuadratureError,
    UnsupportedOperationError,
)
from .fitting import FitReport, fit_copula, fit_copula_mle, fit_copula_tau, fit_sklar
from .marginals import Binomial, Exponential, Gamma, Normal, Pareto, Uniform, m_fit, make_marginal
from .sklar import SklarDist, SklarDistribution
from .williamson import (
    RadialDistribution,
    WilliamsonGenerator,
    arch_sample_frailty,
    arch_sample_williamson,
    inverse_williamson,
    sample_radial,
    sample_simplex,
    williamson_transform,
)

__version__ = "0.1.0"


__all__ = [
    "ArchimedeanCopula",
    "ArchimedeanGenerator",
    "ClaytonCopula",
    "ClaytonGenerator",
    "FrankCopula",
    "FrankGenerator",
    "GumbelCopula",
    "GumbelGenerator",
    "IndependenceGenerator",
    "make_copula",
    "phi_deriv_generic",
    "tau_inv",
    "tau_numeric",
    "ComonotoneCopula",
    "Copula",
    "CountermonotoneCopula",
    "IndependenceCopula",
    "kendall_tau_sample",
    "pseudo_observations",
    "CopulaError",
    "DomainError",
    "EstimationError",
    "NumericalError",
    "QuadratureError",
    "UnsupportedOperationError",
    "FitReport",
    "fit_copula",
    "fit_copula_mle",
    "fit_copula_tau",
    "fit_sklar",
    "Binomial",
    "Exponential",
    "Gamma",
    "Normal",
    "Pareto",
    "Uniform",
    "m_fit",
    "make_marginal",
    "SklarDist",
    "SklarDistribution",
    "RadialDistribution",
    "WilliamsonGenerator",
    "arch_sample_frailty",
    "arch_sample_williamson",
    "inverse_williamson",
    "sample_radial",
    "sample_simplex",
    "williamson_transform",
]
