"""Quantum homodyne tomography toolkit.

Simulates quadrature measurement data from Fock-basis states, reconstructs
the Wigner function with a band-limited kernel estimator, and provides the
numerical machinery (hardest parametric family, Fisher information, Bayesian
Cramer-Rao bound) to benchmark the estimator's pointwise risk against the
(log n)^3 / n target rate.
"""

__version__ = "0.1.0"

from .errors import (
    DivergentIntegrand,
    DomainError,
    InsufficientData,
    InvalidSpec,
    NonConvergence,
    NonpositiveDensity,
    PositivityViolation,
    QhtError,
    TruncationTooSmall,
)
from .estimator import Bandwidth, SmoothnessClass, bandwidth_rule, estimate_grid, estimate_point, kernel
from .experiments import RiskReport, bias_variance, mc_risk, rate_fit
from .homodyne import SampleSet, dual_radon, pdf, sample, sample_state
from .minimax import HardestFamily, VanTreesConfig, fisher_info, van_trees_report
from .states import DensityMatrix, StateSpec, alpha_diagonal, build
from .wigner import (
    GridSpec,
    WignerField,
    charfn,
    diag_from_charfn,
    l2_distance,
    wigner_diagonal_closed_form,
    wigner_grid,
    wigner_point,
)

__all__ = [
    "__version__",
    "QhtError",
    "NonConvergence",
    "DivergentIntegrand",
    "InvalidSpec",
    "DomainError",
    "TruncationTooSmall",
    "PositivityViolation",
    "NonpositiveDensity",
    "InsufficientData",
    "DensityMatrix",
    "StateSpec",
    "build",
    "alpha_diagonal",
    "SampleSet",
    "pdf",
    "dual_radon",
    "sample",
    "sample_state",
    "GridSpec",
    "WignerField",
    "charfn",
    "wigner_point",
    "wigner_grid",
    "wigner_diagonal_closed_form",
    "diag_from_charfn",
    "l2_distance",
    "Bandwidth",
    "SmoothnessClass",
    "kernel",
    "bandwidth_rule",
    "estimate_point",
    "estimate_grid",
    "HardestFamily",
    "VanTreesConfig",
    "fisher_info",
    "van_trees_report",
    "RiskReport",
    "mc_risk",
    "rate_fit",
    "bias_variance",
]
