"""Numerical engine for triharmonic curves in 3-dimensional f-Kenmotsu manifolds."""

__version__ = "0.1.0"

from .casebook import CaseId, case_residuals, legendre_check  # noqa: E402
from .errors import TrikurvError  # noqa: E402
from .jets import Jet  # noqa: E402
from .kenmotsu import ManifoldParams  # noqa: E402
from .tension import CurvePoint, residual_system, tau3_expanded, tau_k  # noqa: E402

__all__ = [
    "__version__", "CaseId", "CurvePoint", "Jet", "ManifoldParams", "TrikurvError",
    "case_residuals", "legendre_check", "residual_system", "tau3_expanded", "tau_k",
]
