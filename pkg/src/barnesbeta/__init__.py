"""Barnes multiple gamma functions, Barnes beta laws and their Selberg and xi applications."""

from .errors import (
    AccuracyError,
    BarnesBetaError,
    CapacityError,
    DomainError,
    PoleError,
    TruncationError,
)
from .identities import IdentityReport, identity_residual
from .mellin import BarnesBetaParams, MellinValue, eta, log_eta, mass_at_one
from .multigamma import barnes_g, log_gamma
from .sampling import DEFAULT_SEED, RngStream, sample_beta
from .selberg import MasterParams, SelbergParams, critical_mellin, selberg_mellin
from .series import GammaParams, bernoulli_poly
from . import xi

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "BarnesBetaError",
    "CapacityError",
    "DomainError",
    "PoleError",
    "TruncationError",
    "IdentityReport",
    "identity_residual",
    "BarnesBetaParams",
    "MellinValue",
    "eta",
    "log_eta",
    "mass_at_one",
    "barnes_g",
    "log_gamma",
    "DEFAULT_SEED",
    "RngStream",
    "sample_beta",
    "MasterParams",
    "SelbergParams",
    "critical_mellin",
    "selberg_mellin",
    "GammaParams",
    "bernoulli_poly",
    "xi",
]
