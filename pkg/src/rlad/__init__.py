"""Random link activation-deletion networks with Mittag-Leffler waiting times."""

from . import chain, fpp, master, mlf, netsim, paretomatch
from ._backend import name as backend
from .chain import ChainParams
from .errors import (
    AccuracyError,
    ConditioningError,
    ConfigError,
    DomainError,
    ResourceError,
    RladError,
    TruncationError,
)
from .fpp import CountingLaw
from .master import SemiMarkovSpec, TransientSolution, transient_pmf
from .mlf import MlParams
from .netsim import EpidemicParams, SimConfig, SimEnsemble, WaitingLaw
from .paretomatch import MatchSpec, ParetoParams

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ChainParams",
    "ConditioningError",
    "ConfigError",
    "CountingLaw",
    "DomainError",
    "EpidemicParams",
    "MatchSpec",
    "MlParams",
    "ParetoParams",
    "ResourceError",
    "RladError",
    "SemiMarkovSpec",
    "SimConfig",
    "SimEnsemble",
    "TransientSolution",
    "TruncationError",
    "WaitingLaw",
    "backend",
    "chain",
    "fpp",
    "master",
    "mlf",
    "netsim",
    "paretomatch",
    "transient_pmf",
]
