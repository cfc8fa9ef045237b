"""quotefam: reconstruction, measurement and simulation of quotation families."""

from . import (
    communities,
    corpus,
    evalstats,
    metrics,
    morphsim,
    mutation,
    simgraph,
    subfam,
    textprep,
)
from .corpus import Mention, Quote, QuoteSet, aggregate, parse_mention_stream
from .estimators import FamilyClusterer
from .exceptions import (
    ConfigError,
    DomainError,
    FitError,
    FormatError,
    MissingArtifactError,
    QuotefamError,
)

__version__ = "0.1.0"

__all__ = [
    "Mention",
    "Quote",
    "QuoteSet",
    "aggregate",
    "parse_mention_stream",
    "FamilyClusterer",
    "QuotefamError",
    "FormatError",
    "DomainError",
    "ConfigError",
    "FitError",
    "MissingArtifactError",
    "communities",
    "corpus",
    "evalstats",
    "metrics",
    "morphsim",
    "mutation",
    "simgraph",
    "subfam",
    "textprep",
    "__version__",
]
