"""Power series distributions with a prescribed covariance characteristic V(x)."""

from .covariance import CovarianceSpec, parse_spec, preset
from .fps import Series
from .synthesis import SynthesisResult, synthesize
from .transforms import TransformSpec

__all__ = [
    "CovarianceSpec",
    "Series",
    "SynthesisResult",
    "TransformSpec",
    "parse_spec",
    "preset",
    "synthesize",
]

__version__ = "0.1.0"
