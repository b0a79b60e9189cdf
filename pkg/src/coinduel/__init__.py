"""Weak-coin duel: win probabilities, certified indicator signs and optimal game length."""

__version__ = "0.1.0"

from .bounds import BoundSet, bound_set
from .model import GameParams, reflect, transform
from .numerics import CertifiedSign, InvalidProbability, PrecisionConfig, Sign, UncertifiedSign
from .optimizer import OptimalResult, optimal_n

__all__ = [
    "BoundSet",
    "CertifiedSign",
    "GameParams",
    "InvalidProbability",
    "OptimalResult",
    "PrecisionConfig",
    "Sign",
    "UncertifiedSign",
    "bound_set",
    "optimal_n",
    "reflect",
    "transform",
]
