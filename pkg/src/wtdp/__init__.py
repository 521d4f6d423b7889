"""Solvers and models for the weighted total domination problem."""

from .graph import (Instance, ObjectiveBreakdown, Solution, evaluate, example9_instance,
                    is_total_dominating)
from .rng import Rng

__version__ = "0.1.0"
__all__ = ["Instance", "ObjectiveBreakdown", "Solution", "evaluate", "example9_instance",
           "is_total_dominating", "Rng"]
