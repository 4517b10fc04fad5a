"""Numerical certificates for hypercontractivity and ultracontractivity of
subordinated Ornstein-Uhlenbeck, Laguerre and Jacobi semigroups."""
from .bernstein import BernsteinFn, LevySpec, parse_bernstein
from .logvalue import LogValue
from .measures import Measure, gauss_rule, lp_norm
from .orthopoly import PolyFamily, eigenvalue, eval_normalized

__version__ = "0.1.0"

__all__ = [
    "BernsteinFn",
    "LevySpec",
    "LogValue",
    "Measure",
    "PolyFamily",
    "eigenvalue",
    "eval_normalized",
    "gauss_rule",
    "lp_norm",
    "parse_bernstein",
]
