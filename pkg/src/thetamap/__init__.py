"""Dynamics of the map x -> x + 1/x over binary finite fields.

Subpackages:
  gf2_arith      exact GF(2^t) arithmetic, orders, traces, factorization
  theta_graph    the functional graph over the projective line, decomposed
  order_dynamics order/trace classification of the subgroup of order q^2+1
  dickson_curve  Dickson root sets, Kloosterman sums, Koblitz point counts
  cli            command-line verification harness and exporters
"""

from thetamap.gf2_arith import (
    FieldElement,
    FieldError,
    FieldSpec,
    Factorization,
    factorize,
    make_field,
)
from thetamap.theta_graph import ProjPoint, ThetaGraph, build_graph, theta

__all__ = [
    "FieldElement",
    "FieldError",
    "FieldSpec",
    "Factorization",
    "factorize",
    "make_field",
    "ProjPoint",
    "ThetaGraph",
    "build_graph",
    "theta",
]
