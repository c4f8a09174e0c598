"""Conic feasibility by hull projection.

Von Neumann / perceptron style iterations whose distance-reduction step
projects the origin onto the convex hull of generated points with a primal
active-set QP, plus a two-hull separation solver, a planar boundary-case
solver, a one-variable bracketing analyzer, and a seeded benchmark harness.
"""

__version__ = "0.1.0"
