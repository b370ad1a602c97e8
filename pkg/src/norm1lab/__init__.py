"""Exact cohomology of the Heisenberg group E_p(p^3) with norm-one torus coefficients."""

__version__ = "0.1.0"
