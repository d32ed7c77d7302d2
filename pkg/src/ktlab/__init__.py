"""Verification laboratory for kinetic transport Strichartz estimates.

Exact rational classification of exponent tuples, grid evaluation of the
free-transport propagator and its mixed Lebesgue/Lorentz norms, Whitney
decomposition of the causal region, Besicovitch counterexample probes,
and a desk-scale kinetic chemotaxis solver.
"""

from ktlab.rational import ExtRational, INF

__all__ = ["ExtRational", "INF"]

__version__ = "0.1.0"
