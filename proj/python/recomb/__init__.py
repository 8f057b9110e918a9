"""Single-crossover recombination dynamics: coefficient functions, tree
probabilities, and Monte Carlo simulation of the forward and backward
processes."""

from recomb._core import *  # noqa: F401,F403

__version__ = "0.1.0"
