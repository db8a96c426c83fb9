"""Resolution combinatorics, zeta functions and monodromy of toric idealistic clusters."""

__version__ = "0.1.0"
