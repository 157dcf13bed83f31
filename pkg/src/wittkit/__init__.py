"""Exact arithmetic for Witt vectors, lattices over W_s(F_q), truncated Ore
rings, p-linear maps and a small restricted Lie algebra toolkit."""

__version__ = "0.1.0"
