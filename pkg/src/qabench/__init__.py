"""Benchmark workbench for Ising/QUBO optimisation on the Chimera topology."""

__version__ = "0.1.0"
FORMAT_VERSION = 1
