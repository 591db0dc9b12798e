"""Desk-scale quantum error-mitigation laboratory.

Simulates noisy quantum processes (circuits, spin dynamics,
continuous-variable dynamics) across a grid of noise levels, builds
fiducial-process training data, trains a neural mitigator on it, and
benchmarks the result against zero-noise extrapolation and Clifford
data regression.
"""

__version__ = "0.1.0"
