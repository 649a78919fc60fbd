"""
Spectral Neural Operators
Chebyshev and Fourier series networks, baselines, benchmark problems and a
LangGraph-based experiment harness.
"""

__version__ = "1.0.0"
