"""Quantum 2x2 games, Yang-Baxter braiding gates and SSQM partner spectra."""

from .games import PayoffBimatrix
from .quantum import Correlation, QuantumGame, QubitStrategy

__all__ = ["PayoffBimatrix", "QuantumGame", "QubitStrategy", "Correlation"]
__version__ = "0.1.0"
