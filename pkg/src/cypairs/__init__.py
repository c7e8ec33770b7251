"""cypairs: exact-arithmetic verification of log Calabi-Yau pair case studies."""

__version__ = "0.1.0"

from .qpoly import Poly, parse  # noqa: F401
