"""Simplicial trees and group actions on them.

Finite and lazily expanded trees, automorphism classification (elliptic,
hyperbolic, inversion) with two independent amplitude computations,
Bass-Serre trees of amalgamated products of finite groups, quotient graphs
and trees of groups.
"""
from bsk.kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
