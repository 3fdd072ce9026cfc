"""Instanton bundles on the flag threefold F(0,1,2), in exact arithmetic."""

from .ring import QQ, BiPoly, graded_basis, graded_dim, scalar

__all__ = ["QQ", "BiPoly", "graded_basis", "graded_dim", "scalar"]
