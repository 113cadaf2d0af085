"""steinlat: exact combinatorics and linear algebra for the valuation
filtration of the mod-l Steinberg lattice of GL_n(q)."""

from .galoisring import Context, build_context

__all__ = ["Context", "build_context"]
__version__ = "0.1.0"
