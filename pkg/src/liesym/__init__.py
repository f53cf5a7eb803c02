"""liesym: exact Lie point- and approximate-symmetry analysis for pairs of
second-order ODEs, with a trig-polynomial expression kernel."""

from . import symexpr
from .symexpr import Context, Expr, parse

__version__ = "0.1.0"

__all__ = ["symexpr", "Context", "Expr", "parse", "__version__"]
