"""Exact order machinery: comparison indices, <x>-invariant orders on Z(x),
free metabelian groups via the Magnus embedding, bi-orders and a cone language."""

from .errors import OrdlabError
from .laurent import LaurentPoly, parse_poly
from .realalg import QAlpha, RealAlgebraic

__version__ = "0.1.0"

__all__ = ["LaurentPoly", "OrdlabError", "QAlpha", "RealAlgebraic", "parse_poly", "__version__"]
