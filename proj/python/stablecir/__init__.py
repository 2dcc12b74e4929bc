"""alpha-stable CIR processes: simulation, Riccati Laplace transforms, growth-rate MLE."""

from ._stablecir import *  # noqa: F401,F403
from ._stablecir import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
