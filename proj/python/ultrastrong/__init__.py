"""Python bindings for the ultrastrong C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import ConvergenceError, DimensionError, RegistryError, constants

__all__ = [name for name in dir() if not name.startswith("_")]
