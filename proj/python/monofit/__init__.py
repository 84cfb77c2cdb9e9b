"""Spectral estimation and analysis of monotone functions on the Boolean hypercube."""

from monofit._core import *  # noqa: F401,F403
from monofit._core import __version__  # noqa: F401
