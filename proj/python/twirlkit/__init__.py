"""Eigenstate extraction and matrix-element estimation on small Pauli models.

The compiled extension carries the full API; this package re-exports it.
"""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
