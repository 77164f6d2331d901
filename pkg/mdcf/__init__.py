"""mdcf
=================
Mini-README: Exact multidimensional continued fractions of algebraic numbers. The
package computes Algebraic Jacobi-Perron expansions with certified real arithmetic,
detects periodicity exactly, reproduces the published digit tables and adjudicates
them against an independent interval oracle. Configuration and logging helpers are
re-exported here for convenience.
"""

from .config import get_settings
from .logger import configure_logging, get_logger

__all__ = ["configure_logging", "get_logger", "get_settings"]
