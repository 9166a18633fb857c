"""Nilpotent-subgroup proportions of finite groups.

Closed-form family formulas, a brute-force subgroup-lattice oracle, greedy
density approximation of targets in (0,1], and the CLT sampling experiment
with Kolmogorov-Smirnov summaries.
"""

from nilprop._core import *  # noqa: F401,F403
from nilprop._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
