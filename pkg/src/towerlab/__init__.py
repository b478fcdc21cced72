"""Exact censuses, zeta functions and class-number bounds along Artin-Schreier towers."""

__version__ = "0.1.0"

import mpmath as _mpmath

# real-valued evaluators work at 50 significant digits
_mpmath.mp.dps = 50
