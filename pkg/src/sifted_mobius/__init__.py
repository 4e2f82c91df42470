"""Sifted Mobius sums M_{k,omega}(x, y) = sum_{n<=x, p_1(n)>y} mu(n) C(omega(n)-1, k-1).

Exact sieve evaluation, the constants and prime-sum derivatives of the
Selberg-Delange expansion near s = 1, the resulting main term, and a small
calculus of growth orders.
"""

from .exact_sums import SumRequest, mkw, mkw_exact
from .constants import gamma_mn_closed, gamma_mn_oracle
from .primesums import continuation_value, g_deriv, G_deriv
from .series_asym import MainTermParams, main_term, phi_table

__version__ = "0.1.0"

__all__ = [
    "SumRequest",
    "mkw",
    "mkw_exact",
    "gamma_mn_closed",
    "gamma_mn_oracle",
    "continuation_value",
    "g_deriv",
    "G_deriv",
    "MainTermParams",
    "main_term",
    "phi_table",
]
