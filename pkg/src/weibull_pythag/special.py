"""Gamma function and chi-square critical values."""

import math

from scipy.stats import chi2

__all__ = ["gamma_fn", "chi2_critical_value"]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos(s):
    # valid for s >= 0.5
    z = s - 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def gamma_fn(s: float) -> float:
    """
    Gamma function for positive real arguments.

    Uses the Lanczos approximation (g=7, 9 coefficients) and the reflection
    formula below 1/2. Relative error is below 1e-12 on (0, 50].

    Parameters
    ----------
    s : float
        Argument, must be strictly positive.

    Returns
    -------
    float
        Gamma(s).

    Raises
    ------
    ValueError
        If `s` is not strictly positive (or not finite).
    """
    s = float(s)
    if not s > 0.0 or math.isinf(s):
        raise ValueError(f"gamma_fn requires a finite positive argument, got {s!r}")
    if s < 0.5:
        return math.pi / (math.sin(math.pi * s) * _lanczos(1.0 - s))
    return _lanczos(s)


def chi2_critical_value(dof: int, level: float, comparisons: int = 1) -> float:
    """Upper critical value of a chi-square test at confidence `level`.

    With ``comparisons > 1`` the significance ``1 - level`` is divided by the
    number of comparisons (Bonferroni).
    """
    if dof < 1:
        raise ValueError("dof must be a positive integer")
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1)")
    alpha = (1.0 - level) / comparisons
    return float(chi2.isf(alpha, dof))
