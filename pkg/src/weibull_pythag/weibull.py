"""
Three-parameter Weibull distribution and the Pythagorean win probability.

The density with scale ``alpha``, shift ``beta`` and shape ``gamma`` is::

    f(x) = (gamma / alpha) * ((x - beta) / alpha)**(gamma - 1)
           * exp(-((x - beta) / alpha)**gamma)        for x >= beta

and zero below ``beta``. When runs scored and runs allowed are independent
Weibulls sharing ``beta`` and ``gamma``, the probability that the offence
outscores the defence has the closed form::

    (RS - beta)**gamma / ((RS - beta)**gamma + (RA - beta)**gamma)

where RS and RA are the two means. The ratio form means the inputs can be
per-game averages or season totals (with ``beta = 0``); rescaling both
leaves the result unchanged.
"""

from dataclasses import dataclass

import numpy as np

from .special import gamma_fn

__all__ = [
    "WeibullParams",
    "MatchupParams",
    "pdf",
    "cdf",
    "sf",
    "mean",
    "variance",
    "alpha_from_mean",
    "pythag_wp",
    "win_probability",
    "log5",
    "matchup_from_means",
]


@dataclass(frozen=True)
class WeibullParams:
    """Scale `alpha` (runs), shift `beta` (runs) and shape `gamma`."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if not np.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta!r}")


@dataclass(frozen=True)
class MatchupParams:
    """Runs-scored and runs-allowed distributions with a shared shift and shape."""

    rs: WeibullParams
    ra: WeibullParams

    def __post_init__(self):
        if self.rs.beta != self.ra.beta:
            raise ValueError("runs scored and runs allowed must share beta")
        if self.rs.gamma != self.ra.gamma:
            raise ValueError("runs scored and runs allowed must share gamma")

    @property
    def beta(self):
        return self.rs.beta

    @property
    def gamma(self):
        return self.rs.gamma


def _out(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _reduced(p, x):
    # (x - beta) / alpha, clipped to the support
    z = (np.asarray(x, dtype=float) - p.beta) / p.alpha
    return np.maximum(z, 0.0)


def pdf(p: WeibullParams, x):
    """Density at `x`; zero below the shift. Accepts scalars or arrays."""
    x_arr = np.asarray(x, dtype=float)
    z = _reduced(p, x_arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (p.gamma / p.alpha) * z ** (p.gamma - 1.0) * np.exp(-(z**p.gamma))
    val = np.where(x_arr < p.beta, 0.0, val)
    return _out(val, x)


def cdf(p: WeibullParams, x):
    """``1 - exp(-((x - beta)/alpha)**gamma)`` on the support, 0 below it."""
    z = _reduced(p, x)
    return _out(-np.expm1(-(z**p.gamma)), x)


def sf(p: WeibullParams, x):
    """Survival function ``1 - cdf``, accurate in the upper tail."""
    z = _reduced(p, x)
    return _out(np.exp(-(z**p.gamma)), x)


def mean(p: WeibullParams) -> float:
    return p.alpha * gamma_fn(1.0 + 1.0 / p.gamma) + p.beta


def variance(p: WeibullParams) -> float:
    g1 = gamma_fn(1.0 + 1.0 / p.gamma)
    g2 = gamma_fn(1.0 + 2.0 / p.gamma)
    return max(p.alpha**2 * (g2 - g1 * g1), 0.0)


def alpha_from_mean(target_mean: float, beta: float, gamma: float) -> float:
    """Scale that gives a Weibull with shift `beta` and shape `gamma` the requested mean.

    Raises
    ------
    ValueError
        If ``target_mean <= beta`` or ``gamma <= 0``.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    if not target_mean > beta:
        raise ValueError(
            f"target mean {target_mean!r} must exceed beta {beta!r}; no positive scale reaches it"
        )
    return (target_mean - beta) / gamma_fn(1.0 + 1.0 / gamma)


def _ratio_wp(num, den, gamma):
    # num**g / (num**g + den**g) evaluated as 1 / (1 + (den/num)**g), with the
    # smaller share taken as the exact complement so wp(a, b) + wp(b, a) == 1.
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    hi = np.maximum(num, den)
    lo = np.minimum(num, den)
    with np.errstate(over="ignore"):
        big = 1.0 / (1.0 + (lo / hi) ** gamma)
    return np.where(num >= den, big, 1.0 - big)


def pythag_wp(rs_mean, ra_mean, beta: float, gamma: float):
    """
    Pythagorean won-loss percentage for mean runs scored and allowed.

    Parameters
    ----------
    rs_mean, ra_mean : float or array_like
        Mean runs scored and allowed. Per-game averages and season totals
        give the same answer.
    beta : float
        Common shift of both distributions (-0.5 for fitted models, 0 for
        the classical formula).
    gamma : float
        Common shape, i.e. the Pythagorean exponent.

    Returns
    -------
    float or ndarray
        Probability that runs scored exceed runs allowed.

    Raises
    ------
    ValueError
        If either mean is not above `beta`, or `gamma` is not positive.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    rs = np.asarray(rs_mean, dtype=float) - beta
    ra = np.asarray(ra_mean, dtype=float) - beta
    if np.any(rs <= 0) or np.any(ra <= 0):
        raise ValueError("runs scored and runs allowed must both exceed beta")
    wp = _ratio_wp(rs, ra, gamma)
    return _out(wp, wp)


def win_probability(m: MatchupParams) -> float:
    """Closed-form ``P(X > Y)`` for a matchup, ``a_rs**g / (a_rs**g + a_ra**g)``."""
    return float(_ratio_wp(m.rs.alpha, m.ra.alpha, m.gamma))


def log5(a: float, b: float) -> float:
    """Chance that a team of strength `a` beats a team of strength `b`."""
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise ValueError("log5 strengths must lie strictly between 0 and 1")
    num = a * (1.0 - b)
    return num / (num + (1.0 - a) * b)


def matchup_from_means(rs_mean: float, ra_mean: float, beta: float, gamma: float) -> MatchupParams:
    """Build the matchup whose means are `rs_mean` and `ra_mean`."""
    return MatchupParams(
        rs=WeibullParams(alpha_from_mean(rs_mean, beta, gamma), beta, gamma),
        ra=WeibullParams(alpha_from_mean(ra_mean, beta, gamma), beta, gamma),
    )
