"""
Season-level predictions and the win value of marginal runs.

Run-value surfaces work in season run totals with ``beta = 0`` so that
``P(x, y) = x**g / (x**g + y**g)``; fit-derived predictions use the fitted
``beta = -0.5`` per-game means instead. Both go through `pythag_wp`.
"""

from dataclasses import dataclass

import numpy as np

from .weibull import pythag_wp

__all__ = [
    "RunEnvironment",
    "WinValueGrid",
    "predicted_wins",
    "games_off",
    "marginal_wins_scoring",
    "marginal_wins_preventing",
    "score_vs_prevent_surface",
    "default_run_grid",
    "slope_B",
    "linear_wp",
    "linearization_error",
    "linearization_band_max",
]

# league runs per team, 2012 season
R_TOTAL_2012 = 700.567


@dataclass(frozen=True)
class RunEnvironment:
    r_total: float = R_TOTAL_2012
    gamma: float = 1.83
    games_per_season: int = 162

    def __post_init__(self):
        if not self.r_total > 0:
            raise ValueError("r_total must be positive")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.games_per_season < 1:
            raise ValueError("games_per_season must be positive")


@dataclass(frozen=True)
class WinValueGrid:
    """Win deltas on a grid; ``values[i, j]`` belongs to ``(x_range[j], y_range[i])``."""

    x_range: np.ndarray
    y_range: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.y_range), len(self.x_range)):
            raise ValueError("values must have shape (len(y_range), len(x_range))")


def predicted_wins(wp: float, games: int) -> float:
    return wp * games


def games_off(observed_wins, predicted):
    """Signed and absolute difference between observed and predicted wins."""
    diff = observed_wins - predicted
    return diff, abs(diff)


def marginal_wins_scoring(x, y, s, env: RunEnvironment, beta: float = 0.0):
    """Extra wins per season from scoring `s` more runs: ``G * (P(x+s, y) - P(x, y))``."""
    g = env.gamma
    return env.games_per_season * (pythag_wp(np.add(x, s), y, beta, g) - pythag_wp(x, y, beta, g))


def marginal_wins_preventing(x, y, s, env: RunEnvironment, beta: float = 0.0):
    """Extra wins per season from allowing `s` fewer runs: ``G * (P(x, y-s) - P(x, y))``."""
    if np.any(np.subtract(y, s) <= beta):
        raise ValueError("runs allowed minus s must stay above beta")
    g = env.gamma
    return env.games_per_season * (pythag_wp(x, np.subtract(y, s), beta, g) - pythag_wp(x, y, beta, g))


def default_run_grid():
    """600 to 800 runs per season in steps of 5."""
    return np.arange(600.0, 800.0 + 2.5, 5.0)


def score_vs_prevent_surface(x_range=None, y_range=None, s: float = 10.0, env: RunEnvironment = None,
                             beta: float = 0.0, kind: str = "diff") -> WinValueGrid:
    """
    Grid of marginal run values.

    ``kind`` selects scoring gains, prevention gains or their difference
    (scoring minus preventing). The difference is positive where runs
    allowed exceed runs scored, i.e. where scoring is the better buy.
    """
    env = env or RunEnvironment()
    x = default_run_grid() if x_range is None else np.asarray(x_range, dtype=float)
    y = default_run_grid() if y_range is None else np.asarray(y_range, dtype=float)
    xx, yy = np.meshgrid(x, y)
    if kind == "score":
        vals = marginal_wins_scoring(xx, yy, s, env, beta)
    elif kind == "prevent":
        vals = marginal_wins_preventing(xx, yy, s, env, beta)
    elif kind == "diff":
        vals = marginal_wins_scoring(xx, yy, s, env, beta) - marginal_wins_preventing(xx, yy, s, env, beta)
    else:
        raise ValueError(f"unknown surface kind {kind!r}")
    return WinValueGrid(x, y, np.asarray(vals, dtype=float))


def slope_B(env: RunEnvironment) -> float:
    """Slope ``gamma / (4 * r_total)`` of the linear win predictor, per run of differential."""
    return env.gamma / (4.0 * env.r_total)


def linear_wp(rs_total, ra_total, b: float, return_clamped: bool = False):
    """
    Linear winning percentage ``0.5 + b * (RS - RA)`` from season run totals.

    The result is clamped to [0, 1]; pass ``return_clamped=True`` to also
    get a flag saying whether clamping happened.
    """
    raw = 0.5 + b * (np.asarray(rs_total, dtype=float) - np.asarray(ra_total, dtype=float))
    wp = np.clip(raw, 0.0, 1.0)
    clamped = raw != wp
    if np.ndim(wp) == 0:
        wp, clamped = float(wp), bool(clamped)
    if return_clamped:
        return wp, clamped
    return wp


def linearization_error(rs_total, ra_total, env: RunEnvironment):
    """``|pythag - linear|`` at season totals, with the slope taken from `env`."""
    exact = pythag_wp(rs_total, ra_total, 0.0, env.gamma)
    return np.abs(exact - linear_wp(rs_total, ra_total, slope_B(env)))


def linearization_band_max(env: RunEnvironment, band: float = 50.0, n: int = 401) -> float:
    """
    Worst linearization error near the expansion point.

    Scans RS and RA over ``r_total +/- band`` keeping ``|RS - RA| <= band``.
    """
    r = env.r_total + np.linspace(-band, band, n)
    rs, ra = np.meshgrid(r, r)
    keep = np.abs(rs - ra) <= band + 1e-9
    return float(np.max(linearization_error(rs[keep], ra[keep], env)))
