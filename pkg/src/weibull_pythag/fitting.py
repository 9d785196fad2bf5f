"""
Least-squares and maximum-likelihood fits of (alpha_rs, alpha_ra, gamma).

Both runs-scored and runs-allowed distributions share the shift ``beta``
(fixed, default -0.5) and the shape ``gamma``. The search runs Nelder-Mead
in log-space so that every parameter stays positive, from method-of-moments
starting points at several trial shapes.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .binning import BinnedCounts, BinScheme, TeamSeason, bin_areas, bin_counts, default_fit_bins
from .montecarlo import SplitMix64
from .weibull import MatchupParams, WeibullParams, alpha_from_mean, matchup_from_means, mean, win_probability

__all__ = [
    "FitMethod",
    "FitConfig",
    "FitResult",
    "least_squares_objective",
    "log_likelihood",
    "fit_least_squares",
    "fit_mle",
    "fit_team",
]

# log-space search box; hitting it marks the fit as a boundary solution
_LOG_ALPHA_BOUNDS = (math.log(1e-3), math.log(1e3))
_LOG_GAMMA_BOUNDS = (math.log(0.05), math.log(50.0))
_BOUNDARY_SLACK = 1e-3


class FitMethod(str, enum.Enum):
    LEAST_SQUARES = "ls"
    MAX_LIKELIHOOD = "mle"


@dataclass(frozen=True)
class FitConfig:
    """
    Options shared by both fitting methods.

    Attributes
    ----------
    scheme : BinScheme
        Bins used to compare model and data.
    beta : float
        Fixed shift of both distributions.
    gamma_starts : tuple of float
        Trial shapes for the multi-start; each start takes its scales from
        the observed means.
    extra_starts : int
        Additional random starting shapes drawn from `seed`.
    seed : int
        Seed for the extra starts.
    fixed_gamma : float or None
        If set, the shape is pinned and only the two scales are fitted.
    fatol, xatol : float
        Nelder-Mead tolerances on objective spread and simplex size.
    max_evals : int
        Evaluation budget per start.
    polish_rounds : int
        Restarts from the incumbent best point, which shake Nelder-Mead out
        of collapsed simplices.
    min_games : int
        Seasons shorter than this are fitted but flagged unreliable.
    """

    scheme: BinScheme = field(default_factory=default_fit_bins)
    beta: float = -0.5
    gamma_starts: tuple = (1.5, 1.8, 2.1)
    extra_starts: int = 0
    seed: int = 0
    fixed_gamma: float = None
    fatol: float = 1e-8
    xatol: float = 1e-8
    max_evals: int = 10_000
    polish_rounds: int = 3
    min_games: int = 20


@dataclass(frozen=True)
class FitResult:
    """Best-fit parameters plus convergence metadata.

    ``objective`` is the sum of squared errors for least squares and the
    (multinomial-constant-free) log-likelihood for maximum likelihood.
    """

    alpha_rs: float
    alpha_ra: float
    gamma: float
    beta: float
    objective: float
    method: FitMethod
    iterations: int
    converged: bool
    n_evals: int = 0
    games: int = 0
    boundary: bool = False
    unreliable: bool = False
    start_objective: float = math.nan

    @property
    def rs_params(self) -> WeibullParams:
        return WeibullParams(self.alpha_rs, self.beta, self.gamma)

    @property
    def ra_params(self) -> WeibullParams:
        return WeibullParams(self.alpha_ra, self.beta, self.gamma)

    @property
    def predicted_rs(self) -> float:
        return mean(self.rs_params)

    @property
    def predicted_ra(self) -> float:
        return mean(self.ra_params)

    @property
    def win_pct(self) -> float:
        return win_probability(MatchupParams(self.rs_params, self.ra_params))

    @property
    def predicted_wins(self) -> float:
        return self.win_pct * self.games


def _check_pair(rs: BinnedCounts, ra: BinnedCounts):
    if rs.scheme != ra.scheme:
        raise ValueError("runs scored and runs allowed counts use different bin schemes")
    if rs.total_games != ra.total_games:
        raise ValueError("runs scored and runs allowed counts cover different numbers of games")


def least_squares_objective(rs, ra, alpha_rs, alpha_ra, gamma, beta=-0.5) -> float:
    """Sum over bins of ``(observed - G * area)**2`` for both runs scored and allowed."""
    _check_pair(rs, ra)
    g = rs.total_games
    total = 0.0
    for counts, alpha in ((rs, alpha_rs), (ra, alpha_ra)):
        areas = bin_areas(WeibullParams(alpha, beta, gamma), counts.scheme)
        total += float(np.sum((counts.as_array() - g * areas) ** 2))
    return total


def log_likelihood(rs, ra, alpha_rs, alpha_ra, gamma, beta=-0.5) -> float:
    """
    Binned multinomial log-likelihood without the multinomial coefficients.

    The coefficients do not depend on the parameters, so the maximiser is
    unchanged. An occupied bin with zero model area gives ``-inf``.
    """
    _check_pair(rs, ra)
    total = 0.0
    for counts, alpha in ((rs, alpha_rs), (ra, alpha_ra)):
        obs = counts.as_array()
        areas = bin_areas(WeibullParams(alpha, beta, gamma), counts.scheme)
        occupied = obs > 0
        if np.any(areas[occupied] <= 0.0):
            return -math.inf
        total += float(np.sum(obs[occupied] * np.log(areas[occupied])))
    return total


def _unpack(theta, fixed_gamma):
    if fixed_gamma is None:
        a_rs, a_ra, g = np.exp(theta)
    else:
        a_rs, a_ra = np.exp(theta)
        g = fixed_gamma
    return a_rs, a_ra, g


def _starts(team, config):
    rs_mean = float(np.mean(team.runs_scored))
    ra_mean = float(np.mean(team.runs_allowed))
    if config.fixed_gamma is not None:
        shapes = [config.fixed_gamma]
    else:
        shapes = list(config.gamma_starts)
        if config.extra_starts:
            u = SplitMix64(config.seed).random(config.extra_starts)
            shapes += list(1.0 + 2.0 * u)
    out = []
    for g in shapes:
        a_rs = alpha_from_mean(rs_mean, config.beta, g)
        a_ra = alpha_from_mean(ra_mean, config.beta, g)
        theta = [math.log(a_rs), math.log(a_ra)]
        if config.fixed_gamma is None:
            theta.append(math.log(g))
        out.append(np.array(theta))
    return out


def _fit(team: TeamSeason, config: FitConfig, method: FitMethod) -> FitResult:
    if team.n_games == 0:
        raise ValueError(f"{team.team_id}: cannot fit a season with no games")
    rs = bin_counts(team.runs_scored, config.scheme)
    ra = bin_counts(team.runs_allowed, config.scheme)
    beta = config.beta

    if method is FitMethod.LEAST_SQUARES:
        def loss(theta):
            return least_squares_objective(rs, ra, *_unpack(theta, config.fixed_gamma), beta=beta)
    else:
        def loss(theta):
            ll = log_likelihood(rs, ra, *_unpack(theta, config.fixed_gamma), beta=beta)
            return -ll if math.isfinite(ll) else math.inf

    bounds = [_LOG_ALPHA_BOUNDS, _LOG_ALPHA_BOUNDS]
    if config.fixed_gamma is None:
        bounds.append(_LOG_GAMMA_BOUNDS)
    options = {
        "xatol": config.xatol,
        "fatol": config.fatol,
        "maxfev": config.max_evals,
        "maxiter": config.max_evals,
    }

    starts = _starts(team, config)
    start_loss = min(loss(t) for t in starts)
    best = None
    n_evals = 0
    n_iter = 0
    for theta0 in starts:
        res = minimize(loss, theta0, method="Nelder-Mead", bounds=bounds, options=options)
        n_evals += res.nfev
        n_iter += res.nit
        if best is None or res.fun < best.fun:
            best = res

    for _ in range(config.polish_rounds):
        res = minimize(loss, best.x, method="Nelder-Mead", bounds=bounds, options=options)
        n_evals += res.nfev
        n_iter += res.nit
        improved = best.fun - res.fun
        if res.fun <= best.fun:
            best = res
        if improved <= config.fatol:
            break

    a_rs, a_ra, g = _unpack(best.x, config.fixed_gamma)
    lower = np.array([b[0] for b in bounds])
    upper = np.array([b[1] for b in bounds])
    boundary = bool(
        np.any(best.x - lower < _BOUNDARY_SLACK) or np.any(upper - best.x < _BOUNDARY_SLACK)
    )
    if method is FitMethod.LEAST_SQUARES:
        objective, start_obj = float(best.fun), float(start_loss)
    else:
        objective, start_obj = -float(best.fun), -float(start_loss)
    return FitResult(
        alpha_rs=float(a_rs),
        alpha_ra=float(a_ra),
        gamma=float(g),
        beta=beta,
        objective=objective,
        method=method,
        iterations=int(n_iter),
        converged=bool(best.success) and math.isfinite(best.fun) and not boundary,
        n_evals=int(n_evals),
        games=team.n_games,
        boundary=boundary,
        unreliable=team.n_games < config.min_games,
        start_objective=start_obj,
    )


def fit_least_squares(team: TeamSeason, config: FitConfig = None) -> FitResult:
    """Fit by minimising the binned sum of squared count errors."""
    return _fit(team, config or FitConfig(), FitMethod.LEAST_SQUARES)


def fit_mle(team: TeamSeason, config: FitConfig = None) -> FitResult:
    """Fit by maximising the binned multinomial likelihood."""
    return _fit(team, config or FitConfig(), FitMethod.MAX_LIKELIHOOD)


def fit_team(team: TeamSeason, method="ls", config: FitConfig = None) -> FitResult:
    method = FitMethod(method)
    return _fit(team, config or FitConfig(), method)


def moment_matchup(team: TeamSeason, gamma: float, beta: float = -0.5):
    """Matchup whose means equal the team's observed per-game averages."""
    return matchup_from_means(
        float(np.mean(team.runs_scored)), float(np.mean(team.runs_allowed)), beta, gamma
    )
