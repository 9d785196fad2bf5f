"""
Validation of the fitted model.

* z-tests comparing observed and predicted mean runs per game;
* a chi-square goodness-of-fit test of both fitted Weibulls on the fit bins;
* a chi-square test that runs scored and allowed are independent apart from
  the impossible tied cells on the diagonal (quasi-independence), with the
  expected table found by iterative proportional fitting.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from .binning import BinnedCounts, BinScheme, TeamSeason, bin_areas, independence_bins
from .special import chi2_critical_value

__all__ = [
    "ZTestResult",
    "ChiSquareResult",
    "ContingencyTable",
    "IPFConvergenceError",
    "ExpectedCountError",
    "GOF_CRITICAL_VALUES",
    "INDEPENDENCE_CRITICAL_VALUES",
    "Z_CRITICAL_VALUES",
    "z_test_runs",
    "chisq_gof",
    "build_contingency",
    "ipf_expected",
    "chisq_independence",
    "quasi_independence_dof",
]

N_COMPARISONS = 30

# Critical values as commonly quoted for these tests (30-team Bonferroni).
GOF_CRITICAL_VALUES = {
    "95%": 31.41,
    "99%": 37.57,
    "95% Bonferroni": 43.67,
    "99% Bonferroni": 48.75,
}
# 113.15 and 124.12 are the chi-square(90) quantiles; chi-square(89) gives
# 112.02 and 122.94. The Bonferroni pair does correspond to 89 d.f.
INDEPENDENCE_CRITICAL_VALUES = {
    "95%": 113.15,
    "99%": 124.12,
    "95% Bonferroni": 133.26,
    "99% Bonferroni": 141.56,
}
Z_CRITICAL_VALUES = {
    "95%": 1.96,
    "99%": 2.575,
    "95% Bonferroni": 2.92,
    "99% Bonferroni": 3.38,
}

_LEVELS = {
    "95%": (0.95, 1),
    "99%": (0.99, 1),
    "95% Bonferroni": (0.95, N_COMPARISONS),
    "99% Bonferroni": (0.99, N_COMPARISONS),
}


class IPFConvergenceError(RuntimeError):
    """Raised when proportional fitting fails to settle; carries the change trace."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


class ExpectedCountError(ValueError):
    pass


@dataclass(frozen=True)
class ZTestResult:
    statistic: float
    observed_mean: float
    predicted_mean: float
    observed_sd: float
    n_games: int


@dataclass(frozen=True)
class ChiSquareResult:
    """
    Chi-square statistic with its degrees of freedom.

    ``thresholds`` holds the quoted critical values where they exist for
    this test, and ``computed_thresholds`` the same levels from the
    chi-square inverse CDF at ``dof``.
    """

    statistic: float
    dof: int
    thresholds: dict
    computed_thresholds: dict = field(default_factory=dict)
    warnings: tuple = ()

    @property
    def p_value(self) -> float:
        return float(chi2.sf(self.statistic, self.dof))

    def passes(self, level: str = "99% Bonferroni") -> bool:
        return self.statistic < self.thresholds[level]


def computed_critical_values(dof: int) -> dict:
    return {name: chi2_critical_value(dof, lvl, k) for name, (lvl, k) in _LEVELS.items()}


def z_test_runs(observed, predicted_mean: float) -> ZTestResult:
    """
    z-score of the observed mean runs per game against the model mean.

    ``z = (mean(observed) - predicted_mean) / (sd(observed) / sqrt(n))`` with
    the sample standard deviation.
    """
    obs = np.asarray(observed, dtype=float)
    n = obs.size
    if n < 2:
        raise ValueError("z-test needs at least two games")
    sd = float(np.std(obs, ddof=1))
    if sd == 0.0:
        raise ValueError("observed scores have zero spread; the z-test is undefined")
    m = float(np.mean(obs))
    z = (m - predicted_mean) / (sd / math.sqrt(n))
    return ZTestResult(z, m, float(predicted_mean), sd, n)


def chisq_gof(rs: BinnedCounts, ra: BinnedCounts, fit) -> ChiSquareResult:
    """
    Goodness of fit of both fitted Weibulls.

    Sums ``(obs - G*A)**2 / (G*A)`` over the bins of runs scored and runs
    allowed, with G the number of games and A the model bin area. The test
    has ``2 * (bins - 2)`` degrees of freedom (20 for the standard 12 bins).

    Raises
    ------
    ExpectedCountError
        If a bin has zero expected count.
    """
    if rs.scheme != ra.scheme or rs.total_games != ra.total_games:
        raise ValueError("runs scored and runs allowed counts must share bins and games")
    g = rs.total_games
    stat = 0.0
    low = []
    for label, counts, params in (("RS", rs, fit.rs_params), ("RA", ra, fit.ra_params)):
        expected = g * bin_areas(params, counts.scheme)
        for k, e in enumerate(expected):
            if e <= 0.0:
                lo, hi = counts.scheme.bounds(k)
                raise ExpectedCountError(f"{label} bin {k} [{lo:g}, {hi:g}) has zero expected count")
            if e < 1.0:
                low.append(f"{label} bin {k}")
        stat += float(np.sum((counts.as_array() - expected) ** 2 / expected))
    dof = 2 * (len(rs.scheme) - 2)
    notes = ()
    if low:
        notes = ("low expected count (<1) in " + ", ".join(low),)
    quoted = GOF_CRITICAL_VALUES if dof == 20 else {}
    computed = computed_critical_values(dof)
    return ChiSquareResult(stat, dof, dict(quoted or computed), computed, notes)


@dataclass(frozen=True)
class ContingencyTable:
    """
    Square runs-scored by runs-allowed table whose diagonal is a structural zero.

    ``excluded`` counts games dropped because both scores fell in the same
    (wide) bin, e.g. a 10-9 game with the ``[9, 11)`` bin.
    """

    observed: np.ndarray
    scheme: BinScheme = None
    excluded: int = 0

    def __post_init__(self):
        obs = np.array(self.observed, dtype=np.int64)
        if obs.ndim != 2 or obs.shape[0] != obs.shape[1]:
            raise ValueError("contingency table must be square")
        if np.any(obs < 0):
            raise ValueError("counts must be nonnegative")
        if np.any(np.diag(obs) != 0):
            raise ValueError("diagonal cells are structural zeros and must be 0")
        if self.scheme is not None and len(self.scheme) != obs.shape[0]:
            raise ValueError("table size does not match the bin scheme")
        obs.setflags(write=False)
        object.__setattr__(self, "observed", obs)

    @property
    def dim(self) -> int:
        return self.observed.shape[0]

    def empty_rows(self):
        return [int(r) for r in np.flatnonzero(self.observed.sum(axis=1) == 0)]

    def empty_cols(self):
        return [int(c) for c in np.flatnonzero(self.observed.sum(axis=0) == 0)]


def build_contingency(team: TeamSeason, scheme: BinScheme = None) -> ContingencyTable:
    """Cross-tabulate a season on the independence bins."""
    scheme = scheme or independence_bins()
    d = len(scheme)
    obs = np.zeros((d, d), dtype=np.int64)
    if team.n_games:
        r = scheme.index_of(team.runs_scored)
        c = scheme.index_of(team.runs_allowed)
        if np.any(r < 0) or np.any(c < 0):
            raise ValueError("scores below the first bin edge")
        np.add.at(obs, (r, c), 1)
    excluded = int(np.trace(obs))
    np.fill_diagonal(obs, 0)
    if excluded:
        warnings.warn(
            f"{team.team_id}: {excluded} game(s) fall on the diagonal through a wide bin and are excluded",
            stacklevel=2,
        )
    table = ContingencyTable(obs, scheme, excluded)
    empty = table.empty_rows(), table.empty_cols()
    if empty[0] or empty[1]:
        warnings.warn(
            f"{team.team_id}: empty rows {empty[0]} / columns {empty[1]} in contingency table",
            stacklevel=2,
        )
    return table


def ipf_expected(table: ContingencyTable, tol: float = 1e-10, max_iter: int = 10_000) -> np.ndarray:
    """
    Expected counts under quasi-independence by iterative proportional fitting.

    Starts from ones off the diagonal and zeros on it, then alternately
    rescales rows to the observed row totals and columns to the observed
    column totals. Stops once a full row+column sweep changes no entry by
    more than `tol`.

    Raises
    ------
    ValueError
        If a row or column of the observed table is empty.
    IPFConvergenceError
        If `max_iter` sweeps are not enough.
    """
    if table.empty_rows() or table.empty_cols():
        raise ValueError(
            f"every row and column needs a nonzero entry; empty rows {table.empty_rows()}, "
            f"columns {table.empty_cols()}"
        )
    obs = table.observed.astype(float)
    row_tot = obs.sum(axis=1)
    col_tot = obs.sum(axis=0)
    e = np.ones_like(obs)
    np.fill_diagonal(e, 0.0)
    trace = []
    for _ in range(max_iter):
        prev = e
        e = e * (row_tot / e.sum(axis=1))[:, None]
        e = e * (col_tot / e.sum(axis=0))[None, :]
        change = float(np.max(np.abs(e - prev)))
        trace.append(change)
        if change < tol:
            return e
    raise IPFConvergenceError(f"IPF did not converge in {max_iter} sweeps", trace)


def quasi_independence_dof(dim: int) -> int:
    """``(d - 1)**2 - d`` degrees of freedom for a d x d table with a structural-zero diagonal."""
    return (dim - 1) ** 2 - dim


def chisq_independence(table: ContingencyTable, expected) -> ChiSquareResult:
    """Pearson statistic ``sum (E - O)**2 / E`` over off-diagonal cells."""
    e = np.asarray(expected, dtype=float)
    if e.shape != table.observed.shape:
        raise ValueError(f"expected table shape {e.shape} does not match {table.observed.shape}")
    off = ~np.eye(table.dim, dtype=bool)
    zero = off & (e <= 0.0)
    notes = ()
    if np.any(zero):
        notes = (f"{int(zero.sum())} off-diagonal cell(s) with zero expected count skipped",)
        warnings.warn(notes[0], stacklevel=2)
    use = off & (e > 0.0)
    o = table.observed.astype(float)
    stat = float(np.sum((e[use] - o[use]) ** 2 / e[use]))
    dof = quasi_independence_dof(table.dim)
    computed = computed_critical_values(dof) if dof >= 1 else {}
    quoted = INDEPENDENCE_CRITICAL_VALUES if dof == 89 else computed
    return ChiSquareResult(stat, dof, dict(quoted), computed, notes)
