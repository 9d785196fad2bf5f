"""Weibull model of baseball run scoring and the Pythagorean won-loss formula."""

from .binning import (
    BinnedCounts,
    BinScheme,
    TeamSeason,
    bin_area,
    bin_areas,
    bin_counts,
    default_fit_bins,
    independence_bins,
)
from .fitting import (
    FitConfig,
    FitMethod,
    FitResult,
    fit_least_squares,
    fit_mle,
    fit_team,
    least_squares_objective,
    log_likelihood,
)
from .inference import (
    ChiSquareResult,
    ContingencyTable,
    ZTestResult,
    build_contingency,
    chisq_gof,
    chisq_independence,
    ipf_expected,
    z_test_runs,
)
from .ingest import (
    AnalysisConfig,
    SeasonReport,
    aggregate_seasons,
    parse_game_log,
    read_report,
    run_season_analysis,
    write_report,
)
from .montecarlo import SimConfig, SplitMix64, empirical_win_prob, sample_weibull, synthetic_season
from .predictor import (
    RunEnvironment,
    WinValueGrid,
    games_off,
    linear_wp,
    linearization_band_max,
    linearization_error,
    marginal_wins_preventing,
    marginal_wins_scoring,
    predicted_wins,
    score_vs_prevent_surface,
    slope_B,
)
from .special import gamma_fn
from .weibull import (
    MatchupParams,
    WeibullParams,
    alpha_from_mean,
    cdf,
    log5,
    matchup_from_means,
    mean,
    pdf,
    pythag_wp,
    variance,
    win_probability,
)

__version__ = "0.1.0"
