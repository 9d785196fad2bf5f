"""
Fitting one team's season
=========================

Bin a season's runs scored and allowed, then fit (alpha_RS, alpha_RA, gamma)
by least squares and by maximum likelihood with the shift fixed at -0.5.
"""

import weibull_pythag as wp

# a synthetic 162-game season with a known shape of 1.8
truth = wp.matchup_from_means(4.6, 4.1, beta=-0.5, gamma=1.8)
season = wp.synthetic_season(wp.SimConfig(truth, 162, seed=7, discretize=True), team_id="SIM")
print(f"{season.team_id}: {season.wins}-{season.losses}")

# binned counts on the standard 12 bins: one per run up to 9, then [9.5, 11.5) and 11.5+
print(wp.bin_counts(season.runs_scored, wp.default_fit_bins()).counts)

for method in ("ls", "mle"):
    fit = wp.fit_team(season, method)
    print(f"{method}: gamma={fit.gamma:.3f} alpha_RS={fit.alpha_rs:.3f} alpha_RA={fit.alpha_ra:.3f} "
          f"predicted wins={fit.predicted_wins:.1f} converged={fit.converged}")

# pinning the shape turns the fit into a two-parameter problem
fixed = wp.fit_least_squares(season, wp.FitConfig(fixed_gamma=1.83))
print("gamma pinned at 1.83 -> predicted wins", round(fixed.predicted_wins, 1))
