"""
What is a run worth?
====================

Marginal wins from scoring or preventing ten runs over a season, and the
linear predictor 0.5 + B * (RS - RA) with B = gamma / (4 * R_total).
"""

import numpy as np

import weibull_pythag as wp

env = wp.RunEnvironment(r_total=700.567, gamma=1.83)

# the old rule of thumb: ten runs buy about one win
print("score 10 more :", wp.marginal_wins_scoring(700, 700, 10, env))
print("allow 10 fewer:", wp.marginal_wins_preventing(700, 700, 10, env))

# scoring beats prevention when a team allows more than it scores
grid = wp.score_vs_prevent_surface(s=10, env=env)
print("surface", grid.values.shape, "corner values:", grid.values[-1, 0].round(4), grid.values[0, -1].round(4))

b = wp.slope_B(env)
print(f"B = {b:.6f} wins per run")
print("linear vs Pythagorean at 731-594:", wp.linear_wp(731, 594, b), wp.pythag_wp(731, 594, 0.0, 1.83))

# the straight line stays within 0.002 of the curve for differentials up to 50 runs
print("worst error, |RS - RA| <= 50:", wp.linearization_band_max(env, band=50))
d = np.array([0, 25, 50, 100])
print("error along the diagonal:", wp.linearization_error(env.r_total + d, env.r_total - d, env))
