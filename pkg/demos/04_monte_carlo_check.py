"""
Monte Carlo check of the win probability
========================================

Simulate a million games per matchup with a seeded SplitMix64 stream and
compare the fraction won with the closed form.
"""

import time

import weibull_pythag as wp

start = time.perf_counter()
for rs, ra, gamma in [(4.5, 4.5, 1.8), (5.2, 4.1, 1.83), (3.0, 6.0, 2.5), (6.5, 2.5, 1.1)]:
    m = wp.matchup_from_means(rs, ra, beta=-0.5, gamma=gamma)
    exact = wp.win_probability(m)
    emp = wp.empirical_win_prob(wp.SimConfig(m, 10**6, seed=1))
    print(f"RS={rs} RA={ra} gamma={gamma}: closed form {exact:.4f}, simulated {emp:.4f}")
print(f"{time.perf_counter() - start:.2f} s")

# integer scores: round, clamp at zero and replay tied games
m = wp.matchup_from_means(4.5, 4.3, beta=-0.5, gamma=1.8)
frac, replays = wp.empirical_win_prob(wp.SimConfig(m, 10**5, seed=2, discretize=True), return_rejections=True)
print(f"integer games: won {frac:.4f}, {replays} tied games replayed")
