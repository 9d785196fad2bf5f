"""
Weibull run scoring and the Pythagorean formula
===============================================

Runs scored and allowed per game are modelled as independent Weibulls
sharing a shift and a shape. The chance of winning then has a closed form.
"""

import weibull_pythag as wp

# a team scoring 4.8 and allowing 4.2 runs per game, shift -0.5, shape 1.8
m = wp.matchup_from_means(4.8, 4.2, beta=-0.5, gamma=1.8)
print("alpha_RS, alpha_RA:", round(m.rs.alpha, 4), round(m.ra.alpha, 4))
print("mean, variance of runs scored:", wp.mean(m.rs), wp.variance(m.rs))

# closed-form win probability, and the same number from the means directly
print("win probability:", wp.win_probability(m))
print("pythag_wp      :", wp.pythag_wp(4.8, 4.2, -0.5, 1.8))

# with exponent 2 and no shift the formula is Bill James's log5 on run shares
rs, ra = 731.0, 594.0
a, b = rs / (rs + ra), ra / (rs + ra)
print("log5 vs exponent 2:", wp.log5(a, b), wp.pythag_wp(rs, ra, 0.0, 2.0))
