"""
Seeded Monte Carlo sampling of Weibull matchups.

Random numbers come from SplitMix64 used as a counter-based generator: the
i-th output of a stream seeded with ``s`` is ``mix(s + i * 0x9E3779B97F4A7C15)``
for i = 1, 2, ... (all arithmetic mod 2**64). The construction is a handful
of shifts, xors and multiplies, so any language can reproduce the stream
bit for bit. Doubles are built from the top 53 bits.

Concurrent simulations must use distinct seeds; a generator object is not
meant to be shared between threads.
"""

from dataclasses import dataclass

import numpy as np

from .binning import TeamSeason
from .weibull import MatchupParams, WeibullParams

__all__ = [
    "SplitMix64",
    "SimConfig",
    "sample_weibull",
    "simulate_games",
    "empirical_win_prob",
    "synthetic_season",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """SplitMix64 stream; ``next_uint64`` and ``random`` advance the counter."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_uint64(self, n: int) -> np.ndarray:
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(_GOLDEN)
            out = _mix(z)
        self.state = (self.state + n * _GOLDEN) & _MASK64
        return out

    def random(self, n: int) -> np.ndarray:
        """`n` doubles uniform on [0, 1)."""
        return (self.next_uint64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def _inverse_cdf(p: WeibullParams, u: np.ndarray) -> np.ndarray:
    # u in [0, 1) so 1 - u never hits zero
    return p.beta + p.alpha * (-np.log1p(-u)) ** (1.0 / p.gamma)


def sample_weibull(p: WeibullParams, n: int, seed: int) -> np.ndarray:
    """Draw `n` Weibull variates by inverse transform; deterministic in `seed`."""
    return _inverse_cdf(p, SplitMix64(seed).random(n))


@dataclass(frozen=True)
class SimConfig:
    """
    Parameters of a simulated run of games.

    With ``discretize`` on, each sample is rounded to the nearest integer
    (ties to even) and clamped at zero, and a game whose two scores come out
    equal is redrawn in full.
    """

    matchup: MatchupParams
    n_games: int
    seed: int
    discretize: bool = False

    def __post_init__(self):
        if self.n_games < 1:
            raise ValueError("n_games must be at least 1")


def _discretize(x):
    return np.maximum(np.rint(x), 0.0)


def simulate_games(cfg: SimConfig):
    """
    Simulate scores for both sides.

    Returns
    -------
    rs, ra : ndarray
        Runs scored and allowed per game.
    rejections : int
        Number of tied games that were redrawn (always 0 when not
        discretizing).
    """
    rng = SplitMix64(cfg.seed)
    n = cfg.n_games
    rs = _inverse_cdf(cfg.matchup.rs, rng.random(n))
    ra = _inverse_cdf(cfg.matchup.ra, rng.random(n))
    rejections = 0
    if cfg.discretize:
        rs, ra = _discretize(rs), _discretize(ra)
        tied = np.flatnonzero(rs == ra)
        while tied.size:
            rejections += tied.size
            k = tied.size
            rs[tied] = _discretize(_inverse_cdf(cfg.matchup.rs, rng.random(k)))
            ra[tied] = _discretize(_inverse_cdf(cfg.matchup.ra, rng.random(k)))
            tied = tied[rs[tied] == ra[tied]]
    return rs, ra, rejections


def empirical_win_prob(cfg: SimConfig, return_rejections: bool = False):
    """Fraction of simulated games in which runs scored exceed runs allowed."""
    rs, ra, rejections = simulate_games(cfg)
    frac = float(np.mean(rs > ra))
    if return_rejections:
        return frac, rejections
    return frac


def synthetic_season(cfg: SimConfig, team_id: str = "SIM") -> TeamSeason:
    """Integer-valued tie-free season drawn from the matchup."""
    if not cfg.discretize:
        raise ValueError("synthetic seasons need discretize=True")
    rs, ra, _ = simulate_games(cfg)
    return TeamSeason(team_id, tuple(zip(rs.astype(int).tolist(), ra.astype(int).tolist())))
