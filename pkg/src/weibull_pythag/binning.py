"""Bin schemes, per-team season data and binned run counts.

Bins are half-open ``[lo, hi)`` with the final bin open to infinity. Bin
indices are 0-based throughout.
"""

from dataclasses import dataclass, field

import numpy as np

from .weibull import WeibullParams, sf

__all__ = [
    "BinScheme",
    "TeamSeason",
    "BinnedCounts",
    "default_fit_bins",
    "independence_bins",
    "bin_counts",
    "bin_area",
    "bin_areas",
]


@dataclass(frozen=True)
class BinScheme:
    """Ordered left edges; bin k is ``[edges[k], edges[k+1])`` and the last is open."""

    edges: tuple

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        if len(edges) == 0:
            raise ValueError("a bin scheme needs at least one edge")
        if any(b <= a for a, b in zip(edges, edges[1:])):
            raise ValueError("bin edges must be strictly increasing")
        object.__setattr__(self, "edges", edges)

    def __len__(self):
        return len(self.edges)

    def bounds(self, k: int):
        """``(lo, hi)`` of bin `k`; ``hi`` is ``inf`` for the last bin."""
        if not 0 <= k < len(self.edges):
            raise IndexError(f"bin index {k} out of range for {len(self.edges)} bins")
        hi = self.edges[k + 1] if k + 1 < len(self.edges) else np.inf
        return self.edges[k], hi

    def index_of(self, x):
        """Bin index of each value in `x`; -1 for values below the first edge."""
        return np.searchsorted(self.edges, x, side="right") - 1


def default_fit_bins() -> BinScheme:
    """The 12 fitting bins ``[-.5,.5), [.5,1.5), ..., [8.5,9.5), [9.5,11.5), [11.5,inf)``."""
    return BinScheme(tuple(k - 0.5 for k in range(11)) + (11.5,))


def independence_bins() -> BinScheme:
    """The 11 contingency bins ``[0,1), [1,2), ..., [8,9), [9,11), [11,inf)``."""
    return BinScheme(tuple(range(10)) + (11,))


@dataclass(frozen=True)
class TeamSeason:
    """One team's games as (runs scored, runs allowed) pairs."""

    team_id: str
    games: tuple
    wins: int = field(default=None)

    def __post_init__(self):
        games = tuple((int(rs), int(ra)) for rs, ra in self.games)
        for i, (rs, ra) in enumerate(games):
            if rs < 0 or ra < 0:
                raise ValueError(f"{self.team_id}: game {i} has negative runs")
            if rs == ra:
                raise ValueError(f"{self.team_id}: game {i} is a tie ({rs}-{ra})")
        object.__setattr__(self, "games", games)
        wins = sum(rs > ra for rs, ra in games)
        if self.wins is None:
            object.__setattr__(self, "wins", wins)
        elif self.wins != wins:
            raise ValueError(f"{self.team_id}: wins={self.wins} but games show {wins}")

    @property
    def n_games(self) -> int:
        return len(self.games)

    @property
    def losses(self) -> int:
        return self.n_games - self.wins

    @property
    def runs_scored(self) -> np.ndarray:
        return np.array([g[0] for g in self.games], dtype=int)

    @property
    def runs_allowed(self) -> np.ndarray:
        return np.array([g[1] for g in self.games], dtype=int)


@dataclass(frozen=True)
class BinnedCounts:
    scheme: BinScheme
    counts: tuple
    total_games: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != len(self.scheme):
            raise ValueError("one count per bin is required")
        if any(c < 0 for c in counts):
            raise ValueError("counts must be nonnegative")
        if sum(counts) != self.total_games:
            raise ValueError("counts must sum to total_games")
        object.__setattr__(self, "counts", counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float)


def bin_counts(scores, scheme: BinScheme) -> BinnedCounts:
    """Count how many of `scores` fall in each bin of `scheme`."""
    scores = np.asarray(scores, dtype=float).ravel()
    idx = scheme.index_of(scores)
    if np.any(idx < 0):
        bad = scores[idx < 0][0]
        raise ValueError(f"score {bad:g} lies below the first bin edge {scheme.edges[0]:g}")
    counts = np.bincount(idx, minlength=len(scheme))
    return BinnedCounts(scheme, tuple(counts.tolist()), int(scores.size))


def bin_areas(p: WeibullParams, scheme: BinScheme) -> np.ndarray:
    """Model probability of every bin; differences of survival values for tail accuracy."""
    upper = np.append(sf(p, np.asarray(scheme.edges[1:])), 0.0)
    return sf(p, np.asarray(scheme.edges)) - upper


def bin_area(p: WeibullParams, scheme: BinScheme, k: int) -> float:
    """Area under the density of `p` over bin `k`."""
    lo, hi = scheme.bounds(k)
    upper = 0.0 if np.isinf(hi) else sf(p, hi)
    return sf(p, lo) - upper
