import os
import sys
from datetime import date, timedelta
from pathlib import Path

import pytest

from weibull_pythag.ingest import GameLogRecord
from weibull_pythag.montecarlo import SimConfig, synthetic_season
from weibull_pythag.weibull import MatchupParams, WeibullParams

GAME_LOG_ENV = "PYTHAG_GAME_LOG_2012"


def make_season(alpha_rs, alpha_ra, gamma, seed, n_games=162, team_id="SIM"):
    m = MatchupParams(WeibullParams(alpha_rs, -0.5, gamma), WeibullParams(alpha_ra, -0.5, gamma))
    return synthetic_season(SimConfig(m, n_games, seed, discretize=True), team_id)


def league_records(n_teams=4, n_games=162, seed=0):
    """Game-log records for a synthetic league; each team plays an outside opponent."""
    opening = date(2012, 4, 5)
    records = []
    for t in range(n_teams):
        season = make_season(4.2 + 0.3 * t, 4.6 - 0.2 * t, 1.75, seed=seed + t, n_games=n_games)
        team = f"T{t:02d}"
        for i, (rs, ra) in enumerate(season.games):
            day = (opening + timedelta(days=i)).isoformat()
            records.append(GameLogRecord(day, team, "OUT", rs, ra))
    return records


@pytest.fixture(scope="session")
def season_2012_path():
    """Path of an externally supplied 2012 game log, or skip."""
    path = os.environ.get(GAME_LOG_ENV)
    if not path:
        pytest.skip(f"set {GAME_LOG_ENV} to a 2012 game-log CSV to run dataset checks")
    path = Path(path)
    if not path.is_file():
        pytest.fail(f"{GAME_LOG_ENV}={path} does not exist")
    return path


ACCEPTANCE_TITLES = {
    9: "2012 LS gamma",
    10: "2012 games off",
    11: "2012 independence",
    12: "2012 MLE",
}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not (mod.RESULTS or terminalreporter.stats.get("skipped")):
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 13):
        line = mod.RESULTS.get(n)
        if line is None:
            title = ACCEPTANCE_TITLES.get(n, "not run")
            if n in ACCEPTANCE_TITLES and not os.environ.get(GAME_LOG_ENV):
                line = f"criterion {n:>2} SKIP  {title}: needs a 2012 game log ({GAME_LOG_ENV} unset)"
            else:
                line = f"criterion {n:>2} NOT RUN  {title}: deselected or errored before reporting"
        terminalreporter.write_line(line)
