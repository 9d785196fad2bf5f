"""
A league report from a game log
===============================

Write a synthetic game log, read it back, fit every team and print the
report as CSV. The same pipeline runs from the shell as ``pythag fit``.
"""

import io
import sys
import tempfile
from pathlib import Path

import weibull_pythag as wp
from weibull_pythag.ingest import GameLogRecord, write_game_log

records = []
for k, (rs, ra) in enumerate([(4.9, 3.9), (4.5, 4.4), (4.0, 4.7)]):
    m = wp.matchup_from_means(rs, ra, beta=-0.5, gamma=1.75)
    season = wp.synthetic_season(wp.SimConfig(m, 162, seed=100 + k, discretize=True))
    for i, (x, y) in enumerate(season.games):
        records.append(GameLogRecord(f"2012-{4 + i // 30:02d}-{1 + i % 30:02d}", f"T{k}", "OPP", x, y))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "log.csv"
    write_game_log(records, path)
    seasons = wp.aggregate_seasons(wp.parse_game_log(path))

report = wp.run_season_analysis(seasons, wp.AnalysisConfig(method="ls", threads=1))
buf = io.StringIO()
wp.write_report(report, buf, digits=4)
sys.stdout.write(buf.getvalue())
print({k: round(v, 3) if isinstance(v, float) else v for k, v in report.league.items()})
