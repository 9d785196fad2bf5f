import io
import json
import math
import warnings

import numpy as np
import pytest

from conftest import league_records, make_season
from weibull_pythag.binning import TeamSeason
from weibull_pythag.ingest import (
    GAME_LOG_COLUMNS,
    REPORT_COLUMNS,
    AnalysisConfig,
    GameLogError,
    GameLogRecord,
    GameLogWarning,
    SeasonReport,
    aggregate_seasons,
    analyze_team,
    check_pairs,
    parse_game_log,
    read_report,
    read_surface_csv,
    run_season_analysis,
    write_game_log,
    write_report,
    write_surface_csv,
)
from weibull_pythag.predictor import score_vs_prevent_surface

HEADER = ",".join(GAME_LOG_COLUMNS) + "\n"


@pytest.fixture(scope="module")
def report():
    seasons = aggregate_seasons(league_records(n_teams=4, seed=40))
    return run_season_analysis(seasons, AnalysisConfig(threads=1))


class TestParse:
    def test_header_only(self):
        assert parse_game_log(io.StringIO(HEADER)) == []

    def test_single_row(self):
        (rec,) = parse_game_log(io.StringIO(HEADER + "2012-04-05,PIT,PHI,0,1\n"))
        assert rec == GameLogRecord("2012-04-05", "PIT", "PHI", 0, 1)

    def test_crlf_and_bom(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_bytes(("\ufeff" + HEADER + "2012-04-05,PIT,PHI,3,1\n").replace("\n", "\r\n").encode("utf-8"))
        (rec,) = parse_game_log(path)
        assert rec.runs_scored == 3 and rec.runs_allowed == 1

    def test_column_order_free(self):
        text = "runs_allowed,runs_scored,team_id,opponent_id,date\n2,7,NYY,BOS,2012-05-01\n"
        (rec,) = parse_game_log(io.StringIO(text))
        assert (rec.team_id, rec.runs_scored, rec.runs_allowed) == ("NYY", 7, 2)

    def test_missing_header(self):
        with pytest.raises(GameLogError, match="header"):
            parse_game_log(io.StringIO("date,team_id,runs_scored\n"))
        with pytest.raises(GameLogError, match="empty"):
            parse_game_log(io.StringIO(""))

    def test_tie_row_fatal_when_many(self):
        with pytest.raises(GameLogError) as info:
            parse_game_log(io.StringIO(HEADER + "2012-04-05,PIT,PHI,3,3\n"))
        (err,) = info.value.row_errors
        assert err.line == 2 and "tie" in err.message

    def test_few_bad_rows_warn(self):
        good = [f"2012-04-{d:02d},PIT,PHI,{d % 7 + 1},0\n" for d in range(1, 31)]
        text = HEADER + good[0] + "2012-05-01,PIT,PHI,x,1\n" + "".join(good[1:])
        with pytest.warns(GameLogWarning, match="line 3"):
            records = parse_game_log(io.StringIO(text))
        assert len(records) == 30

    def test_over_five_percent_fatal(self):
        rows = [f"2012-04-{d:02d},PIT,PHI,2,1\n" for d in range(1, 19)]
        rows += ["2012-05-01,PIT,PHI,-1,3\n", "2012-05-02,PIT,PHI,4\n"]
        with pytest.raises(GameLogError, match="2 of 20"):
            parse_game_log(io.StringIO(HEADER + "".join(rows)))

    def test_record_invariants(self):
        with pytest.raises(ValueError):
            GameLogRecord("2012-04-05", "PIT", "PHI", 2, 2)
        with pytest.raises(ValueError):
            GameLogRecord("2012-04-05", "PIT", "PHI", -1, 2)

    def test_write_then_parse(self, tmp_path):
        recs = league_records(n_teams=2, n_games=20)
        path = tmp_path / "log.csv"
        write_game_log(recs, path)
        assert parse_game_log(path) == recs


class TestAggregate:
    def test_single_team(self):
        recs = parse_game_log(io.StringIO(HEADER + "2012-04-05,PIT,PHI,0,1\n2012-04-06,PIT,PHI,5,2\n2012-04-07,PIT,PHI,4,3\n"))
        (season,) = aggregate_seasons(recs)
        assert season.team_id == "PIT" and season.n_games == 3 and season.wins == 2

    def test_league(self):
        seasons = aggregate_seasons(league_records(n_teams=3))
        assert [s.team_id for s in seasons] == ["T00", "T01", "T02"]
        for s in seasons:
            assert s.n_games == 162
            assert s.wins == sum(rs > ra for rs, ra in s.games)

    def test_games_sorted_by_date(self):
        recs = [GameLogRecord("2012-04-07", "A", "B", 1, 0), GameLogRecord("2012-04-05", "A", "B", 9, 2)]
        assert aggregate_seasons(recs)[0].games == ((9, 2), (1, 0))


class TestPairs:
    def test_consistent(self):
        recs = [GameLogRecord("2012-04-05", "PIT", "PHI", 3, 1), GameLogRecord("2012-04-05", "PHI", "PIT", 1, 3)]
        assert check_pairs(recs) == []

    def test_mismatch(self):
        recs = [GameLogRecord("2012-04-05", "PIT", "PHI", 3, 1), GameLogRecord("2012-04-05", "PHI", "PIT", 2, 3)]
        problems = check_pairs(recs)
        assert problems and all("unmatched" in p for p in problems)

    def test_outside_opponents_ignored(self):
        assert check_pairs([GameLogRecord("2012-04-05", "PIT", "XXX", 3, 1)]) == []


class TestAnalysis:
    def test_row_invariants(self, report):
        assert len(report.rows) == 4
        for r in report.rows:
            assert r.obs_pct == pytest.approx(r.obs_wins / r.games, abs=1e-12)
            assert r.pred_wins == pytest.approx(r.pred_pct * r.games, rel=1e-12)
            assert r.diff_games == pytest.approx(r.obs_wins - r.pred_wins, abs=1e-12)
            assert 1.2 < r.gamma < 2.4
            assert r.method == "ls" and r.converged

    def test_order(self, report):
        keys = [(-r.obs_wins, r.team_id) for r in report.rows]
        assert keys == sorted(keys)

    def test_league_summary_recomputable(self, report):
        g = np.array([r.gamma for r in report.rows])
        d = np.array([r.diff_games for r in report.rows])
        lg = report.league
        assert lg["n_teams"] == 4
        assert lg["mean_gamma"] == pytest.approx(g.mean(), rel=1e-14)
        assert lg["sd_gamma"] == pytest.approx(g.std(), rel=1e-12)
        assert lg["mean_abs_games_off"] == pytest.approx(np.abs(d).mean(), rel=1e-14)
        assert lg["mean_games_off"] == pytest.approx(d.mean(), abs=1e-12)

    def test_single_team_summary(self):
        season = make_season(4.8, 4.4, 1.8, seed=3, team_id="ONE")
        rep = run_season_analysis([season], AnalysisConfig(threads=1))
        (row,) = rep.rows
        assert rep.league["mean_gamma"] == row.gamma
        assert rep.league["sd_gamma"] == 0.0
        assert rep.league["mean_abs_games_off"] == abs(row.diff_games)

    def test_parallel_matches_serial(self, report):
        seasons = aggregate_seasons(league_records(n_teams=4, seed=40))
        par = run_season_analysis(seasons, AnalysisConfig(threads=2))
        assert par == report

    def test_threads_env(self, monkeypatch, report):
        monkeypatch.setenv("PYTHAG_THREADS", "1")
        seasons = aggregate_seasons(league_records(n_teams=4, seed=40))
        assert run_season_analysis(seasons) == report

    def test_mle(self):
        season = make_season(4.8, 4.4, 1.8, seed=3)
        row = analyze_team(season, AnalysisConfig(method="mle"))
        assert row.method == "mle" and row.converged

    def test_failures_are_flags(self):
        row = analyze_team(TeamSeason("DEG", [(3, 2)] * 30))
        assert row.flags
        assert row.obs_wins == 30

    def test_diagonal_games_flagged(self):
        games = list(make_season(4.8, 4.4, 1.8, seed=3).games) + [(10, 9)]
        row = analyze_team(TeamSeason("X", games))
        assert "diagonal-excluded=" in row.flags
        assert row.excluded_diagonal >= 1

    def test_empty_independence_row_flagged(self):
        games = [(rs, ra) for rs, ra in make_season(4.8, 4.4, 1.8, seed=3).games if 10 not in (rs, ra) and 9 not in (rs, ra)]
        row = analyze_team(TeamSeason("MIA", games))
        assert row.indep_chisq is None
        assert "indep-empty-rows" in row.flags


class TestReportIO:
    def test_csv_round_trip(self, report, tmp_path):
        path = tmp_path / "r.csv"
        write_report(report, path)
        assert read_report(path) == report
        assert path.read_text().splitlines()[0].split(",")[:12] == list(REPORT_COLUMNS[:12])

    def test_json_round_trip(self, report):
        buf = io.StringIO()
        write_report(report, buf, "json")
        payload = json.loads(buf.getvalue())
        assert set(payload) == {"rows", "league"}
        assert payload["league"] == report.league
        assert read_report(io.StringIO(buf.getvalue()), "json") == report

    def test_missing_values_round_trip(self, tmp_path):
        rep = SeasonReport((analyze_team(TeamSeason("DEG", [(3, 2)] * 30)),))
        path = tmp_path / "r.csv"
        write_report(rep, path)
        assert read_report(path) == rep

    def test_digits(self, report):
        buf = io.StringIO()
        write_report(report, buf, digits=6)
        rows = buf.getvalue().splitlines()
        gamma = rows[1].split(",")[REPORT_COLUMNS.index("gamma")]
        assert len(gamma.replace(".", "").lstrip("0")) <= 6

    def test_bad_format(self, report):
        with pytest.raises(ValueError):
            write_report(report, io.StringIO(), "xml")

    def test_surface_round_trip(self, tmp_path):
        grid = score_vs_prevent_surface()
        path = tmp_path / "s.csv"
        write_surface_csv(grid, path)
        back = read_surface_csv(path)
        np.testing.assert_array_equal(back.x_range, grid.x_range)
        np.testing.assert_array_equal(back.y_range, grid.y_range)
        np.testing.assert_array_equal(back.values, grid.values)
        assert path.read_text().startswith("y\\x,600.0,605.0")


def test_deterministic_report(report):
    seasons = aggregate_seasons(league_records(n_teams=4, seed=40))
    assert run_season_analysis(seasons, AnalysisConfig(threads=1)) == report
    assert all(math.isfinite(r.gof_chisq) for r in report.rows)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run_season_analysis(seasons[:1], AnalysisConfig(threads=1))
