"""
Game-log ingestion, per-team season analysis and report I/O.

Game logs are CSV with the header ``date,team_id,opponent_id,runs_scored,runs_allowed``
and one row per team per game, so a game between two teams in the log shows
up twice.
"""

import csv
import io
import json
import math
import os
import warnings
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .binning import TeamSeason, bin_counts
from .fitting import FitConfig, FitMethod, fit_team
from .inference import (
    IPFConvergenceError,
    build_contingency,
    chisq_gof,
    chisq_independence,
    ipf_expected,
    z_test_runs,
)
from .predictor import WinValueGrid, games_off, predicted_wins

__all__ = [
    "GAME_LOG_COLUMNS",
    "GameLogRecord",
    "GameLogError",
    "GameLogWarning",
    "RowError",
    "parse_game_log",
    "write_game_log",
    "check_pairs",
    "aggregate_seasons",
    "AnalysisConfig",
    "SeasonRow",
    "SeasonReport",
    "analyze_team",
    "run_season_analysis",
    "write_report",
    "read_report",
    "write_surface_csv",
    "read_surface_csv",
]

GAME_LOG_COLUMNS = ("date", "team_id", "opponent_id", "runs_scored", "runs_allowed")
MAX_BAD_FRACTION = 0.05


class GameLogError(ValueError):
    def __init__(self, message, row_errors=()):
        super().__init__(message)
        self.row_errors = list(row_errors)


class GameLogWarning(UserWarning):
    pass


@dataclass(frozen=True)
class RowError:
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}"


@dataclass(frozen=True)
class GameLogRecord:
    date: str
    team_id: str
    opponent_id: str
    runs_scored: int
    runs_allowed: int

    def __post_init__(self):
        if self.runs_scored < 0 or self.runs_allowed < 0:
            raise ValueError("runs must be nonnegative")
        if self.runs_scored == self.runs_allowed:
            raise ValueError(f"tie violation: {self.runs_scored}-{self.runs_allowed}")


def _open_text(source, mode="r"):
    if isinstance(source, (str, os.PathLike)):
        return open(source, mode, encoding="utf-8", newline=""), True
    return source, False


def _parse_row(row, index):
    if len(row) != len(GAME_LOG_COLUMNS):
        raise ValueError(f"expected {len(GAME_LOG_COLUMNS)} fields, got {len(row)}")
    vals = {name: row[i].strip() for name, i in index.items()}
    for key in ("date", "team_id", "opponent_id"):
        if not vals[key]:
            raise ValueError(f"empty {key}")
    try:
        rs, ra = int(vals["runs_scored"]), int(vals["runs_allowed"])
    except ValueError:
        raise ValueError(
            f"runs must be integers, got {vals['runs_scored']!r} and {vals['runs_allowed']!r}"
        ) from None
    return GameLogRecord(vals["date"], vals["team_id"], vals["opponent_id"], rs, ra)


def parse_game_log(source):
    """
    Read and validate a game-log CSV.

    Parameters
    ----------
    source : str, path-like or text stream
        UTF-8 CSV with a header naming the five game-log columns (any
        order). LF and CRLF line endings are both accepted.

    Returns
    -------
    list of GameLogRecord
        Valid rows in file order. Invalid rows are skipped and reported in a
        single `GameLogWarning` listing their line numbers.

    Raises
    ------
    GameLogError
        If the header is missing required columns, or more than 5% of the
        data rows are invalid. ``row_errors`` lists every bad row.
    """
    fh, owned = _open_text(source)
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise GameLogError("game log is empty; a header row is required")
        header = [h.strip().lstrip("\ufeff") for h in header]
        missing = [c for c in GAME_LOG_COLUMNS if c not in header]
        if missing:
            raise GameLogError(f"game log header is missing columns: {', '.join(missing)}")
        index = {c: header.index(c) for c in GAME_LOG_COLUMNS}
        records, errors = [], []
        n_rows = 0
        for row in reader:
            if not row or all(not f.strip() for f in row):
                continue
            n_rows += 1
            try:
                records.append(_parse_row(row, index))
            except ValueError as exc:
                errors.append(RowError(reader.line_num, str(exc)))
    finally:
        if owned:
            fh.close()
    if errors:
        if len(errors) > MAX_BAD_FRACTION * n_rows:
            raise GameLogError(
                f"{len(errors)} of {n_rows} rows invalid (limit {MAX_BAD_FRACTION:.0%})", errors
            )
        warnings.warn(
            "skipped invalid game-log rows: " + "; ".join(str(e) for e in errors),
            GameLogWarning,
            stacklevel=2,
        )
    return records


def write_game_log(records, dest):
    fh, owned = _open_text(dest, "w")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(GAME_LOG_COLUMNS)
        for r in records:
            w.writerow([r.date, r.team_id, r.opponent_id, r.runs_scored, r.runs_allowed])
    finally:
        if owned:
            fh.close()


def check_pairs(records):
    """
    Cross-check the two rows of each game when both teams are in the log.

    Returns a list of human-readable mismatches (empty when consistent).
    """
    teams = {r.team_id for r in records}
    own = Counter()
    mirrored = Counter()
    for r in records:
        if r.opponent_id not in teams:
            continue
        own[(r.date, r.team_id, r.opponent_id, r.runs_scored, r.runs_allowed)] += 1
        mirrored[(r.date, r.opponent_id, r.team_id, r.runs_allowed, r.runs_scored)] += 1
    problems = []
    for key in sorted((own - mirrored) + (mirrored - own)):
        date, team, opp, rs, ra = key
        side = "row" if own[key] > mirrored[key] else "mirror of opponent row"
        problems.append(f"{date} {team} vs {opp} {rs}-{ra}: unmatched {side}")
    return problems


def aggregate_seasons(records):
    """One `TeamSeason` per team, games in date order, teams sorted by id."""
    by_team = defaultdict(list)
    for r in records:
        by_team[r.team_id].append(r)
    out = []
    for team in sorted(by_team):
        rows = sorted(by_team[team], key=lambda r: r.date)
        out.append(TeamSeason(team, tuple((r.runs_scored, r.runs_allowed) for r in rows)))
    return out


@dataclass(frozen=True)
class AnalysisConfig:
    method: str = "ls"
    fit: FitConfig = field(default_factory=FitConfig)
    threads: int = None


@dataclass(frozen=True)
class SeasonRow:
    team_id: str
    obs_wins: int
    pred_wins: float = None
    obs_pct: float = None
    pred_pct: float = None
    diff_games: float = None
    gamma: float = None
    z_rs: float = None
    z_ra: float = None
    gof_chisq: float = None
    indep_chisq: float = None
    flags: str = ""
    games: int = 0
    alpha_rs: float = None
    alpha_ra: float = None
    rs_obs: float = None
    rs_pred: float = None
    ra_obs: float = None
    ra_pred: float = None
    excluded_diagonal: int = 0
    converged: bool = False
    method: str = ""


REPORT_COLUMNS = tuple(f.name for f in fields(SeasonRow))
_INT_COLUMNS = {"obs_wins", "games", "excluded_diagonal"}
_STR_COLUMNS = {"team_id", "flags", "method"}
_BOOL_COLUMNS = {"converged"}


def _summary(rows):
    def stats(vals):
        vals = [v for v in vals if v is not None and math.isfinite(v)]
        if not vals:
            return None, None
        arr = np.asarray(vals)
        return float(arr.mean()), float(arr.std())

    mean_g, sd_g = stats(r.gamma for r in rows)
    mean_abs, sd_abs = stats(None if r.diff_games is None else abs(r.diff_games) for r in rows)
    mean_d, sd_d = stats(r.diff_games for r in rows)
    return {
        "n_teams": len(rows),
        "mean_gamma": mean_g,
        "sd_gamma": sd_g,
        "mean_abs_games_off": mean_abs,
        "sd_abs_games_off": sd_abs,
        "mean_games_off": mean_d,
        "sd_games_off": sd_d,
    }


@dataclass(frozen=True)
class SeasonReport:
    """Per-team rows plus a league summary recomputed from them.

    Standard deviations in the summary are population values over the teams.
    """

    rows: tuple
    league: dict = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "league", _summary(self.rows))

    def row(self, team_id):
        for r in self.rows:
            if r.team_id == team_id:
                return r
        raise KeyError(team_id)


def _finite(x):
    return None if x is None or not math.isfinite(x) else float(x)


def analyze_team(season: TeamSeason, config: AnalysisConfig = None) -> SeasonRow:
    """Fit one team and run every diagnostic; failures become flags, not exceptions."""
    config = config or AnalysisConfig()
    method = FitMethod(config.method)
    flags = []
    base = dict(
        team_id=season.team_id,
        obs_wins=season.wins,
        games=season.n_games,
        obs_pct=season.wins / season.n_games if season.n_games else None,
        method=method.value,
    )
    try:
        fit = fit_team(season, method, config.fit)
    except Exception as exc:  # noqa: BLE001 - recorded as a row flag
        return SeasonRow(**base, flags=f"fit-error: {exc}")

    if not fit.converged:
        flags.append("not-converged")
    if fit.boundary:
        flags.append("boundary")
    if fit.unreliable:
        flags.append("few-games")

    wp = fit.win_pct
    pred_w = predicted_wins(wp, season.n_games)
    diff, _ = games_off(season.wins, pred_w)
    rs, ra = season.runs_scored, season.runs_allowed

    z = {}
    for key, obs, pred in (("z_rs", rs, fit.predicted_rs), ("z_ra", ra, fit.predicted_ra)):
        try:
            z[key] = z_test_runs(obs, pred).statistic
        except ValueError as exc:
            z[key] = None
            flags.append(f"{key}-error: {exc}")

    gof = None
    try:
        res = chisq_gof(bin_counts(rs, config.fit.scheme), bin_counts(ra, config.fit.scheme), fit)
        gof = res.statistic
        if res.warnings:
            flags.append("low-expected-count")
    except ValueError as exc:
        flags.append(f"gof-error: {exc}")

    indep = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        table = build_contingency(season)
    if table.excluded:
        flags.append(f"diagonal-excluded={table.excluded}")
    try:
        indep = chisq_independence(table, ipf_expected(table)).statistic
    except ValueError:
        flags.append(f"indep-empty-rows={table.empty_rows()}-cols={table.empty_cols()}")
    except IPFConvergenceError:
        flags.append("ipf-not-converged")

    return SeasonRow(
        **base,
        pred_wins=_finite(pred_w),
        pred_pct=_finite(wp),
        diff_games=_finite(diff),
        gamma=fit.gamma,
        z_rs=_finite(z["z_rs"]),
        z_ra=_finite(z["z_ra"]),
        gof_chisq=_finite(gof),
        indep_chisq=_finite(indep),
        flags=";".join(flags),
        alpha_rs=fit.alpha_rs,
        alpha_ra=fit.alpha_ra,
        rs_obs=float(np.mean(rs)),
        rs_pred=fit.predicted_rs,
        ra_obs=float(np.mean(ra)),
        ra_pred=fit.predicted_ra,
        excluded_diagonal=table.excluded,
        converged=fit.converged,
    )


def _worker_count(config, n):
    threads = config.threads
    if threads is None:
        threads = int(os.environ.get("PYTHAG_THREADS", "0") or 0)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return max(1, min(threads, n))


def _order_key(row):
    return (-row.obs_wins, row.team_id)


def run_season_analysis(seasons, config: AnalysisConfig = None) -> SeasonReport:
    """
    Analyse every team and assemble the league report.

    Teams are processed in parallel (``config.threads``, else the
    ``PYTHAG_THREADS`` environment variable, 0 meaning one worker per CPU).
    Rows are ordered by observed wins, most first, then team id.
    """
    config = config or AnalysisConfig()
    seasons = list(seasons)
    workers = _worker_count(config, len(seasons))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(analyze_team, seasons, [config] * len(seasons)))
    else:
        rows = [analyze_team(s, config) for s in seasons]
    return SeasonReport(tuple(sorted(rows, key=_order_key)))


def _fmt(value, digits):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if digits is None else f"{value:.{digits}g}"
    return str(value)


def _parse_cell(name, text):
    if name in _STR_COLUMNS:
        return text
    if name in _BOOL_COLUMNS:
        return text == "true"
    if text == "":
        return None
    if name in _INT_COLUMNS:
        return int(text)
    return float(text)


def write_report(report: SeasonReport, dest, fmt: str = "csv", digits: int = None):
    """
    Write a season report as CSV (rows only) or JSON (rows plus ``league``).

    Floats are written with round-trip precision unless `digits` asks for a
    fixed number of significant digits.
    """
    fh, owned = _open_text(dest, "w")
    try:
        if fmt == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(REPORT_COLUMNS)
            for r in report.rows:
                w.writerow([_fmt(getattr(r, c), digits) for c in REPORT_COLUMNS])
        elif fmt == "json":
            def rnd(v):
                return float(f"{v:.{digits}g}") if digits and isinstance(v, float) else v

            payload = {
                "rows": [{k: rnd(v) for k, v in asdict(r).items()} for r in report.rows],
                "league": {k: rnd(v) for k, v in report.league.items()},
            }
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    finally:
        if owned:
            fh.close()


def read_report(source, fmt: str = "csv") -> SeasonReport:
    fh, owned = _open_text(source)
    try:
        if fmt == "csv":
            reader = csv.DictReader(fh)
            rows = [SeasonRow(**{c: _parse_cell(c, rec[c]) for c in REPORT_COLUMNS}) for rec in reader]
        elif fmt == "json":
            payload = json.load(fh)
            rows = [SeasonRow(**rec) for rec in payload["rows"]]
        else:
            raise ValueError(f"unknown report format {fmt!r}")
    finally:
        if owned:
            fh.close()
    return SeasonReport(tuple(rows))


def write_surface_csv(grid, dest, digits: int = None):
    """Matrix CSV: x grid across the header row, y grid down the first column."""
    fh, owned = _open_text(dest, "w")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["y\\x"] + [_fmt(float(x), digits) for x in grid.x_range])
        for y, vals in zip(grid.y_range, grid.values):
            w.writerow([_fmt(float(y), digits)] + [_fmt(float(v), digits) for v in vals])
    finally:
        if owned:
            fh.close()


def read_surface_csv(source):
    text = Path(source).read_text() if isinstance(source, (str, os.PathLike)) else source.read()
    rows = list(csv.reader(io.StringIO(text)))
    x = np.array([float(v) for v in rows[0][1:]])
    y = np.array([float(r[0]) for r in rows[1:]])
    vals = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    return WinValueGrid(x, y, vals)
