"""Command-line interface: ``pythag <subcommand> ...``.

Exit codes: 0 success, 1 input error, 2 a team fit failed to converge
(suppressed by ``--permissive``).
"""

import argparse
import csv
import json
import sys
from dataclasses import replace

import numpy as np

from .fitting import FitConfig
from .ingest import (
    AnalysisConfig,
    GameLogError,
    GameLogRecord,
    aggregate_seasons,
    check_pairs,
    parse_game_log,
    run_season_analysis,
    write_game_log,
    write_report,
    write_surface_csv,
)
from .inference import GOF_CRITICAL_VALUES, INDEPENDENCE_CRITICAL_VALUES, Z_CRITICAL_VALUES
from .montecarlo import SimConfig, SplitMix64, empirical_win_prob, simulate_games
from .predictor import (
    RunEnvironment,
    linear_wp,
    linearization_band_max,
    score_vs_prevent_surface,
    slope_B,
)
from .weibull import matchup_from_means, pythag_wp, win_probability

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 1, 2


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--method", choices=["ls", "mle"], default="ls", help="fitting method")
    p.add_argument("--beta", type=float, default=None, help="shift parameter")
    p.add_argument("--gamma", type=float, default=None, help="pin the shape parameter")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--digits", type=int, default=None, help="significant digits for floats")
    p.add_argument("--permissive", action="store_true", help="exit 0 even if a fit does not converge")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="pythag", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="per-team fits and predicted wins")
    p.add_argument("log", help="game-log CSV")
    p = sub.add_parser("tests", parents=[common], help="z, goodness-of-fit and independence tests")
    p.add_argument("log", help="game-log CSV")

    p = sub.add_parser("predict", parents=[common], help="win percentage from runs scored and allowed")
    p.add_argument("--rs", type=float, required=True)
    p.add_argument("--ra", type=float, required=True)
    p.add_argument("--r-total", type=float, default=None, help="league runs per team for the linear slope")
    p.add_argument("--games", type=int, default=162)

    p = sub.add_parser("value", parents=[common], help="marginal run value surface as CSV")
    p.add_argument("--runs", type=float, default=10.0, help="runs added or prevented per season")
    p.add_argument("--kind", choices=["score", "prevent", "diff"], default="diff")
    p.add_argument("--min", dest="lo", type=float, default=600.0)
    p.add_argument("--max", dest="hi", type=float, default=800.0)
    p.add_argument("--step", type=float, default=5.0)
    p.add_argument("--games", type=int, default=162)

    p = sub.add_parser("linearize", parents=[common], help="slope of the linear predictor and its error band")
    p.add_argument("--r-total", type=float, default=700.567)
    p.add_argument("--band", type=float, default=50.0)

    p = sub.add_parser("simulate", parents=[common], help="synthetic seasons as a game log")
    p.add_argument("--rs", type=float, required=True, help="mean runs scored per game")
    p.add_argument("--ra", type=float, required=True, help="mean runs allowed per game")
    p.add_argument("--games", type=int, default=162)
    p.add_argument("--teams", type=int, default=1)

    p = sub.add_parser("oracle", parents=[common], help="Monte Carlo check of the closed-form win probability")
    p.add_argument("--matchups", type=int, default=20)
    p.add_argument("--n", type=int, default=1_000_000)
    return parser


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _fit_config(args):
    cfg = FitConfig(seed=args.seed)
    if args.beta is not None:
        cfg = replace(cfg, beta=args.beta)
    if args.gamma is not None:
        cfg = replace(cfg, fixed_gamma=args.gamma)
    return cfg


def _analyse(args):
    records = parse_game_log(args.log)
    for problem in check_pairs(records):
        print(f"warning: {problem}", file=sys.stderr)
    seasons = aggregate_seasons(records)
    return run_season_analysis(seasons, AnalysisConfig(method=args.method, fit=_fit_config(args)))


def _nonconverged(report):
    return [r.team_id for r in report.rows if not r.converged]


def cmd_fit(args):
    report = _analyse(args)
    fh, owned = _open_out(args.out)
    try:
        write_report(report, fh, args.format, args.digits)
    finally:
        if owned:
            fh.close()
    return report


def cmd_tests(args):
    report = _analyse(args)
    fh, owned = _open_out(args.out)
    try:
        if args.format == "json":
            write_report(report, fh, "json", args.digits)
        else:
            w = csv.writer(fh, lineterminator="\n")
            cols = ["team_id", "rs_obs", "rs_pred", "z_rs", "ra_obs", "ra_pred", "z_ra",
                    "gof_chisq", "gof_ok_99b", "indep_chisq", "indep_ok_99b", "flags"]
            w.writerow(cols)
            for r in report.rows:
                gof_ok = r.gof_chisq is not None and r.gof_chisq < GOF_CRITICAL_VALUES["99% Bonferroni"]
                ind_ok = r.indep_chisq is not None and r.indep_chisq < INDEPENDENCE_CRITICAL_VALUES["99% Bonferroni"]
                vals = [r.team_id, r.rs_obs, r.rs_pred, r.z_rs, r.ra_obs, r.ra_pred, r.z_ra,
                        r.gof_chisq, gof_ok, r.indep_chisq, ind_ok, r.flags]
                w.writerow(["" if v is None else (f"{v:.{args.digits or 6}g}" if isinstance(v, float) else v)
                            for v in vals])
    finally:
        if owned:
            fh.close()
    print(f"z critical values: {Z_CRITICAL_VALUES}", file=sys.stderr)
    return report


def _emit_rows(args, header, rows):
    fh, owned = _open_out(args.out)
    try:
        if args.format == "json":
            json.dump([dict(zip(header, r)) for r in rows], fh, indent=2)
            fh.write("\n")
        else:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    finally:
        if owned:
            fh.close()


def cmd_predict(args):
    gamma = args.gamma if args.gamma is not None else 1.83
    beta = args.beta if args.beta is not None else 0.0
    wp = pythag_wp(args.rs, args.ra, beta, gamma)
    header = ["rs", "ra", "beta", "gamma", "pythag_wp", "pythag_wins"]
    row = [args.rs, args.ra, beta, gamma, wp, wp * args.games]
    if args.r_total is not None:
        b = slope_B(RunEnvironment(args.r_total, gamma, args.games))
        lin, clamped = linear_wp(args.rs, args.ra, b, return_clamped=True)
        header += ["slope_B", "linear_wp", "linear_clamped"]
        row += [b, lin, clamped]
    _emit_rows(args, header, [row])


def cmd_value(args):
    gamma = args.gamma if args.gamma is not None else 1.83
    beta = args.beta if args.beta is not None else 0.0
    grid = np.arange(args.lo, args.hi + args.step / 2, args.step)
    env = RunEnvironment(gamma=gamma, games_per_season=args.games)
    surface = score_vs_prevent_surface(grid, grid, args.runs, env, beta, args.kind)
    fh, owned = _open_out(args.out)
    try:
        write_surface_csv(surface, fh, args.digits)
    finally:
        if owned:
            fh.close()


def cmd_linearize(args):
    gamma = args.gamma if args.gamma is not None else 1.83
    env = RunEnvironment(args.r_total, gamma)
    _emit_rows(args, ["gamma", "r_total", "slope_B", "band", "max_error"],
               [[gamma, args.r_total, slope_B(env), args.band, linearization_band_max(env, args.band)]])


def cmd_simulate(args):
    gamma = args.gamma if args.gamma is not None else 1.8
    beta = args.beta if args.beta is not None else -0.5
    m = matchup_from_means(args.rs, args.ra, beta, gamma)
    records = []
    for t in range(args.teams):
        cfg = SimConfig(m, args.games, args.seed + t, discretize=True)
        rs, ra, _ = simulate_games(cfg)
        team = f"SIM{t + 1:02d}"
        for i, (x, y) in enumerate(zip(rs.astype(int), ra.astype(int))):
            records.append(GameLogRecord(f"G{i + 1:04d}", team, "OPP", int(x), int(y)))
    fh, owned = _open_out(args.out)
    try:
        write_game_log(records, fh)
    finally:
        if owned:
            fh.close()


def cmd_oracle(args):
    beta = args.beta if args.beta is not None else -0.5
    u = SplitMix64(args.seed).random(3 * args.matchups).reshape(args.matchups, 3)
    rows = []
    for i, (ug, urs, ura) in enumerate(u):
        gamma = args.gamma if args.gamma is not None else 1.0 + 2.0 * ug
        m = matchup_from_means(2.0 + 5.0 * urs, 2.0 + 5.0 * ura, beta, gamma)
        exact = win_probability(m)
        emp = empirical_win_prob(SimConfig(m, args.n, args.seed + 1 + i))
        rows.append([i, gamma, 2.0 + 5.0 * urs, 2.0 + 5.0 * ura, exact, emp, abs(exact - emp)])
    _emit_rows(args, ["matchup", "gamma", "rs_mean", "ra_mean", "closed_form", "monte_carlo", "abs_diff"], rows)


COMMANDS = {
    "fit": cmd_fit,
    "tests": cmd_tests,
    "predict": cmd_predict,
    "value": cmd_value,
    "linearize": cmd_linearize,
    "simulate": cmd_simulate,
    "oracle": cmd_oracle,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except (GameLogError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command in ("fit", "tests"):
        bad = _nonconverged(result)
        if bad and not args.permissive:
            print(f"error: fits did not converge for {', '.join(bad)}", file=sys.stderr)
            return EXIT_NONCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
