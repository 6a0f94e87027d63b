"""Command line interface.

Subcommands: ``test`` (fractional-integration test on a CSV column),
``select`` (trend-order IC trace), ``simulate`` (write a simulated series),
``size`` and ``power`` (Monte Carlo experiments with CSV/figure/manifest
outputs).  Exit codes: 0 success, 1 runtime or numeric failure, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, io
from .chebyshev import ols_fit, trend_curve
from .fracsim import FracParams, SimulationError, simulate
from .fractest import DegenerateSeriesError, TestConfig, test_with_detrend
from .montecarlo import (
    DEFAULT_SEED,
    McConfig,
    replicate_figures,
    run_power_curve,
    run_size,
)
from .order_selection import select_order


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".15g")
    return str(x)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--column", help="name of the column to analyse")
    p.add_argument("--log", action="store_true", help="log-transform the column")
    p.add_argument(
        "--log-ratio",
        nargs=2,
        metavar=("NUM", "DEN"),
        help="analyse log(NUM/DEN) of two columns",
    )


def _load_input(args) -> np.ndarray:
    if args.log_ratio:
        if args.log:
            raise ValueError("choose either --log or --log-ratio, not both")
        return io.load_series(args.input, transform="log_ratio", ratio=tuple(args.log_ratio))
    transform = "log" if args.log else "none"
    return io.load_series(args.input, column=args.column, transform=transform)


def _write_json(payload: dict, destination: str) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if destination == "-":
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_beta(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ValueError(f"could not parse coefficient list {text!r}") from None


def cmd_test(args) -> int:
    if args.auto_k and args.k is not None:
        raise ValueError("--auto-k and --k are mutually exclusive")
    y = _load_input(args)
    config = TestConfig(
        delta0=args.delta0,
        alpha=args.alpha,
        m=args.m,
        trend_order="auto" if args.k is None else args.k,
        k_star=args.k_star,
        penalty=args.penalty,
        alternative=args.alternative,
        level=args.level,
    )
    result = test_with_detrend(y, config)

    print(f"fractional integration test (T = {y.size})")
    print(f"  input           {args.input}")
    print(f"  delta0          {_fmt(result.delta0)}")
    print(f"  bandwidth m     {result.m}")
    if result.ic_trace is not None:
        trace = result.ic_trace
        print(
            f"  trend order k   {result.k_used} "
            f"(auto, {trace.penalty_name}, k* = {trace.k_max})"
        )
        for k, value in enumerate(trace.ic_values):
            marker = "  <- k_hat" if k == trace.k_hat else ""
            label = "exact fit" if k in trace.exact_fit_orders else _fmt(float(value))
            print(f"    IC({k}) = {label}{marker}")
    else:
        print(f"  trend order k   {result.k_used} (fixed)")
    print(f"  t statistic     {_fmt(result.t_stat)}")
    print(f"  LM statistic    {_fmt(result.lm_stat)}")
    print(f"  p-value         {_fmt(result.p_value)} ({result.alternative})")
    verdict = "reject" if result.reject_at_level else "do not reject"
    print(f"  decision        {verdict} H0 at level {_fmt(result.level)}")

    if args.figure:
        from . import plotting

        fit = ols_fit(y, result.k_used)
        plotting.plot_trend_fit(
            y, y - fit.residuals, args.figure, title=f"fitted trend (k = {result.k_used})"
        )
        print(f"  figure          {args.figure}")
    if args.json:
        payload = result.to_dict()
        payload["T"] = int(y.size)
        payload["input"] = args.input
        payload["input_digest"] = io.input_digest(args.input)
        payload["version"] = __version__
        _write_json(payload, args.json)
    return 0


def cmd_select(args) -> int:
    y = _load_input(args)
    trace = select_order(y, args.k_star, args.penalty)
    print(f"trend order selection (T = {y.size}, penalty = {trace.penalty_name}, "
          f"A(T) = {_fmt(trace.penalty_value)})")
    print("  k   IC(k)")
    for k, value in enumerate(trace.ic_values):
        label = "exact fit" if k in trace.exact_fit_orders else _fmt(float(value))
        marker = "  <- k_hat" if k == trace.k_hat else ""
        print(f"  {k:<3d} {label}{marker}")
    if args.json:
        payload = trace.to_dict()
        payload["input"] = args.input
        payload["input_digest"] = io.input_digest(args.input)
        _write_json(payload, args.json)
    return 0


def cmd_simulate(args) -> int:
    if abs(args.delta) >= 0.5 and not (args.method == "type2" and args.allow_wide_delta):
        raise ValueError(
            "|delta| must be < 0.5; pass --method type2 --allow-wide-delta to "
            "push the truncated filter to |delta| < 1"
        )
    params = FracParams(delta=args.delta, innovation_sd=args.sd, method=args.method)
    rng = np.random.default_rng(args.seed)
    u = simulate(params, args.T, rng)
    y = u if not args.beta else trend_curve(args.T, np.asarray(args.beta)) + u
    io.write_series_csv(y, args.out)
    return 0


def _mc_config_from_flags(args, delta_grid: tuple[float, ...]) -> McConfig:
    return McConfig(
        T=args.T,
        reps=args.reps,
        delta_grid=delta_grid,
        beta=args.beta,
        k_fit="auto" if args.k == "auto" else int(args.k),
        delta0=args.delta0,
        alpha=args.alpha,
        m=args.m,
        level=args.level,
        seed=args.seed,
        sim_method=args.sim_method,
        alternative=args.alternative,
        k_star=args.k_star,
        penalty=args.penalty,
        workers=args.workers,
    )


def _write_mc_outputs(args, report, stem: str, command: str) -> None:
    os.makedirs(args.out_dir, exist_ok=True)
    csv_path = os.path.join(args.out_dir, f"{stem}.csv")
    io.write_curve_csv(csv_path, report)
    print(f"wrote {csv_path}")
    if not args.no_plot and report.delta_grid.size > 1:
        from . import plotting

        png_path = os.path.join(args.out_dir, f"{stem}.png")
        plotting.plot_power_curves({report.config.k_fit: report}, png_path, title=stem)
        print(f"wrote {png_path}")
    manifest_path = os.path.join(args.out_dir, f"{stem}_manifest.json")
    io.write_manifest(
        manifest_path,
        command=command,
        config=report.config.to_dict(),
        seed=report.config.seed,
        wall_time_seconds=report.elapsed_seconds,
    )
    print(f"wrote {manifest_path}")


def cmd_size(args) -> int:
    config = _mc_config_from_flags(args, delta_grid=(args.delta0,))
    report = run_size(config)
    freq = float(report.rejection_freq[0])
    se = float(report.mc_se[0])
    print(f"null rejection frequency: {_fmt(freq)} (MC se {_fmt(se)}, "
          f"reps {config.reps}, m {report.m}, level {_fmt(config.level)})")
    _write_mc_outputs(args, report, stem=f"size_T{args.T}_seed{args.seed}", command="size")
    return 0


def cmd_power(args) -> int:
    if args.figure:
        preset = {"s1": "fig_s1", "s2": "fig_s2"}[args.figure]
        paths = replicate_figures(
            preset,
            out_dir=args.out_dir,
            reps=args.reps,
            seed=args.seed,
            level=args.level,
            sim_method=args.sim_method,
            workers=args.workers,
            render=not args.no_plot,
        )
        for path in paths["csv"] + paths["png"] + [paths["manifest"]]:
            print(f"wrote {path}")
        return 0
    if args.delta_grid is None:
        raise ValueError("either --figure or --delta-grid is required")
    grid = tuple(float(x) for x in args.delta_grid.split(","))
    config = _mc_config_from_flags(args, delta_grid=grid)
    report = run_power_curve(config)
    for row in report.rows():
        print(
            f"delta {_fmt(row[0])}: rejection {_fmt(row[2])} "
            f"(se {_fmt(row[3])}, asymptotic {_fmt(row[4])})"
        )
    _write_mc_outputs(args, report, stem=f"power_T{args.T}_seed{args.seed}", command="power")
    return 0


def _add_mc_flags(p: argparse.ArgumentParser, default_reps: int) -> None:
    p.add_argument("--T", type=int, default=512, help="sample size")
    p.add_argument("--reps", type=int, default=default_reps, help="Monte Carlo replications")
    p.add_argument("--alpha", type=float, default=0.65, help="bandwidth exponent for m = floor(T^alpha)")
    p.add_argument("--m", type=int, default=None, help="explicit bandwidth (overrides --alpha)")
    p.add_argument("--k", default="1", help="trend order used by the test, or 'auto'")
    p.add_argument("--beta", type=_parse_beta, default=(), help="trend coefficients, comma separated")
    p.add_argument("--delta0", type=float, default=0.0, help="hypothesized memory parameter")
    p.add_argument("--level", type=float, default=0.05, help="test level")
    p.add_argument("--alternative", choices=["two-sided", "greater", "less"], default="two-sided")
    p.add_argument("--k-star", type=int, default=10, help="maximum order for k = auto")
    p.add_argument("--penalty", choices=["bic", "hq"], default="bic")
    p.add_argument("--sim-method", choices=["type1", "type2"], default="type1")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes (default: FRACSMOOTH_WORKERS or 1)")
    p.add_argument("--out-dir", default=".", help="directory for CSV/figure/manifest outputs")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracsmooth",
        description="Fractional integration tests under smooth Chebyshev trends.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="test the memory parameter of a CSV column")
    _add_input_flags(p)
    p.add_argument("--delta0", type=float, default=0.0, help="hypothesized memory parameter")
    p.add_argument("--alpha", type=float, default=0.65, help="bandwidth exponent")
    p.add_argument("--m", type=int, default=None, help="explicit bandwidth (overrides --alpha)")
    p.add_argument("--k", type=int, default=None, help="fixed trend order (default: auto)")
    p.add_argument("--auto-k", action="store_true", help="select the trend order by IC (default)")
    p.add_argument("--k-star", type=int, default=10, help="maximum order for auto selection")
    p.add_argument("--penalty", choices=["bic", "hq"], default="bic")
    p.add_argument("--alternative", choices=["two-sided", "greater", "less"],
                   default="two-sided")
    p.add_argument("--level", type=float, default=0.05)
    p.add_argument("--json", help="write a JSON mirror of the result ('-' for stdout)")
    p.add_argument("--figure", help="render the series with its fitted trend to this file")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("select", help="information-criterion trace for the trend order")
    _add_input_flags(p)
    p.add_argument("--k-star", type=int, default=10)
    p.add_argument("--penalty", choices=["bic", "hq"], default="bic")
    p.add_argument("--json", help="write a JSON mirror of the trace ('-' for stdout)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("simulate", help="simulate a fractional series with optional trend")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--method", choices=["type1", "type2"], default="type1")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--sd", type=float, default=1.0, help="innovation standard deviation")
    p.add_argument("--beta", type=_parse_beta, default=(),
                   help="trend coefficients, comma separated")
    p.add_argument("--allow-wide-delta", action="store_true",
                   help="permit 0.5 <= |delta| < 1 with --method type2")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("size", help="Monte Carlo null rejection frequency")
    _add_mc_flags(p, default_reps=2000)
    p.set_defaults(func=cmd_size)

    p = sub.add_parser("power", help="Monte Carlo power curve or figure preset")
    _add_mc_flags(p, default_reps=5000)
    p.add_argument("--figure", choices=["s1", "s2"],
                   help="run a bundled 2x2 figure preset instead of a single curve")
    p.add_argument("--delta-grid", default=None,
                   help="comma-separated true delta values for a custom curve")
    p.set_defaults(func=cmd_power)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateSeriesError, SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
