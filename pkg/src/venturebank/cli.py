"""Command-line front end.

Subcommands: ingest, synth, coverage, simulate, breakeven, sweep,
calibrate. Flags can be preloaded from a flat key=value config file via
--config; explicit flags win over file values. All rates and coverage
levels on the command line are percentages; conversion to fractions
happens at the engine boundary.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as dt
import sys
from pathlib import Path

from . import calibrate as calibrate_mod
from .bank_engine import (
    ScenarioConfig,
    bank_summary,
    break_even_rate,
    simulate_bank,
    write_bank_csv,
)
from .din import (
    DinTerms,
    PremiumBase,
    coverage_breakeven_method,
    coverage_sigma_method,
)
from .market_data import default_snapshot_path, funds_rate, load_libor_csv, window_stats
from .portfolio import (
    KauffmanConstraints,
    compress_pairs,
    load_portfolio,
    portfolio_stats,
    save_portfolio,
    shift_to_mean,
    synthesize_kauffman,
)
from .report import ReportKind, emit_report
from .sweep import config_digest, parse_rate_grid, run_sweep, write_sweep_csv, write_sweep_meta

DEFAULT_SEED = 42
DEFAULT_LIBOR_PCT = 1.57  # latest rate in the bundled window

# Config-file schema: key -> coercion. Keys match the long flag names.
_CONFIG_COERCERS = {
    "csv": str, "start": str, "end": str,
    "seed": int, "n": int, "mean": float, "stddev": float,
    "sigma_loss": float, "breakeven_loss": float, "label": str, "out": str,
    "portfolio": str, "floor": float,
    "moc": float, "libor": float, "bank_rate": float,
    "coverage": float, "coverage_floor": float, "premium_rate": float,
    "premium_base": str, "payoff_year": int, "term_years": int,
    "capital": float, "surplus_rate": float, "target_mean": float,
    "no_compress": lambda v: v.lower() in ("1", "true", "yes"),
    "lo": float, "hi": float,
    "grid": str, "mocs": str, "targets": str, "out_dir": str,
    "ledger_out": str,
}


def _load_config(path: str) -> dict[str, object]:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_COERCERS:
            raise ValueError(f"{path}: line {lineno}: unknown key {key!r}")
        values[key] = _CONFIG_COERCERS[key](value.strip())
    return values


def _parse_date(text: str, end_of_year: bool) -> dt.date:
    if len(text) == 4 and text.isdigit():
        year = int(text)
        return dt.date(year, 12, 31) if end_of_year else dt.date(year, 1, 1)
    return dt.date.fromisoformat(text)


def _add_terms_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coverage", type=float, default=3.88,
                   help="insured percent of each investment (default 3.88)")
    p.add_argument("--coverage-floor", type=float, default=2.88,
                   help="regulatory coverage floor, percent (default 2.88)")
    p.add_argument("--premium-rate", type=float, default=5.0,
                   help="annual premium, percent of the premium base (default 5)")
    p.add_argument("--premium-base", choices=[b.value for b in PremiumBase],
                   default=PremiumBase.FACE_ANNUAL.value)
    p.add_argument("--payoff-year", type=int, default=5)
    p.add_argument("--term-years", type=int, default=10)


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--portfolio", help="portfolio CSV; omitted = built-in synthesis pipeline")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--target-mean", type=float, default=None,
                   help="shift the portfolio to this mean before simulating")
    p.add_argument("--no-compress", action="store_true",
                   help="skip pair compression in the synthesis pipeline")
    p.add_argument("--moc", type=float, default=30.0, help="leverage multiple (default 30)")
    rate = p.add_mutually_exclusive_group()
    rate.add_argument("--libor", type=float, default=None,
                      help=f"interbank rate percent; bank pays +0.25 (default {DEFAULT_LIBOR_PCT})")
    rate.add_argument("--bank-rate", type=float, default=None,
                      help="bank funding rate percent, bypassing the spread")
    p.add_argument("--capital", type=float, default=1.0)
    p.add_argument("--surplus-rate", type=float, default=0.0,
                   help="percent earned on cash once debt is retired (default 0)")
    _add_terms_flags(p)


def _terms_from(args: argparse.Namespace) -> DinTerms:
    return DinTerms(
        coverage_fraction=args.coverage / 100.0,
        coverage_floor=args.coverage_floor / 100.0,
        premium_rate=args.premium_rate / 100.0,
        premium_base=PremiumBase(args.premium_base),
        payoff_year=args.payoff_year,
        term_years=args.term_years,
    )


def _portfolio_from(args: argparse.Namespace):
    if args.portfolio:
        p = load_portfolio(args.portfolio)
    else:
        p = synthesize_kauffman(KauffmanConstraints(), args.seed)
        if not args.no_compress:
            p = compress_pairs(p)
    if args.target_mean is not None:
        p = shift_to_mean(p, args.target_mean)
    return p


def _bank_rate_fraction(args: argparse.Namespace) -> float:
    if args.bank_rate is not None:
        return args.bank_rate / 100.0
    libor = args.libor if args.libor is not None else DEFAULT_LIBOR_PCT
    return funds_rate(libor) / 100.0


def _scenario_from(args: argparse.Namespace) -> ScenarioConfig:
    return ScenarioConfig(
        portfolio=_portfolio_from(args),
        din_terms=_terms_from(args),
        bank_rate=_bank_rate_fraction(args),
        moc=args.moc,
        original_capital=args.capital,
        horizon_years=args.term_years,
        surplus_rate=args.surplus_rate / 100.0,
    )


def _cmd_ingest(args: argparse.Namespace) -> int:
    path = Path(args.csv) if args.csv else default_snapshot_path()
    series = load_libor_csv(path)
    start = _parse_date(args.start, end_of_year=False) if args.start else None
    end = _parse_date(args.end, end_of_year=True) if args.end else None
    stats = window_stats(series, start, end)
    rates = series.rates_in_window(start, end)
    print(f"file={path}")
    print(f"observations={len(series)}")
    print(f"window_start={start or series.start}")
    print(f"window_end={end or series.end}")
    print(f"count={stats.count}")
    print(f"median={stats.median:.4f}")
    print(f"mean={stats.mean:.4f}")
    print(f"min={min(rates):.4f}")
    print(f"max={max(rates):.4f}")
    print(f"funds_rate_at_median={funds_rate(stats.median):.4f}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    constraints = KauffmanConstraints(
        n=args.n, mean=args.mean, stddev=args.stddev,
        sigma_clamp_loss=args.sigma_loss, breakeven_clamp_loss=args.breakeven_loss,
    )
    p = synthesize_kauffman(constraints, args.seed, label=args.label)
    stats = portfolio_stats(p)
    sigma = coverage_sigma_method(p, 0.0).clamp_loss
    breakeven = coverage_breakeven_method(p, 0.0).clamp_loss
    save_portfolio(args.out, p, metadata={
        "seed": args.seed,
        "n": len(p),
        "target_mean": constraints.mean,
        "target_stddev": constraints.stddev,
        "realized_mean": repr(stats.mean),
        "realized_stddev": repr(stats.stddev),
        "residual_mean": repr(stats.mean - constraints.mean),
        "residual_stddev": repr(stats.stddev - constraints.stddev),
        "residual_sigma_clamp_loss": repr(sigma - constraints.sigma_clamp_loss),
        "residual_breakeven_clamp_loss": repr(breakeven - constraints.breakeven_clamp_loss),
    })
    print(f"wrote {args.out} ({len(p)} funds, mean {stats.mean:.4f}, stddev {stats.stddev:.4f})")
    return 0


def _cmd_coverage(args: argparse.Namespace) -> int:
    p = load_portfolio(args.portfolio)
    print("method,clamp_loss_pct,recommended_pct")
    print(coverage_sigma_method(p, args.floor).as_csv_row())
    print(coverage_breakeven_method(p, args.floor).as_csv_row())
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _scenario_from(args)
    result = simulate_bank(cfg)
    write_bank_csv(args.ledger_out, result)
    print(f"portfolio={cfg.portfolio.label}")
    print(f"funds={len(cfg.portfolio)}")
    print(f"moc={cfg.moc:g}")
    print(f"bank_rate_pct={cfg.bank_rate * 100:.4f}")
    print(bank_summary(result), end="")
    print(f"ledger={args.ledger_out}")
    return 0


def _cmd_breakeven(args: argparse.Namespace) -> int:
    cfg = _scenario_from(args)
    rate = break_even_rate(cfg, args.lo / 100.0, args.hi / 100.0)
    if rate is None:
        print("breakeven_bank_rate_pct=none")
    else:
        print(f"breakeven_bank_rate_pct={rate * 100:.4f}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid = parse_rate_grid(args.grid)
    mocs = [float(m) for m in args.mocs.split(",") if m]
    targets = [float(t) for t in args.targets.split(",") if t]
    if not mocs or not targets:
        raise ValueError("need at least one moc and one target mean")

    base = synthesize_kauffman(KauffmanConstraints(), args.seed)
    compressed = compress_pairs(base)
    terms = _terms_from(args)
    configs = []
    for target in targets:
        shifted = shift_to_mean(compressed, target)
        shifted = dataclasses.replace(shifted, label=f"{target:.2f}x")
        for moc in mocs:
            configs.append(ScenarioConfig(
                portfolio=shifted, din_terms=terms, bank_rate=0.0, moc=moc,
                original_capital=args.capital, horizon_years=args.term_years,
                surplus_rate=args.surplus_rate / 100.0,
            ))

    table = run_sweep(configs, grid, provenance={
        "config_digest": config_digest(configs, grid),
        "seed": str(args.seed),
        "generated_at": dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    })

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out_dir / "sweep.csv", table)
    write_sweep_meta(out_dir / "sweep.meta", table)
    emit_report(table, ReportKind.BANK_MULTIPLE, out_dir / "fig3.svg")
    emit_report(table, ReportKind.UNDERWRITER_RETURN, out_dir / "fig4.svg")
    for name in ("sweep.csv", "sweep.meta", "fig3.svg", "fig3.csv", "fig4.svg", "fig4.csv"):
        print(f"wrote {out_dir / name}")
    return 0


def _cmd_calibrate(args: argparse.Namespace) -> int:
    base = synthesize_kauffman(KauffmanConstraints(), args.seed)
    anchor = shift_to_mean(compress_pairs(base), 1.31)
    report = calibrate_mod.run_calibration(anchor)
    calibrate_mod.write_calibration_report(args.out, report)
    best = report.selected
    print(f"selected={best.mode}")
    print(f"m30={best.m30:.4f} m43={best.m43:.4f} uplift={best.uplift:+.4f} score={best.score:.4f}")
    print(f"wrote {args.out}")
    return 0


def build_parser(defaults: dict[str, object] | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="venturebank",
        description="Deterministic venture-bank / default-insurance scenario simulator.",
    )
    parser.add_argument("--config", help="flat key=value file preloading flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: list[argparse.ArgumentParser] = []

    def add_parser(name: str, **kwargs) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, **kwargs)
        subparsers.append(sp)
        return sp

    p = add_parser("ingest", help="load a rate CSV and print window statistics")
    p.add_argument("--csv", help="rate CSV path (default: bundled snapshot)")
    p.add_argument("--start", help="window start, YYYY-MM-DD or YYYY")
    p.add_argument("--end", help="window end, YYYY-MM-DD or YYYY")
    p.set_defaults(handler=_cmd_ingest)

    p = add_parser("synth", help="synthesize the reference portfolio")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--n", type=int, default=99)
    p.add_argument("--mean", type=float, default=1.31)
    p.add_argument("--stddev", type=float, default=1.116)
    p.add_argument("--sigma-loss", type=float, default=2.72)
    p.add_argument("--breakeven-loss", type=float, default=17.45)
    p.add_argument("--label", default=None)
    p.add_argument("--out", default="portfolio.csv")
    p.set_defaults(handler=_cmd_synth)

    p = add_parser("coverage", help="coverage sizing by both clamp methods")
    p.add_argument("--portfolio", required=True)
    p.add_argument("--floor", type=float, default=2.88, help="coverage floor, percent")
    p.set_defaults(handler=_cmd_coverage)

    p = add_parser("simulate", help="run one bank scenario and write its ledger")
    _add_scenario_flags(p)
    p.add_argument("--ledger-out", default="bank_ledger.csv")
    p.set_defaults(handler=_cmd_simulate)

    p = add_parser("breakeven", help="solve the break-even bank rate")
    _add_scenario_flags(p)
    p.add_argument("--lo", type=float, default=0.5, help="bracket low, percent (default 0.5)")
    p.add_argument("--hi", type=float, default=7.5, help="bracket high, percent (default 7.5)")
    p.set_defaults(handler=_cmd_breakeven)

    p = add_parser("sweep", help="rate-grid sweep with CSV and SVG reports")
    p.add_argument("--grid", default="0.53:7.50:0.25", help="lo:hi:step in percent")
    p.add_argument("--mocs", default="30,43")
    p.add_argument("--targets", default="1.10,1.31,1.50")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--capital", type=float, default=1.0)
    p.add_argument("--surplus-rate", type=float, default=0.0)
    p.add_argument("--out-dir", default=".")
    _add_terms_flags(p)
    p.set_defaults(handler=_cmd_sweep)

    p = add_parser("calibrate", help="score premium-base/rate-reading modes against anchors")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="calibration.txt")
    p.set_defaults(handler=_cmd_calibrate)

    if defaults:
        for sp in subparsers:
            known = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return parser


def run_cli(argv: list[str]) -> int:
    """Parse and dispatch; exit status 0 on success, nonzero with a diagnostic."""
    config_values: dict[str, object] = {}
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 >= len(argv):
            print("error: --config needs a path", file=sys.stderr)
            return 2
        try:
            config_values = _load_config(argv[idx + 1])
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2

    parser = build_parser(config_values)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0

    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
