"""Command-line entry point: ``fuzzylink {link,baseline,compare,synth}``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from .config import ConfigError, LinkageConfig, load_config
from .fwa import InfeasibleWeightsError
from .inference import RuleParseError
from .pipeline import (
    compare,
    emit_report,
    read_csv,
    read_truth,
    run_deterministic,
    run_linkage,
    run_probabilistic,
    write_pairs_csv,
)
from .synth import benchmark_config, write_synthetic

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2

log = logging.getLogger("fuzzylink")


def _load(args) -> LinkageConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, fcm=replace(cfg.fcm, seed=args.seed))
    return cfg


def _inputs(args):
    return read_csv(args.left), read_csv(args.right)


def _truth(args):
    return read_truth(args.truth) if getattr(args, "truth", None) else None


def _finish(out_dir: Path, runs) -> None:
    table = emit_report([r.report for r in runs], out_dir)
    sys.stdout.write(table)
    for r in runs:
        log.info("%s: %d pairs in %.2fs", r.report.strategy, r.report.total_pairs, r.report.seconds)
        for d in r.report.diagnostics:
            log.warning("%s: %s", r.report.strategy, d)


def cmd_link(args) -> None:
    cfg = _load(args)
    A, B = _inputs(args)
    run = run_linkage(cfg, A, B)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_pairs_csv(run.scored, out / "pairs.csv")
    _finish(out, [run])


def cmd_baseline(args) -> None:
    cfg = _load(args)
    A, B = _inputs(args)
    if args.method == "deterministic":
        run = run_deterministic(cfg, A, B)
    else:
        run = run_probabilistic(cfg, A, B, _truth(args))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_pairs_csv(run.scored, out / "pairs.csv")
    _finish(out, [run])


def cmd_compare(args) -> None:
    cfg = _load(args)
    A, B = _inputs(args)
    runs = compare(cfg, A, B, _truth(args))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.write_pairs:
        for name, run in runs.items():
            write_pairs_csv(run.scored, out / f"pairs_{name}.csv")
    _finish(out, list(runs.values()))


def cmd_synth(args) -> None:
    seed = 42 if args.seed is None else args.seed
    paths = write_synthetic(
        args.out_dir, n_left=args.n_left, n_right=args.n_right,
        corruption_rate=args.corruption, seed=seed, overlap=args.overlap,
    )
    config_path = Path(args.out_dir) / "config.yaml"
    config_path.write_text(yaml.safe_dump(benchmark_config(), sort_keys=False), encoding="utf-8")
    for key, p in {**paths, "config": config_path}.items():
        print(f"{key}: {p}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzylink", description="Fuzzy record linkage over two CSV files.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress and diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, truth=False):
        p.add_argument("--config", required=True, help="YAML/JSON linkage configuration")
        p.add_argument("--left", required=True, help="left CSV file")
        p.add_argument("--right", required=True, help="right CSV file")
        p.add_argument("--out-dir", required=True, help="directory for pairs.csv and report files")
        p.add_argument("--seed", type=int, default=None, help="override the clustering/sampling seed")
        if truth:
            p.add_argument("--truth", help="CSV of true (left_id, right_id) pairs for m/u estimation")

    p = sub.add_parser("link", help="run fuzzy record linkage")
    common(p)
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("baseline", help="run a deterministic or probabilistic baseline")
    common(p, truth=True)
    p.add_argument("method", choices=["deterministic", "probabilistic"])
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("compare", help="run every strategy and write a comparison report")
    common(p, truth=True)
    p.add_argument("--write-pairs", action="store_true", help="also write pairs_<strategy>.csv files")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="generate a seeded synthetic benchmark")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n-left", type=int, default=500)
    p.add_argument("--n-right", type=int, default=500)
    p.add_argument("--corruption", type=float, default=0.3)
    p.add_argument("--overlap", type=float, default=0.6)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except (ConfigError, RuleParseError, InfeasibleWeightsError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"fuzzylink: configuration error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"fuzzylink: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
