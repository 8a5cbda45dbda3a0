"""Command-line pipeline: load or synthesize data, split, preprocess, tune
every requested classifier family, and write the report artifacts.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 tuning error,
5 artifact write error, 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, load_run_config
from .preprocess import add_derived_column, apply_plan, fit_plan
from .report import render_chart, render_table
from .tabular import filter_rows, generate_synthetic, load_csv, split_train_test, write_csv
from .tuner import grs_auto_hp

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_TUNING = 4
EXIT_OUTPUT = 5


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f"{path.name}.tmp-{os.getpid()}")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _load_table(config):
    if "csv" in config.source:
        section = config.source["csv"]
        table = load_csv(section["path"], section["target"])
        if "filter" in section:
            table = filter_rows(table, section["filter"]["column"], section["filter"]["allowed"])
    else:
        section = config.source["synthetic"]
        table = generate_synthetic(section["rows"], section["seed"], section["positive_rate"])
    if config.derived:
        d = config.derived
        table = add_derived_column(table, d["name"], d["kind"], d["left"], d["right"])
    return table


def cmd_run(args) -> int:
    try:
        config = load_run_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        table = _load_table(config)
        split = split_train_test(table, config.train_fraction, config.split_seed)
        plan = fit_plan(split.train, config.missing_threshold, config.scaling)
        train_matrix = apply_plan(plan, split.train)
        test_matrix = apply_plan(plan, split.test)
        logger.info(
            "data ready: %d train rows, %d test rows, %d features",
            train_matrix.n_rows, test_matrix.n_rows, train_matrix.n_features,
        )
    except Exception as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA

    try:
        report = grs_auto_hp(
            config.families,
            config.spaces,
            train_matrix,
            test_matrix,
            k=config.k,
            fold_seed=config.fold_seed,
            search_seed=config.search_seed,
            rs_budget=config.rs_budget,
            workers=config.workers,
            config_echo=config.echo(),
        )
    except Exception as exc:
        print(f"tuning error: {exc}", file=sys.stderr)
        return EXIT_TUNING

    try:
        report_dict = report.to_dict(tool_version=__version__)
        _write_atomic(config.report_path, json.dumps(report_dict, indent=2, sort_keys=True) + "\n")
        _write_atomic(config.table_path, render_table(report_dict))
        _write_atomic(config.chart_path, render_chart(report_dict))
    except Exception as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT

    print(
        f"final: family={report.final_family} "
        f"config={json.dumps(report.final_config, sort_keys=True)} "
        f"test_accuracy={report.final_test_accuracy:.4f}"
    )
    return EXIT_OK


def cmd_render(args) -> int:
    if not args.table and not args.chart:
        print("error: render needs --table and/or --chart", file=sys.stderr)
        return EXIT_CONFIG
    try:
        report_dict = json.loads(Path(args.report).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        if args.table:
            _write_atomic(Path(args.table), render_table(report_dict))
        if args.chart:
            _write_atomic(Path(args.chart), render_chart(report_dict))
    except Exception as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        table = generate_synthetic(args.rows, args.seed, args.positive_rate)
        write_csv(table, args.out)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(f"wrote {table.n_rows} rows to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tabtune",
        description="Tune tabular classifiers with grid and random search.",
    )
    parser.add_argument("--version", action="version", version=f"tabtune {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the full pipeline from a JSON config")
    p_run.add_argument("config", help="path to the run configuration JSON")
    p_run.set_defaults(func=cmd_run)

    p_render = sub.add_parser("render", help="re-render artifacts from a report JSON")
    p_render.add_argument("report", help="path to a previously written report JSON")
    p_render.add_argument("--table", help="write the markdown table here")
    p_render.add_argument("--chart", help="write the SVG chart here")
    p_render.set_defaults(func=cmd_render)

    p_synth = sub.add_parser("synth", help="write a synthetic student-records CSV")
    p_synth.add_argument("--rows", type=int, required=True)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--positive-rate", type=float, default=0.5, dest="positive_rate")
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # argparse/system errors surface their own text
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


def main_entry() -> None:
    sys.exit(main())
