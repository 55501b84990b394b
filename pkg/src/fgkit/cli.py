"""Command-line interface: annotation, corpus building, catalog export,
and response scoring over files or standard streams.

Machine output is JSON Lines on the output path (or stdout via "-");
human-readable summaries go to stderr.  Exit codes: 0 clean, 1 when
per-record errors occurred, 2 for configuration or I/O failures.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import __version__
from .catalog import CatalogError, bundled_catalog_text, default_catalog, \
    load_catalog, perceive
from .corpus import build_corpus
from .mol import SmilesError, parse_smiles
from .reaction import ReactionError, fg_changes, parse_reaction
from .rewards import TASK_KINDS, RewardConfig, combined_reward
from .canon import write_canonical


@contextlib.contextmanager
def _open_in(path):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as fh:
            yield fh


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _emit(fh, record):
    fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def _load_catalog_arg(path):
    return load_catalog(path) if path else default_catalog()


def _input_lines(fh):
    for line in fh:
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


def cmd_annotate_mol(args):
    catalog = _load_catalog_arg(args.catalog)
    errors = 0
    total = 0
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for line in _input_lines(src):
            total += 1
            try:
                mol = parse_smiles(line)
                record = {
                    "smiles": line,
                    "canonical": write_canonical(mol),
                    "functional_groups": [m.to_dict()
                                          for m in perceive(mol, catalog)],
                }
            except SmilesError as exc:
                errors += 1
                record = {"smiles": line, "error": str(exc)}
            _emit(dst, record)
    print(f"annotate-mol: {total} lines, {errors} errors", file=sys.stderr)
    return 1 if errors else 0


def cmd_annotate_rxn(args):
    catalog = _load_catalog_arg(args.catalog)
    errors = 0
    total = 0
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for line in _input_lines(src):
            total += 1
            try:
                rxn = parse_reaction(line)
            except ReactionError as exc:
                errors += 1
                _emit(dst, {"rxn_smiles": line, "error": str(exc),
                            "quality": "invalid"})
                continue
            try:
                change = fg_changes(rxn, catalog)
                record = {"rxn_smiles": line}
                record.update(change.to_dict())
            except ReactionError as exc:
                errors += 1
                record = {"rxn_smiles": line, "error": str(exc),
                          "quality": "unannotated-error"}
            _emit(dst, record)
    print(f"annotate-rxn: {total} lines, {errors} errors", file=sys.stderr)
    return 1 if errors else 0


def cmd_build_corpus(args):
    with open(args.config, encoding="utf-8") as fh:
        config = json.load(fh)
    if args.seed is not None:
        config["seed"] = args.seed
    if args.format:
        config["formats"] = [args.format]
    if args.augment is not None:
        config["augment"] = args.augment
    if args.blacklist:
        config["blacklist"] = args.blacklist
    catalog = _load_catalog_arg(args.catalog)
    entries, stats = build_corpus(config, catalog)
    output = args.output or config.get("output")
    if not output:
        raise FileNotFoundError("no corpus output path configured")
    with _open_out(output) as dst:
        for entry in entries:
            _emit(dst, entry.to_dict())
    stats_path = config.get("stats")
    if stats_path:
        with _open_out(stats_path) as fh:
            fh.write(json.dumps(stats, indent=2, sort_keys=True) + "\n")
    print(f"build-corpus: {stats['entries']['total']} entries", file=sys.stderr)
    return 0


def cmd_export_catalog(args):
    with _open_out(args.output) as dst:
        dst.write(bundled_catalog_text())
    return 0


def cmd_score(args):
    config = RewardConfig.from_file(args.config) if args.config \
        else RewardConfig()
    errors = 0
    total = 0
    with _open_in(args.input) as src, _open_out(args.output) as dst:
        for line in _input_lines(src):
            total += 1
            try:
                case = json.loads(line)
                kind = case.get("task_kind", "smiles")
                if kind not in TASK_KINDS:
                    raise ValueError(f"unknown task kind {kind!r}")
                result = combined_reward(case["response"], case["gold"],
                                         kind, config)
                _emit(dst, result.to_dict())
            except (ValueError, KeyError) as exc:
                errors += 1
                _emit(dst, {"error": str(exc)})
    print(f"score: {total} lines, {errors} errors", file=sys.stderr)
    return 1 if errors else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fgkit",
        description="Functional-group annotation, corpus building, and "
                    "reward scoring.")
    parser.add_argument("--version", action="version",
                        version=f"fgkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate-mol",
                       help="annotate functional groups per SMILES line")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--catalog")
    p.set_defaults(func=cmd_annotate_mol)

    p = sub.add_parser("annotate-rxn",
                       help="annotate functional-group changes per "
                            "reaction SMILES line")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--catalog")
    p.set_defaults(func=cmd_annotate_rxn)

    p = sub.add_parser("build-corpus",
                       help="run the corpus pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--output")
    p.add_argument("--seed", type=int)
    p.add_argument("--catalog")
    p.add_argument("--format",
                   choices=["markdown_list", "markdown_table", "json_dict"],
                   help="restrict corpus entries to one format")
    p.add_argument("--augment", type=int,
                   help="override the augmentation factor")
    p.add_argument("--blacklist", help="override the blacklist file")
    p.set_defaults(func=cmd_build_corpus)

    p = sub.add_parser("export-catalog",
                       help="write the bundled catalog file verbatim")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_export_catalog)

    p = sub.add_parser("score",
                       help="score response/gold JSONL with format and "
                            "accuracy rewards")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--config")
    p.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError, CatalogError, ValueError) as exc:
        print(f"fgkit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
