"""Command line entry points: one-shot queries, an interactive REPL, serving.

    convoviz query --sample houses --query "average price by home type"
    convoviz repl --data sales.csv --auto-dialog
    convoviz serve --port 8140
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .conversation import Engine
from .dataset import SAMPLE_NAMES, load_dataset, load_sample
from .errors import ConvovizError
from .lexicon import KeywordMaps
from .result import QueryResult


def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--data", help="path to a csv/tsv/json-records table")
    source.add_argument("--sample", choices=SAMPLE_NAMES,
                        help="use a bundled demo dataset")
    parser.add_argument("--format", default="csv",
                        choices=("csv", "tsv", "json-records"),
                        help="input format for --data (default csv)")
    parser.add_argument("--dataset-config",
                        help="path to a JSON file with aliases/ordinal metadata")


def _load(args: argparse.Namespace):
    config = None
    if args.dataset_config:
        with open(args.dataset_config, encoding="utf-8") as handle:
            config = json.load(handle)
    if args.sample:
        return load_sample(args.sample, config=config)
    return load_dataset(args.data, args.format, config=config)


def _summarize(result: QueryResult) -> str:
    lines = [f"[{result.dialog_id}/{result.query_id}] "
             f"confidence={result.follow_up_confidence}"]
    if result.attribute_map:
        lines.append("attributes: " + ", ".join(result.attribute_map))
    if result.task_map:
        parts = []
        for task, entries in result.task_map.items():
            for entry in entries:
                detail = entry.get("operator") or entry.get("direction") or ""
                parts.append(f"{task}({detail})" if detail else task)
        lines.append("tasks: " + ", ".join(parts))
    open_records = result.open_ambiguities()
    if open_records:
        lines.append(f"open ambiguities: {len(open_records)}")
    if result.vis_list:
        top = result.vis_list[0]
        lines.append(f"top chart: {top['markType']} (score {top['score']})")
        if len(result.vis_list) > 1:
            rest = ", ".join(v["markType"] for v in result.vis_list[1:4])
            lines.append(f"alternatives: {rest}")
    return "\n".join(lines)


def _cmd_query(args: argparse.Namespace) -> int:
    dataset = _load(args)
    engine = Engine(dataset)
    dialog = args.dialog
    if dialog in ("true", "yes"):
        dialog = True
    elif dialog in ("false", "no", None):
        dialog = None
    # explicit ids only make sense for the first query of the run
    dialog_id, query_id = args.dialog_id, args.query_id
    for query in args.query:
        result = engine.analyze_query(query, dialog=dialog,
                                      dialog_id=dialog_id, query_id=query_id)
        dialog_id = query_id = None
        print(result.to_json() if args.json else _summarize(result))
    return 0


def _prompt_selections(result: QueryResult):
    """Numbered prompts for each open ambiguity; empty input keeps it open."""
    selections: dict = {}
    for record in result.open_ambiguities():
        labels = record.option_labels()
        print(f"\n{record.query_phrase!r} could mean ({record.kind}):")
        for index, label in enumerate(labels, start=1):
            print(f"  {index}) {label}")
        raw = input("pick number(s), comma separated, or enter to skip: ").strip()
        if not raw:
            continue
        picked = []
        for piece in raw.split(","):
            piece = piece.strip()
            if piece.isdigit() and 1 <= int(piece) <= len(labels):
                picked.append(labels[int(piece) - 1])
        if picked:
            selections.setdefault(record.kind, {})[record.query_phrase] = picked
    return selections or None


def _cmd_repl(args: argparse.Namespace) -> int:
    dataset = _load(args)
    keywords = None
    if args.keywords:
        with open(args.keywords, encoding="utf-8") as handle:
            keywords = KeywordMaps.from_dict(json.load(handle))
    engine = Engine(dataset, keywords=keywords)
    engine.set_resolution_callback(_prompt_selections)
    mode = "auto" if args.auto_dialog else None
    print(f"dataset {dataset.id!r}: {', '.join(dataset.attribute_names())}")
    print("type a query, or :quit / :history / :follow <dialog> [query]")
    follow_target: tuple | None = None
    while True:
        try:
            line = input("convoviz> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return 0
        if not line:
            continue
        if line in (":quit", ":q", ":exit"):
            return 0
        if line == ":history":
            for dialog_id, results in engine.store.dialogs.items():
                for result in results:
                    print(f"  {dialog_id}/{result.query_id}: {result.query}")
            continue
        if line.startswith(":follow"):
            parts = line.split()
            follow_target = (parts[1], parts[2] if len(parts) > 2 else None) \
                if len(parts) > 1 else None
            print(f"next query follows {follow_target or 'most recent'}")
            continue
        try:
            if follow_target is not None:
                result = engine.analyze_query(line, dialog=True,
                                              dialog_id=follow_target[0],
                                              query_id=follow_target[1])
                follow_target = None
            else:
                result = engine.analyze_query(line, dialog=mode)
        except ConvovizError as exc:
            print(f"error [{exc.code}]: {exc}")
            continue
        print(_summarize(result))


def _cmd_serve(args: argparse.Namespace) -> int:
    from . import server

    server.run(port=args.port, data_dir=args.data_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convoviz",
        description="natural language queries over tabular data")
    sub = parser.add_subparsers(dest="command", required=True)

    query = sub.add_parser("query", help="analyze one or more queries")
    _add_dataset_args(query)
    query.add_argument("--query", required=True, action="append",
                       help="question to analyze (repeat for a multi-turn session)")
    query.add_argument("--dialog", choices=("true", "false", "auto"),
                       help="follow-up mode (default standalone)")
    query.add_argument("--dialog-id", help="dialog to follow up on")
    query.add_argument("--query-id", help="query within --dialog-id")
    query.add_argument("--json", action="store_true",
                       help="print the full result as JSON")
    query.set_defaults(func=_cmd_query)

    repl = sub.add_parser("repl", help="interactive session")
    _add_dataset_args(repl)
    repl.add_argument("--auto-dialog", action="store_true",
                      help="detect follow-ups automatically")
    repl.add_argument("--keywords", help="path to a keyword-map JSON file")
    repl.set_defaults(func=_cmd_repl)

    serve = sub.add_parser("serve", help="run the REST API server")
    serve.add_argument("--port", type=int, default=None,
                       help="listen port (default CONVOVIZ_PORT or 8140)")
    serve.add_argument("--data-dir", default=None,
                       help="session persistence directory")
    serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvovizError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
