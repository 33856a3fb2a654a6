"""Command-line interface: serve the API or drive the pipeline directly.

Unless a config file says otherwise, CLI runs persist the bowl under
./data/ so repeated invocations see each other's submissions. Failures
print the same {stage, message} object the HTTP service returns.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Optional

from .config import ConfigError, load_config, with_storage
from .evaluation import (
    RESULT_HEADER,
    ExperimentSpec,
    format_result_row,
    run_experiment,
)
from .service import PipelineError, Platform, serve

DEFAULT_BOWL_PATH = Path("data/bowl.jsonl")
DEFAULT_ALERT_LOG_PATH = Path("data/alerts.jsonl")


def _load_cli_config(config_path: Optional[str]):
    config = load_config(Path(config_path) if config_path else None)
    return with_storage(config, DEFAULT_BOWL_PATH, DEFAULT_ALERT_LOG_PATH)


def _read_email_payload(path: str) -> dict[str, Any]:
    """A JSON object {sender?, subject?, body} or a plain-text body file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        return {"body": text}
    if isinstance(payload, dict):
        return payload
    return {"body": text}


def _emit(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2))


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phishbowl",
        description="Adaptive phishing detection over a shared bowl of known phish.",
    )
    parser.add_argument("--config", help="TOML config file", default=None)
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("serve", help="run the HTTP service")
    cmd.add_argument("--host", default=None)
    cmd.add_argument("--port", type=int, default=None)

    cmd = commands.add_parser("classify", help="classify one email")
    source = cmd.add_mutually_exclusive_group(required=True)
    source.add_argument("--file", help="email file (JSON fields or plain body)")
    source.add_argument("--ocr-file", help="OCR word-table file (TSV)")

    cmd = commands.add_parser("submit", help="submit a known phish to the bowl")
    cmd.add_argument("--file", required=True, help="email file (JSON fields or plain body)")

    cmd = commands.add_parser("search", help="natural-language search over the bowl")
    cmd.add_argument("query")
    cmd.add_argument("-n", type=int, default=10, help="max results (default 10)")

    cmd = commands.add_parser("preload", help="bulk-load a labeled corpus")
    cmd.add_argument("--corpus", required=True, help="JSONL corpus file")

    cmd = commands.add_parser("eval", help="run a hermetic experiment")
    cmd.add_argument("--corpus", default=None, help="JSONL corpus (default: synthetic)")
    cmd.add_argument("--train", type=int, default=256)
    cmd.add_argument("--test", type=int, default=200)
    cmd.add_argument("--analyzer", choices=("bowl", "gpt", "ensemble"), default="ensemble")
    cmd.add_argument("--phish-only", action="store_true", help="preload only label-1 records")
    decay = cmd.add_mutually_exclusive_group()
    decay.add_argument("--decay", type=float, default=0.5)
    decay.add_argument("--no-decay", action="store_true", help="disable confidence decay")
    cmd.add_argument("--seed", type=int, default=0)
    return parser


def _run(args: argparse.Namespace) -> int:
    if args.command == "eval":
        spec = ExperimentSpec(
            train_size=args.train,
            test_size=args.test,
            corpus_path=Path(args.corpus) if args.corpus else None,
            analyzer=args.analyzer,
            phish_only_bowl=args.phish_only,
            decay=None if args.no_decay else args.decay,
            seed=args.seed,
        )
        result = run_experiment(spec)
        print(RESULT_HEADER)
        print(format_result_row(result))
        return 0

    config = _load_cli_config(args.config)
    if args.command == "serve":
        service = config.service
        if args.host is not None:
            service = replace(service, host=args.host)
        if args.port is not None:
            service = replace(service, port=args.port)
        serve(Platform(replace(config, service=service)))
        return 0
    platform = Platform(config)
    if args.command == "classify":
        if args.ocr_file:
            payload: dict[str, Any] = {
                "ocr_table": Path(args.ocr_file).read_text(encoding="utf-8")
            }
        else:
            payload = _read_email_payload(args.file)
        _emit(platform.classify_request(payload))
        return 0
    if args.command == "submit":
        _emit(platform.submit_request(_read_email_payload(args.file)))
        return 0
    if args.command == "search":
        if not 1 <= args.n <= 100:
            raise PipelineError("request", "n must be between 1 and 100")
        _emit(platform.search(args.query, args.n))
        return 0
    if args.command == "preload":
        count = platform.preload(Path(args.corpus))
        _emit({"added": count, "bowl_size": platform.bowl.count()})
        return 0
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except PipelineError as exc:
        print(json.dumps({"stage": exc.stage, "message": exc.message}), file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(json.dumps({"stage": "config", "message": str(exc)}), file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"stage": "request", "message": str(exc)}), file=sys.stderr)
        return 1
    except ValueError as exc:
        print(json.dumps({"stage": "request", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
