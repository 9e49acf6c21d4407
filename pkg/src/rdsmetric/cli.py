"""``rds-metric`` command line entry point.

Usage::

    rds-metric <subcommand> --config FILE [--out DIR] [--seed N] [--threads N]

Config files are INI (a section named after the subcommand, values parsed
as JSON where possible) or JSON (either a flat object or an object keyed by
subcommand).  Exit codes: 0 success, 2 config error, 3 data error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from pathlib import Path

from rdsmetric.errors import ConfigError, DataError
from rdsmetric.experiments import DEFAULTS, RUNNERS

logger = logging.getLogger("rdsmetric")

# keys holding file paths, resolved relative to the config file
PATH_KEYS = {"ensembles", "dataset"}


def _parse_value(raw: str):
    try:
        return json.loads(raw)
    except json.JSONDecodeError:
        return raw.strip()


def read_config(path) -> dict:
    """Return ``{section: {key: value}}``; a flat JSON object lands in section ``""``."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text()
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        if all(isinstance(v, dict) for v in doc.values()) and doc:
            return doc
        return {"": doc}
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    sections = {name: {k: _parse_value(v) for k, v in parser[name].items()} for name in parser.sections()}
    if parser.defaults():
        sections.setdefault("", {k: _parse_value(v) for k, v in parser.defaults().items()})
    return sections


def resolve_params(command: str, sections: dict, base_dir: Path, seed=None) -> dict:
    params = dict(DEFAULTS[command])
    for name in ("", command, command.replace("-", "_")):
        params.update(sections.get(name, {}))
    unknown = set(params) - set(DEFAULTS[command])
    if unknown:
        raise ConfigError(f"unknown keys for {command}: {', '.join(sorted(unknown))}")
    if seed is not None:
        params["seed"] = seed
    for key in PATH_KEYS & set(params):
        v = params[key]
        if v is None:
            continue
        paths = [v] if isinstance(v, str) else list(v)
        resolved = []
        for p in paths:
            full = Path(p) if Path(p).is_absolute() else base_dir / p
            if not full.is_file():
                raise ConfigError(f"referenced file not found: {full}")
            resolved.append(str(full))
        params[key] = resolved[0] if isinstance(v, str) else resolved
    return params


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rds-metric", description="Kernel metrics between random dynamical systems.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="INI or JSON config file")
        sp.add_argument("--out", default="out", help="output directory (default: %(default)s)")
        sp.add_argument("--seed", type=int, default=None, help="override the config seed")
        sp.add_argument("--threads", type=int, default=1, help="worker threads (default: %(default)s)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be non-negative")
        cfg_path = Path(args.config)
        params = resolve_params(args.command, read_config(cfg_path), cfg_path.parent, args.seed)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        result = RUNNERS[args.command](params, out, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    (out / f"{args.command}_summary.json").write_text(json.dumps(result, indent=1, sort_keys=True, default=str) + "\n")
    print(f"{args.command}: wrote outputs to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
