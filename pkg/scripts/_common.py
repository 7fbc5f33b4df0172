"""Turn a dataclass config into command-line flags and write JSON results."""

from __future__ import annotations

import argparse
import dataclasses
import json
from pathlib import Path


def parse_config(cls, description: str):
    parser = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        flag = "--" + f.name.replace("_", "-")
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        if isinstance(default, (list, tuple)):
            parser.add_argument(flag, type=int, nargs="+", default=list(default))
        elif isinstance(default, bool):
            parser.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        else:
            parser.add_argument(flag, type=type(default) if default is not None else str, default=default)
    return cls(**vars(parser.parse_args()))


def write_json(doc: object, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2)
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text + "\n")
    else:
        print(text)
