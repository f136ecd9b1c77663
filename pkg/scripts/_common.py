"""Config plumbing shared by the experiment scripts: every dataclass
field becomes a command-line flag, and results go out as JSON."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys


def parse_config(cls, argv=None):
    ap = argparse.ArgumentParser(description=cls.__doc__)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            ap.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, (list, tuple)):
            ap.add_argument(flag, nargs="+", default=list(default))
        else:
            ap.add_argument(flag, type=type(default), default=default)
    ap.add_argument("--out", help="write JSON here instead of stdout")
    ns = vars(ap.parse_args(argv))
    out = ns.pop("out")
    return cls(**ns), out


def emit(result: dict, out: str | None) -> None:
    text = json.dumps(result, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
