"""JSON documents for measures, plus run manifests.

Measure document::

    {"group": "Z6xZ4",
     "atoms": [{"coords": [0, 1], "re": 0.5, "im": 0.0}, ...]}

Floats are written with ``repr`` precision by :mod:`json`, so a write/read
cycle reproduces every amplitude bit for bit.
"""
from __future__ import annotations

import hashlib
import json
import math
import platform
from datetime import datetime, timezone
from pathlib import Path

from .errors import ParseError
from .groups import parse_group
from .measures import DiscreteMeasure

MANIFEST = "manifest.json"


def measure_to_dict(mu: DiscreteMeasure) -> dict:
    return {
        "group": str(mu.group),
        "atoms": [{"coords": list(x), "re": a.real, "im": a.imag}
                  for x, a in sorted(mu.atoms.items())],
    }


def measure_from_dict(doc) -> DiscreteMeasure:
    if not isinstance(doc, dict):
        raise ParseError("measure document must be an object")
    if "group" not in doc or "atoms" not in doc:
        raise ParseError("measure document needs 'group' and 'atoms'")
    group = parse_group(str(doc["group"]))
    atoms = doc["atoms"]
    if not isinstance(atoms, list):
        raise ParseError("'atoms' must be a list")
    acc = {}
    for i, atom in enumerate(atoms):
        try:
            coords = [int(c) for c in atom["coords"]]
            if any(not isinstance(c, int) for c in atom["coords"]):
                raise TypeError
            re_, im = float(atom.get("re", 0.0)), float(atom.get("im", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"atom {i}: malformed entry ({exc!r})") from None
        if len(coords) != group.dim:
            raise ParseError(
                f"atom {i}: coords has length {len(coords)}, group {group} needs {group.dim}")
        if not (math.isfinite(re_) and math.isfinite(im)):
            raise ParseError(f"atom {i}: non-finite amplitude")
        key = group.element(coords)
        if key in acc:
            raise ParseError(f"atom {i}: duplicate support point {list(key)}")
        acc[key] = complex(re_, im)
    return DiscreteMeasure(group, acc)


def dumps_measure(mu: DiscreteMeasure) -> str:
    return json.dumps(measure_to_dict(mu), indent=2) + "\n"


def loads_measure(text: str) -> DiscreteMeasure:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return measure_from_dict(doc)


def read_measure(path) -> DiscreteMeasure:
    return loads_measure(Path(path).read_text())


def write_measure(mu: DiscreteMeasure, path):
    Path(path).write_text(dumps_measure(mu))


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


class Manifest:
    """Experiment record written once per output directory."""

    def __init__(self, command: str, config: dict, seed=None, inputs=()):
        from . import __version__
        self.doc = {
            "command": command,
            "config": config,
            "seed": seed,
            "version": __version__,
            "python": platform.python_version(),
            "inputs": {str(p): sha256_file(p) for p in inputs},
            "start": _now(),
            "end": None,
        }

    def write(self, outdir, **extra):
        self.doc["end"] = _now()
        self.doc.update(extra)
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        (out / MANIFEST).write_text(json.dumps(self.doc, indent=2, default=str) + "\n")
