"""Experiment report schema and atomic JSON/CSV emission.

Reports are versioned JSON ("schema": 1).  Rerunning an identical config
(including the seed) reproduces every field except ``timings`` bit for bit:
all randomness flows from the recorded seed, vertex sets serialize sorted,
rationals serialize as "p/q" strings, graphs as graph6 lines, and keys are
emitted sorted.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import tempfile
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping

from . import __version__
from .graphs import Graph, VertexSet, format_graph6
from .rng import GENERATOR_NAME

SCHEMA_VERSION = 1


def jsonable(obj: Any) -> Any:
    """Recursively convert package objects into JSON-stable values."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, VertexSet):
        return sorted(obj.vertices())
    if isinstance(obj, Graph):
        return {"n": obj.n, "graph6": format_graph6(obj)}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj) if not f.name.startswith("_")}
    if isinstance(obj, Mapping):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items)
        return [jsonable(v) for v in items]
    return str(obj)


def config_hash(flat_config: Mapping[str, str]) -> str:
    canon = "\n".join(f"{k}={flat_config[k]}" for k in sorted(flat_config))
    return hashlib.sha256(canon.encode()).hexdigest()


def build_report(kind: str, seed: int, flat_config: Mapping[str, str],
                 result: Any, flags: Mapping[str, Any],
                 caps: Mapping[str, Any], timings: Mapping[str, float]) -> Dict:
    return {
        "schema": SCHEMA_VERSION,
        "tool": {"name": "cfl", "version": __version__, "rng": GENERATOR_NAME},
        "kind": kind,
        "seed": seed,
        "config_hash": config_hash(flat_config),
        "config": dict(sorted(flat_config.items())),
        "caps": jsonable(dict(caps)),
        "result": jsonable(result),
        "flags": jsonable(dict(flags)),
        "timings": {k: round(v, 6) for k, v in timings.items()},
    }


def dump_report(report: Mapping) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_text_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never observe a
    partial report."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def write_report_atomic(path: str, report: Mapping) -> None:
    write_text_atomic(path, dump_report(report))


def strip_timings(report: Mapping) -> Dict:
    out = dict(report)
    out.pop("timings", None)
    return out


def write_csv_atomic(path: str, header: Iterable[str],
                     rows: Iterable[Iterable[Any]]) -> None:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow(["" if v is None else v for v in row])
    write_text_atomic(path, buf.getvalue())
