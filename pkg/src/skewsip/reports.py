"""Deterministic report emission: canonical JSON, experiment hashes and CSV rows."""
from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .rng import thread_count


def _default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_json(obj, indent: int | None = 2) -> str:
    seps = (",", ": ") if indent else (",", ":")
    return json.dumps(obj, default=_default, sort_keys=True, indent=indent, separators=seps) + ("\n" if indent else "")


def spec_hash(spec: dict) -> str:
    return hashlib.sha256(canonical_json(spec, indent=None).encode()).hexdigest()


def display(x) -> str:
    """Float display column, 12 significant digits."""
    return f"{float(x):.12g}"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit(text: str, path: str | None, stream) -> None:
    if path is None or path == "-":
        stream.write(text)
    else:
        Path(path).write_text(text)


def parallel_map(fn, items, workers: int | None = None) -> list:
    """Order-preserving map; uses processes when SKEWSIP_THREADS > 1."""
    workers = thread_count() if workers is None else workers
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))
