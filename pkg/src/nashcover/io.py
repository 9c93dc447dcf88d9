"""JSON interchange: instance, solution, trace and report documents.

Output is byte-stable: keys keep insertion order, floats are written with 17
significant digits, and the layout is fixed. Agent indices are 0-based.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

from .core import Instance, Solution, coverage_values, log_welfare, nsw
from .errors import InvalidInputError
from .families import family_from_dict

FORMAT_VERSION = 1


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise InvalidInputError(f"cannot serialize non-finite float {x}")
    text = "%.17g" % x
    if all(c in "-0123456789" for c in text):
        text += ".0"
    return text


def dumps(obj, indent: int = 2) -> str:
    """Serialize with fixed float formatting; short lists of scalars stay on one line."""

    def scalar(v):
        if v is None:
            return "null"
        if isinstance(v, bool):
            return "true" if v else "false"
        if isinstance(v, int):
            return str(v)
        if isinstance(v, float):
            return _fmt_float(v)
        if isinstance(v, str):
            return json.dumps(v, ensure_ascii=False)
        raise TypeError(f"cannot serialize {type(v).__name__}")

    def flat(v) -> bool:
        return isinstance(v, (list, tuple)) and all(not isinstance(x, (list, tuple, dict)) for x in v)

    def emit(v, level: int) -> str:
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, dict):
            if not v:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {emit(x, level + 1)}" for k, x in v.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(v, (list, tuple)):
            if flat(v):
                return "[" + ", ".join(scalar(x) for x in v) + "]"
            items = [pad + emit(x, level + 1) for x in v]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        return scalar(v)

    return emit(obj, 0) + "\n"


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, so failures leave nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _require(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise InvalidInputError(f"{where}: missing field {key!r}")
    return data[key]


def _check_version(data, where):
    version = data.get("format_version", FORMAT_VERSION) if isinstance(data, dict) else None
    if version != FORMAT_VERSION:
        raise InvalidInputError(f"{where}: unsupported format_version {version!r}")


def instance_to_dict(instance: Instance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "n": instance.n,
        "T": instance.T,
        "families": [f.to_dict() for f in instance.families],
    }


def instance_from_dict(data, where: str = "instance") -> Instance:
    _check_version(data, where)
    n = _require(data, "n", where)
    T = _require(data, "T", where)
    fams = _require(data, "families", where)
    if not isinstance(fams, list):
        raise InvalidInputError(f"{where}: 'families' must be a list")
    families = []
    for t, f in enumerate(fams):
        try:
            families.append(family_from_dict(f))
        except InvalidInputError as exc:
            raise InvalidInputError(f"{where}: families[{t}]: {exc}") from None
    try:
        return Instance(n, T, families)
    except (InvalidInputError, TypeError) as exc:
        raise InvalidInputError(f"{where}: {exc}") from None


def solution_to_dict(instance: Instance, solution: Solution, **extra) -> dict:
    prof = coverage_values(instance, solution)
    out = {
        "format_version": FORMAT_VERSION,
        "sets": [list(s) for s in solution],
        "nsw": nsw(prof),
        "phi": log_welfare(prof),
    }
    out.update(extra)
    return out


def solution_from_dict(data, where: str = "solution") -> Solution:
    _check_version(data, where)
    sets = _require(data, "sets", where)
    if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
        raise InvalidInputError(f"{where}: 'sets' must be a list of lists")
    return Solution(sets)


def trace_to_dict(trace) -> dict:
    records = []
    for rec in trace.iterations:
        row = {
            "iteration": rec.iteration,
            "tau": rec.tau,
            "delta_phi": rec.delta_phi,
            "phi_before": rec.phi_before,
            "phi_after": rec.phi_after,
            "chosen": list(rec.chosen),
        }
        if rec.candidates is not None:
            row["candidates"] = [list(c) for c in rec.candidates]
        if rec.weights is not None:
            row["weights"] = [list(w) for w in rec.weights]
        records.append(row)
    return {
        "format_version": FORMAT_VERSION,
        "config": dict(trace.config),
        "initial": [list(s) for s in trace.initial],
        "terminal": trace.terminal,
        "updates": trace.updates,
        "iterations": records,
    }
