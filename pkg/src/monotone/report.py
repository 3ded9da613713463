"""Machine-readable reports: JSON (lossless, reloadable) and CSV (summary).

Floats are written with 17 significant digits and non-finite values as the
strings "inf", "-inf" and "nan", so a report is plain JSON and reloads to
the same numbers.  Keys are sorted and there are no timestamps, hence equal
verdicts give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidInput
from .verdict import Verdict

FORMATS = ("json", "csv")
CSV_COLUMNS = ("theorem_id", "holds", "worst_violation", "eps", "delta", "lambda",
               "seed", "runtime_ms")
PROVENANCE = ("seed", "R", "h", "tol")
REPORT_VERSION = 1
_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _plain(v):
    """numpy scalars and arrays to builtin types."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, np.ndarray):
        return [_plain(t) for t in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_plain(t) for t in v]
    if isinstance(v, dict):
        return {str(k): _plain(t) for k, t in v.items()}
    if v is None or isinstance(v, str):
        return v
    return str(v)


def _dump(v, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if v is None or isinstance(v, bool):
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        s = fmt_float(v)
        return s if math.isfinite(v) else json.dumps(s)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, list):
        if all(not isinstance(t, (list, dict)) for t in v):
            return "[" + ", ".join(_dump(t) for t in v) + "]"
        return "[\n" + ",\n".join(inner + _dump(t, indent + 1) for t in v) + "\n" + pad + "]"
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = (f"{inner}{json.dumps(k)}: {_dump(v[k], indent + 1)}" for k in sorted(v))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _restore(v):
    if isinstance(v, str) and v in _NONFINITE:
        return _NONFINITE[v]
    if isinstance(v, list):
        return [_restore(t) for t in v]
    if isinstance(v, dict):
        return {k: _restore(t) for k, t in v.items()}
    return v


def verdict_record(v: Verdict, runtime_ms: float | None = None) -> dict:
    d = _plain(v.to_dict())
    d["provenance"] = {k: d["params"].get(k) for k in PROVENANCE}
    if runtime_ms is not None:
        d["runtime_ms"] = float(runtime_ms)
    return d


def render_json(verdicts, runtimes=None) -> str:
    runtimes = runtimes or [None] * len(verdicts)
    doc = {"version": REPORT_VERSION,
           "verdicts": [verdict_record(v, t) for v, t in zip(verdicts, runtimes)]}
    return _dump(doc) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def render_csv(verdicts, runtimes=None) -> str:
    runtimes = runtimes or [None] * len(verdicts)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for v, t in zip(verdicts, runtimes):
        p = v.params
        w.writerow([v.theorem_id, _cell(v.holds), _cell(v.worst_violation), _cell(p.get("eps")),
                    _cell(p.get("delta")), _cell(p.get("lambda")), _cell(p.get("seed")),
                    _cell(t)])
    return buf.getvalue()


def emit_report(verdicts, fmt: str, path, runtimes=None) -> None:
    """Write verdicts as json or csv; ``path`` "-" or None means stdout.

    ``runtimes`` (milliseconds, one per verdict) is optional: timings vary
    between runs, so reports without them are reproducible byte for byte.
    """
    verdicts = list(verdicts)
    if not verdicts:
        raise InvalidInput("no verdicts to report")
    if fmt not in FORMATS:
        raise InvalidInput(f"format must be one of {FORMATS}, got {fmt!r}")
    text = (render_json if fmt == "json" else render_csv)(verdicts, runtimes)
    if path is None or str(path) == "-":
        import sys
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InvalidInput(f"cannot write report to {str(path)!r}: {exc.strerror}") from None


def load_report(path) -> tuple[list[Verdict], list[float | None]]:
    """Inverse of the json writer: (verdicts, runtimes)."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidInput(f"cannot read report {str(path)!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or "verdicts" not in doc:
        raise InvalidInput(f"{path}: not a verdict report")
    doc = _restore(doc)
    verdicts = [Verdict.from_dict(d) for d in doc["verdicts"]]
    return verdicts, [d.get("runtime_ms") for d in doc["verdicts"]]


__all__ = ["emit_report", "load_report", "render_json", "render_csv", "verdict_record",
           "fmt_float", "FORMATS", "CSV_COLUMNS"]
