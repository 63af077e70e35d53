"""JSON and text rendering of command results."""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import List

from .fields import ModP, format_scalar
from .linalg import Matrix

SCHEMA = 1


def jsonable(x):
    """Plain JSON data; scalars become rational strings, matrices row-major lists."""
    if isinstance(x, Matrix):
        return x.to_strings()
    if isinstance(x, (Fraction, ModP)):
        return format_scalar(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if dataclasses.is_dataclass(x):
        return {f.name: jsonable(getattr(x, f.name)) for f in dataclasses.fields(x)}
    return str(x)


def to_json(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def _is_matrix(v) -> bool:
    return isinstance(v, list) and bool(v) and all(isinstance(r, list) for r in v) and all(
        isinstance(e, str) for r in v for e in r
    )


def _matrix_lines(rows, indent: str) -> List[str]:
    width = max((len(e) for r in rows for e in r), default=1)
    return [indent + "[ " + "  ".join(e.rjust(width) for e in r) + " ]" for r in rows]


def _text(value, indent: str, out: List[str]):
    for key in sorted(value):
        v = value[key]
        if isinstance(v, dict):
            out.append(f"{indent}{key}:")
            _text(v, indent + "  ", out)
        elif _is_matrix(v):
            out.append(f"{indent}{key}:")
            out.extend(_matrix_lines(v, indent + "  "))
        elif isinstance(v, list) and v and all(isinstance(e, dict) for e in v):
            out.append(f"{indent}{key}:")
            for item in v:
                out.append(f"{indent}  -")
                _text(item, indent + "    ", out)
        elif isinstance(v, list):
            out.append(f"{indent}{key}: " + ", ".join(str(e) for e in v))
        else:
            out.append(f"{indent}{key}: {v}")


def sweep_table(rows: List[dict]) -> List[str]:
    if not rows:
        return ["(empty grid)"]
    names = list(rows[0]["params"])
    header = names + ["status", "detail"]
    body = []
    for r in rows:
        if "error" in r:
            status, detail = r["error"]["error"], r["error"]["message"]
        else:
            res = r["result"]
            status = str(res.get("status", "ok"))
            conds = res.get("diagnostics", {}).get("conditions")
            if isinstance(conds, dict):
                detail = "; ".join(f"{k}={'T' if v else 'F'}" for k, v in sorted(conds.items()))
            elif res.get("witness") is not None:
                detail = "witness " + ",".join(str(k) for k in res["witness"])
            else:
                detail = ""
        body.append([r["params"][n] for n in names] + [status, detail])
    widths = [max(len(str(x)) for x in col) for col in zip(header, *body)]
    fmt = lambda line: "  ".join(str(x).ljust(w) for x, w in zip(line, widths)).rstrip()  # noqa: E731
    return [fmt(header)] + [fmt(b) for b in body]


def to_text(report: dict) -> str:
    data = jsonable(report)
    out: List[str] = []
    result = data.pop("result", None)
    _text(data, "", out)
    if data.get("command") == "sweep" and isinstance(result, dict):
        out.extend(sweep_table(result["rows"]))
    elif isinstance(result, dict):
        _text(result, "", out)
    return "\n".join(out) + "\n"
