"""JSON formats for tables, Katětov functions, stages and build scripts.

All rationals are written as strings (``"3"`` or ``"3/2"``).  Output is
byte-deterministic: sorted keys, fixed indentation, trailing newline.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Union

from .builder import (
    BuildScript,
    ExplicitKatetov,
    Fallback,
    FallbackStep,
    IdentifiedExisting,
    Initial,
    RandomKatetov,
    Realized,
    Stage,
)
from .errors import ParseError, VersionMismatch
from .extension import ExtensionSpec, KatetovFn
from .table import MetricTable
from .words import Word, format_word, parse_word

STAGE_VERSION = 1

PathLike = Union[str, Path]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, location=f"{source}:{exc.lineno}:{exc.colno}") from None


def read_json(path: PathLike) -> Any:
    return loads(Path(path).read_text(encoding="utf-8"), str(path))


def write_json(path: PathLike, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


# -- field helpers ------------------------------------------------------------


def _get(obj, key, where):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", location=where)
    if key not in obj:
        raise ParseError(f"missing field {key!r}", location=where)
    return obj[key]


def as_list(obj, where) -> list:
    if not isinstance(obj, list):
        raise ParseError("expected an array", location=where)
    return obj


def _int(obj, where) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise ParseError("expected an integer", location=where)
    return obj


def q_str(x: Fraction) -> str:
    return str(Fraction(x))

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def q_parse(obj, where) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise ParseError("rationals are written as strings 'p/q' or integers", location=where)
    if isinstance(obj, int):
        return Fraction(obj)
    if not _RATIONAL.fullmatch(obj.strip()):
        raise ParseError(f"bad rational {obj!r}", location=where)
    try:
        return Fraction(obj.strip())
    except ZeroDivisionError:
        raise ParseError(f"bad rational {obj!r}", location=where) from None


def w_parse(obj, where) -> Word:
    if not isinstance(obj, str):
        raise ParseError("expected a word string", location=where)
    try:
        return parse_word(obj)
    except ParseError as exc:
        raise ParseError(str(exc), location=where) from None


# -- tables and functions -----------------------------------------------------


def table_to_obj(M: MetricTable) -> dict:
    return {
        "rank": M.rank,
        "A": [format_word(a) for a in M.gen_set],
        "table": [[q_str(x) for x in row] for row in M.table],
    }


def table_from_obj(obj, where: str = "metric") -> MetricTable:
    rank = _int(_get(obj, "rank", where), f"{where}.rank")
    A = [w_parse(s, f"{where}.A[{i}]") for i, s in enumerate(as_list(_get(obj, "A", where), f"{where}.A"))]
    rows = []
    for i, row in enumerate(as_list(_get(obj, "table", where), f"{where}.table")):
        rows.append(tuple(q_parse(x, f"{where}.table[{i}][{j}]") for j, x in enumerate(as_list(row, f"{where}.table[{i}]"))))
    try:
        return MetricTable(rank, tuple(A), tuple(rows))
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), location=where) from None


def katetov_to_obj(f: KatetovFn) -> dict:
    return {"base": [format_word(b) for b in f.base], "values": [q_str(v) for v in f.values]}


def katetov_from_obj(obj, where: str = "f") -> KatetovFn:
    base = [w_parse(s, f"{where}.base[{i}]") for i, s in enumerate(as_list(_get(obj, "base", where), f"{where}.base"))]
    vals = [q_parse(v, f"{where}.values[{i}]") for i, v in enumerate(as_list(_get(obj, "values", where), f"{where}.values"))]
    try:
        return KatetovFn(tuple(base), tuple(vals))
    except ValueError as exc:
        raise ParseError(str(exc), location=where) from None


def spec_to_obj(spec: ExtensionSpec) -> dict:
    return {
        "metric": table_to_obj(spec.base_metric),
        "new_points": list(spec.new_points),
        "dprime": {
            "to_base": [[q_str(x) for x in row] for row in spec.to_base],
            "between": [[q_str(x) for x in row] for row in spec.between],
        },
    }


def spec_from_obj(obj, where: str = "spec") -> ExtensionSpec:
    M = table_from_obj(_get(obj, "metric", where), f"{where}.metric")
    pts = [_int(x, f"{where}.new_points[{i}]") for i, x in enumerate(as_list(_get(obj, "new_points", where), f"{where}.new_points"))]
    dp = _get(obj, "dprime", where)

    def matrix(key):
        w = f"{where}.dprime.{key}"
        return tuple(
            tuple(q_parse(x, f"{w}[{i}][{j}]") for j, x in enumerate(as_list(row, f"{w}[{i}]")))
            for i, row in enumerate(as_list(_get(dp, key, f"{where}.dprime"), w))
        )

    try:
        return ExtensionSpec(M, tuple(pts), matrix("to_base"), matrix("between"))
    except ValueError as exc:
        raise ParseError(str(exc), location=where) from None


# -- stages -------------------------------------------------------------------


def provenance_to_obj(p) -> dict:
    if isinstance(p, Initial):
        return {"kind": "initial"}
    if isinstance(p, Realized):
        return {"kind": "realized", "f": katetov_to_obj(p.f), "new_gen": p.new_gen}
    if isinstance(p, Fallback):
        return {"kind": "fallback", "constant": q_str(p.constant), "new_gen": p.new_gen}
    if isinstance(p, IdentifiedExisting):
        return {"kind": "identified", "f": katetov_to_obj(p.f), "point": format_word(p.point)}
    raise TypeError(f"unknown provenance {p!r}")


def provenance_from_obj(obj, where: str = "provenance"):
    kind = _get(obj, "kind", where)
    if kind == "initial":
        return Initial()
    if kind == "realized":
        return Realized(katetov_from_obj(_get(obj, "f", where), f"{where}.f"), _int(_get(obj, "new_gen", where), f"{where}.new_gen"))
    if kind == "fallback":
        return Fallback(q_parse(_get(obj, "constant", where), f"{where}.constant"), _int(_get(obj, "new_gen", where), f"{where}.new_gen"))
    if kind == "identified":
        return IdentifiedExisting(katetov_from_obj(_get(obj, "f", where), f"{where}.f"), w_parse(_get(obj, "point", where), f"{where}.point"))
    raise ParseError(f"unknown provenance kind {kind!r}", location=f"{where}.kind")


def stage_to_obj(s: Stage) -> dict:
    return {
        "version": STAGE_VERSION,
        "index": s.index,
        "metric": table_to_obj(s.metric),
        "provenance": provenance_to_obj(s.provenance),
    }


def stage_from_obj(obj, where: str = "stage") -> Stage:
    version = _get(obj, "version", where)
    if version != STAGE_VERSION:
        raise VersionMismatch(f"stage format version {version!r}; this library reads version {STAGE_VERSION}")
    index = _int(_get(obj, "index", where), f"{where}.index")
    metric = table_from_obj(_get(obj, "metric", where), f"{where}.metric")
    prov = provenance_from_obj(_get(obj, "provenance", where), f"{where}.provenance")
    try:
        return Stage(index, metric, prov)
    except ValueError as exc:
        raise ParseError(str(exc), location=where) from None


def save_stage(s: Stage, path: PathLike) -> None:
    write_json(path, stage_to_obj(s))


def load_stage(path: PathLike) -> Stage:
    return stage_from_obj(read_json(path), str(path))


def load_table(path: PathLike) -> MetricTable:
    """A stage file or a bare table file."""
    obj = read_json(path)
    if isinstance(obj, dict) and "version" in obj:
        return stage_from_obj(obj, str(path)).metric
    return table_from_obj(obj, str(path))


# -- scripts ------------------------------------------------------------------


def step_to_obj(step) -> dict:
    if isinstance(step, ExplicitKatetov):
        out = {"kind": "explicit", "f": katetov_to_obj(step.f)}
        if step.stage is not None:
            out["stage"] = step.stage
        return out
    if isinstance(step, RandomKatetov):
        return {
            "kind": "random",
            "seed": step.seed,
            "support_size": step.support_size,
            "denominator_bound": step.denominator_bound,
            "value_bound": q_str(step.value_bound),
        }
    if isinstance(step, FallbackStep):
        return {"kind": "fallback"}
    raise TypeError(f"unknown step {step!r}")


def step_from_obj(obj, where: str):
    kind = _get(obj, "kind", where)
    try:
        if kind == "explicit":
            stage = obj.get("stage")
            return ExplicitKatetov(
                katetov_from_obj(_get(obj, "f", where), f"{where}.f"),
                None if stage is None else _int(stage, f"{where}.stage"),
            )
        if kind == "random":
            vb = obj.get("value_bound", "2")
            return RandomKatetov(
                _int(_get(obj, "seed", where), f"{where}.seed"),
                _int(_get(obj, "support_size", where), f"{where}.support_size"),
                _int(_get(obj, "denominator_bound", where), f"{where}.denominator_bound"),
                q_parse(vb, f"{where}.value_bound"),
            )
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), location=where) from None
    if kind == "fallback":
        return FallbackStep()
    raise ParseError(f"unknown step kind {kind!r}", location=f"{where}.kind")


def script_to_obj(script: BuildScript) -> List[dict]:
    return [step_to_obj(s) for s in script.steps]


def script_from_obj(obj, where: str = "script") -> BuildScript:
    return BuildScript(tuple(step_from_obj(s, f"{where}[{i}]") for i, s in enumerate(as_list(obj, where))))


def save_script(script: BuildScript, path: PathLike) -> None:
    write_json(path, script_to_obj(script))


def load_script(path: PathLike) -> BuildScript:
    return script_from_obj(read_json(path), str(path))


def load_katetov(path: PathLike) -> KatetovFn:
    return katetov_from_obj(read_json(path), str(path))


def save_katetov(f: KatetovFn, path: PathLike) -> None:
    write_json(path, katetov_to_obj(f))


def load_spec(path: PathLike) -> ExtensionSpec:
    return spec_from_obj(read_json(path), str(path))


def save_spec(spec: ExtensionSpec, path: PathLike) -> None:
    write_json(path, spec_to_obj(spec))
