"""Command-line interface.

Exit codes: 0 success, 1 validation or check failure, 2 usage or input
error, 3 inconclusive at the given cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import serialize as io
from .builder import (
    ExplicitKatetov,
    Initial,
    Stage,
    step_with_record,
    check_one_point_property,
    export_matrix,
    run_build,
    scheduled_functions,
)
from .errors import CapTooSmall, GraevError, InconclusiveCertificate, NotInG, ParseError
from .extension import KatetovFn
from .fgmetric import check_self_consistency, eval_delta, eval_delta_bruteforce
from .matches import find_match, validate_match
from .table import validate_table
from .words import format_word, parse_sword, parse_word

OK, FAIL, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _word(text: str):
    try:
        return parse_word(text)
    except ParseError as exc:
        raise UsageError(f"bad word {text!r}: {exc}") from None


def _load_stage(path: str) -> Stage:
    obj = io.read_json(path)
    if isinstance(obj, dict) and "version" in obj:
        return io.stage_from_obj(obj, path)
    M = io.table_from_obj(obj, path)
    return Stage(M.rank, M, Initial())


def _q(x) -> str:
    return str(x)


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> int:
    M = io.load_table(args.stage)
    rep = validate_table(M)
    _emit(
        args,
        str(rep),
        {"valid": rep.ok, "violations": [{"kind": v.kind, "elements": [str(w) for w in v.elements], "detail": v.detail} for v in rep.violations]},
    )
    return OK if rep.ok else FAIL


def cmd_selfcheck(args) -> int:
    M = io.load_table(args.stage)
    rep = check_self_consistency(M, args.cap)
    payload = {
        "checked": rep.checked,
        "consistent": rep.consistent,
        "all_exact": rep.all_exact,
        "undercut": [[str(a), str(b), _q(t), _q(v)] for a, b, t, v in rep.undercut],
        "overshoot": [[str(a), str(b), _q(t), _q(v)] for a, b, t, v in rep.overshoot],
        "inconclusive": [[str(a), str(b), str(c)] for a, b, c in rep.inconclusive],
    }
    _emit(args, str(rep), payload)
    if not rep.consistent:
        return FAIL
    return OK if rep.all_exact else INCONCLUSIVE


def cmd_eval(args) -> int:
    M = io.load_table(args.stage)
    u, v = _word(args.u), _word(args.v)
    r = eval_delta(M, u, v, args.cap)
    payload = {"value": _q(r.value), "certificate": str(r.certificate), "exact": r.exact}
    lines = [str(r)]
    if args.witness and r.witness is not None:
        lefts, rights = r.witness
        payload["witness"] = [[format_word(a) for a in lefts], [format_word(b) for b in rights]]
        for a, b in zip(lefts, rights):
            lines.append(f"  ({a}, {b})  {M.d(a, b)}")
    status = OK if r.exact else INCONCLUSIVE
    if args.oracle:
        length = args.oracle_len or max(len(u), len(v)) + 1
        try:
            o = eval_delta_bruteforce(M, u, v, length)
        except CapTooSmall:
            o = None
        payload["oracle"] = {"value": None if o is None else _q(o), "max_len": length, "agrees": o == r.value}
        lines.append(f"oracle (max_len {length}): {'none' if o is None else o}")
        if o != r.value:
            print(f"oracle mismatch: evaluator {r.value}, brute force {'none' if o is None else o} at max_len {length}", file=sys.stderr)
            status = FAIL
    _emit(args, "\n".join(lines), payload)
    return status


def cmd_extend(args) -> int:
    s = _load_stage(args.stage)
    f = io.load_katetov(args.katetov)
    new, rec = step_with_record(s, ExplicitKatetov(f), args.cap)
    io.save_stage(new, args.output)
    text = f"{rec.outcome}; |A| = {rec.table_size}"
    if rec.verification is not None:
        text += "\n" + str(rec.verification)
    _emit(args, text, {"outcome": rec.outcome, "table_size": rec.table_size, "verified": rec.ok})
    return OK if rec.ok else FAIL


def stage_filename(position: int) -> str:
    return f"stage_{position:03d}.json"


def cmd_build(args) -> int:
    script = io.load_script(args.script)
    stages, rep = run_build(script, args.cap)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for pos, st in enumerate(stages, 1):
        io.save_stage(st, out / stage_filename(pos))
    payload = {
        "stages": len(stages),
        "ok": rep.ok,
        "steps": [{"outcome": r.outcome, "table_size": r.table_size, "verified": r.ok} for r in rep.records],
        "error": rep.error,
        "failed_step": rep.failed_step,
    }
    _emit(args, f"{rep}\nwrote {len(stages)} stages to {out}", payload)
    return OK if rep.ok else FAIL


def cmd_matrix(args) -> int:
    s = _load_stage(args.stage)
    if args.elements:
        obj = io.read_json(args.elements)
        if not isinstance(obj, list):
            raise UsageError("elements file must be a JSON array of word strings")
        els = [io.w_parse(x, f"{args.elements}[{i}]") for i, x in enumerate(obj)]
        m = export_matrix(s, elements=els, cap=args.cap)
    else:
        m = export_matrix(s, radius=args.ball, cap=args.cap)
    Path(args.output).write_text(m.to_csv(), encoding="utf-8")
    _emit(args, f"wrote {len(m.elements)}x{len(m.elements)} matrix to {args.output}", {"size": len(m.elements), "output": args.output})
    return OK


def _load_stage_dir(path: str) -> List[Stage]:
    files = sorted(Path(path).glob("stage_*.json"))
    if not files:
        raise UsageError(f"no stage_*.json files in {path}")
    return [io.load_stage(p) for p in files]


def cmd_check_urysohn(args) -> int:
    stages = _load_stage_dir(args.dir)
    pool: List[KatetovFn] = []
    n_sched = 0
    if args.scheduled:
        sched = [f for _, f, _ in scheduled_functions(stages)]
        pool += sched
        n_sched = len(sched)
    if args.pool:
        obj = io.read_json(args.pool)
        if isinstance(obj, dict):
            obj = [obj]
        pool += [io.katetov_from_obj(x, f"{args.pool}[{i}]") for i, x in enumerate(io.as_list(obj, args.pool))]
    if not pool:
        raise UsageError("give --pool and/or --scheduled")
    rep = check_one_point_property(stages, pool, args.cap, args.max_witness_len)
    payload = {
        "realized": rep.realized,
        "unrealized": rep.unrealized,
        "results": [
            {"f": io.katetov_to_obj(r.f), "witness": None if r.witness is None else format_word(r.witness)}
            for r in rep.results
        ],
    }
    _emit(args, str(rep), payload)
    if any(r.witness is None for r in rep.results[:n_sched]):
        return FAIL
    return OK


def cmd_match(args) -> int:
    try:
        w = parse_sword(args.sword, args.g_rank)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    try:
        m = find_match(w)
    except NotInG as exc:
        _emit(args, f"no match: {exc}", {"match": None, "error": str(exc)})
        return FAIL
    assert validate_match(w, m)
    _emit(args, str(m) if m.pairing else "(empty match)", {"match": [list(p) for p in m.pairs()]})
    return OK


# -- parser -------------------------------------------------------------------


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be a nonnegative integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="graevmetric", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the metric-table axioms")
    s.add_argument("stage")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("selfcheck", parents=[common], help="compare the induced metric with the table")
    s.add_argument("stage")
    s.add_argument("--cap", type=_positive)
    s.set_defaults(func=cmd_selfcheck)

    s = sub.add_parser("eval", parents=[common], help="distance between two words")
    s.add_argument("stage")
    s.add_argument("u")
    s.add_argument("v")
    s.add_argument("--cap", type=_positive)
    s.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    s.add_argument("--oracle-len", type=_positive, help="factorization length for --oracle")
    s.add_argument("--witness", action="store_true", help="print a minimal factorization")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("extend", parents=[common], help="add a generator realizing a Katětov function")
    s.add_argument("stage")
    s.add_argument("--katetov", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--cap", type=_positive)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("build", parents=[common], help="run a build script")
    s.add_argument("--script", required=True)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--cap", type=_positive)
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("matrix", parents=[common], help="export pairwise distances as CSV")
    s.add_argument("stage")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--elements")
    g.add_argument("--ball", type=_nonneg)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--cap", type=_positive)
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("check-urysohn", parents=[common], help="search for points realizing Katětov functions")
    s.add_argument("dir")
    s.add_argument("--pool")
    s.add_argument("--scheduled", action="store_true", help="include the build's own scheduled functions")
    s.add_argument("--max-witness-len", type=_nonneg, default=2)
    s.add_argument("--cap", type=_positive)
    s.set_defaults(func=cmd_check_urysohn)

    s = sub.add_parser("match", parents=[common], help="find a match of an S-word projecting into G")
    s.add_argument("sword")
    s.add_argument("--g-rank", type=_nonneg, required=True)
    s.set_defaults(func=cmd_match)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except InconclusiveCertificate as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return INCONCLUSIVE
    except (UsageError, ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except GraevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
