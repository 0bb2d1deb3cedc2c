import json
from fractions import Fraction

import pytest

from graevmetric import serialize as io
from graevmetric.builder import (
    BuildScript,
    ExplicitKatetov,
    FallbackStep,
    RandomKatetov,
    init_stage1,
    run_build,
)
from graevmetric.errors import ParseError, VersionMismatch
from graevmetric.extension import ExtensionSpec, KatetovFn
from graevmetric.fgmetric import check_self_consistency
from graevmetric.words import Word

from conftest import e1_function, five_step_script

W = Word.parse


def test_stage_round_trip(tmp_path, e1_build, five_step_build):
    for st in list(e1_build) + list(five_step_build[0]):
        p = tmp_path / "s.json"
        io.save_stage(st, p)
        assert io.load_stage(p) == st


def test_stage_file_layout(tmp_path):
    p = tmp_path / "s.json"
    io.save_stage(init_stage1(), p)
    obj = json.loads(p.read_text())
    assert obj["version"] == 1 and obj["index"] == 1
    assert obj["metric"] == {"rank": 1, "A": ["e", "x1", "x1^-1"], "table": [["0", "1", "1"], ["1", "0", "2"], ["1", "2", "0"]]}
    assert obj["provenance"] == {"kind": "initial"}


def test_truncated_file(tmp_path):
    p = tmp_path / "s.json"
    io.save_stage(init_stage1(), p)
    p.write_text(p.read_text()[:40])
    with pytest.raises(ParseError) as err:
        io.load_stage(p)
    assert err.value.location.startswith(str(p))


def test_bad_fields(tmp_path):
    obj = io.stage_to_obj(init_stage1())
    obj["metric"]["table"][1][2] = "2.5"
    with pytest.raises(ParseError) as err:
        io.stage_from_obj(obj)
    assert err.value.location == "stage.metric.table[1][2]"
    obj = io.stage_to_obj(init_stage1())
    obj["metric"]["A"][1] = "y1"
    with pytest.raises(ParseError):
        io.stage_from_obj(obj)
    obj = io.stage_to_obj(init_stage1())
    obj["metric"]["table"][0][1] = 0.5
    with pytest.raises(ParseError):
        io.stage_from_obj(obj)


def test_version_mismatch():
    obj = io.stage_to_obj(init_stage1())
    obj["version"] = 2
    with pytest.raises(VersionMismatch):
        io.stage_from_obj(obj)


def test_reload_gives_identical_consistency_report(tmp_path, e1):
    st = run_build(BuildScript((ExplicitKatetov(e1_function()),)))[0][-1]
    p = tmp_path / "s.json"
    io.save_stage(st, p)
    assert str(check_self_consistency(io.load_stage(p).metric)) == str(check_self_consistency(st.metric))


def test_script_round_trip(tmp_path):
    script = BuildScript(
        (
            ExplicitKatetov(e1_function()),
            ExplicitKatetov(KatetovFn((W("x1"),), (Fraction(3, 2),)), stage=1),
            RandomKatetov(5, 3, 4, Fraction(5, 2)),
            FallbackStep(),
        )
    )
    p = tmp_path / "script.json"
    io.save_script(script, p)
    assert io.load_script(p) == script
    with pytest.raises(ParseError):
        io.script_from_obj([{"kind": "teleport"}])
    with pytest.raises(ParseError):
        io.script_from_obj({"kind": "fallback"})


def test_katetov_and_spec_round_trip(tmp_path, stage1):
    f = e1_function()
    io.save_katetov(f, tmp_path / "f.json")
    assert io.load_katetov(tmp_path / "f.json") == f
    spec = ExtensionSpec.one_point(stage1, f)
    io.save_spec(spec, tmp_path / "spec.json")
    back = io.load_spec(tmp_path / "spec.json")
    assert back.to_base == spec.to_base and back.base_metric == spec.base_metric


def test_build_is_byte_deterministic(tmp_path):
    outs = []
    for k in range(2):
        stages, _ = run_build(five_step_script())
        outs.append([io.dumps(io.stage_to_obj(s)) for s in stages])
    assert outs[0] == outs[1]
