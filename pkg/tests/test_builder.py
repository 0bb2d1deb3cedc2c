from fractions import Fraction

import pytest

from graevmetric.builder import (
    BuildScript,
    ExplicitKatetov,
    Fallback,
    FallbackStep,
    IdentifiedExisting,
    RandomKatetov,
    Realized,
    ball,
    check_one_point_property,
    export_matrix,
    init_stage1,
    random_katetov,
    run_build,
    scheduled_functions,
    step_stage,
)
from graevmetric.errors import InvalidKatetov
from graevmetric.extension import KatetovFn, validate_katetov
from graevmetric.fgmetric import eval_delta
from graevmetric.table import validate_table
from graevmetric.words import Word

from conftest import e1_function

W = Word.parse
e = Word.identity()


def test_init_stage1():
    s = init_stage1()
    assert s.index == 1 and s.metric.rank == 1 and len(s.metric) == 3
    assert validate_table(s.metric).ok
    r = eval_delta(s.metric, W("x1 x1 x1"), e, 8)
    assert r.value == 3 and r.exact


def test_step_examples():
    s = step_stage(init_stage1(), ExplicitKatetov(e1_function()))
    assert s.index == 2 and len(s.metric) == 5
    assert isinstance(s.provenance, Realized) and s.provenance.new_gen == 2

    s = step_stage(init_stage1(), FallbackStep())
    assert s.provenance == Fallback(Fraction(2), 2)
    for a in init_stage1().metric.gen_set:
        assert s.metric.d(W("x2"), a) == 2
    assert s.metric.d(W("x2"), W("x2^-1")) == 4

    s = step_stage(init_stage1(), ExplicitKatetov(KatetovFn((W("x1"),), (0,))))
    assert s.index == 1
    assert s.provenance == IdentifiedExisting(KatetovFn((W("x1"),), (0,)), W("x1"))


def test_step_widens_generating_set():
    # base point outside A: x1^2 joins A with its inverse
    f = KatetovFn((W("x1 x1"),), (Fraction(1, 2),))
    s = step_stage(init_stage1(), ExplicitKatetov(f))
    assert W("x1 x1") in s.metric and W("x1^-1 x1^-1") in s.metric
    assert eval_delta(s.metric, W("x2"), W("x1 x1")).value == Fraction(1, 2)
    assert eval_delta(s.metric, W("x2"), e).value == Fraction(5, 2)
    assert validate_table(s.metric).ok


def test_step_rejects_non_katetov():
    with pytest.raises(InvalidKatetov):
        step_stage(init_stage1(), ExplicitKatetov(KatetovFn((e, W("x1")), (1, 3))))
    with pytest.raises(ValueError):
        step_stage(init_stage1(), ExplicitKatetov(KatetovFn((W("x2"),), (1,))))


def test_run_build_examples(e1_build):
    assert len(e1_build) == 2 and len(e1_build[-1].metric) == 5
    stages, rep = run_build(BuildScript(()))
    assert stages == [init_stage1()] and rep.ok
    stages, rep = run_build(BuildScript(tuple(RandomKatetov(7, 3, 4) for _ in range(4))))
    assert len(stages) == 5 and rep.ok
    assert all(r.verification.ok for r in rep.records)


def test_run_build_reports_abort():
    bad = ExplicitKatetov(KatetovFn((e, W("x1")), (1, 3)))
    stages, rep = run_build(BuildScript((FallbackStep(), bad, FallbackStep())))
    assert len(stages) == 2 and not rep.ok and rep.failed_step == 2


def test_generating_sets_monotone(five_step_build):
    stages, _ = five_step_build
    for a, b in zip(stages, stages[1:]):
        assert set(a.metric.gen_set) <= set(b.metric.gen_set)
        assert b.metric.rank >= a.metric.rank


def test_random_katetov_is_katetov_and_seeded(e1):
    step = RandomKatetov(seed=3, support_size=4, denominator_bound=3)
    f = random_katetov(e1, step)
    assert f == random_katetov(e1, step)
    assert len(f) == 4 and validate_katetov(e1, f).ok
    assert all(v.denominator <= 3 and 0 < v <= 2 for v in f.values)


def test_random_katetov_falls_back_to_constant(e1):
    # no value at most 1/4 can span distance 2
    f = random_katetov(e1, RandomKatetov(seed=1, support_size=5, denominator_bound=4, value_bound=Fraction(1, 4)))
    assert set(f.values) == {e1.max_entry()}


def test_one_point_examples(e1_build):
    rep = check_one_point_property(e1_build, [f for _, f, _ in scheduled_functions(e1_build)])
    assert rep.realized == 1 and rep.unrealized == 0
    s1 = [init_stage1()]
    rep = check_one_point_property(s1, [KatetovFn((e,), (1,))], max_witness_len=1)
    assert rep.results[0].witness == W("x1")
    rep = check_one_point_property(s1, [KatetovFn((e,), (Fraction(1, 3),))], max_witness_len=3)
    assert rep.results[0].witness is None


def test_ball():
    assert [str(w) for w in ball(1, 2)] == ["e", "x1", "x1^-1", "x1 x1", "x1^-1 x1^-1"]
    assert len(list(ball(2, 2))) == 1 + 4 + 12


def test_export_examples(e1_build):
    m = export_matrix(init_stage1(), [e, W("x1"), W("x1 x1")])
    assert m.rows == ((0, 1, 2), (1, 0, 1), (2, 1, 0))
    assert m.to_csv() == "e,x1,x1 x1\n0,1,2\n1,0,1\n2,1,0\n"
    assert export_matrix(e1_build[-1], [W("x2 x1")]).rows == ((0,),)
    m = export_matrix(e1_build[-1], [e, W("x1"), W("x2")])
    assert m.rows == ((0, 1, 1), (1, 0, 1), (1, 1, 0))
    m = export_matrix(e1_build[-1], radius=1)
    assert len(m.elements) == 5
    assert all(m.rows[i][j] == m.rows[j][i] for i in range(5) for j in range(5))
    with pytest.raises(ValueError):
        export_matrix(e1_build[-1])
