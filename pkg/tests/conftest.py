from fractions import Fraction

import pytest

from graevmetric.builder import BuildScript, ExplicitKatetov, RandomKatetov, run_build
from graevmetric.extension import KatetovFn
from graevmetric.table import stage1_table, table_from_rows
from graevmetric.words import GElem, SWord, Word, XGen

W = Word.parse


def e1_function() -> KatetovFn:
    return KatetovFn((W("e"), W("x1"), W("x1^-1")), (1, 1, 2))


def five_step_script() -> BuildScript:
    return BuildScript(tuple(RandomKatetov(seed=7 + i, support_size=3, denominator_bound=4) for i in range(5)))


def random_sword_in_g(rng, g_rank=2, n_x=3):
    """G-words with cancelling X-pairs and identity-product G-runs inserted."""
    def gword():
        return Word([rng.choice([1, -1, 2, -2][: 2 * g_rank]) for _ in range(rng.randint(0, 2))])

    def build(depth, top=False):
        out = []
        for _ in range(rng.randint(0, 2)):
            if depth > 0 and rng.random() < 0.6:
                x = XGen(rng.randint(g_rank + 1, g_rank + n_x), rng.choice([1, -1]))
                inner = build(depth - 1)
                out += [x] + inner + [x.inverse()]
            else:
                g = gword()
                out += [GElem(g)]
                if not top or rng.random() < 0.5:
                    out += [GElem(g.inverse())]
        return out

    letters = [GElem(gword())] + build(3, top=True) + [GElem(gword())]
    return SWord(tuple(letters), g_rank)


@pytest.fixture(scope="session")
def stage1():
    return stage1_table()


@pytest.fixture(scope="session")
def e1_build():
    stages, report = run_build(BuildScript((ExplicitKatetov(e1_function()),)))
    assert report.ok
    return stages


@pytest.fixture(scope="session")
def e1(e1_build):
    return e1_build[-1].metric


@pytest.fixture(scope="session")
def five_step_build():
    return run_build(five_step_script())


@pytest.fixture
def inconsistent_table():
    # d(e, x1^2) = 5 although (x1, e)(x1, e) costs 2
    A = [W(s) for s in ("e", "x1", "x1^-1", "x1 x1", "x1^-1 x1^-1")]
    rows = [
        [0, 1, 1, 5, 5],
        [1, 0, 2, 4, 4],
        [1, 2, 0, 4, 4],
        [5, 4, 4, 0, 2],
        [5, 4, 4, 2, 0],
    ]
    return table_from_rows(1, A, rows)


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid or "criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        num = name.split("_")[2]
        label = " ".join(name.split("_")[3:])
        terminalreporter.write_line(f"criterion {int(num):2d} {status}  {label}")
