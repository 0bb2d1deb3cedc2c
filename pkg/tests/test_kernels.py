import os
import random
import subprocess
import sys

import pytest

from graevmetric import _pykernels, kernels
from graevmetric.errors import BudgetExceeded


def random_instance(rng):
    gens = [(), (1,), (-1,), (2,), (-2,)]
    if rng.random() < 0.5:
        gens += [(1, 1), (-1, -1)]
    n = len(gens)
    cost = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cost[i][j] = cost[j][i] = rng.randint(1, 9)
    target = tuple(rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 3)))
    reduced = []
    for a in target:
        if reduced and reduced[-1] == -a:
            reduced.pop()
        else:
            reduced.append(a)
    return gens, cost, tuple(reduced)


@pytest.mark.skipif("compiled" not in kernels.BACKENDS, reason="extension not built")
def test_backends_agree():
    py, cc = kernels.BACKENDS["python"], kernels.BACKENDS["compiled"]
    rng = random.Random(2)
    for _ in range(40):
        gens, cost, g = random_instance(rng)
        assert py.bruteforce_min(gens, cost, g, (), 3) == cc.bruteforce_min(gens, cost, g, (), 3)
        upper = sum(cost[gens.index((a,))][0] for a in g) + 1
        assert py.capped_search(gens, cost, g, len(g) + 1, upper, 10**5) == cc.capped_search(
            gens, cost, g, len(g) + 1, upper, 10**5
        )
        p, q = g, tuple(-a for a in reversed(g))
        assert py.concat(p, q) == cc.concat(p, q) == ()


def test_bruteforce_unreachable():
    assert _pykernels.bruteforce_min([(), (1,), (-1,)], [[0, 1, 1], [1, 0, 2], [1, 2, 0]], (1, 1), (), 1) is None
    assert _pykernels.bruteforce_min([(), (1,)], [[0, 1], [1, 0]], (), (), 0) == 0


@pytest.mark.parametrize("name", sorted(kernels.BACKENDS))
def test_search_budget(name):
    impl = kernels.BACKENDS[name]
    gens = [(), (1,), (-1,), (2,), (-2,)]
    cost = [[0 if i == j else 3 for j in range(5)] for i in range(5)]
    with pytest.raises(BudgetExceeded):
        impl.capped_search(gens, cost, (1, 2, 1), 8, 10, 50)


def test_pure_python_switch():
    env = dict(os.environ, GRAEVMETRIC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from graevmetric import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
