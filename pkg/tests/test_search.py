import math
import random

import pytest

from quadzeros.corpus import main_corpus, random_ff_problem
from quadzeros.fields import FunctionField
from quadzeros.oracle import isotropic_points, point_to_text
from quadzeros.problem import problem_from_json
from quadzeros.search import SubspaceSearch, affine_points, level_of, pipeline_key

from conftest import projective_key


def _pipeline_zeros(pr, level):
    K = pr.field
    pts = SubspaceSearch(pr.V, pr.F.matrix, max_level=level, budget=10 ** 7)
    return [tuple(K.from_ring(a) for a in p.x) for p in pts]


def _oracle_zeros(obj, pr, level):
    K = pr.field
    cap = math.log(level) if K.kind == "Q" else level - 1
    return [tuple(K.parse(s) for s in point_to_text(x, obj.get("field", {"kind": "Q"})))
            for x in isotropic_points(obj, cap, budget=10 ** 7)]


def _keys(points, K):
    return sorted(map(str, (projective_key(p, K) for p in points)))


CORPUS = main_corpus(12, seed=44)


@pytest.mark.parametrize("n", range(len(CORPUS)))
def test_search_matches_brute_force_q(n):
    obj = dict(CORPUS[n], S=[])
    pr = problem_from_json(obj)
    level = {2: 12, 3: 6, 4: 4}.get(pr.N, 3)
    mine = _pipeline_zeros(pr, level)
    ref = _oracle_zeros(obj, pr, level)
    assert mine and _keys(mine, pr.field) == _keys(ref, pr.field)


@pytest.mark.parametrize("seed", range(8))
def test_search_matches_brute_force_ff(seed):
    rng = random.Random(100 + seed)
    obj = random_ff_problem(rng, rng.choice([3, 5]), max_N=3)
    pr = problem_from_json(obj)
    mine = _pipeline_zeros(pr, 3)
    ref = _oracle_zeros(obj, pr, 3)
    assert _keys(mine, pr.field) == _keys(ref, pr.field)


def test_search_order_is_level_then_key():
    from quadzeros.fields import QQ
    from quadzeros.heights import Subspace

    pts = list(SubspaceSearch(Subspace.full(QQ, 3), max_level=2))
    keys = [(p.level, p.key) for p in pts]
    assert keys == sorted(keys)
    assert all(p.level == level_of(p.x, QQ) and p.key == pipeline_key(p.x, QQ) for p in pts)


def test_affine_points_nondecreasing_h():
    K = FunctionField(3)
    out = [h for h, _ in zip(affine_points(K, 2), range(100))]
    levels = [lv for lv, _ in out]
    assert levels == sorted(levels)
