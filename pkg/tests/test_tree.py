import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from eisgen.bun import BunFun, hecke_delta
from eisgen.errors import PrecisionExceeded
from eisgen.gf import field_of_order
from eisgen.tree import (MAX_DEPTH, LaurentMatrix, TreeVertex, apartment_vertex, birkhoff_split, brute_force_type,
                         explore, expected_profile, neighbor_profile, random_minus_element, random_split_matrix,
                         ray_to_end, ray_type_offsets, series_of_rational, tree_hecke, vertex_bundle_type)


def test_root_has_three_neighbors():
    assert explore(2, 1).sphere_sizes() == [1, 3]


def test_sphere_sizes():
    assert explore(3, 2).sphere_sizes() == [1, 4, 12]
    assert explore(2, 4).sphere_sizes()[4] == 24


def test_precision_cap():
    with pytest.raises(PrecisionExceeded):
        explore(2, MAX_DEPTH + 1)


def test_adjacency_symmetric():
    ball = explore(3, 3)
    for v in ball.vertices:
        for w in v.neighbors():
            assert v in w.neighbors()


def test_each_nonroot_vertex_has_q_children():
    q, depth = 2, 4
    ball = explore(q, depth)
    for v in ball.vertices:
        if 0 < ball.distance[v] < depth:
            children = [w for w in v.neighbors() if ball.distance.get(w) == ball.distance[v] + 1]
            assert len(children) == q


def test_split_examples():
    F = field_of_order(2)
    s = birkhoff_split(LaurentMatrix.identity(F))
    assert s.k == (0, 0)
    s = birkhoff_split(LaurentMatrix.diag_t(F, 1, -1))
    assert s.k == (1, -1) and s.type == 2


@pytest.mark.parametrize("q", [2, 3])
def test_split_against_bounded_search(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for _ in range(30 if q == 2 else 10):
        g, k = random_split_matrix(F, rng, kmax=2)
        s = birkhoff_split(g)
        assert s.type == k
        if q == 2:
            assert k in brute_force_type(g)


def test_root_and_apartment_types():
    assert vertex_bundle_type(TreeVertex.root(2)) == 0
    for n in range(-4, 5):
        assert vertex_bundle_type(apartment_vertex(3, n)) == abs(n)


@pytest.mark.parametrize("q", [2, 3])
def test_type_invariant_under_minus_group(q):
    F = field_of_order(q)
    rng = random.Random(11)
    ball = explore(q, 3)
    for _ in range(50):
        v = rng.choice(ball.vertices)
        h = random_minus_element(F, rng)
        assert birkhoff_split(h @ v.matrix()).type == vertex_bundle_type(v)


def test_profile_examples():
    assert neighbor_profile(TreeVertex.root(2)) == Counter({1: 3})
    v3 = apartment_vertex(2, 3)
    assert neighbor_profile(v3) == Counter({4: 1, 2: 2})
    v1 = apartment_vertex(3, 1)
    assert neighbor_profile(v1) == Counter({2: 1, 0: 3})


@pytest.mark.parametrize("q,depth", [(2, 5), (3, 4)])
def test_profiles_everywhere(q, depth):
    ball = explore(q, depth)
    for v in ball.vertices:
        assert neighbor_profile(v) == expected_profile(q, vertex_bundle_type(v))


@pytest.mark.parametrize("q,depth", [(2, 5), (3, 4)])
def test_tree_hecke_matches_operator(q, depth):
    rng = random.Random(depth)
    ball = explore(q, depth)
    f = {k: rng.randrange(-9, 10) for k in range(depth + 2)}
    tree = tree_hecke(f, ball)
    alg = hecke_delta(BunFun(f), q)
    assert tree and all(tree[k] == alg(k) for k in tree)


@settings(max_examples=200)
@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 9))
def test_birkhoff_recomposition(q, seed):
    F = field_of_order(q)
    g, _ = random_split_matrix(F, random.Random(seed))
    s = birkhoff_split(g)
    assert s.recompose() == g
    assert sum(s.k) == g.det().val()
    assert s.minus.in_minus_group() and s.plus.in_plus_group()


rational_ends = st.tuples(st.sampled_from([2, 3]), st.lists(st.integers(0, 2), min_size=1, max_size=3),
                          st.lists(st.integers(0, 2), min_size=1, max_size=3), st.integers(-2, 1))


@settings(max_examples=30)
@given(rational_ends)
def test_ray_toward_rational_end_is_eventually_linear(data):
    q, num, den = data[0], [c % data[0] for c in data[1]], [1] + [c % data[0] for c in data[2]]
    F = field_of_order(q)
    end = series_of_rational(F, num, den, data[3], 14)
    path = ray_to_end(q, end, 12)
    off = ray_type_offsets(path)
    assert len(set(off[-4:])) == 1
