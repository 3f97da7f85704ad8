import random

import numpy as np
import pytest

from loctree.coloring import Coloring, color_codes, is_locating, is_proper
from loctree.construct import (
    ConstructionError,
    CtPropertySpec,
    base_coloring,
    construct_coloring,
    copy_vertices,
    decompose,
    forbidden_color,
    has_ct_property,
    lift,
    normal_spec,
    normalize_ct,
    realized_palette_size,
    subtree_permutation,
)
from loctree.bounds import quoted_base_bound
from loctree.tree import build_tree

T22 = Coloring.from_sequence([7, 1, 2, 3, 4, 5, 6])


def spec(t, a, A):
    return CtPropertySpec(t, a, frozenset(A))


def test_ct_property_examples():
    t = build_tree(2, 2)
    assert has_ct_property(t, T22, spec(2, 7, {3, 4, 5, 6})) == (True, None)
    ok, why = has_ct_property(t, T22, spec(2, 7, {3, 4, 5, 7}))
    assert not ok and "a must not be in A" in why
    star = build_tree(2, 1)
    assert has_ct_property(star, Coloring.from_sequence([3, 1, 2]), spec(1, 3, {1, 2}))[0]


def test_ct_property_shell_conditions():
    t = build_tree(2, 2)
    # level 1 monochromatic: fails the strict reading
    bad = Coloring.from_sequence([6, 1, 1, 2, 3, 4, 5])
    ok, why = has_ct_property(t, bad, spec(2, 6, {2, 3, 4, 5}))
    assert not ok
    ok, why = has_ct_property(t, T22, spec(2, 7, {3, 4, 5}))
    assert not ok and "|A|" in why


@pytest.mark.parametrize("n,i,t", [(2, 2, 2), (2, 3, 2), (3, 1, 1), (2, 1, 1), (3, 3, 2),
                                   (2, 3, 3), (2, 4, 3), (2, 5, 3), (3, 5, 3), (4, 2, 2)])
def test_base_coloring(n, i, t):
    c, s = base_coloring(n, i, t)
    tree = build_tree(n, i)
    assert is_locating(tree, c)
    assert has_ct_property(tree, c, s)[0]
    assert c.m <= 3 + n**t + n**i
    assert c.m <= quoted_base_bound(n, t) + 2


def test_base_examples():
    assert base_coloring(2, 2, 2)[0].m == 7
    assert base_coloring(2, 3, 2)[0].m <= 15
    star, s = base_coloring(3, 1, 1)
    assert star.m == 4 and s.a == 4


@pytest.mark.parametrize("n,i,t", [(2, 4, 2), (2, 1, 2), (1, 2, 2), (2, 2, 0)])
def test_base_range(n, i, t):
    with pytest.raises(ConstructionError):
        base_coloring(n, i, t)


def test_normalize_examples():
    same, s, perm = normalize_ct(T22, spec(2, 7, {3, 4, 5, 6}), 2)
    assert same == T22 and s == normal_spec(2, 2, 7)
    assert all(a == b for a, b in perm.items())

    c = Coloring.from_sequence([3, 1, 2, 4, 5, 6, 7])
    out, s, _ = normalize_ct(c, spec(2, 3, {4, 5, 6, 7}), 2)
    assert out.tolist() == [7, 1, 2, 3, 4, 5, 6]
    tree = build_tree(2, 2)
    assert is_locating(tree, out) and has_ct_property(tree, out, s)[0]


def test_normalize_needs_room():
    star, s = base_coloring(2, 1, 1)
    with pytest.raises(ConstructionError):
        normalize_ct(star, s, 2)


def test_normalize_permutes_codes():
    c = Coloring.from_sequence([3, 1, 2, 4, 5, 6, 7])
    out, _, perm = normalize_ct(c, spec(2, 3, {4, 5, 6, 7}), 2)
    tree = build_tree(2, 2)
    before = color_codes(tree, c)
    after = color_codes(tree, out)
    order = [perm[col] - 1 for col in range(1, 8)]
    assert np.array_equal(after[:, order], before)


@pytest.mark.parametrize("n,t", [(2, 1), (2, 2), (3, 2), (2, 3), (4, 2)])
def test_subtree_permutations(n, t):
    m = n**t + 6
    for i in range(1, n**t + 1):
        perm = subtree_permutation(i, n, t, m)
        f = forbidden_color(i, n, t)
        assert sorted(perm + [f]) == list(range(1, m + 2))
        assert perm[m - 1] == i + 2
        assert perm[0] == 1 and perm[1] == 2
        B = {perm[c - 1] for c in range(3, n**t + 3)}
        assert B == set(range(3, n**t + 5)) - {i + 2, f}
    # the forbidden colors run over 3..n^t+2 once each
    assert sorted(forbidden_color(i, n, t) for i in range(1, n**t + 1)) == list(range(3, n**t + 3))


@pytest.mark.parametrize("n,i,t", [(2, 2, 2), (2, 3, 2), (3, 2, 2), (2, 3, 3)])
def test_lift(n, i, t):
    c, s = base_coloring(n, i, t)
    c, s, _ = normalize_ct(c, s, n)
    res = lift(c, s, n, i)
    big = build_tree(n, i + t)
    assert res.ok
    assert res.coloring.m == c.m + 2
    assert len(res.coloring) == big.vertex_count
    assert is_locating(big, res.coloring)
    assert has_ct_property(big, res.coloring, res.spec)[0]
    rec = res.record
    assert rec.root_unique and rec.forbidden_scan and rec.ct_property


def test_lift_examples_sizes():
    c, s = normalize_ct(*base_coloring(2, 2, 2), 2)[:2]
    res = lift(c, s, 2, 2)
    assert len(res.coloring) == 31 and res.coloring.m == 9
    c, s = normalize_ct(*base_coloring(2, 3, 2), 2)[:2]
    res = lift(c, s, 2, 3)
    assert len(res.coloring) == 63 and res.ok


def test_lift_preconditions():
    c, s = base_coloring(2, 2, 2)
    with pytest.raises(ConstructionError, match="normalized"):
        lift(c, spec(2, 7, {3, 4, 5, 7}), 2, 2)
    with pytest.raises(ConstructionError, match="property"):
        lift(c.relabel([1, 2, 7, 4, 5, 6, 3]), s, 2, 2)
    with pytest.raises(ConstructionError):
        lift(c, s, 2, 3)


def test_lift_properties_by_scan():
    n, t, k = 2, 2, 3
    c, s = normalize_ct(*base_coloring(n, k, t), n)[:2]
    res = lift(c, s, n, k)
    big = build_tree(n, k + t)
    cols = res.coloring.colors
    assert (cols == res.coloring.m).sum() == 1 and cols[0] == res.coloring.m
    for r in list(range(1, t)) + list(range(t + 1, 2 * t)):
        assert set(cols[big.level_range(r)[0] : big.level_range(r)[-1] + 1].tolist()) <= {1, 2}
    for i in range(1, n**t + 1):
        f = forbidden_color(i, n, t)
        assert f not in set(cols[copy_vertices(big, n, t, k, i)].tolist())
        for j in range(1, n**t + 1):
            if j != i:
                assert f in set(cols[copy_vertices(big, n, t, k, j)].tolist())


@pytest.mark.parametrize("n,t,k", [(2, 2, 3), (3, 2, 2), (2, 3, 3), (2, 2, 5)])
def test_missing_color_distance(n, t, k):
    """A vertex on level r > t of copy i is at distance r+2 from its missing color."""
    c, s = construct_coloring(n, k, t)[:2]
    c, s = normalize_ct(c, s, n)[:2]
    res = lift(c, s, n, k)
    big = build_tree(n, k + t)
    codes = color_codes(big, res.coloring)
    for i in range(1, n**t + 1):
        f = forbidden_color(i, n, t)
        for v in copy_vertices(big, n, t, k, i):
            r = int(big.levels[v])
            assert codes[v, f - 1] == r + 2


@pytest.mark.parametrize("k,t,i,a", [(5, 2, 3, 1), (7, 2, 3, 2), (3, 3, 3, 0), (12, 3, 3, 3), (2, 2, 2, 0)])
def test_decompose(k, t, i, a):
    assert decompose(k, t) == (i, a)
    assert a * t + i == k and t <= i <= 2 * t - 1


def test_decompose_range():
    with pytest.raises(ConstructionError):
        decompose(2, 3)


@pytest.mark.parametrize("n,k,t", [(2, 5, 2), (2, 7, 2), (2, 3, 3), (3, 4, 2), (2, 8, 3), (4, 4, 2)])
def test_construct(n, k, t):
    c, s, trace = construct_coloring(n, k, t)
    tree = build_tree(n, k)
    assert trace.ok and trace.failure is None
    assert is_locating(tree, c) and is_proper(tree, c)
    assert has_ct_property(tree, c, s)[0]
    i, a = decompose(k, t)
    assert (trace.i, trace.a) == (i, a) and len(trace.lifts) == a
    assert trace.palettes == [trace.base_palette + 2 * j for j in range(a + 1)]
    assert c.m == realized_palette_size(n, k, t)
    assert c.m <= 2 * a + quoted_base_bound(n, t) + 2
    for rec in trace.lifts:
        assert rec.m_out == rec.m_in + 2 and rec.verdict == "locating"


def test_pure_base_has_no_lifts():
    c, s, trace = construct_coloring(2, 3, 3)
    assert trace.a == 0 and trace.lifts == []
    assert c == base_coloring(2, 3, 3)[0]


def test_trace_json_round_trips():
    import json

    trace = construct_coloring(2, 6, 2)[2]
    doc = json.loads(trace.to_json())
    assert doc["i"] == 2 and doc["a"] == 2
    assert [l["m_out"] for l in doc["lifts"]] == [9, 11]
    assert doc["lifts"][0]["forbidden"] == {"1": 5, "2": 6, "3": 3, "4": 4}


def test_single_shell_lift_on_rainbow_inner():
    """t = 1 never starts from the cheap base (too few colors), but a rainbow
    inner coloring satisfies the precondition; the outcome is recorded."""
    n, k = 2, 2
    V = build_tree(n, k).vertex_count
    inner = Coloring.from_sequence(range(1, V + 1))
    c, s, _ = normalize_ct(inner, spec(1, 1, {2, 3}), n)
    res = lift(c, s, n, k)
    assert res.record.verdict in ("locating", "not-locating")
    assert res.coloring.m == V + 2


def test_relabel_invariance_on_constructed():
    rng = random.Random(3)
    c, _, _ = construct_coloring(2, 6, 2)
    tree = build_tree(2, 6)
    for _ in range(20):
        perm = list(range(1, c.m + 1))
        rng.shuffle(perm)
        assert is_locating(tree, c.relabel(perm))
