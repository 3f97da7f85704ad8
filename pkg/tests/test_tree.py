import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loctree.tree import TreeError, build_tree, distance, level_set, palms, tree_from_json

from oracles import adjacency, all_pairs, bfs


@pytest.mark.parametrize(
    "n,k,size",
    [(4, 3, 85), (2, 1, 3), (2, 3, 15), (3, 3, 40), (11, 4, 16105)],
)
def test_vertex_count(n, k, size):
    tree = build_tree(n, k)
    assert tree.vertex_count == size == sum(n**j for j in range(k + 1))


def test_star_and_small_shapes():
    star = build_tree(2, 1)
    assert star.vertex_count == 3
    assert star.degree(0) == 2 and star.degree(1) == star.degree(2) == 1

    t = build_tree(2, 3)
    assert sum(t.is_leaf(v) for v in range(t.vertex_count)) == 8
    assert len(palms(t)) == 4


@pytest.mark.parametrize("n,k", [(0, 1), (1, 3), (2, 0), (3, -1)])
def test_invalid_parameters(n, k):
    with pytest.raises(TreeError):
        build_tree(n, k)


def test_budget_guard():
    with pytest.raises(TreeError, match="budget"):
        build_tree(10, 8, budget=10**6)
    assert build_tree(10, 5, budget=10**6).vertex_count == 111111


@pytest.mark.parametrize("n,k", [(2, 1), (2, 3), (3, 2), (4, 3)])
def test_structure_invariants(n, k):
    tree = build_tree(n, k)
    for j in range(k + 1):
        assert len(tree.level_range(j)) == n**j
        for v in tree.level_range(j):
            assert tree.level(v) == j
    assert tree.degree(0) == n
    for v in range(1, tree.vertex_count):
        expected = 1 if tree.level(v) == k else n + 1
        assert tree.degree(v) == expected
        assert v in tree.children(tree.parent(v))
    # p-th vertex of level j has children p*n .. p*n+n-1 of level j+1
    for j in range(k):
        for p, v in enumerate(tree.level_range(j)):
            kids = [c - tree.level_offsets[j + 1] for c in tree.children(v)]
            assert kids == list(range(p * n, p * n + n))


@pytest.mark.parametrize("n,k", [(2, 1), (2, 3), (3, 2), (4, 2)])
def test_matches_recursive_definition(n, k):
    """Joining a new root to the centers of n copies of T(n, k-1)."""

    def recursive(n, k):
        if k == 1:
            return nx.star_graph(n), 0
        g = nx.Graph()
        g.add_node("r")
        for i in range(n):
            sub, center = recursive(n, k - 1)
            g.update(nx.relabel_nodes(sub, lambda v, i=i: (i, v)))
            g.add_edge("r", (i, center))
        return g, "r"

    tree = build_tree(n, k)
    ours = nx.Graph((int(tree.parents[v]), v) for v in range(1, tree.vertex_count))
    assert nx.is_isomorphic(ours, recursive(n, k)[0])


def test_level_set_examples():
    t = build_tree(2, 2)
    assert level_set(t, 0, 1) == {1, 2}
    assert level_set(t, 0, 3) == set()
    # frozen from BFS out of leaf 3: its sibling 4 and the root
    assert level_set(t, 3, 2) == {0, 4}


@pytest.mark.parametrize("n,k", [(2, 3), (3, 2), (2, 4)])
def test_level_set_against_bfs(n, k):
    tree = build_tree(n, k)
    adj = adjacency(n, k)
    for v in range(tree.vertex_count):
        d = bfs(adj, [v])
        for t in range(2 * k + 2):
            assert level_set(tree, v, t) == {w for w, x in enumerate(d) if x == t}


@pytest.mark.parametrize("n,k", [(2, 1), (3, 3), (5, 2)])
def test_root_level_sets_are_levels(n, k):
    tree = build_tree(n, k)
    for t in range(k + 1):
        assert level_set(tree, 0, t) == set(tree.level_range(t))


def test_distance_examples():
    t = build_tree(2, 2)
    assert distance(t, 3, 5) == 4 == t.diameter
    assert distance(t, 4, 4) == 0
    t3 = build_tree(2, 3)
    assert all(distance(t3, 0, leaf) == 3 for leaf in t3.level_range(3))


def test_distance_matches_bfs_on_every_pair():
    tree = build_tree(2, 3)
    ref = all_pairs(adjacency(2, 3))
    for u in range(tree.vertex_count):
        for v in range(tree.vertex_count):
            assert distance(tree, u, v) == ref[u][v]


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_distance_symmetric_and_bounded(data):
    n = data.draw(st.integers(2, 5))
    k = data.draw(st.integers(1, 5))
    tree = build_tree(n, k)
    u = data.draw(st.integers(0, tree.vertex_count - 1))
    v = data.draw(st.integers(0, tree.vertex_count - 1))
    assert distance(tree, u, v) == distance(tree, v, u) <= 2 * k
    first, last = tree.level_range(k)[0], tree.level_range(k)[-1]
    assert distance(tree, first, last) == 2 * k


@pytest.mark.parametrize("n,k,count", [(2, 3, 4), (5, 1, 1), (4, 3, 16), (3, 4, 27)])
def test_palms(n, k, count):
    tree = build_tree(n, k)
    ps = palms(tree)
    assert len(ps) == count == n ** (k - 1)
    # brute-force degree scan: palms sit on the vertices adjacent to leaves
    adj = adjacency(n, k)
    scan = [v for v in range(len(adj)) if any(len(adj[w]) == 1 for w in adj[v]) and len(adj[v]) > 1]
    assert [p.branch_vertex for p in ps] == scan
    for p in ps:
        assert len(p.leaf_vertices) == n
        assert all(tree.is_leaf(v) for v in p.leaf_vertices)
        assert list(p.leaf_vertices) == list(tree.children(p.branch_vertex))


def test_json_and_dot():
    tree = build_tree(3, 2)
    assert json.loads(tree.to_json()) == {"n": 3, "k": 2}
    assert tree_from_json(tree.to_json()) == tree
    dot = tree.to_dot(levels=True)
    assert dot.count(" -- ") == tree.vertex_count - 1
    assert "level=2" in dot
