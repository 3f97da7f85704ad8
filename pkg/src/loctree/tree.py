"""Complete n-ary trees T(n, k) with canonical level-order indexing.

Vertices are numbered level by level starting from the root (index 0).  The
p-th vertex of level j has children p*n .. p*n+n-1 of level j+1, so every
navigation query is index arithmetic and no adjacency is ever stored.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DEFAULT_VERTEX_BUDGET = 10**7


class TreeError(ValueError):
    """Invalid tree parameters or a tree larger than the vertex budget."""


@dataclass(frozen=True)
class PalmLocation:
    branch_vertex: int
    leaf_vertices: tuple[int, ...]


@dataclass(frozen=True)
class NaryTree:
    n: int
    k: int
    level_offsets: tuple[int, ...] = field(repr=False)

    @property
    def vertex_count(self) -> int:
        return self.level_offsets[-1]

    @property
    def root(self) -> int:
        return 0

    @property
    def diameter(self) -> int:
        return 2 * self.k

    def level_size(self, j: int) -> int:
        return self.n**j

    def level_range(self, j: int) -> range:
        return range(self.level_offsets[j], self.level_offsets[j + 1])

    def level(self, v: int) -> int:
        self._check_vertex(v)
        # offsets are short (k+2 entries); linear scan beats bisect setup here
        for j in range(self.k + 1):
            if v < self.level_offsets[j + 1]:
                return j
        raise AssertionError("unreachable")

    def parent(self, v: int) -> int | None:
        j = self.level(v)
        if j == 0:
            return None
        p = v - self.level_offsets[j]
        return self.level_offsets[j - 1] + p // self.n

    def children(self, v: int) -> range:
        j = self.level(v)
        if j == self.k:
            return range(0)
        p = v - self.level_offsets[j]
        start = self.level_offsets[j + 1] + p * self.n
        return range(start, start + self.n)

    def neighbors(self, v: int) -> list[int]:
        p = self.parent(v)
        out = [] if p is None else [p]
        out.extend(self.children(v))
        return out

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def is_leaf(self, v: int) -> bool:
        return self.level(v) == self.k

    def ancestor_at(self, v: int, j: int) -> int:
        """Ancestor of ``v`` on level ``j`` (``v`` itself when j is its level)."""
        lv = self.level(v)
        if j > lv or j < 0:
            raise ValueError(f"level {j} is not above vertex {v} (level {lv})")
        p = v - self.level_offsets[lv]
        p //= self.n ** (lv - j)
        return self.level_offsets[j] + p

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.vertex_count:
            raise IndexError(f"vertex {v} not in T({self.n},{self.k})")

    # -- array views used by the vectorised sweeps -------------------------

    @cached_property
    def parents(self) -> np.ndarray:
        """``parents[v]`` for every vertex, -1 for the root."""
        out = np.empty(self.vertex_count, dtype=np.int64)
        out[0] = -1
        for j in range(1, self.k + 1):
            lo, hi = self.level_offsets[j], self.level_offsets[j + 1]
            out[lo:hi] = self.level_offsets[j - 1] + np.arange(hi - lo) // self.n
        out.flags.writeable = False
        return out

    @cached_property
    def levels(self) -> np.ndarray:
        out = np.empty(self.vertex_count, dtype=np.int64)
        for j in range(self.k + 1):
            out[self.level_offsets[j] : self.level_offsets[j + 1]] = j
        out.flags.writeable = False
        return out

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "k": self.k})

    def to_dot(self, levels: bool = False) -> str:
        lines = [f'graph "T({self.n},{self.k})" {{']
        if levels:
            for v in range(self.vertex_count):
                lines.append(f'  {v} [label="{v}", level={self.levels[v]}];')
        for v in range(1, self.vertex_count):
            lines.append(f"  {self.parents[v]} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def vertex_budget() -> int:
    raw = os.environ.get("LOCTREE_VERTEX_BUDGET")
    return int(raw) if raw else DEFAULT_VERTEX_BUDGET


def tree_size(n: int, k: int) -> int:
    return (n ** (k + 1) - 1) // (n - 1)


def build_tree(n: int, k: int, budget: int | None = None) -> NaryTree:
    if not isinstance(n, int) or not isinstance(k, int) or n < 2 or k < 1:
        raise TreeError(f"need integers n >= 2 and k >= 1, got n={n!r}, k={k!r}")
    budget = vertex_budget() if budget is None else budget
    size = tree_size(n, k)
    if size > budget:
        raise TreeError(f"T({n},{k}) has {size} vertices, over the budget of {budget}")
    offsets = [0]
    for j in range(k + 1):
        offsets.append(offsets[-1] + n**j)
    return NaryTree(n, k, tuple(offsets))


def tree_from_json(text: str) -> NaryTree:
    data = json.loads(text)
    return build_tree(int(data["n"]), int(data["k"]))


def distance(tree: NaryTree, u: int, v: int) -> int:
    """Tree distance via the lowest common ancestor of the two indices."""
    lu, lv = tree.level(u), tree.level(v)
    du, dv = lu, lv
    n = tree.n
    pu = u - tree.level_offsets[lu]
    pv = v - tree.level_offsets[lv]
    while lu > lv:
        pu //= n
        lu -= 1
    while lv > lu:
        pv //= n
        lv -= 1
    while pu != pv:
        pu //= n
        pv //= n
        lu -= 1
    return (du - lu) + (dv - lu)


def level_set(tree: NaryTree, v: int, t: int) -> set[int]:
    """All vertices at distance exactly ``t`` from ``v``."""
    if t < 0:
        return set()
    lv = tree.level(v)
    out: set[int] = set()
    # Walk up s steps to ancestor x, then descend t-s levels avoiding the
    # branch we came from.
    prev = None
    x = v
    for s in range(0, min(t, lv) + 1):
        if s > 0:
            prev, x = x, tree.parent(x)
        down = t - s
        depth = lv - s
        if depth + down > tree.k:
            continue
        if down == 0:
            out.add(x)
            continue
        for c in tree.children(x):
            if c == prev:
                continue
            out.update(_descendants_at(tree, c, down - 1))
    return out


def _descendants_at(tree: NaryTree, v: int, d: int) -> range:
    lv = tree.level(v)
    if lv + d > tree.k:
        return range(0)
    p = (v - tree.level_offsets[lv]) * tree.n**d
    start = tree.level_offsets[lv + d] + p
    return range(start, start + tree.n**d)


def palms(tree: NaryTree) -> list[PalmLocation]:
    return [
        PalmLocation(b, tuple(tree.children(b)))
        for b in tree.level_range(tree.k - 1)
    ]
