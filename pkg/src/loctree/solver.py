"""Exact locating-chromatic number of small T(n, k) by backtracking.

Vertices are assigned in canonical level order with colors tried in
ascending order, so the first coloring found is the lexicographically
smallest one satisfying the search constraints.  Constraints applied while
assigning:

* parent and child differ;
* sibling leaves are pairwise distinct (they are twins);
* symmetry breaking (optional): root gets color 1, its first child color 2,
  and the level-order color sequences of sibling subtrees are
  lexicographically non-decreasing.

The locating property itself is only tested on complete assignments.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coloring import Coloring, class_distances, twin_lower_bound
from .tree import NaryTree, build_tree


@dataclass(frozen=True)
class Budget:
    max_nodes: int | None = None
    max_seconds: float | None = None

    @classmethod
    def from_env(cls) -> "Budget":
        nodes = os.environ.get("LOCTREE_MAX_NODES")
        secs = os.environ.get("LOCTREE_MAX_SECONDS")
        return cls(int(nodes) if nodes else None, float(secs) if secs else None)


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchOutcome:
    """Result of one fixed-palette search.

    ``status`` is ``"found"``, ``"exhausted"`` (complete search, no coloring)
    or ``"unknown"`` (budget ran out first).
    """

    status: str
    coloring: Coloring | None
    nodes: int
    seconds: float


@dataclass
class SolveResult:
    n: int
    k: int
    status: str  # "ok" or "unknown"
    chi_L: int | None
    lower: int
    upper: int
    witness: Coloring | None
    proof_of_lower: list[dict]
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "status": self.status,
            "chi_L": self.chi_L,
            "bracket": [self.lower, self.upper],
            "witness": None if self.witness is None else self.witness.tolist(),
            "proof_of_lower": self.proof_of_lower,
        }


def known_upper_bound(n: int, k: int) -> int:
    """n+1 for k = 1 and n+k-1 otherwise, from the published small-case values."""
    return n + 1 if k == 1 else n + k - 1


class _Search:
    """Backtracking state for one tree and palette size."""

    def __init__(self, tree: NaryTree, m: int, symmetry: bool = True, use_filter: bool = True):
        self.tree = tree
        self.use_filter = use_filter
        self.m = m
        self.symmetry = symmetry
        V = tree.vertex_count
        self.V = V
        n = tree.n
        levels = tree.levels.tolist()
        parents = tree.parents.tolist()
        self.parent = parents
        self.is_leaf = [lv == tree.k for lv in levels]
        # previous sibling leaves share the parent and sit just before u
        self.sib_start = [
            tree.level_offsets[lv] + ((u - tree.level_offsets[lv]) // n) * n
            if lv > 0
            else 0
            for u, lv in enumerate(levels)
        ]
        # pairs[u]: (y, x) with y an ancestor-or-self of u that has a left
        # sibling, and x the vertex matching u inside that sibling's subtree
        self.pairs: list[list[tuple[int, int]]] = []
        for u in range(V):
            out = []
            if symmetry:
                lu = levels[u]
                y = u
                for ly in range(lu, 0, -1):
                    py = y - tree.level_offsets[ly]
                    if py % n != 0:
                        out.append((y, u - n ** (lu - ly)))
                    y = parents[y]
            self.pairs.append(out)
        self.first_diff = [-1] * V
        self.col = [0] * V
        self.nodes = 0
        # partial locating checks run when a sibling group of leaves closes
        self.checkpoint = [
            lv == tree.k and (u - tree.level_offsets[lv]) % n == n - 1 and u != V - 1
            for u, lv in enumerate(levels)
        ]
        self.palette = np.arange(0, m + 1)[None, :]

    def candidate(self, u: int, start: int) -> int:
        col = self.col
        if self.symmetry and u <= 1:
            fixed = u + 1
            return fixed if start <= fixed <= self.m else 0
        p = self.parent[u]
        pc = col[p] if p >= 0 else 0
        leaf = self.is_leaf[u]
        sibs = range(self.sib_start[u], u) if leaf else ()
        pairs = self.pairs[u]
        first_diff = self.first_diff
        for c in range(start, self.m + 1):
            if c == pc:
                continue
            if leaf and any(col[s] == c for s in sibs):
                continue
            ok = True
            for y, x in pairs:
                if first_diff[y] < 0 and c < col[x]:
                    ok = False
                    break
            if ok:
                return c
        return 0

    def assign(self, u: int, c: int) -> None:
        self.col[u] = c
        for y, x in self.pairs[u]:
            if self.first_diff[y] < 0 and c > self.col[x]:
                self.first_diff[y] = u

    def unassign(self, u: int) -> None:
        for y, _ in self.pairs[u]:
            if self.first_diff[y] == u:
                self.first_diff[y] = -1
        self.col[u] = 0

    def partial_conflict(self) -> bool:
        """True when two assigned vertices already have certainly equal codes.

        A distance computed from the assigned vertices alone is exact as long
        as it does not exceed the distance to the nearest unassigned vertex.
        """
        cols = np.array(self.col, dtype=np.int64)
        members = cols[:, None] == self.palette
        dist = class_distances(self.tree, members)
        reach = dist[:, :1]
        codes = dist[:, 1:]
        certain = (cols > 0) & (codes <= reach).all(axis=1)
        rows = codes[certain]
        if rows.shape[0] < 2:
            return False
        return np.unique(rows, axis=0).shape[0] < rows.shape[0]

    def complete_is_locating(self) -> bool:
        coloring_arr = np.array(self.col, dtype=np.int64)
        members = coloring_arr[:, None] == np.arange(1, self.m + 1)[None, :]
        if not members.any(axis=0).all():
            # an empty class makes some coordinate undefined; the same
            # partition is reached with a smaller palette anyway
            return False
        codes = class_distances(self.tree, members)
        return np.unique(codes, axis=0).shape[0] == self.V

    def run(
        self, prefix: list[int] | tuple[int, ...] = (), deadline: float | None = None,
        max_nodes: int | None = None, collect_prefixes: int | None = None,
    ):
        """Depth-first search below a fixed prefix.

        With ``collect_prefixes`` set, stops descending at that depth and
        returns every valid partial assignment of that length instead.
        """
        lo = len(prefix)
        for u, c in enumerate(prefix):
            self.assign(u, c)
        target = self.V if collect_prefixes is None else collect_prefixes
        collected = []
        if lo >= target:
            if collect_prefixes is not None:
                return [list(prefix)]
            return list(self.col) if self.complete_is_locating() else None
        u = lo
        col = self.col
        while True:
            prev = col[u]
            if prev:
                self.unassign(u)
            c = self.candidate(u, prev + 1)
            if c == 0:
                u -= 1
                if u < lo:
                    return collected if collect_prefixes is not None else None
                continue
            self.assign(u, c)
            self.nodes += 1
            if max_nodes is not None and self.nodes > max_nodes:
                raise BudgetExceeded
            if deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > deadline:
                raise BudgetExceeded
            if u == target - 1:
                if collect_prefixes is not None:
                    collected.append(list(col[:target]))
                elif self.complete_is_locating():
                    return list(col)
                continue
            if self.use_filter and self.checkpoint[u] and self.partial_conflict():
                continue
            u += 1


def _run_prefix(args) -> tuple[str, list[int] | None, int]:
    n, k, m, symmetry, prefix, max_nodes, max_seconds = args
    tree = build_tree(n, k)
    search = _Search(tree, m, symmetry)
    deadline = None if max_seconds is None else time.monotonic() + max_seconds
    try:
        found = search.run(prefix, deadline=deadline, max_nodes=max_nodes)
    except BudgetExceeded:
        return "unknown", None, search.nodes
    return ("found" if found else "exhausted"), found, search.nodes


def exists_locating_coloring(
    tree: NaryTree,
    m: int,
    budget: Budget | None = None,
    symmetry: bool = True,
    workers: int = 1,
) -> SearchOutcome:
    """Search for a locating coloring with exactly ``m`` colors.

    ``workers > 1`` splits the search on the colors of the first few vertices
    and takes the first prefix (in canonical order) that yields a coloring,
    so the answer does not depend on the worker count.
    """
    if m < 1:
        raise ValueError("palette size must be >= 1")
    budget = budget or Budget()
    t0 = time.monotonic()
    if m > tree.vertex_count:
        return SearchOutcome("exhausted", None, 0, 0.0)
    if workers <= 1:
        status, found, nodes = _run_prefix(
            (tree.n, tree.k, m, symmetry, (), budget.max_nodes, budget.max_seconds)
        )
    else:
        status, found, nodes = _parallel(tree, m, budget, symmetry, workers)
    coloring = Coloring(m, found) if found is not None else None
    return SearchOutcome(status, coloring, nodes, time.monotonic() - t0)


def _parallel(tree: NaryTree, m: int, budget: Budget, symmetry: bool, workers: int):
    # split on the root and level 1: few enough prefixes to keep overhead low
    depth = min(tree.vertex_count, 1 + tree.n)
    splitter = _Search(tree, m, symmetry)
    prefixes = splitter.run(collect_prefixes=depth)
    nodes = splitter.nodes
    if not prefixes:
        return "exhausted", None, nodes
    tasks = [
        (tree.n, tree.k, m, symmetry, p, budget.max_nodes, budget.max_seconds)
        for p in prefixes
    ]
    pool = ProcessPoolExecutor(max_workers=workers)
    try:
        futures = [pool.submit(_run_prefix, task) for task in tasks]
        # canonical order: the answer is the first prefix that settles it
        for fut in futures:
            status, found, task_nodes = fut.result()
            nodes += task_nodes
            if status in ("found", "unknown"):
                return status, found, nodes
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
    return "exhausted", None, nodes


def chi_L_exact(
    tree: NaryTree,
    budget: Budget | None = None,
    symmetry: bool = True,
    workers: int = 1,
) -> SolveResult:
    """Smallest m admitting a locating m-coloring, with exhaustion evidence."""
    budget = budget or Budget()
    t0 = time.monotonic()
    lower = twin_lower_bound(tree)
    upper = min(known_upper_bound(tree.n, tree.k), tree.vertex_count)
    proof: list[dict] = []
    if lower > 1:
        proof.append({"m": lower - 1, "reason": "twin-bound", "nodes": 0})
    total_nodes = 0
    m = lower
    while m <= tree.vertex_count:
        remaining = budget
        if budget.max_seconds is not None:
            left = budget.max_seconds - (time.monotonic() - t0)
            remaining = Budget(budget.max_nodes, max(left, 0.0))
        if budget.max_nodes is not None:
            remaining = Budget(max(budget.max_nodes - total_nodes, 0), remaining.max_seconds)
        out = exists_locating_coloring(tree, m, remaining, symmetry, workers)
        total_nodes += out.nodes
        if out.status == "found":
            stats = {"nodes": total_nodes, "seconds": time.monotonic() - t0}
            return SolveResult(
                tree.n, tree.k, "ok", m, m, m, out.coloring, proof, stats
            )
        if out.status == "unknown":
            stats = {"nodes": total_nodes, "seconds": time.monotonic() - t0}
            return SolveResult(
                tree.n, tree.k, "unknown", None, lower, max(upper, lower), None, proof, stats
            )
        proof.append({"m": m, "reason": "exhausted", "nodes": out.nodes})
        lower = m + 1
        m += 1
    raise AssertionError("the rainbow coloring is always locating")
