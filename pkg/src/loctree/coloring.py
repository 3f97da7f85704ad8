"""Colorings of T(n, k), color codes, and the locating-property verifier."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .tree import NaryTree, build_tree, palms


class ColoringError(ValueError):
    """A coloring that violates its own invariants or does not fit the tree."""


class RepeatedLeafColor(ColoringError):
    """Two sibling leaves of one palm share a color."""


@dataclass(frozen=True, eq=False)
class Coloring:
    """A total assignment of colors 1..m to vertices, every class non-empty."""

    m: int
    colors: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.colors, dtype=np.int64).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "colors", arr)
        if arr.ndim != 1 or arr.size == 0:
            raise ColoringError("colors must be a non-empty 1-d sequence")
        if self.m < 1:
            raise ColoringError(f"palette size must be >= 1, got {self.m}")
        if arr.min() < 1 or arr.max() > self.m:
            raise ColoringError(f"colors must lie in 1..{self.m}")
        used = np.unique(arr)
        if used.size != self.m:
            missing = sorted(set(range(1, self.m + 1)) - set(used.tolist()))
            raise ColoringError(f"empty color classes: {missing}")

    @classmethod
    def from_sequence(cls, colors: Iterable[int], m: int | None = None) -> "Coloring":
        arr = np.fromiter(colors, dtype=np.int64)
        return cls(int(arr.max()) if m is None else m, arr)

    @classmethod
    def compacted(cls, colors: Iterable[int]) -> tuple["Coloring", dict[int, int]]:
        """Renumber the used colors to 1..m in ascending order.

        Returns the coloring and the old -> new color map.
        """
        arr = np.fromiter(colors, dtype=np.int64)
        used = np.unique(arr)
        mapping = {int(c): i + 1 for i, c in enumerate(used)}
        lut = np.zeros(int(used.max()) + 1, dtype=np.int64)
        lut[used] = np.arange(1, used.size + 1)
        return cls(int(used.size), lut[arr]), mapping

    def __len__(self) -> int:
        return int(self.colors.size)

    def __getitem__(self, v: int) -> int:
        return int(self.colors[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.colors, other.colors)

    def __hash__(self) -> int:
        return hash((self.m, self.colors.tobytes()))

    def tolist(self) -> list[int]:
        return self.colors.tolist()

    def relabel(self, perm: Mapping[int, int] | Sequence[int]) -> "Coloring":
        """Apply a bijection of the palette.

        ``perm`` maps old color -> new color; a sequence is read as
        ``perm[c - 1]`` for color ``c``.
        """
        if isinstance(perm, Mapping):
            images = [perm[c] for c in range(1, self.m + 1)]
        else:
            images = list(perm)
        if sorted(images) != list(range(1, self.m + 1)):
            raise ColoringError("relabeling is not a permutation of the palette")
        lut = np.array([0, *images], dtype=np.int64)
        return Coloring(self.m, lut[self.colors])

    def class_of(self, color: int) -> np.ndarray:
        return np.flatnonzero(self.colors == color)


@dataclass(frozen=True)
class PalmSignature:
    branch_color: int
    leaf_colors: frozenset[int]


@dataclass(frozen=True)
class LocatingVerdict:
    """Outcome of :func:`is_locating`.

    ``status`` is ``"locating"``, ``"not-locating"`` (two vertices share a
    code; ``witness`` is the pair) or ``"improper"`` (``witness`` is a
    parent/child edge with equal colors).
    """

    status: str
    witness: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.status == "locating"


def check_fits(tree: NaryTree, coloring: Coloring) -> None:
    if len(coloring) != tree.vertex_count:
        raise ColoringError(
            f"coloring has {len(coloring)} entries, T({tree.n},{tree.k}) has "
            f"{tree.vertex_count} vertices"
        )


def class_distances(tree: NaryTree, members: np.ndarray) -> np.ndarray:
    """Distance from every vertex to a set of marked vertices, per column.

    ``members`` is a boolean (V, c) matrix; column j marks one source set.  Two
    level sweeps (leaves up, then root down) give the exact multi-source
    distances on a tree in O(V * c).
    """
    n, k = tree.n, tree.k
    off = tree.level_offsets
    big = np.iinfo(np.int32).max // 2
    dist = np.where(members, 0, big).astype(np.int32)
    for j in range(k - 1, -1, -1):
        kids = dist[off[j + 1] : off[j + 2]].reshape(n**j, n, -1).min(axis=1) + 1
        np.minimum(dist[off[j] : off[j + 1]], kids, out=dist[off[j] : off[j + 1]])
    for j in range(1, k + 1):
        from_parent = np.repeat(dist[off[j - 1] : off[j]], n, axis=0) + 1
        np.minimum(dist[off[j] : off[j + 1]], from_parent, out=dist[off[j] : off[j + 1]])
    return dist


def color_codes(tree: NaryTree, coloring: Coloring) -> np.ndarray:
    """Row v is the color code (d(v, C_1), ..., d(v, C_m)) of vertex v."""
    check_fits(tree, coloring)
    members = coloring.colors[:, None] == np.arange(1, coloring.m + 1)[None, :]
    return class_distances(tree, members)


def improper_edge(tree: NaryTree, coloring: Coloring) -> tuple[int, int] | None:
    check_fits(tree, coloring)
    cols = coloring.colors
    bad = np.flatnonzero(cols[1:] == cols[tree.parents[1:]])
    if bad.size == 0:
        return None
    child = int(bad[0]) + 1
    return int(tree.parents[child]), child


def is_proper(tree: NaryTree, coloring: Coloring) -> bool:
    return improper_edge(tree, coloring) is None


def duplicate_code_pair(codes: np.ndarray) -> tuple[int, int] | None:
    """Smallest (u, w), u < w, with identical rows, or None."""
    _, first, inverse, counts = np.unique(
        codes, axis=0, return_index=True, return_inverse=True, return_counts=True
    )
    inverse = inverse.reshape(-1)
    dup_groups = np.flatnonzero(counts > 1)
    if dup_groups.size == 0:
        return None
    g = dup_groups[np.argmin(first[dup_groups])]
    members = np.flatnonzero(inverse == g)
    return int(members[0]), int(members[1])


def is_locating(tree: NaryTree, coloring: Coloring) -> LocatingVerdict:
    edge = improper_edge(tree, coloring)
    if edge is not None:
        return LocatingVerdict("improper", edge)
    pair = duplicate_code_pair(color_codes(tree, coloring))
    if pair is not None:
        return LocatingVerdict("not-locating", pair)
    return LocatingVerdict("locating")


def twin_lower_bound(tree: NaryTree) -> int:
    """1 + the largest number of leaves adjacent to a single vertex.

    Each level is one automorphism orbit, so the first vertex of each level
    stands for all of them.
    """
    best = 0
    for j in range(tree.k + 1):
        v = tree.level_offsets[j]
        best = max(best, sum(1 for w in tree.neighbors(v) if tree.is_leaf(w)))
    return best + 1


def palm_census(tree: NaryTree, coloring: Coloring) -> Counter[PalmSignature]:
    check_fits(tree, coloring)
    census: Counter[PalmSignature] = Counter()
    for palm in palms(tree):
        leaf_colors = [coloring[v] for v in palm.leaf_vertices]
        if len(set(leaf_colors)) != len(leaf_colors):
            raise RepeatedLeafColor(
                f"palm at vertex {palm.branch_vertex} repeats a leaf color: {leaf_colors}"
            )
        census[PalmSignature(coloring[palm.branch_vertex], frozenset(leaf_colors))] += 1
    return census


# -- serialisation ------------------------------------------------------------


def coloring_to_dict(tree: NaryTree, coloring: Coloring) -> dict:
    check_fits(tree, coloring)
    return {"n": tree.n, "k": tree.k, "m": coloring.m, "colors": coloring.tolist()}


def coloring_to_json(tree: NaryTree, coloring: Coloring) -> str:
    return json.dumps(coloring_to_dict(tree, coloring))


def coloring_from_dict(data: Mapping) -> tuple[NaryTree, Coloring]:
    try:
        n, k, m = int(data["n"]), int(data["k"]), int(data["m"])
        colors = [int(c) for c in data["colors"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ColoringError(f"malformed coloring document: {exc}") from exc
    tree = build_tree(n, k)
    coloring = Coloring.from_sequence(colors, m)
    check_fits(tree, coloring)
    return tree, coloring


def coloring_from_json(text: str) -> tuple[NaryTree, Coloring]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ColoringError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ColoringError("coloring document must be a JSON object")
    return coloring_from_dict(data)


def coloring_to_dot(tree: NaryTree, coloring: Coloring) -> str:
    check_fits(tree, coloring)
    lines = [f'graph "T({tree.n},{tree.k})" {{']
    for v in range(tree.vertex_count):
        lines.append(f'  {v} [label="{v}:{coloring[v]}", color_class={coloring[v]}];')
    for v in range(1, tree.vertex_count):
        lines.append(f"  {tree.parents[v]} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
