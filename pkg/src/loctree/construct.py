"""Recursive locating colorings of T(n, k) built from c^t_{a,A} colorings.

A coloring of T(n, k) has the c^t_{a,A} property when the root has color
``a``, the n^t vertices of level t carry exactly the colors of ``A`` (so all
distinct, ``a`` not among them), and every level 1..t-1 uses only colors 1
and 2.  A locating m-coloring with that property lifts to a locating
(m+2)-coloring of T(n, k+t) with the same property, and iterating the lift
from a cheap base coloring of T(n, i), t <= i <= 2t-1, colors T(n, k) with
O(k/t) colors.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .coloring import Coloring, LocatingVerdict, is_locating
from .tree import NaryTree, build_tree


class ConstructionError(ValueError):
    """A construction precondition does not hold."""


@dataclass(frozen=True)
class CtPropertySpec:
    t: int
    a: int
    A: frozenset[int]

    def to_dict(self) -> dict:
        return {"t": self.t, "a": self.a, "A": sorted(self.A)}


def normal_spec(n: int, t: int, m: int) -> CtPropertySpec:
    return CtPropertySpec(t, m, frozenset(range(3, n**t + 3)))


def has_ct_property(
    tree: NaryTree, coloring: Coloring, spec: CtPropertySpec
) -> tuple[bool, str | None]:
    """Check the property; on failure also return which condition broke."""
    t = spec.t
    if not 1 <= t <= tree.k:
        return False, f"shell radius t={t} outside 1..{tree.k}"
    if spec.a in spec.A:
        return False, "a must not be in A"
    if coloring[0] != spec.a:
        return False, f"center color is {coloring[0]}, expected a={spec.a}"
    if len(spec.A) != tree.n**t:
        return False, f"|A| = {len(spec.A)}, expected n^t = {tree.n**t}"
    shell = coloring.colors[tree.level_offsets[t] : tree.level_offsets[t + 1]]
    if len(set(shell.tolist())) != shell.size or set(shell.tolist()) != spec.A:
        return False, f"level {t} colors differ from A"
    for r in range(1, t):
        used = set(coloring.colors[tree.level_offsets[r] : tree.level_offsets[r + 1]].tolist())
        if not used <= {1, 2}:
            return False, f"level {r} uses colors outside {{1, 2}}"
        if tree.n**r >= 2 and used != {1, 2}:
            return False, f"level {r} does not use both 1 and 2"
    return True, None


def color_shells(tree: NaryTree, colors: np.ndarray, lo: int, hi: int) -> None:
    """Two-color levels lo..hi in place from the colors of their parents.

    A child of a vertex colored outside {1, 2} gets 1 if it is the first
    child and 2 otherwise; a child of a 1/2-colored vertex gets the other one.
    Proper, and both colors appear on every level with at least two vertices.
    """
    n = tree.n
    for r in range(lo, hi + 1):
        start, stop = tree.level_offsets[r], tree.level_offsets[r + 1]
        pc = np.repeat(colors[tree.level_offsets[r - 1] : start], n)
        first = (np.arange(stop - start) % n) == 0
        shell = (pc == 1) | (pc == 2)
        colors[start:stop] = np.where(shell, 3 - pc, np.where(first, 1, 2))


def base_palette_size(n: int, i: int, t: int) -> int:
    return 1 + n**t + (n**i if i > t else 0) + (2 if t >= 2 else 0)


def realized_palette_size(n: int, k: int, t: int) -> int:
    i, a = decompose(k, t)
    return base_palette_size(n, i, t) + 2 * a


def base_coloring(n: int, i: int, t: int) -> tuple[Coloring, CtPropertySpec]:
    """Locating coloring of T(n, i) with the c^t property, t <= i <= 2t-1.

    Levels 0, t and i get pairwise distinct fresh colors; every other level
    is two-colored with 1 and 2.
    """
    if n < 2 or t < 1 or not t <= i <= 2 * t - 1:
        raise ConstructionError(f"need n >= 2, t >= 1, t <= i <= 2t-1; got n={n}, i={i}, t={t}")
    tree = build_tree(n, i)
    off = tree.level_offsets
    colors = np.zeros(tree.vertex_count, dtype=np.int64)
    colors[off[t] : off[t + 1]] = np.arange(3, n**t + 3)
    top = n**t + 2
    if i > t:
        colors[off[i] : off[i + 1]] = np.arange(top + 1, top + 1 + n**i)
        top += n**i
    colors[0] = top + 1
    color_shells(tree, colors, 1, t - 1)
    color_shells(tree, colors, t + 1, i - 1)
    coloring, mapping = Coloring.compacted(colors)
    spec = CtPropertySpec(t, mapping[top + 1], frozenset(mapping[c] for c in range(3, n**t + 3)))
    _require_valid(tree, coloring, spec, f"base coloring of T({n},{i}), t={t}")
    return coloring, spec


def _require_valid(tree: NaryTree, coloring: Coloring, spec: CtPropertySpec, what: str) -> None:
    verdict = is_locating(tree, coloring)
    if not verdict:
        raise ConstructionError(f"{what} is not locating: {verdict}")
    ok, why = has_ct_property(tree, coloring, spec)
    if not ok:
        raise ConstructionError(f"{what} lacks the c^t property: {why}")


def normalize_ct(
    coloring: Coloring, spec: CtPropertySpec, n: int
) -> tuple[Coloring, CtPropertySpec, dict[int, int]]:
    """Relabel so that a = m and A = {3, ..., n^t + 2}.

    The remaining colors keep their relative order on the remaining slots,
    which fixes 1 and 2 whenever they are the shell colors.  Returns the
    relabeled coloring, its spec and the old -> new map.
    """
    m, t = coloring.m, spec.t
    width = n**t
    if m < width + 3:
        raise ConstructionError(
            f"palette {m} too small to place A at 3..{width + 2} below a = m"
        )
    perm = {spec.a: m}
    for src, dst in zip(sorted(spec.A), range(3, width + 3)):
        perm[src] = dst
    rest_src = [c for c in range(1, m + 1) if c not in perm]
    rest_dst = [c for c in range(1, m + 1) if c not in perm.values()]
    perm.update(zip(rest_src, rest_dst))
    return coloring.relabel(perm), normal_spec(n, t, m), perm


def forbidden_color(i: int, n: int, t: int) -> int:
    """Color left out of the i-th copy (1-based) in a lift."""
    width = n**t
    return (i + n ** (t - 1) - 1) % width + 3


def subtree_permutation(i: int, n: int, t: int, m: int) -> list[int]:
    """Images of inner colors 1..m when recoloring the i-th copy."""
    width = n**t
    f = forbidden_color(i, n, t)
    B = [c for c in range(3, width + 5) if c not in (i + 2, f)]
    images = {m: i + 2}
    images.update(zip(range(3, width + 3), B))
    rest_src = [c for c in range(1, m + 1) if c not in images]
    taken = set(images.values()) | {f}
    rest_dst = [c for c in range(1, m + 2) if c not in taken]
    images.update(zip(rest_src, rest_dst))
    return [images[c] for c in range(1, m + 1)]


@dataclass
class LiftRecord:
    k_in: int
    k_out: int
    m_in: int
    m_out: int
    forbidden: dict[int, int]
    permutations: dict[int, list[int]]
    verdict: str
    witness: tuple[int, int] | None
    ct_property: bool
    root_unique: bool
    forbidden_scan: bool


@dataclass
class LiftResult:
    coloring: Coloring
    spec: CtPropertySpec
    record: LiftRecord
    verdict: LocatingVerdict

    @property
    def ok(self) -> bool:
        return bool(self.verdict) and self.record.ct_property


def lift(inner: Coloring, spec: CtPropertySpec, n: int, k: int) -> LiftResult:
    """Color T(n, k+t) from a normalized locating coloring of T(n, k).

    The root gets m+2, levels 1..t-1 are two-colored, and the i-th copy of
    T(n, k) hanging at level t is the inner coloring permuted to avoid
    ``forbidden_color(i)`` with center color i+2.  The result is verified;
    a failed verification is reported in the returned record, not raised.
    """
    t, m = spec.t, inner.m
    width = n**t
    if spec != normal_spec(n, t, m):
        raise ConstructionError("inner coloring must be normalized (a = m, A = {3..n^t+2})")
    if m < width + 3:
        raise ConstructionError(f"lift needs m >= n^t + 3 = {width + 3}, got m = {m}")
    if len(inner) != (n ** (k + 1) - 1) // (n - 1):
        raise ConstructionError(f"inner coloring does not fit T({n},{k})")
    small = build_tree(n, k)
    ok, why = has_ct_property(small, inner, spec)
    if not ok:
        raise ConstructionError(f"inner coloring lacks the c^t property: {why}")
    big = build_tree(n, k + t)
    colors = np.zeros(big.vertex_count, dtype=np.int64)
    colors[0] = m + 2
    color_shells(big, colors, 1, t - 1)
    perms: dict[int, list[int]] = {}
    forbidden: dict[int, int] = {}
    for i in range(1, width + 1):
        perm = subtree_permutation(i, n, t, m)
        perms[i] = perm
        forbidden[i] = forbidden_color(i, n, t)
        lut = np.array([0, *perm], dtype=np.int64)
        for d in range(k + 1):
            size = n**d
            dst = big.level_offsets[t + d] + (i - 1) * size
            src = small.level_offsets[d]
            colors[dst : dst + size] = lut[inner.colors[src : src + size]]
    coloring = Coloring(m + 2, colors)
    out_spec = normal_spec(n, t, m + 2)
    verdict = is_locating(big, coloring)
    ct_ok, _ = has_ct_property(big, coloring, out_spec)
    record = LiftRecord(
        k_in=k,
        k_out=k + t,
        m_in=m,
        m_out=m + 2,
        forbidden=forbidden,
        permutations=perms,
        verdict=verdict.status,
        witness=verdict.witness,
        ct_property=ct_ok,
        root_unique=int((colors == m + 2).sum()) == 1,
        forbidden_scan=_forbidden_scan(big, colors, n, t, k, forbidden),
    )
    return LiftResult(coloring, out_spec, record, verdict)


def copy_vertices(big: NaryTree, n: int, t: int, k: int, i: int) -> np.ndarray:
    """Vertex indices of the i-th copy of T(n, k) hanging at level t."""
    parts = []
    for d in range(k + 1):
        size = n**d
        start = big.level_offsets[t + d] + (i - 1) * size
        parts.append(np.arange(start, start + size))
    return np.concatenate(parts)


def _forbidden_scan(big, colors, n, t, k, forbidden) -> bool:
    present = {}
    for i in range(1, n**t + 1):
        present[i] = set(colors[copy_vertices(big, n, t, k, i)].tolist())
    for i, f in forbidden.items():
        if f in present[i]:
            return False
        if any(f not in present[j] for j in present if j != i):
            return False
    return True


def decompose(k: int, t: int) -> tuple[int, int]:
    """Write k = a*t + i with t <= i <= 2t-1; returns (i, a)."""
    if t < 1 or k < t:
        raise ConstructionError(f"need k >= t >= 1, got k={k}, t={t}")
    i = t + k % t
    return i, (k - i) // t


@dataclass
class ConstructionTrace:
    n: int
    k: int
    t: int
    i: int
    a: int
    base_palette: int
    base_normalization: dict[int, int]
    lifts: list[LiftRecord] = field(default_factory=list)
    palettes: list[int] = field(default_factory=list)
    ok: bool = True
    failure: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["base_normalization"] = {str(a): b for a, b in sorted(self.base_normalization.items())}
        for rec in d["lifts"]:
            rec["forbidden"] = {str(a): b for a, b in rec["forbidden"].items()}
            rec["permutations"] = {str(a): b for a, b in rec["permutations"].items()}
            rec["witness"] = None if rec["witness"] is None else list(rec["witness"])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def construct_coloring(
    n: int, k: int, t: int
) -> tuple[Coloring, CtPropertySpec, ConstructionTrace]:
    """Base coloring of T(n, i) followed by a lifts of height t.

    If some lift does not verify, the construction stops there: the returned
    coloring is the failing one and ``trace.failure`` names the stage and the
    witness pair.
    """
    i, a = decompose(k, t)
    coloring, spec = base_coloring(n, i, t)
    trace = ConstructionTrace(n, k, t, i, a, coloring.m, {})
    trace.palettes.append(coloring.m)
    if a == 0:
        return coloring, spec, trace
    coloring, spec, perm = normalize_ct(coloring, spec, n)
    trace.base_normalization = perm
    depth = i
    for stage in range(1, a + 1):
        result = lift(coloring, spec, n, depth)
        trace.lifts.append(result.record)
        trace.palettes.append(result.coloring.m)
        coloring, spec = result.coloring, result.spec
        depth += t
        if not result.ok:
            trace.ok = False
            trace.failure = {
                "stage": stage,
                "k": depth,
                "verdict": result.verdict.status,
                "witness": None if result.verdict.witness is None else list(result.verdict.witness),
                "ct_property": result.record.ct_property,
            }
            break
    return coloring, spec, trace
