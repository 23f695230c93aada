"""Simplicial meshes on the sup-norm unit sphere in R^n.

The sphere is the boundary of the cube [-1,1]^n: 2n faces, each a translate
of [-1,1]^(n-1).  Every face is cut into k^(n-1) subcubes and every subcube
into (n-1)! simplices by the Kuhn (sort-order) subdivision.  Nodes shared by
several faces are merged by exact coordinate equality, which works because
the grid values (2i - k)/k are computed once and reused verbatim.

Simplex ids are structural: id = (face * k^d + cube_rank) * d! + perm_rank
with d = n - 1, cube_rank in mixed radix k (first local axis most
significant) and perm_rank the lexicographic rank of the Kuhn permutation.
`locate` reproduces this arithmetic, so boundary ties resolve to the smallest
id without any search.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from collections import deque
from functools import lru_cache
from typing import Callable

import numpy as np

from .homogeneous import HomogeneousFn, extend
from .terms import LatticeTerm

__all__ = [
    "Triangulation",
    "build_triangulation",
    "cached_triangulation",
    "pl_extend",
    "pl_values",
    "hat",
    "interpolate",
    "pl_to_lattice_term",
    "hat_terms",
    "random_sphere_points",
    "mesh_to_csv",
]

_SPHERE_TOL = 1e-12
_FACE_TOL = 1e-12
_SNAP_TOL = 1e-13


class Triangulation:
    """Immutable Kuhn-subdivided mesh of the cube boundary in R^n."""

    __slots__ = ("n", "delta", "k", "nodes", "simplices", "face_of", "faces", "_node_ids", "_adj")

    def __init__(self, n, delta, k, nodes, simplices, face_of, faces):
        self.n = n
        self.delta = delta
        self.k = k
        self.nodes = nodes
        self.simplices = simplices
        self.face_of = face_of
        self.faces = faces
        self._node_ids = {tuple(row): i for i, row in enumerate(nodes)}
        self._adj = None

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_simplices(self) -> int:
        return len(self.simplices)

    @property
    def mesh_diameter(self) -> float:
        """Exact sup-norm diameter of every simplex: the subcube side 2/k."""
        return 2.0 / self.k

    @property
    def corner_node(self) -> int:
        return self._node_ids[tuple(np.ones(self.n))]

    def simplex_vertices(self, sid: int) -> np.ndarray:
        return self.nodes[self.simplices[sid]]

    # --- point location ---------------------------------------------------

    def locate(self, s) -> tuple[int, np.ndarray]:
        """Simplex id and barycentric weights of a point on the sphere.

        Ties on shared boundaries go to the smallest simplex id: the positive
        face first, then the lowest axis, the lower subcube, and the
        lexicographically least Kuhn permutation.
        """
        s = np.asarray(s, dtype=float)
        if s.shape != (self.n,):
            raise ValueError(f"expected a point of shape ({self.n},), got {s.shape}")
        a = np.abs(s)
        m = float(a.max())
        if abs(m - 1.0) > _SPHERE_TOL:
            raise ValueError(f"point is not on the sup-norm unit sphere: max |s_i| = {m!r}")
        axis = -1
        for want in (1.0, -1.0):
            for cand in range(self.n):
                if a[cand] >= m - _FACE_TOL and math.copysign(1.0, s[cand]) == want:
                    axis = cand
                    break
            if axis >= 0:
                break
        face = axis if s[axis] > 0 else self.n + axis
        others = [c for c in range(self.n) if c != axis]
        u = s[others] / a[axis]

        d = self.n - 1
        k = self.k
        cube = [0] * d
        w = np.empty(d)
        for j in range(d):
            t = (u[j] + 1.0) * (k / 2.0)
            r = round(t)
            if abs(t - r) <= _SNAP_TOL:
                # grid hyperplane: take the lower cube so ties get smaller ids
                cube[j] = int(r) - 1 if r >= 1 else 0
                w[j] = 1.0 if r >= 1 else 0.0
            else:
                i = min(max(int(math.floor(t)), 0), k - 1)
                cube[j] = i
                w[j] = min(max(t - i, 0.0), 1.0)

        order = np.argsort(-w, kind="stable")
        perm_rank = 0
        for i in range(d):
            smaller = 0
            for j in range(i + 1, d):
                if order[j] < order[i]:
                    smaller += 1
            perm_rank = perm_rank * (d - i) + smaller
        cube_rank = 0
        for j in range(d):
            cube_rank = cube_rank * k + cube[j]
        sid = (face * k**d + cube_rank) * math.factorial(d) + perm_rank

        ws = w[order]
        lam = np.empty(d + 1)
        lam[0] = 1.0 - ws[0]
        for j in range(1, d):
            lam[j] = ws[j - 1] - ws[j]
        lam[d] = ws[d - 1]
        return sid, lam

    # --- sampling and graph structure --------------------------------------

    def sphere_samples(self, refine: int = 2) -> np.ndarray:
        """Nodes plus barycentric grid points of denominator `refine`.

        All samples lie exactly on the sphere (the face coordinate stays
        +-1); duplicates across shared boundaries are merged best-effort.
        """
        if refine < 1:
            return self.nodes.copy()
        combos = [
            np.array(c, dtype=float)
            for c in itertools.product(range(refine + 1), repeat=self.n)
            if sum(c) == refine and sum(1 for v in c if v > 0) >= 2
        ]
        seen = {tuple(row) for row in self.nodes}
        extra = []
        for ids in self.simplices:
            verts = self.nodes[ids]
            for combo in combos:
                p = (combo @ verts) / refine
                key = tuple(p)
                if key not in seen:
                    seen.add(key)
                    extra.append(p)
        if not extra:
            return self.nodes.copy()
        return np.vstack([self.nodes, np.array(extra)])

    def node_adjacency(self) -> list[frozenset[int]]:
        """For each node, the nodes sharing at least one simplex with it."""
        if self._adj is None:
            adj = [set() for _ in range(self.num_nodes)]
            for ids in self.simplices:
                for p in ids:
                    for q in ids:
                        if p != q:
                            adj[p].add(q)
            self._adj = [frozenset(s) for s in adj]
        return self._adj

    def hop_counts(self, start: int | None = None) -> np.ndarray:
        """BFS distances on the node adjacency graph; -1 marks unreachable."""
        if start is None:
            start = self.corner_node
        adj = self.node_adjacency()
        dist = np.full(self.num_nodes, -1, dtype=np.int64)
        dist[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def __repr__(self) -> str:
        return (
            f"Triangulation(n={self.n}, delta={self.delta}, k={self.k}, "
            f"nodes={self.num_nodes}, simplices={self.num_simplices})"
        )


def build_triangulation(n: int, delta: float) -> Triangulation:
    """Mesh the sphere with simplices of sup-norm diameter strictly below delta."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"need arity n >= 2, got {n!r}")
    if not 0.0 < delta <= 2.0:
        raise ValueError(f"delta must lie in (0, 2], got {delta!r}")
    k = math.ceil(2.0 / delta)
    if 2.0 / k == delta:
        k += 1
    d = n - 1
    faces = tuple((+1, ax) for ax in range(n)) + tuple((-1, ax) for ax in range(n))
    grid = np.array([(2 * i - k) / k for i in range(k + 1)])

    node_ids: dict[tuple, int] = {}
    nodes: list[tuple] = []
    tables = []
    for sign, axis in faces:
        table = np.empty((k + 1,) * d, dtype=np.int64)
        others = [c for c in range(n) if c != axis]
        for multi in np.ndindex(*table.shape):
            point = np.empty(n)
            point[axis] = float(sign)
            for j, c in enumerate(others):
                point[c] = grid[multi[j]]
            key = tuple(point)
            nid = node_ids.get(key)
            if nid is None:
                nid = len(nodes)
                node_ids[key] = nid
                nodes.append(key)
            table[multi] = nid
        tables.append(table)

    perms = list(itertools.permutations(range(d)))
    simplices = []
    face_of = []
    for f in range(len(faces)):
        table = tables[f]
        for corner in np.ndindex(*(k,) * d):
            for perm in perms:
                idx = list(corner)
                vert_ids = [int(table[tuple(idx)])]
                for ax in perm:
                    idx[ax] += 1
                    vert_ids.append(int(table[tuple(idx)]))
                simplices.append(vert_ids)
                face_of.append(f)

    node_arr = np.array(nodes)
    node_arr.flags.writeable = False
    simplex_arr = np.array(simplices, dtype=np.int64)
    simplex_arr.flags.writeable = False
    face_arr = np.array(face_of, dtype=np.int64)
    face_arr.flags.writeable = False
    return Triangulation(int(n), float(delta), k, node_arr, simplex_arr, face_arr, faces)


@lru_cache(maxsize=64)
def cached_triangulation(n: int, delta: float) -> Triangulation:
    return build_triangulation(n, delta)


# --- piecewise-linear extension and interpolation ----------------------------


def _check_node_values(tri: Triangulation, a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (tri.num_nodes,):
        raise ValueError(f"expected {tri.num_nodes} node values, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("node values must be finite")
    return a


def pl_values(tri: Triangulation, a, points) -> np.ndarray:
    """Homogeneous PL extension of node values, evaluated at rows of `points`."""
    a = _check_node_values(tri, a)
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != tri.n:
        raise ValueError(f"expected points of shape (m, {tri.n})")
    out = np.empty(len(points))
    for row, s in enumerate(points):
        m = float(np.max(np.abs(s)))
        if m == 0.0:
            out[row] = 0.0
            continue
        sid, lam = tri.locate(s / m)
        ids = tri.simplices[sid]
        acc = lam[0] * a[ids[0]]
        for j in range(1, lam.size):
            acc = acc + lam[j] * a[ids[j]]
        out[row] = m * acc
    return out


def pl_extend(tri: Triangulation, a, name: str = "") -> HomogeneousFn:
    """The node-values-to-function operator: a |-> homogeneous PL interpolant."""
    a = _check_node_values(tri, a)

    def on_sphere(s: np.ndarray) -> float:
        sid, lam = tri.locate(s)
        ids = tri.simplices[sid]
        acc = lam[0] * a[ids[0]]
        for j in range(1, lam.size):
            acc = acc + lam[j] * a[ids[j]]
        return float(acc)

    def batched(points: np.ndarray) -> np.ndarray:
        return np.array([on_sphere(p) for p in points])

    return extend(on_sphere, tri.n, batch=batched, name=name or "pl")


def hat(tri: Triangulation, j: int) -> HomogeneousFn:
    """PL bump: 1 at node j, 0 at every other node."""
    if not 0 <= j < tri.num_nodes:
        raise IndexError(f"node index {j} out of range [0, {tri.num_nodes})")
    e = np.zeros(tri.num_nodes)
    e[j] = 1.0
    return pl_extend(tri, e, name=f"hat[{j}]")


def interpolate(tri: Triangulation, fn: HomogeneousFn, name: str = "") -> HomogeneousFn:
    """Sample `fn` at the nodes and extend piecewise-linearly.

    A sup-norm contraction; it reproduces `fn` exactly at every node and
    reproduces linear functions exactly everywhere.
    """
    if fn.arity != tri.n:
        raise ValueError(f"arity mismatch: function has {fn.arity}, mesh has {tri.n}")
    return pl_extend(tri, fn.eval_many(tri.nodes), name=name or f"interp[{fn.name or 'fn'}]")


# --- max-min lattice terms ----------------------------------------------------


def _simplex_coefficients(tri: Triangulation, rhs: np.ndarray) -> np.ndarray:
    """Per-simplex linear pieces: solve V c = rhs on the vertex rays.

    rhs has shape (num_simplices, n) or (num_simplices, n, q); the result has
    the matching shape with coefficient vectors along axis 1.
    """
    verts = tri.nodes[tri.simplices]  # (q, n, n): rows are vertex rays
    stacked = rhs[..., None] if rhs.ndim == 2 else rhs
    try:
        solved = np.linalg.solve(verts, stacked)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - Kuhn cells are regular
        raise ValueError(f"degenerate simplex: vertex rays are linearly dependent ({exc})")
    return solved[..., 0] if rhs.ndim == 2 else solved


def _maxmin_term(tri: Triangulation, coeffs: np.ndarray, a: np.ndarray) -> LatticeTerm:
    """Assemble sup over cells of inf over their dominating linear pieces.

    A piece tau dominates cell sigma when its linear function sits above the
    interpolant on all of cone(sigma), which by linearity reduces to the n
    vertex checks; `slack` absorbs solver residue in those comparisons.
    """
    slack = 1e-12 * max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    values = coeffs @ tri.nodes.T  # (q, num_nodes): every piece at every node

    leaf_ids: dict[bytes, int] = {}
    leaves: list[LatticeTerm] = []

    def leaf_of(row: int) -> int:
        key = coeffs[row].tobytes()
        found = leaf_ids.get(key)
        if found is None:
            found = len(leaves)
            leaf_ids[key] = found
            leaves.append(LatticeTerm.linear(coeffs[row]))
        return found

    groups: list[tuple[int, ...]] = []
    seen_groups: set[tuple[int, ...]] = set()
    for sigma in range(tri.num_simplices):
        vids = tri.simplices[sigma]
        ok = np.all(values[:, vids] >= a[vids] - slack, axis=1)
        ok[sigma] = True
        group = tuple(sorted({leaf_of(int(t)) for t in np.nonzero(ok)[0]}))
        if group not in seen_groups:
            seen_groups.add(group)
            groups.append(group)
    return LatticeTerm.sup(
        [LatticeTerm.inf([leaves[t] for t in group]) for group in groups]
    )


def pl_to_lattice_term(tri: Triangulation, a) -> LatticeTerm:
    """Max-min lattice polynomial evaluating equal to pl_extend(tri, a).

    Construction is self-checked against the barycentric evaluation on 128
    seeded sphere points before the term is returned.
    """
    a = _check_node_values(tri, a)
    coeffs = _simplex_coefficients(tri, a[tri.simplices])
    term = _maxmin_term(tri, coeffs, a)

    probes = random_sphere_points(tri.n, 128, np.random.default_rng(20210514))
    want = pl_values(tri, a, probes)
    got = term.eval_points(probes)
    tol = 1e-10 * max(1.0, float(np.max(np.abs(a))))
    worst = float(np.max(np.abs(want - got))) if len(probes) else 0.0
    if worst > tol:
        raise RuntimeError(
            f"max-min construction failed its self-check: worst gap {worst:.3e} > {tol:.1e}"
        )
    return term


def hat_terms(tri: Triangulation) -> list[LatticeTerm]:
    """Max-min terms of all hat functions, via one batched solve."""
    q, nn = tri.num_simplices, tri.n
    rhs = np.zeros((q, nn, tri.num_nodes))
    for sigma in range(q):
        for v, nid in enumerate(tri.simplices[sigma]):
            rhs[sigma, v, nid] = 1.0
    all_coeffs = _simplex_coefficients(tri, rhs)  # (q, n, num_nodes)
    out = []
    for j in range(tri.num_nodes):
        e = np.zeros(tri.num_nodes)
        e[j] = 1.0
        out.append(_maxmin_term(tri, np.ascontiguousarray(all_coeffs[:, :, j]), e))
    return out


# --- misc helpers -------------------------------------------------------------


def random_sphere_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Sample uniformly on the cube boundary: a face, then a point inside it."""
    faces = rng.integers(0, 2 * n, size=count)
    pts = rng.uniform(-1.0, 1.0, size=(count, n))
    axes = faces % n
    signs = np.where(faces < n, 1.0, -1.0)
    pts[np.arange(count), axes] = signs
    return pts


def mesh_to_csv(tri: Triangulation) -> str:
    """Node and simplex tables in one CSV, one row per entity."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "id", "face"] + [f"c{i}" for i in range(tri.n)])
    for i, row in enumerate(tri.nodes):
        writer.writerow(["node", i, ""] + [repr(float(v)) for v in row])
    for sid, ids in enumerate(tri.simplices):
        writer.writerow(["simplex", sid, int(tri.face_of[sid])] + [int(v) for v in ids])
    return buf.getvalue()
