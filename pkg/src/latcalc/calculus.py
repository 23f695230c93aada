"""Function calculus on concrete lattices: plug vectors into homogeneous maps.

Three routes compute the same object.  The pointwise route evaluates H at the
coordinate tuples (x_1[k], ..., x_n[k]).  The term route folds a max-min
lattice term structurally over the vectors.  The interpolated route replaces
H by its piecewise-linear interpolant on a sphere mesh, converts that to a
lattice term, and reports a computable error certificate alongside the
result.

The pointwise and term routes share their elementwise operation sequences,
so on a common input they agree bitwise, not just within tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .homogeneous import HomogeneousFn, p_power_sum_fn
from .lattice import LatticeSpace, LatticeVector, ideal_norm
from .terms import LatticeTerm
from .triangulation import Triangulation, cached_triangulation, pl_to_lattice_term

__all__ = [
    "CalculusContext",
    "InterpolatedResult",
    "phi_pointwise",
    "phi_term",
    "phi_approx",
    "p_sum",
    "term_function",
]


class CalculusContext:
    """A tuple of lattice vectors x_1..x_n plus the positive element e.

    e defaults to |x_1| v ... v |x_n|; a custom e must be nonnegative and
    must dominate every x_i up to a scalar (the x_i live in its ideal).
    """

    __slots__ = ("space", "vectors", "e", "_rows", "_dominator")

    def __init__(self, space: LatticeSpace, vectors, e: LatticeVector | None = None):
        vectors = tuple(vectors)
        if not vectors:
            raise ValueError("need at least one vector")
        for v in vectors:
            if v.space != space:
                raise ValueError("all vectors must live in the given space")
        self.space = space
        self.vectors = vectors
        dom = abs(vectors[0])
        for v in vectors[1:]:
            dom = dom.sup(abs(v))
        self._dominator = dom
        if e is None:
            e = dom
        else:
            if e.space != space:
                raise ValueError("e must live in the same space")
            if np.any(e.coords < 0):
                raise ValueError("e must be nonnegative")
            for v in vectors:
                if ideal_norm(v, e) == np.inf:
                    raise ValueError("every vector must lie in the ideal of e")
        self.e = e
        rows = np.vstack([v.coords for v in vectors])
        rows.flags.writeable = False
        self._rows = rows

    @property
    def arity(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return self.space.dim

    def rows(self) -> np.ndarray:
        """(arity, dim) matrix whose row i is x_i."""
        return self._rows

    def points(self) -> np.ndarray:
        """(dim, arity) matrix whose row k is the coordinate tuple at k."""
        return self._rows.T

    def dominator(self) -> LatticeVector:
        """|x_1| v ... v |x_n|, the element behind the norm bound."""
        return self._dominator

    def unit_points(self) -> np.ndarray:
        """Nonzero coordinate tuples scaled onto the sup-norm sphere."""
        pts = self._rows.T
        m = np.max(np.abs(pts), axis=1)
        hit = m > 0.0
        return pts[hit] / m[hit, None]

    def __repr__(self) -> str:
        return f"CalculusContext(arity={self.arity}, space={self.space!r})"


def _check_arity(ctx: CalculusContext, arity: int) -> None:
    if arity != ctx.arity:
        raise ValueError(f"arity mismatch: function has {arity}, context has {ctx.arity}")


def phi_pointwise(ctx: CalculusContext, fn: HomogeneousFn) -> LatticeVector:
    """Coordinate k of the result is fn(x_1[k], ..., x_n[k])."""
    _check_arity(ctx, fn.arity)
    return LatticeVector(ctx.space, fn.eval_many(ctx.points()))


def phi_term(ctx: CalculusContext, term: LatticeTerm) -> LatticeVector:
    """Structural evaluation: leaves become linear combinations of the x_i,
    interior nodes become the corresponding lattice operations."""
    _check_arity(ctx, term.arity)

    def walk(t: LatticeTerm) -> LatticeVector:
        if t.kind == "linear":
            acc = t.coeffs[0] * ctx.vectors[0]
            for i in range(1, t.arity):
                acc = acc + t.coeffs[i] * ctx.vectors[i]
            return acc
        if t.kind == "sup":
            acc = walk(t.children[0])
            for ch in t.children[1:]:
                acc = acc.sup(walk(ch))
            return acc
        if t.kind == "inf":
            acc = walk(t.children[0])
            for ch in t.children[1:]:
                acc = acc.inf(walk(ch))
            return acc
        if t.kind == "sum":
            acc = walk(t.children[0])
            for ch in t.children[1:]:
                acc = acc + walk(ch)
            return acc
        return t.factor * walk(t.children[0])

    return walk(term)


def term_function(term: LatticeTerm, name: str = "") -> HomogeneousFn:
    """The term's evaluator as a HomogeneousFn (homogeneous by construction)."""
    return HomogeneousFn(
        term.arity,
        term.__call__,
        batch=term.eval_points,
        name=name or "term",
        verify=False,
    )


@dataclass(frozen=True)
class InterpolatedResult:
    """Output of the interpolated route with its error certificate.

    certificate = (sampled sup of |fn - term| over the sphere) * || v|x_i| ||.
    The sample set contains the scaled coordinate tuples of the context, so
    the distance to the pointwise route is bounded by the certificate.
    """

    vector: LatticeVector
    certificate: float
    delta: float
    mesh_diameter: float
    sampled_gap: float
    node_count: int
    term: LatticeTerm


def phi_approx(
    ctx: CalculusContext,
    fn: HomogeneousFn,
    delta: float,
    refine: int = 2,
) -> InterpolatedResult:
    """Interpolated route: mesh at `delta`, PL surrogate, max-min term.

    Returns the term route applied to the surrogate plus a certificate that
    bounds the distance to phi_pointwise(ctx, fn).
    """
    _check_arity(ctx, fn.arity)
    tri = cached_triangulation(ctx.arity, delta)
    node_vals = fn.eval_many(tri.nodes)
    term = pl_to_lattice_term(tri, node_vals)
    vec = phi_term(ctx, term)

    samples = tri.sphere_samples(refine)
    units = ctx.unit_points()
    if units.size:
        samples = np.vstack([samples, units])
    gap = float(np.max(np.abs(fn.eval_many(samples) - term.eval_points(samples))))
    certificate = gap * ctx.space.norm_of(ctx.dominator().coords)
    return InterpolatedResult(
        vector=vec,
        certificate=certificate,
        delta=delta,
        mesh_diameter=tri.mesh_diameter,
        sampled_gap=gap,
        node_count=tri.num_nodes,
        term=term,
    )


def p_sum(ctx: CalculusContext, p: float) -> LatticeVector:
    """(sum_i |x_i|^p)^(1/p) computed through the pointwise route."""
    if not 0 < p < np.inf:
        raise ValueError(f"exponent must satisfy 0 < p < inf, got {p!r}")
    return phi_pointwise(ctx, p_power_sum_fn(p, ctx.arity))
