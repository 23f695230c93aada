"""Lattice terms over linear functionals.

A term is an expression tree whose leaves are linear maps s -> c . s and
whose interior nodes are pointwise sup, inf, sum, or scalar multiples.  Every
term is positively homogeneous by construction, and the closure of these
expressions under the four node kinds is exactly what the function calculus
can evaluate structurally on tuples of lattice vectors.

All evaluation goes through one code path, `eval_on_rows`, operating on an
(arity, m) array whose row i holds the i-th argument at m evaluation sites.
Scalar evaluation and vector-tuple evaluation are the same sequence of
elementwise IEEE operations, so the two calculus routes built on it agree
bitwise, not merely approximately.
"""

from __future__ import annotations

import numpy as np

__all__ = ["LatticeTerm"]

_KINDS = ("linear", "sup", "inf", "sum", "scale")


class LatticeTerm:
    """Immutable max/min/sum/scale expression over linear leaves."""

    __slots__ = ("kind", "arity", "coeffs", "children", "factor")

    def __init__(self, kind, arity, coeffs=None, children=None, factor=None):
        if kind not in _KINDS:
            raise ValueError(f"unknown term kind {kind!r}")
        self.kind = kind
        self.arity = int(arity)
        self.coeffs = coeffs
        self.children = children
        self.factor = factor

    # --- constructors ---------------------------------------------------------

    @classmethod
    def linear(cls, coeffs) -> "LatticeTerm":
        """Leaf s -> coeffs . s."""
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise ValueError("coefficients must be a nonempty 1-d array")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs.flags.writeable = False
        return cls("linear", coeffs.size, coeffs=coeffs)

    @classmethod
    def _node(cls, kind, children) -> "LatticeTerm":
        children = list(children)
        if not children:
            raise ValueError(f"{kind} node needs at least one child")
        arity = children[0].arity
        for ch in children:
            if not isinstance(ch, LatticeTerm):
                raise TypeError("children must be LatticeTerm instances")
            if ch.arity != arity:
                raise ValueError("children must share one arity")
        if len(children) == 1:
            return children[0]
        return cls(kind, arity, children=tuple(children))

    @classmethod
    def sup(cls, children) -> "LatticeTerm":
        return cls._node("sup", children)

    @classmethod
    def inf(cls, children) -> "LatticeTerm":
        return cls._node("inf", children)

    @classmethod
    def add(cls, children) -> "LatticeTerm":
        return cls._node("sum", children)

    @classmethod
    def scale(cls, factor: float, child: "LatticeTerm") -> "LatticeTerm":
        if not isinstance(child, LatticeTerm):
            raise TypeError("child must be a LatticeTerm")
        if not np.isfinite(factor):
            raise ValueError("scale factor must be finite")
        return cls("scale", child.arity, children=(child,), factor=float(factor))

    @classmethod
    def absolute(cls, child: "LatticeTerm") -> "LatticeTerm":
        """|t| = t v (-t)."""
        return cls.sup([child, cls.scale(-1.0, child)])

    # --- evaluation -----------------------------------------------------------

    def eval_on_rows(self, rows: np.ndarray) -> np.ndarray:
        """Evaluate over an (arity, m) array of arguments; returns shape (m,).

        Accumulations run in fixed child/coefficient order so that results are
        reproducible and identical across batch shapes.
        """
        if self.kind == "linear":
            acc = self.coeffs[0] * rows[0]
            for i in range(1, self.arity):
                acc = acc + self.coeffs[i] * rows[i]
            return acc
        if self.kind == "sup":
            acc = self.children[0].eval_on_rows(rows)
            for ch in self.children[1:]:
                acc = np.maximum(acc, ch.eval_on_rows(rows))
            return acc
        if self.kind == "inf":
            acc = self.children[0].eval_on_rows(rows)
            for ch in self.children[1:]:
                acc = np.minimum(acc, ch.eval_on_rows(rows))
            return acc
        if self.kind == "sum":
            acc = self.children[0].eval_on_rows(rows)
            for ch in self.children[1:]:
                acc = acc + ch.eval_on_rows(rows)
            return acc
        return self.factor * self.children[0].eval_on_rows(rows)

    def __call__(self, s) -> float:
        s = np.asarray(s, dtype=float)
        if s.shape != (self.arity,):
            raise ValueError(f"expected a point of shape ({self.arity},), got {s.shape}")
        return float(self.eval_on_rows(s[:, None])[0])

    def eval_points(self, points) -> np.ndarray:
        """Evaluate at rows of `points`, shape (m, arity) -> (m,)."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.arity:
            raise ValueError(f"expected points of shape (m, {self.arity})")
        return self.eval_on_rows(points.T)

    # --- structure ------------------------------------------------------------

    def size(self) -> int:
        """Number of nodes in the tree (shared leaves counted per reference)."""
        if self.kind == "linear":
            return 1
        return 1 + sum(ch.size() for ch in self.children)

    def depth(self) -> int:
        if self.kind == "linear":
            return 1
        return 1 + max(ch.depth() for ch in self.children)

    def __repr__(self) -> str:
        if self.kind == "linear":
            return f"LatticeTerm(linear, arity={self.arity})"
        return f"LatticeTerm({self.kind}, arity={self.arity}, size={self.size()})"
