"""Concrete Banach lattices: R^dim with the coordinatewise order.

A space fixes a dimension and a norm (sup norm or a p-norm); vectors are
immutable coordinate arrays.  Sampled function spaces are the same thing with
dim equal to the number of sample points, which is all the generality the
rest of the package needs.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["LatticeSpace", "LatticeVector", "coordinate_functional", "ideal_norm"]


class LatticeSpace:
    """Coordinatewise-ordered R^dim, normed by sup (p=None) or a p-norm (p >= 1)."""

    __slots__ = ("dim", "p")

    def __init__(self, dim: int, p: float | None = None) -> None:
        if not isinstance(dim, (int, np.integer)) or dim < 1:
            raise ValueError(f"dim must be a positive integer, got {dim!r}")
        if p is not None and not p >= 1:
            raise ValueError(f"p-norm exponent must satisfy p >= 1, got {p!r}")
        self.dim = int(dim)
        self.p = None if p is None else float(p)

    def vector(self, coords) -> "LatticeVector":
        return LatticeVector(self, coords)

    def zero(self) -> "LatticeVector":
        return LatticeVector(self, np.zeros(self.dim))

    def norm_of(self, coords) -> float:
        """Norm of a raw coordinate array (scaled to dodge overflow for large p)."""
        a = np.abs(np.asarray(coords, dtype=float))
        m = float(a.max())
        if self.p is None or m == 0.0:
            return m
        return m * float(np.sum((a / m) ** self.p) ** (1.0 / self.p))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatticeSpace)
            and self.dim == other.dim
            and self.p == other.p
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.p))

    def __repr__(self) -> str:
        norm = "sup" if self.p is None else f"p={self.p}"
        return f"LatticeSpace(dim={self.dim}, {norm})"


def _require_same_space(x: "LatticeVector", y: "LatticeVector") -> None:
    if x.space != y.space:
        raise ValueError(f"vectors live in different spaces: {x.space} vs {y.space}")


class LatticeVector:
    """Immutable element of a LatticeSpace.

    Lattice operations are coordinatewise; arithmetic returns new vectors in
    the same space.  Coordinates are finite float64 and read-only.
    """

    __slots__ = ("space", "coords")

    # Keep numpy scalars from absorbing us in mixed products: with ufunc
    # dispatch declined, np.float64 * vec falls back to our __rmul__.
    __array_ufunc__ = None

    def __init__(self, space: LatticeSpace, coords) -> None:
        arr = np.array(coords, dtype=float)
        if arr.shape != (space.dim,):
            raise ValueError(
                f"dimension mismatch: expected shape ({space.dim},), got {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite")
        arr.flags.writeable = False
        self.space = space
        self.coords = arr

    # --- lattice operations -------------------------------------------------

    def sup(self, other: "LatticeVector") -> "LatticeVector":
        _require_same_space(self, other)
        return LatticeVector(self.space, np.maximum(self.coords, other.coords))

    def inf(self, other: "LatticeVector") -> "LatticeVector":
        _require_same_space(self, other)
        return LatticeVector(self.space, np.minimum(self.coords, other.coords))

    def __abs__(self) -> "LatticeVector":
        return LatticeVector(self.space, np.abs(self.coords))

    # --- vector arithmetic --------------------------------------------------

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        _require_same_space(self, other)
        return LatticeVector(self.space, self.coords + other.coords)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        _require_same_space(self, other)
        return LatticeVector(self.space, self.coords - other.coords)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.space, -self.coords)

    def __mul__(self, scalar) -> "LatticeVector":
        if not isinstance(scalar, (int, float, np.integer, np.floating)):
            return NotImplemented
        return LatticeVector(self.space, float(scalar) * self.coords)

    __rmul__ = __mul__

    # --- queries --------------------------------------------------------------

    def norm(self) -> float:
        return self.space.norm_of(self.coords)

    def __getitem__(self, k: int) -> float:
        return float(self.coords[k])

    def __len__(self) -> int:
        return self.space.dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LatticeVector)
            and self.space == other.space
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((self.space, self.coords.tobytes()))

    def __repr__(self) -> str:
        return f"LatticeVector({np.array2string(self.coords, threshold=8)})"


def coordinate_functional(x: LatticeVector, k: int) -> float:
    """Point evaluation x -> x[k]: linear, and preserves sup/inf coordinatewise."""
    if not 0 <= k < x.space.dim:
        raise IndexError(f"coordinate index {k} out of range for dim {x.space.dim}")
    return float(x.coords[k])


def ideal_norm(x: LatticeVector, e: LatticeVector) -> float:
    """Least lam >= 0 with |x| <= lam * e coordinatewise, convention 0/0 = 0.

    Returns math.inf when no multiple of e dominates |x| (x lies outside the
    principal ideal generated by e).  Infeasibility is a value, not an
    exception, so callers can branch on it.
    """
    _require_same_space(x, e)
    if np.any(e.coords < 0):
        raise ValueError("ideal_norm requires e >= 0")
    ax = np.abs(x.coords)
    support = e.coords > 0
    if np.any(ax[~support] > 0):
        return math.inf
    if not np.any(support):
        return 0.0
    return float(np.max(ax[support] / e.coords[support], initial=0.0))
