"""Continuous positively homogeneous functions R^n -> R.

Restriction to the unit sphere of l_inf^n identifies these functions with
continuous functions on the sphere; `extend` realizes the inverse of that
restriction.  Homogeneity is a hard precondition for the function calculus,
so constructors check it by sampling and fail loudly on violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "HomogeneityReport",
    "HomogeneousFn",
    "check_homogeneous",
    "coordinate_projection",
    "extend",
    "sup_norm",
    "euclidean_norm",
    "max_norm_fn",
    "p_power_sum_fn",
]


@dataclass(frozen=True)
class HomogeneityReport:
    """Outcome of a sampled check of F(lam*s) = lam*F(s) for lam >= 0."""

    passed: bool
    worst: float  # worst relative violation observed
    witness: tuple | None  # sample point achieving the worst violation
    scale: float | None  # the lam at that sample
    samples: int
    tol: float


def check_homogeneous(
    fn: Callable[[np.ndarray], float],
    arity: int,
    samples: int = 64,
    tol: float = 1e-10,
    seed: int = 0,
) -> HomogeneityReport:
    """Sample F(lam*s) against lam*F(s) and report the worst relative violation.

    Never raises on a violation; callers that need a hard guarantee inspect
    the report.  lam = 0 is always among the samples, which folds in the
    F(0) = 0 requirement.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    worst_lam = None
    for i in range(samples):
        s = rng.uniform(-1.0, 1.0, arity)
        while np.max(np.abs(s)) < 1e-2:
            s = rng.uniform(-1.0, 1.0, arity)
        if i == 0:
            lam = 0.0
        elif i == 1:
            lam = 2.0
        else:
            lam = float(rng.uniform(0.0, 3.0))
        a = float(fn(lam * s))
        b = lam * float(fn(s))
        rel = abs(a - b) / max(1.0, abs(a), abs(b))
        if rel > worst:
            worst, witness, worst_lam = rel, tuple(float(c) for c in s), lam
    return HomogeneityReport(
        passed=worst <= tol,
        worst=worst,
        witness=witness,
        scale=worst_lam,
        samples=samples,
        tol=tol,
    )


class HomogeneousFn:
    """A continuous positively homogeneous function of `arity` real variables.

    Carries the scalar evaluator, an optional vectorized evaluator over rows
    of points, and an optional certified modulus of continuity: a callable
    d -> eps with |F(s) - F(t)| <= eps whenever ||s - t||_inf <= d on the
    sphere.  Unless `verify=False`, construction runs a sampled homogeneity
    check and raises on failure: the calculus is undefined off the
    homogeneous functions.
    """

    __slots__ = ("arity", "modulus", "name", "_eval", "_batch")

    def __init__(
        self,
        arity: int,
        evaluator: Callable[[np.ndarray], float],
        *,
        batch: Callable[[np.ndarray], np.ndarray] | None = None,
        modulus: Callable[[float], float] | None = None,
        name: str = "",
        verify: bool = True,
        samples: int = 32,
        tol: float = 1e-10,
        seed: int = 0,
    ) -> None:
        if arity < 1:
            raise ValueError(f"arity must be >= 1, got {arity}")
        self.arity = int(arity)
        self._eval = evaluator
        self._batch = batch
        self.modulus = modulus
        self.name = name
        if verify:
            report = check_homogeneous(evaluator, arity, samples=samples, tol=tol, seed=seed)
            if not report.passed:
                raise ValueError(
                    f"evaluator is not positively homogeneous: worst relative "
                    f"violation {report.worst:.3e} (tol {tol:.1e}) at "
                    f"s={report.witness}, lam={report.scale}"
                )

    def __call__(self, s) -> float:
        s = np.asarray(s, dtype=float)
        if s.shape != (self.arity,):
            raise ValueError(f"expected a point of shape ({self.arity},), got {s.shape}")
        return float(self._eval(s))

    def eval_many(self, points) -> np.ndarray:
        """Evaluate at rows of `points`, shape (m, arity) -> (m,)."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.arity:
            raise ValueError(f"expected points of shape (m, {self.arity})")
        if self._batch is not None:
            return np.asarray(self._batch(points), dtype=float)
        return np.array([float(self._eval(p)) for p in points])

    def __repr__(self) -> str:
        label = self.name or "fn"
        return f"HomogeneousFn({label}, arity={self.arity})"


def coordinate_projection(i: int, arity: int) -> HomogeneousFn:
    """The projection s -> s[i] (0-based); the calculus maps it to x_i."""
    if not 0 <= i < arity:
        raise ValueError(f"projection index {i} out of range for arity {arity}")
    return HomogeneousFn(
        arity,
        lambda s: float(s[i]),
        batch=lambda P: np.array(P[:, i], dtype=float),
        modulus=lambda d: d,
        name=f"proj{i}",
        verify=False,  # exact by construction
    )


def extend(
    sphere_fn: Callable[[np.ndarray], float],
    arity: int,
    *,
    batch: Callable[[np.ndarray], np.ndarray] | None = None,
    modulus: Callable[[float], float] | None = None,
    name: str = "",
) -> HomogeneousFn:
    """Positively homogeneous extension of a function given on the sphere.

    F(s) = ||s||_inf * sphere_fn(s / ||s||_inf) and F(0) = 0.  Homogeneity is
    structural here, so no sampled check is run.
    """

    def evaluator(s: np.ndarray) -> float:
        m = float(np.max(np.abs(s)))
        if m == 0.0:
            return 0.0
        return m * float(sphere_fn(s / m))

    def batched(points: np.ndarray) -> np.ndarray:
        if batch is None:
            return np.array([evaluator(p) for p in points])
        m = np.max(np.abs(points), axis=1)
        out = np.zeros(len(points))
        hit = m > 0.0
        if np.any(hit):
            out[hit] = m[hit] * np.asarray(batch(points[hit] / m[hit, None]), dtype=float)
        return out

    return HomogeneousFn(
        arity, evaluator, batch=batched, modulus=modulus, name=name, verify=False
    )


def sup_norm(fn: HomogeneousFn, tri, refine: int = 2, include=None) -> float:
    """Max of |fn| over the mesh nodes plus dyadic refinement samples.

    Always a lower bound of the true sup over the sphere; it converges as the
    mesh refines.  `include` appends extra sphere points to the sample, which
    callers use to make the bound cover the points they actually care about.
    """
    pts = tri.sphere_samples(refine)
    if include is not None:
        include = np.asarray(include, dtype=float)
        if include.size:
            pts = np.vstack([pts, include])
    return float(np.max(np.abs(fn.eval_many(pts))))


# --- canned examples with certified moduli ----------------------------------


def euclidean_norm(arity: int = 2) -> HomogeneousFn:
    """s -> ||s||_2, with Lipschitz bound sqrt(arity) w.r.t. the l_inf metric."""
    root = math.sqrt(arity)
    return HomogeneousFn(
        arity,
        lambda s: float(np.sqrt(np.dot(s, s))),
        batch=lambda P: np.sqrt(np.einsum("ij,ij->i", P, P)),
        modulus=lambda d: root * d,
        name="euclidean",
        verify=False,
    )


def max_norm_fn(arity: int = 2) -> HomogeneousFn:
    """s -> ||s||_inf; constant 1 on the sphere, Lipschitz 1."""
    return HomogeneousFn(
        arity,
        lambda s: float(np.max(np.abs(s))),
        batch=lambda P: np.max(np.abs(P), axis=1),
        modulus=lambda d: d,
        name="maxnorm",
        verify=False,
    )


def p_power_sum_fn(p: float, arity: int = 2) -> HomogeneousFn:
    """s -> (sum |s_i|^p)^(1/p) for 0 < p < inf, overflow-safe for large p.

    A norm with Lipschitz bound arity^(1/p) when p >= 1; for 0 < p < 1 it is
    still positively homogeneous (no modulus is attached then).
    """
    if not 0 < p < math.inf:
        raise ValueError(f"exponent must satisfy 0 < p < inf, got {p!r}")
    lip = arity ** (1.0 / p)

    def evaluator(s: np.ndarray) -> float:
        a = np.abs(s)
        m = float(a.max())
        if m == 0.0:
            return 0.0
        return m * float(np.sum((a / m) ** p) ** (1.0 / p))

    def batched(P: np.ndarray) -> np.ndarray:
        a = np.abs(P)
        m = a.max(axis=1)
        out = np.zeros(len(P))
        hit = m > 0.0
        if np.any(hit):
            out[hit] = m[hit] * np.sum((a[hit] / m[hit, None]) ** p, axis=1) ** (1.0 / p)
        return out

    return HomogeneousFn(
        arity,
        evaluator,
        batch=batched,
        modulus=(lambda d: lip * d) if p >= 1 else None,
        name=f"pnorm[{p}]",
        verify=False,
    )
