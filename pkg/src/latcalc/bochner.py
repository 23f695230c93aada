"""Finite measures, homogeneous kernels, and vector-valued integration.

A measure is either a finite list of weighted atoms or a quadrature rule on
an interval.  Kernels carry a scalar evaluator f(s, omega) plus optional
vectorized paths and an optional exact slice-sup; integrating out omega
yields a positively homogeneous scalar function, and integrating a
vector-valued map yields a lattice vector.

Reductions accumulate in ascending atom order with one addition per atom, so
scalar and vector integrals of the same data perform identical per-coordinate
operation sequences and commute with coordinate functionals exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .homogeneous import HomogeneousFn, sup_norm
from .lattice import LatticeVector

__all__ = [
    "MeasureSpace",
    "Kernel",
    "integrate_kernel",
    "slice_sup",
    "check_sup_integrable",
    "SupIntegrabilityReport",
    "bochner_integral",
]


class MeasureSpace:
    """Weighted atoms, or a quadrature discretization of an interval."""

    __slots__ = ("kind", "points", "weights", "rule", "bounds")

    def __init__(self, kind, points, weights, rule=None, bounds=None):
        points = np.asarray(points, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if points.ndim != 1 or points.size < 1:
            raise ValueError("need at least one atom or quadrature node")
        if weights.shape != points.shape:
            raise ValueError("weights must match points")
        if not np.all(np.isfinite(points)) or not np.all(np.isfinite(weights)):
            raise ValueError("points and weights must be finite")
        if np.any(weights < 0):
            raise ValueError("weights must be nonnegative")
        points.flags.writeable = False
        weights.flags.writeable = False
        self.kind = kind
        self.points = points
        self.weights = weights
        self.rule = rule
        self.bounds = bounds

    @classmethod
    def discrete(cls, points, weights) -> "MeasureSpace":
        return cls("discrete", points, weights)

    @classmethod
    def interval_quadrature(
        cls, a: float, b: float, n: int, rule: str = "trapezoid"
    ) -> "MeasureSpace":
        """Uniform quadrature on [a, b].

        trapezoid: nodes a + i*h for i < n with equal weights h = (b-a)/n;
        for (b-a)-periodic integrands this is the trapezoidal rule with the
        duplicate endpoint merged, and it is spectrally accurate there.
        midpoint: nodes a + (i+1/2)*h, also with weights h.
        """
        if not a < b:
            raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
        if n < 1:
            raise ValueError(f"need at least one node, got {n!r}")
        if rule not in ("trapezoid", "midpoint"):
            raise ValueError(f"unknown quadrature rule {rule!r}")
        h = (b - a) / n
        i = np.arange(n)
        if rule == "trapezoid":
            points = a + i * h
        else:
            points = a + (i + 0.5) * h
        weights = np.full(n, h)
        return cls("interval", points, weights, rule=rule, bounds=(float(a), float(b)))

    def refined(self, n: int) -> "MeasureSpace":
        if self.kind != "interval":
            raise ValueError("only interval quadratures can be refined")
        return MeasureSpace.interval_quadrature(self.bounds[0], self.bounds[1], n, self.rule)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def total_mass(self) -> float:
        return float(np.add.accumulate(self.weights)[-1])

    def __repr__(self) -> str:
        if self.kind == "discrete":
            return f"MeasureSpace(discrete, atoms={self.size}, mass={self.total_mass})"
        a, b = self.bounds
        return f"MeasureSpace([{a}, {b}], {self.rule}, n={self.size})"


@dataclass(frozen=True)
class Kernel:
    """A jointly evaluable family of homogeneous functions f(., omega).

    batch_omegas/batch_points vectorize over the second/first argument; when
    present they must reproduce `eval` elementwise.  sup_slice, when present,
    returns the exact sup of |f(., omega)| over the sphere and short-circuits
    the mesh-based bound.  modulus, when present, certifies
    |f(s,omega) - f(t,omega)| <= modulus(||s - t||_inf) uniformly in omega.
    """

    arity: int
    eval: Callable[[np.ndarray, float], float]
    name: str = ""
    batch_omegas: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    batch_points: Callable[[np.ndarray, float], np.ndarray] | None = None
    sup_slice: Callable[[float], float] | None = None
    modulus: Callable[[float], float] | None = None

    def eval_omegas(self, s: np.ndarray, omegas: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        omegas = np.asarray(omegas, dtype=float)
        if self.batch_omegas is not None:
            return np.asarray(self.batch_omegas(s, omegas), dtype=float)
        return np.array([float(self.eval(s, w)) for w in omegas])

    def eval_points(self, points: np.ndarray, omega: float) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.batch_points is not None:
            return np.asarray(self.batch_points(points, omega), dtype=float)
        return np.array([float(self.eval(p, omega)) for p in points])

    def slice_fn(self, omega: float) -> HomogeneousFn:
        """f(., omega) as a HomogeneousFn; the contract is the kernel's."""
        return HomogeneousFn(
            self.arity,
            lambda s: float(self.eval(s, omega)),
            batch=lambda P: self.eval_points(P, omega),
            name=f"{self.name or 'kernel'}[omega={omega}]",
            verify=False,
        )


def integrate_kernel(kernel: Kernel, measure: MeasureSpace, name: str = "") -> HomogeneousFn:
    """F(s) = sum_i w_i f(s, omega_i), accumulated in ascending atom order."""
    w = measure.weights
    om = measure.points

    def evaluator(s: np.ndarray) -> float:
        vals = kernel.eval_omegas(s, om)
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise ValueError(f"kernel value not finite at s={s!r}, omega={om[bad]!r}")
        return float(np.add.accumulate(w * vals)[-1])

    def batched(points: np.ndarray) -> np.ndarray:
        return np.array([evaluator(p) for p in points])

    return HomogeneousFn(
        kernel.arity,
        evaluator,
        batch=batched,
        modulus=kernel.modulus and (lambda d: kernel.modulus(d) * measure.total_mass),
        name=name or f"integral[{kernel.name or 'kernel'}]",
        verify=False,
    )


def slice_sup(
    kernel: Kernel, omega: float, tri=None, refine: int = 2
) -> float:
    """Sup of |f(., omega)| over the sphere: exact if the kernel knows it,
    otherwise a mesh lower bound."""
    if kernel.sup_slice is not None:
        return float(kernel.sup_slice(omega))
    if tri is None:
        raise ValueError("kernel has no exact slice sup; a mesh is required")
    return sup_norm(kernel.slice_fn(omega), tri, refine=refine)


@dataclass(frozen=True)
class SupIntegrabilityReport:
    """Outcome of the heuristic integrability check for omega -> sup|f(., omega)|.

    For atoms, partial_sums holds the prefix sums of w_i * M(omega_i); for
    quadratures it holds the integral estimates at each dyadic refinement.
    """

    verdict: str  # "CONVERGENT" | "DIVERGENT"
    value: float
    partial_sums: np.ndarray
    detail: str

    @property
    def divergent(self) -> bool:
        return self.verdict == "DIVERGENT"


def check_sup_integrable(
    kernel: Kernel,
    measure: MeasureSpace,
    tri=None,
    *,
    tol: float = 1e-8,
    window: int = 16,
    rtol: float = 1e-4,
) -> SupIntegrabilityReport:
    """Heuristic detector for a non-integrable slice-sup function.

    Atoms: flag DIVERGENT when the last `window` prefix-sum increments still
    exceed `tol`.  Quadratures: compare dyadic node-count refinements and
    flag DIVERGENT when the estimates fail to stabilize to `rtol` (a literal
    tail-increment rule would misfire there, since refining a quadrature
    re-slices mass instead of adding it).
    """
    if measure.kind == "discrete":
        sups = np.array([slice_sup(kernel, w, tri) for w in measure.points])
        partial = np.cumsum(measure.weights * sups)
        value = float(partial[-1])
        if not np.all(np.isfinite(partial)):
            return SupIntegrabilityReport("DIVERGENT", value, partial, "non-finite partial sums")
        if measure.size > window:
            growth = float(partial[-1] - partial[-1 - window])
            if growth > tol:
                return SupIntegrabilityReport(
                    "DIVERGENT",
                    value,
                    partial,
                    f"tail of the prefix sums still grows by {growth:.6g} over the last "
                    f"{window} atoms (tol {tol:.1e})",
                )
        return SupIntegrabilityReport("CONVERGENT", value, partial, "prefix sums stabilized")

    sizes = []
    n = measure.size
    for _ in range(3):
        sizes.append(max(8, n))
        if n <= 8:
            break
        n //= 2
    sizes = sorted(set(sizes))
    estimates = []
    for n in sizes:
        refined = measure.refined(n)
        sups = np.array([slice_sup(kernel, w, tri) for w in refined.points])
        estimates.append(float(np.add.accumulate(refined.weights * sups)[-1]))
    estimates_arr = np.array(estimates)
    value = float(estimates_arr[-1])
    if not np.all(np.isfinite(estimates_arr)):
        return SupIntegrabilityReport("DIVERGENT", value, estimates_arr, "non-finite estimates")
    if len(estimates) >= 2:
        drift = abs(estimates[-1] - estimates[-2])
        if drift > max(tol, rtol * abs(value)):
            return SupIntegrabilityReport(
                "DIVERGENT",
                value,
                estimates_arr,
                f"refinement estimates drift by {drift:.6g} (rtol {rtol:.1e})",
            )
    return SupIntegrabilityReport("CONVERGENT", value, estimates_arr, "refinements stabilized")


def bochner_integral(
    g: Callable[[float], LatticeVector], measure: MeasureSpace
) -> LatticeVector:
    """sum_i w_i g(omega_i), accumulated coordinatewise in atom order."""
    w = measure.weights
    om = measure.points
    first = g(float(om[0]))
    space = first.space
    acc = w[0] * first.coords
    for i in range(1, measure.size):
        v = g(float(om[i]))
        if v.space != space:
            raise ValueError("integrand values must share one space")
        acc = acc + w[i] * v.coords
    return LatticeVector(space, acc)
