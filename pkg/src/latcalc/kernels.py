"""Concrete kernels: the circle-average identity, the divergent tent family,
and two degenerate kernels used by the refusal paths.

The tent family is arranged so that every quantity the harness reports is a
dyadic rational: powers of two are produced with ldexp, branch tests compare
exact products, and the prefix sums of weight * peak are exact integers.
"""

from __future__ import annotations

import math

import numpy as np

from .bochner import Kernel, MeasureSpace

__all__ = [
    "TWO_PI",
    "kalton_kernel",
    "counterexample_kernel",
    "zero_kernel",
    "square_kernel",
    "resolve_kernel",
    "KERNEL_NAMES",
]

TWO_PI = 2.0 * math.pi


# --- circle-average kernel ----------------------------------------------------


def _circle_values(s0, s1, cos_om):
    # |s0 + e^{i om} s1| expanded; the clamp guards cancellation at radius 0
    rad = s0 * s0 + 2.0 * s0 * s1 * cos_om + s1 * s1
    return np.sqrt(np.maximum(rad, 0.0))


def kalton_kernel() -> Kernel:
    """f((s,t), om) = |s + e^{i om} t|, the modulus of a rotated complex sum.

    Averaged over [0, 2pi] it gives a lattice expression for |u + iv|; the
    slice sup over the sphere is sqrt(2 + 2|cos om|), attained at corners.
    """
    return Kernel(
        arity=2,
        eval=lambda s, om: float(_circle_values(s[0], s[1], np.cos(om))),
        name="kalton",
        batch_omegas=lambda s, om: _circle_values(s[0], s[1], np.cos(om)),
        batch_points=lambda P, om: _circle_values(P[:, 0], P[:, 1], np.cos(om)),
        sup_slice=lambda om: math.sqrt(2.0 + 2.0 * abs(math.cos(om))),
        modulus=lambda d: 2.0 * d,
    )


def kalton_measure(n: int, rule: str = "trapezoid") -> MeasureSpace:
    return MeasureSpace.interval_quadrature(0.0, TWO_PI, n, rule)


# --- divergent tent family -----------------------------------------------------


def _tent_values(x0, x1, kexp: int):
    """Homogeneous tent number k, exactly in dyadic arithmetic.

    Supported where x0 > 0 and 0 <= x1 <= 2^(1-k) x0, rising with slope 4^k
    to the peak at x1 = 2^(-k) x0, then falling back to zero; the peak value
    on the sphere is 2^k.
    """
    four_k = math.ldexp(1.0, 2 * kexp)
    two_k1 = math.ldexp(1.0, kexp + 1)
    upper = math.ldexp(1.0, 1 - kexp)
    peak_at = math.ldexp(1.0, -kexp)
    rise = four_k * x1
    fall = two_k1 * x0 - four_k * x1
    inside = (x0 > 0.0) & (x1 >= 0.0) & (x1 <= upper * x0)
    return np.where(inside, np.where(x1 <= peak_at * x0, rise, fall), 0.0)


def counterexample_kernel(num_atoms: int = 30) -> tuple[Kernel, MeasureSpace]:
    """The tent family with atom weights 2^(-k), k = 1..num_atoms.

    Each weighted peak contributes exactly 1 to the prefix sums of the slice
    sups, so the sups are summable only in appearance: the detector must
    flag them.  The averaged function F satisfies F(1,0) = 0 exactly and
    F(1, 2^(-k)) = 2 - 2^(1-k) exactly.
    """
    if num_atoms < 1:
        raise ValueError(f"need at least one atom, got {num_atoms!r}")
    kernel = Kernel(
        arity=2,
        eval=lambda s, om: float(_tent_values(s[0], s[1], int(round(om)))),
        name="tents",
        batch_points=lambda P, om: _tent_values(P[:, 0], P[:, 1], int(round(om))),
        sup_slice=lambda om: math.ldexp(1.0, int(round(om))),
    )
    ks = np.arange(1, num_atoms + 1, dtype=float)
    weights = np.array([math.ldexp(1.0, -k) for k in range(1, num_atoms + 1)])
    return kernel, MeasureSpace.discrete(ks, weights)


# --- degenerate kernels ---------------------------------------------------------


def zero_kernel(arity: int = 2) -> Kernel:
    return Kernel(
        arity=arity,
        eval=lambda s, om: 0.0,
        name="zero",
        batch_omegas=lambda s, om: np.zeros(len(np.atleast_1d(om))),
        batch_points=lambda P, om: np.zeros(len(P)),
        sup_slice=lambda om: 0.0,
        modulus=lambda d: 0.0,
    )


def square_kernel() -> Kernel:
    """f(s, om) = s_0^2: degree-two, so deliberately outside the calculus."""
    return Kernel(
        arity=2,
        eval=lambda s, om: float(s[0]) ** 2,
        name="square",
        batch_points=lambda P, om: P[:, 0] ** 2,
        sup_slice=lambda om: 1.0,
    )


# --- registry -------------------------------------------------------------------

KERNEL_NAMES = ("kalton", "counterexample", "zero", "square")


def resolve_kernel(name: str, *, kmax: int = 20, rule: str = "trapezoid"):
    """Kernel plus a node-count-to-measure factory for the experiment runner.

    The tent family keeps its fixed atom list (at least 30 atoms so the
    divergence window has room) and ignores the requested node count.
    """
    if name == "kalton":
        return kalton_kernel(), lambda n: kalton_measure(n, rule)
    if name == "counterexample":
        kernel, measure = counterexample_kernel(max(30, kmax))
        return kernel, lambda n: measure
    if name == "zero":
        return zero_kernel(), lambda n: kalton_measure(n, rule)
    if name == "square":
        return square_kernel(), lambda n: kalton_measure(n, rule)
    raise ValueError(f"unknown kernel {name!r}; expected one of {KERNEL_NAMES}")
