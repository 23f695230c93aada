"""Shared builders for the test suite: seeded contexts and a smooth family.

The family is deliberately curved (no linear members): its members have
strictly positive interpolation error at every mesh size, so gap-vs-bound
comparisons stay far from float roundoff.
"""

from __future__ import annotations

import numpy as np

from latcalc import CalculusContext, HomogeneousFn, LatticeSpace, LatticeVector


def seeded_context(dim: int, arity: int = 2, seed: int = 0, p: float | None = None):
    space = LatticeSpace(dim, p=p)
    rng = np.random.default_rng(seed)
    vecs = [LatticeVector(space, rng.uniform(-1.0, 1.0, dim)) for _ in range(arity)]
    return CalculusContext(space, vecs)


def _quadratic_norm(a_mat: np.ndarray, tag: int) -> HomogeneousFn:
    a_mat = np.asarray(a_mat, dtype=float)
    # certified l_inf Lipschitz constant: sum_j H(e_j) works for any norm
    lip = float(np.sum(np.sqrt(np.diag(a_mat))))

    def ev(s: np.ndarray) -> float:
        return float(np.sqrt(max(float(s @ a_mat @ s), 0.0)))

    def batch(P: np.ndarray) -> np.ndarray:
        vals = np.einsum("ij,jk,ik->i", P, a_mat, P)
        return np.sqrt(np.maximum(vals, 0.0))

    return HomogeneousFn(
        2, ev, batch=batch, modulus=lambda d: lip * d, name=f"quad{tag}", verify=False
    )


def _weighted_p_norm(w: np.ndarray, p: int, tag: int) -> HomogeneousFn:
    w = np.asarray(w, dtype=float)
    lip = float(np.sum(w ** (1.0 / p)))

    def ev(s: np.ndarray) -> float:
        return float(np.sum(w * np.abs(s) ** p) ** (1.0 / p))

    def batch(P: np.ndarray) -> np.ndarray:
        return np.sum(w * np.abs(P) ** p, axis=1) ** (1.0 / p)

    return HomogeneousFn(
        2, ev, batch=batch, modulus=lambda d: lip * d, name=f"wp{p}_{tag}", verify=False
    )


def _combination(f: HomogeneousFn, g: HomogeneousFn, a: float, b: float, tag: int) -> HomogeneousFn:
    def ev(s: np.ndarray) -> float:
        return a * f(s) + b * g(s)

    def batch(P: np.ndarray) -> np.ndarray:
        return a * f.eval_many(P) + b * g.eval_many(P)

    def mod(d: float) -> float:
        return a * f.modulus(d) + b * g.modulus(d)

    return HomogeneousFn(2, ev, batch=batch, modulus=mod, name=f"mix{tag}", verify=False)


def curved_family(count: int = 50, seed: int = 7) -> list[HomogeneousFn]:
    """Smooth, strictly curved positively homogeneous functions on R^2.

    Quadratic-form norms sqrt(s^T A s) with A symmetric positive definite,
    weighted even-p norms, and positive combinations of the two.  All carry
    a certified l_inf modulus of continuity.
    """
    rng = np.random.default_rng(seed)
    fam: list[HomogeneousFn] = []
    while len(fam) < count:
        i = len(fam)
        kind = i % 3
        if kind == 0:
            b = rng.uniform(-1.0, 1.0, (2, 2))
            a_mat = b.T @ b + 0.3 * np.eye(2)
            fam.append(_quadratic_norm(a_mat, i))
        elif kind == 1:
            w = rng.uniform(0.5, 2.0, 2)
            p = int(rng.choice([2, 4, 6, 8]))
            fam.append(_weighted_p_norm(w, p, i))
        else:
            f, g = fam[i - 2], fam[i - 1]
            a, b = rng.uniform(0.3, 1.5, 2)
            fam.append(_combination(f, g, float(a), float(b), i))
    return fam
