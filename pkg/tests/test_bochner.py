import math

import numpy as np
import pytest

from latcalc import (
    Kernel,
    LatticeSpace,
    LatticeVector,
    MeasureSpace,
    bochner_integral,
    cached_triangulation,
    check_sup_integrable,
    counterexample_kernel,
    integrate_kernel,
    kalton_kernel,
    kalton_measure,
    phi_pointwise,
    slice_sup,
    zero_kernel,
)
from latcalc.calculus import CalculusContext

TWO_PI = 2.0 * math.pi


def test_measure_validation():
    with pytest.raises(ValueError):
        MeasureSpace.discrete([], [])
    with pytest.raises(ValueError):
        MeasureSpace.discrete([1.0], [-0.5])
    with pytest.raises(ValueError):
        MeasureSpace.discrete([1.0], [np.inf])
    m = MeasureSpace.discrete([1.0, 2.0], [0.5, 0.25])
    assert m.kind == "discrete" and m.size == 2
    assert m.total_mass == 0.75
    with pytest.raises(ValueError):
        m.refined(4)  # refinement only makes sense for quadratures


def test_interval_quadrature_rules():
    m = MeasureSpace.interval_quadrature(0.0, TWO_PI, 8, "trapezoid")
    # periodic wrap: endpoint omitted, equal weights h
    assert m.size == 8
    h = TWO_PI / 8
    np.testing.assert_allclose(m.points, h * np.arange(8), rtol=0, atol=0)
    np.testing.assert_allclose(m.weights, h, rtol=0)
    assert m.total_mass == pytest.approx(TWO_PI, rel=1e-15)

    mid = MeasureSpace.interval_quadrature(0.0, 1.0, 4, "midpoint")
    np.testing.assert_allclose(mid.points, [0.125, 0.375, 0.625, 0.875])
    with pytest.raises(ValueError):
        MeasureSpace.interval_quadrature(0.0, 1.0, 0, "trapezoid")
    with pytest.raises(ValueError):
        MeasureSpace.interval_quadrature(0.0, 1.0, 8, "simpson")
    with pytest.raises(ValueError):
        MeasureSpace.interval_quadrature(1.0, 0.0, 8, "trapezoid")

    r = m.refined(4)
    assert r.size == 4 and r.kind == "interval"
    assert r.bounds == m.bounds


def test_integrate_kernel_against_independent_trapezoid():
    kernel = kalton_kernel()
    n = 2 ** 14
    fn = integrate_kernel(kernel, kalton_measure(n))
    # classical endpoint trapezoid on the same integrand, built from scratch
    theta = np.linspace(0.0, TWO_PI, n + 1)
    for s in ([1.0, 1.0], [1.0, 0.0], [0.3, -1.2], [2.0, 0.7]):
        vals = np.abs(s[0] + np.exp(1j * theta) * s[1])
        oracle = np.trapezoid(vals, theta)
        assert fn(np.array(s)) == pytest.approx(oracle, abs=1e-9)


def test_closed_forms():
    fn = integrate_kernel(kalton_kernel(), kalton_measure(4096))
    assert fn(np.array([1.0, 0.0])) == pytest.approx(TWO_PI, abs=1e-9)
    assert fn(np.array([1.0, 1.0])) == pytest.approx(8.0, abs=1e-6)
    assert fn(np.array([0.0, 0.0])) == 0.0
    # symmetry F(s, t) = F(t, s) for this kernel
    rng = np.random.default_rng(61)
    for _ in range(50):
        s, t = rng.uniform(-2, 2, 2)
        a = fn(np.array([s, t]))
        b = fn(np.array([t, s]))
        assert a == pytest.approx(b, rel=1e-12)


def test_integrate_kernel_rejects_nonfinite():
    bad = Kernel(
        arity=1,
        eval=lambda s, w: math.inf if w == 0.0 else float(s[0] / w),
        name="pole",
    )
    measure = MeasureSpace.discrete([0.0, 1.0], [1.0, 1.0])
    fn = integrate_kernel(bad, measure)
    with pytest.raises(ValueError):
        fn(np.array([1.0]))


def test_modulus_transfer():
    fn = integrate_kernel(kalton_kernel(), kalton_measure(256))
    # slice modulus 2d integrates to mass * 2d
    assert fn.modulus(1.0) == pytest.approx(2.0 * TWO_PI, rel=1e-12)
    assert integrate_kernel(zero_kernel(), kalton_measure(16)).modulus(1.0) == 0.0
    bare = Kernel(arity=2, eval=lambda s, w: 0.0)
    assert integrate_kernel(bare, kalton_measure(16)).modulus is None


def test_slice_sup_analytic_vs_mesh():
    kernel = kalton_kernel()
    tri = cached_triangulation(2, 0.25)
    plain = Kernel(arity=2, eval=kernel.eval, batch_points=kernel.batch_points)
    for theta in np.linspace(0.0, TWO_PI, 17):
        exact = slice_sup(kernel, float(theta))
        sampled = slice_sup(plain, float(theta), tri)
        # the analytic sup is attained at a corner node, so they agree exactly
        assert exact == pytest.approx(math.sqrt(2.0 + 2.0 * abs(math.cos(theta))), rel=1e-15)
        assert sampled == pytest.approx(exact, rel=1e-15)
    with pytest.raises(ValueError):
        slice_sup(plain, 0.0)  # no mesh and no analytic form


def test_detector_counterexample_divergent():
    kernel, measure = counterexample_kernel()
    rep = check_sup_integrable(kernel, measure)
    assert rep.verdict == "DIVERGENT" and rep.divergent
    np.testing.assert_array_equal(rep.partial_sums, np.arange(1.0, 31.0))


def test_detector_kalton_convergent():
    kernel = kalton_kernel()
    rep = check_sup_integrable(kernel, kalton_measure(4096))
    assert rep.verdict == "CONVERGENT"
    # integral of sqrt(2 + 2|cos|) over the circle is 8*sqrt(2)
    assert rep.value == pytest.approx(8.0 * math.sqrt(2.0), abs=1e-4)
    assert rep.value <= 2.0 * TWO_PI  # trivially below sup M * mass


def test_detector_convergent_discrete_tail():
    # geometric tail: increments fall below tol inside the window
    sups = Kernel(arity=2, eval=lambda s, w: 0.0, sup_slice=lambda w: 1.0)
    weights = [math.ldexp(1.0, -k) for k in range(1, 49)]
    measure = MeasureSpace.discrete(np.arange(1.0, 49.0), weights)
    rep = check_sup_integrable(sups, measure)
    assert rep.verdict == "CONVERGENT"
    assert rep.value == pytest.approx(1.0, abs=1e-12)


def test_detector_interval_nonfinite():
    spiky = Kernel(
        arity=2,
        eval=lambda s, w: 0.0,
        sup_slice=lambda w: math.inf if w < 0.5 else 1.0,
    )
    rep = check_sup_integrable(spiky, kalton_measure(64))
    assert rep.verdict == "DIVERGENT"
    assert "non-finite" in rep.detail


def test_detector_zero_kernel():
    rep = check_sup_integrable(zero_kernel(), kalton_measure(64), cached_triangulation(2, 0.5))
    assert rep.verdict == "CONVERGENT" and rep.value == 0.0


def test_bochner_integral_triangle_inequality():
    rng = np.random.default_rng(62)
    for p in (None, 1.0, 2.0):
        space = LatticeSpace(10, p=p)
        for _ in range(100):
            m = MeasureSpace.discrete(np.arange(5.0), rng.uniform(0.0, 2.0, 5))
            vecs = [LatticeVector(space, rng.uniform(-3, 3, 10)) for _ in range(5)]
            out = bochner_integral(lambda w: vecs[int(w)], m)
            bound = float(np.add.reduce(m.weights * np.array([v.norm() for v in vecs])))
            assert out.norm() <= bound * (1 + 1e-10)


def test_bochner_commutes_with_coordinates_bitwise():
    # coordinate of the vector integral == scalar quadrature of the coordinate
    kernel = kalton_kernel()
    measure = kalton_measure(512)
    space = LatticeSpace(8)
    rng = np.random.default_rng(63)
    ctx = CalculusContext(
        space,
        [LatticeVector(space, rng.uniform(-1, 1, 8)) for _ in range(2)],
    )
    out = bochner_integral(
        lambda w: phi_pointwise(ctx, kernel.slice_fn(w)), measure
    )
    pts = ctx.points()
    for k in range(space.dim):
        vals = np.array([kernel.eval(pts[k], w) for w in measure.points])
        scalar = float(np.add.accumulate(measure.weights * vals)[-1])
        assert out.coords[k] == scalar  # identical reduction order


def test_bochner_space_mismatch():
    m = MeasureSpace.discrete([0.0, 1.0], [1.0, 1.0])
    s1, s2 = LatticeSpace(2), LatticeSpace(3)

    def g(w):
        return LatticeVector(s1 if w == 0.0 else s2, np.zeros(2 if w == 0.0 else 3))

    with pytest.raises(ValueError):
        bochner_integral(g, m)


def test_kernel_slice_fn_and_fallbacks():
    kernel = kalton_kernel()
    sl = kernel.slice_fn(0.0)
    assert sl(np.array([1.0, 1.0])) == pytest.approx(2.0, rel=1e-15)
    # fallback loops agree with the batched paths
    omegas = np.linspace(0.0, TWO_PI, 7)
    s = np.array([0.8, -0.3])
    batched = kernel.eval_omegas(s, omegas)
    looped = np.array([kernel.eval(s, w) for w in omegas])
    np.testing.assert_allclose(batched, looped, rtol=1e-15)
    plain = Kernel(arity=2, eval=kernel.eval)
    np.testing.assert_allclose(plain.eval_omegas(s, omegas), looped, rtol=0, atol=0)
    pts = np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 0.0]])
    np.testing.assert_allclose(
        plain.eval_points(pts, 0.5), kernel.eval_points(pts, 0.5), rtol=1e-15
    )
