from unittest import TestCase

from numpy.testing import assert_almost_equal, assert_allclose

from warpgeo.chart import ScalarField, euclidean, halfplane2
from warpgeo.errors import ConfigError, DegenerateMetricError
from warpgeo.laplacian import laplacian_lift, laplacian_lift_G, \
     laplacian_lift_G_parallel, laplacian_lift_H, laplacian_oracle, \
     harmonicity_defect, compare
from warpgeo.metric import WarpSpec, product_points


def line_spec(c=0.5, variant='G'):
    base = euclidean(1, variables=['x'], domain=[(0.5, 5)])
    fiber = euclidean(1, variables=['y'], domain=[(0.5, 5)])
    return WarpSpec(base, fiber, 'x', 'y', c, variant)


def linear_spec(variant, c=0.2):
    """Linear warping functions, b1 = 5 and b2 = 1.25."""
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    fiber = euclidean(2, variables=['y1', 'y2'], domain=[(0.5, 2)]*2)
    return WarpSpec(base, fiber, 'x1 + 2*x2', '1 + y1 - y2/2', c, variant)


def curved_spec(variant, c=0.1):
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    fiber = halfplane2(domain=[(-2, 2), (0.5, 2)])
    return WarpSpec(base, fiber, 'x1 + x2^2', '2 + x*y/4', c, variant)


class TestWorkedValues(TestCase):

    def test_variant_g(self):
        spec = line_spec()
        assert_almost_equal(laplacian_lift(spec, 'f1', [2, 3]), 1/13.5)
        assert_almost_equal(laplacian_lift_G(spec, 'f2', [2, 3]), 1/9.0)
        assert_almost_equal(harmonicity_defect(spec, 'f1', [2, 3]), 1/6.0)
        assert_almost_equal(laplacian_oracle(spec, 'f1', [2, 3]), 1/13.5)

    def test_variant_h(self):
        # metric (1 + y^2) dx^2 + x^2 dy^2:
        # Delta x = 1/(x E), Delta y = y/(x^2 E)
        spec = line_spec(c=1.0, variant='H')
        assert_almost_equal(laplacian_lift(spec, 'f1', [2, 3]), 0.05)
        assert_almost_equal(laplacian_lift(spec, 'f2', [2, 3]), 0.075)
        assert_almost_equal(harmonicity_defect(spec, 'f1', [2, 3]), 0.05)
        assert_almost_equal(harmonicity_defect(spec, 'f2', [2, 3]), 0.075)

    def test_degenerate(self):
        self.assertRaises(DegenerateMetricError, laplacian_lift,
                          line_spec(c=1.0), 'f1', [2, 3])


class TestAgainstOracle(TestCase):

    def test_variant_g(self):
        spec = curved_spec('G')
        for q in product_points(spec, 10):
            for which in 'f1', 'f2':
                assert_allclose(laplacian_lift(spec, which, q),
                                laplacian_oracle(spec, which, q),
                                rtol=1E-9, atol=1E-10)

    def test_variant_h(self):
        spec = curved_spec('H', c=0.5)
        fields = ['f1', 'f2', ScalarField(spec.base, 'sin(x1)*x2'),
                  ScalarField(spec.fiber, 'x^2*y')]
        for q in product_points(spec, 10):
            for field in fields:
                assert_allclose(laplacian_lift(spec, field, q),
                                laplacian_oracle(spec, field, q),
                                rtol=1E-9, atol=1E-10)

    def test_compare(self):
        spec = curved_spec('H')
        report = compare(spec, 'f2', spec.point([1, 1], [0.5, 1]))
        self.assertEqual(report.which, 'f2')
        self.assertLess(report.abs_diff, 1E-10)
        report = compare(spec, 'f1', [1, 1, 0.5, 1], mode='fd')
        self.assertLess(report.abs_diff, 1E-5)


class TestParallelGradients(TestCase):

    def test_reduction(self):
        spec = linear_spec('G')
        for q in product_points(spec, 10):
            for which in 'f1', 'f2':
                assert_allclose(laplacian_lift_G_parallel(spec, which, q),
                                laplacian_lift_G(spec, which, q), rtol=1E-12)

    def test_defect_of_harmonic_functions(self):
        spec = linear_spec('G')
        for q in product_points(spec, 5):
            d = spec.at(q)
            assert_allclose(harmonicity_defect(spec, 'f1', q),
                            laplacian_lift(spec, 'f1', q)*d.f2*d.D,
                            rtol=1E-12)
            assert_allclose(harmonicity_defect(spec, 'f2', q),
                            laplacian_lift(spec, 'f2', q)*d.f1*d.D,
                            rtol=1E-12)

    def test_uncoupled_is_doubly_warped(self):
        # c = 0: Delta(f1^h) = m2 b1/(f1 f2^2) for harmonic f1
        spec = linear_spec('G', c=0.0)
        q = spec.point([1, 1], [1, 1])
        assert_almost_equal(laplacian_lift(spec, 'f1', q), 2*5/(3*1.5**2))


class TestErrors(TestCase):

    def test_bad_arguments(self):
        spec = curved_spec('G')
        q = [1, 1, 0.5, 1]
        self.assertRaises(ValueError, laplacian_lift_G, spec, 'f3', q)
        self.assertRaises(ValueError, laplacian_lift_G_parallel, spec, 'f3',
                          q)
        self.assertRaises(ConfigError, laplacian_lift, spec,
                          ScalarField(spec.base, 'x1'), q)
        self.assertRaises(ConfigError, laplacian_lift_H, spec, 'f1', q)
        self.assertRaises(TypeError, laplacian_lift, spec.with_variant('H'),
                          'x1', q)
        other = ScalarField(euclidean(1), 'x1')
        self.assertRaises(ConfigError, laplacian_lift_H,
                          spec.with_variant('H'), other, q)
