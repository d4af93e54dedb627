import math
from unittest import TestCase

import numpy as np
from numpy.testing import assert_array_almost_equal, assert_allclose

from warpgeo import oracle
from warpgeo.chart import ScalarField, euclidean, halfplane2
from warpgeo.errors import DegenerateMetricError
from warpgeo.frame import factor_orthonormal_frame, product_frame, \
     gram_matrix, sum_identities, sum_identities_residual, \
     frame_derivative_residual, frame_trace_laplacian
from warpgeo.metric import WarpSpec, assemble, metric_field, \
     product_points, LiftedScalar


def line_spec(c=0.5, variant='G'):
    base = euclidean(1, variables=['x'], domain=[(0.5, 5)])
    fiber = euclidean(1, variables=['y'], domain=[(0.5, 5)])
    return WarpSpec(base, fiber, 'x', 'y', c, variant)


def tall_spec(variant, c=0.1):
    """2 x 3 dimensional product, c^2 b1 b2 < 0.6 for c <= 0.2."""
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 1)]*2)
    fiber = euclidean(3, variables=['y1', 'y2', 'y3'], domain=[(0.5, 1)]*3)
    return WarpSpec(base, fiber, 'x1 + x2^2', '1 + y1*y2 + y3^2/2', c,
                    variant)


class TestFactorFrame(TestCase):

    def test_halfplane(self):
        assert_array_almost_equal(
            factor_orthonormal_frame(halfplane2(), [0.3, 2]), 2*np.eye(2))

    def test_orthonormal(self):
        chart = halfplane2()
        p = [0.3, 1.7]
        E = factor_orthonormal_frame(chart, p)
        assert_array_almost_equal(E @ chart.metric_at(p) @ E.T, np.eye(2))


class TestProductFrame(TestCase):

    def test_worked_example(self):
        fr = product_frame(line_spec(), [2, 3])
        assert_array_almost_equal(fr.a, [1])
        assert_array_almost_equal(fr.denominators, [1, 0.75])
        assert_array_almost_equal(fr.vectors[0], [1/3.0, 0])
        assert_array_almost_equal(fr.unnormalized[0], [-1/6.0, 0.5])
        assert_array_almost_equal(fr.vectors[1],
                                  np.array([-1/6.0, 0.5])/math.sqrt(0.75))

    def test_gram_is_identity(self):
        for variant in 'G', 'H':
            spec = tall_spec(variant)
            for q in product_points(spec, 10):
                fr = product_frame(spec, q)
                assert_allclose(gram_matrix(spec, fr, q), np.eye(spec.dim),
                                atol=1E-10)

    def test_norms(self):
        for variant in 'G', 'H':
            spec = tall_spec(variant, c=0.2)
            q = spec.point([0.8, 0.9], [0.7, 0.6, 0.8])
            fr = product_frame(spec, q)
            m = len(fr.a)
            G = assemble(spec, q)
            for j in range(m):
                u = fr.unnormalized[j]
                assert_allclose(u @ G @ u, fr.norms[j]**2, rtol=1E-12)
            # the partial sums end at the squared norm of the gradient
            d = spec.at(q)
            b = d.b2 if variant == 'G' else d.b1
            assert_allclose(fr.partial[-1], b, rtol=1E-12)

    def test_guard(self):
        self.assertRaises(DegenerateMetricError, product_frame,
                          line_spec(c=1.0), [2, 3])
        # H never degenerates
        product_frame(line_spec(c=1.0, variant='H'), [2, 3])

    def test_guard_threshold_and_rows(self):
        # D_2 = 0.75 at (2, 3) for c = 0.5
        product_frame(line_spec(), [2, 3])
        self.assertRaises(DegenerateMetricError, product_frame, line_spec(),
                          [2, 3], guard=0.8)
        # variant H: base row u'_1 / sqrt(1 + (c f2)^2), then e^v / f1
        fr = product_frame(line_spec(variant='H'), [2, 3], guard=10.0)
        assert_array_almost_equal(fr.vectors,
                                  [[1/math.sqrt(3.25), 0], [0, 0.5]])


class TestIdentities(TestCase):

    def test_sum_identities(self):
        for variant in 'G', 'H':
            spec = tall_spec(variant, c=0.2)
            for q in product_points(spec, 10):
                residuals = sum_identities(spec, q)
                self.assertIn('telescoping', residuals)
                self.assertLess(max(residuals.values()), 1E-10)
                self.assertEqual(sum_identities_residual(spec, q),
                                 max(residuals.values()))

    def test_derivative_identities(self):
        for variant in 'G', 'H':
            spec = tall_spec(variant, c=0.2)
            for q in product_points(spec, 10):
                self.assertLess(frame_derivative_residual(spec, q), 1E-10)


class TestTraceLaplacian(TestCase):

    def test_matches_laplace_beltrami(self):
        for variant in 'G', 'H':
            spec = tall_spec(variant)
            fields = [spec.f1, spec.f2, ScalarField(spec.fiber, 'y2*y3')]
            for q in product_points(spec, 5):
                for field in fields:
                    expected = oracle.laplace_beltrami(
                        metric_field(spec), LiftedScalar(spec, field),
                        q.coords)
                    assert_allclose(frame_trace_laplacian(spec, field, q),
                                    expected, rtol=1E-9, atol=1E-9)
