from unittest import TestCase

import numpy as np
from numpy.testing import assert_array_almost_equal, assert_almost_equal, \
     assert_allclose

from warpgeo import oracle
from warpgeo.chart import ScalarField, euclidean, halfplane2, sphere2
from warpgeo.connection import LiftedVectorField, grad_lift, \
     grad_lift_warp, grad_lift_oracle, b_tensor, nabla_lifted, \
     nabla_oracle, bracket, torsion_residual, metric_compatibility_residual
from warpgeo.errors import ConfigError, DimensionError
from warpgeo.metric import WarpSpec, metric_field, product_points


def coupled_spec(variant, c=0.1):
    # b1 <= 17 and b2 <= 2 on this box, so G is Riemannian for c <= 0.15
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    fiber = halfplane2(domain=[(-2, 2), (0.5, 2)])
    return WarpSpec(base, fiber, 'x1 + x2^2', '2 + x*y/4', c, variant)


def coordinate_fields(spec):
    return ([LiftedVectorField.coordinate('base', spec.base, k)
             for k in range(spec.m1)] +
            [LiftedVectorField.coordinate('fiber', spec.fiber, k)
             for k in range(spec.m2)])


def curved_fields(spec):
    return [LiftedVectorField('base', spec.base, ['x2', 'x1*x2']),
            LiftedVectorField('fiber', spec.fiber, ['y^2', 'sin(x)'])]


class TestGradients(TestCase):

    def test_worked_example(self):
        base = euclidean(1, variables=['x'], domain=[(0.5, 5)])
        fiber = euclidean(1, variables=['y'], domain=[(0.5, 5)])
        spec = WarpSpec(base, fiber, 'x', 'y', 0.5)
        assert_array_almost_equal(grad_lift_warp(spec, 'f1', [2, 3]),
                                  [4/27.0, -3/27.0])
        assert_array_almost_equal(grad_lift_warp(spec, 'f2', [2, 3]),
                                  [-3/27.0, 9/27.0])
        self.assertRaises(ValueError, grad_lift_warp, spec, 'f3', [2, 3])

    def test_against_oracle(self):
        for variant in 'G', 'H':
            spec = coupled_spec(variant)
            fields = [spec.f1, spec.f2,
                      ScalarField(spec.base, 'exp(x1)*x2'),
                      ScalarField(spec.fiber, 'x^2 - y')]
            for q in product_points(spec, 10):
                for field in fields:
                    assert_allclose(grad_lift(spec, field, q),
                                    grad_lift_oracle(spec, field, q),
                                    atol=1E-10)


class TestConnection(TestCase):

    def test_b_tensor(self):
        base = euclidean(1, variables=['x'], domain=[(0.5, 5)])
        fiber = euclidean(1, variables=['y'], domain=[(0.5, 5)])
        spec = WarpSpec(base, fiber, 'x', 'y^2', 0.5)
        # linear f1 on a flat line: B_1 = c - 1
        assert_almost_equal(b_tensor(spec, 1, [1], [1], [2, 3]), -0.5)
        # f2 = y^2: c f2 f2'' + c f2'^2 - 1 = 0.5*9*2 + 0.5*36 - 1
        assert_almost_equal(b_tensor(spec, 2, [1], [1], [2, 3]), 26.0)
        self.assertRaises(ValueError, b_tensor, spec, 3, [1], [1], [2, 3])

    def test_coordinate_fields_against_christoffel(self):
        for variant in 'G', 'H':
            spec = coupled_spec(variant)
            fields = coordinate_fields(spec)
            for q in product_points(spec, 10):
                gamma = oracle.christoffel(metric_field(spec), q.coords)
                for i, X in enumerate(fields):
                    for j, Y in enumerate(fields):
                        assert_allclose(nabla_lifted(spec, X, Y, q),
                                        gamma[:, i, j], atol=1E-9)

    def test_curved_fields_against_oracle(self):
        for variant in 'G', 'H':
            spec = coupled_spec(variant, c=0.15)
            fields = curved_fields(spec)
            for q in product_points(spec, 5):
                for X in fields:
                    for Y in fields:
                        assert_allclose(nabla_lifted(spec, X, Y, q),
                                        nabla_oracle(spec, X, Y, q),
                                        atol=1E-9)

    def test_fd_oracle(self):
        spec = coupled_spec('G')
        X, Y = curved_fields(spec)
        q = spec.point([1.1, 0.9], [0.3, 1.2])
        assert_allclose(nabla_lifted(spec, X, Y, q),
                        nabla_oracle(spec, X, Y, q, mode='fd'), atol=1E-6)

    def test_sphere_fiber(self):
        base = euclidean(1, variables=['r'], domain=[(0.5, 3)])
        spec = WarpSpec(base, sphere2(), 'r', '2 + cos(theta)', 0.3, 'G')
        fields = coordinate_fields(spec)
        q = spec.point([1.2], [1.0, 0.4])
        gamma = oracle.christoffel(metric_field(spec), q.coords)
        for i, X in enumerate(fields):
            for j, Y in enumerate(fields):
                assert_allclose(nabla_lifted(spec, X, Y, q), gamma[:, i, j],
                                atol=1E-9)

    def test_torsion_and_compatibility(self):
        for variant in 'G', 'H':
            spec = coupled_spec(variant, c=0.15)
            fields = curved_fields(spec) + coordinate_fields(spec)[:2]
            for q in product_points(spec, 5):
                for X in fields:
                    for Y in fields:
                        self.assertLess(torsion_residual(spec, X, Y, q), 1E-8)
                for X in fields:
                    self.assertLess(metric_compatibility_residual(
                        spec, X, fields[0], fields[1], q), 1E-6)

    def test_bracket(self):
        spec = coupled_spec('G')
        X, Y = curved_fields(spec)
        q = spec.point([1.0, 1.5], [0.2, 1.0])
        assert_array_almost_equal(bracket(spec, X, Y, q), np.zeros(4))
        Z = LiftedVectorField.coordinate('base', spec.base, 0)
        # [X, d_x1] = -d_x1 X = -(0, x2)
        assert_array_almost_equal(bracket(spec, X, Z, q), [0, -1.5, 0, 0])


class TestLiftedVectorField(TestCase):

    def test_values_and_jacobian(self):
        spec = coupled_spec('G')
        X = LiftedVectorField('base', spec.base, ['x2', 'x1*x2'])
        q = spec.point([1.0, 1.5], [0.2, 1.0])
        assert_array_almost_equal(X.lifted(spec, q), [1.5, 1.5, 0, 0])
        J = X.lifted_jacobian(spec, q)
        assert_array_almost_equal(J[:2, :2], [[0, 1.5], [1, 1.0]])
        self.assertTrue(np.all(J[2:] == 0))

    def test_errors(self):
        spec = coupled_spec('G')
        self.assertRaises(DimensionError, LiftedVectorField, 'base',
                          spec.base, ['x1'])
        self.assertRaises(ValueError, LiftedVectorField, 'middle',
                          spec.base, ['x1', 'x2'])
        wrong = LiftedVectorField('base', spec.fiber, ['x', 'y'])
        right = LiftedVectorField('base', spec.base, ['x1', 'x2'])
        self.assertRaises(ConfigError, nabla_lifted, spec, wrong, right,
                          [1, 1, 0, 1])
