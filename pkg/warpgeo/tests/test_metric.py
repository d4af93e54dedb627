from unittest import TestCase

import numpy as np
from numpy.testing import assert_array_almost_equal, assert_almost_equal, \
     assert_allclose
from hypothesis import given, settings, assume
from hypothesis.strategies import floats, lists, sampled_from

from warpgeo.chart import catalog, euclidean, halfplane2, sphere2
from warpgeo.errors import ConfigError, DegenerateMetricError
from warpgeo.metric import WarpSpec, assemble, det_closed_form_G, \
     det_frame_G, is_riemannian, cometric, warp_gradients, \
     reconstruct_vector, ReconstructionData, degeneracy_constants, \
     product_points, metric_field


def line_spec(c=0.5, variant='G', f1='x', f2='y'):
    """1D x 1D spec with f1 = x, f2 = y."""
    base = euclidean(1, variables=['x'], domain=[(0.5, 5)], name='m1')
    fiber = euclidean(1, variables=['y'], domain=[(0.5, 5)], name='m2')
    return WarpSpec(base, fiber, f1, f2, c, variant)


def surface_spec(c, variant='G'):
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    return WarpSpec(base, halfplane2(), 'x1 + x2^2', '1 + y^2/4', c, variant)


class TestAssemble(TestCase):

    def test_worked_example(self):
        spec = line_spec()
        q = spec.point([2], [3])
        assert_array_almost_equal(assemble(spec, q), [[9, 3], [3, 4]])
        assert_almost_equal(det_closed_form_G(spec, q), 27.0)
        assert_almost_equal(det_frame_G(spec, q), 27.0)
        assert_almost_equal(np.linalg.det(assemble(spec, q)), 27.0)

    def test_variant_h(self):
        spec = line_spec(c=1.0, variant='H')
        q = spec.point([2, 3])
        assert_array_almost_equal(assemble(spec, q), [[10, 0], [0, 4]])
        assert_array_almost_equal(cometric(spec, q), np.diag([0.1, 0.25]))

    def test_direct_product(self):
        spec = WarpSpec(sphere2(), halfplane2(), '1', '1', 0.0)
        q = spec.point([1.0, 0.5], [0.2, 2.0])
        G = assemble(spec, q)
        assert_array_almost_equal(G[:2, :2], sphere2().metric_at([1.0, 0.5]))
        assert_array_almost_equal(G[2:, 2:], 0.25*np.eye(2))
        self.assertTrue(np.all(G[:2, 2:] == 0))

    def test_singly_warped(self):
        spec = WarpSpec(euclidean(2), halfplane2(), '1', 'y', 0.7)
        q = spec.point([0.1, 0.2], [0.3, 2.0])
        G = assemble(spec, q)
        self.assertTrue(np.all(G[:2, 2:] == 0))
        assert_array_almost_equal(G[:2, :2], 4*np.eye(2))

    def test_exactly_symmetric(self):
        for variant in 'G', 'H':
            spec = surface_spec(0.2, variant)
            for q in product_points(spec, 10):
                G = assemble(spec, q)
                self.assertTrue(np.array_equal(G, G.T))
                if variant == 'H':
                    self.assertTrue(np.all(G[:2, 2:] == 0))

    def test_bad_specs(self):
        self.assertRaises(ConfigError, line_spec, variant='K')
        self.assertRaises(ConfigError, WarpSpec, euclidean(1), euclidean(1),
                          'x1', 'x1')


class TestClassification(TestCase):

    def test_kinds(self):
        q = [2, 3]
        self.assertEqual(is_riemannian(line_spec(c=0.0), q),
                         ('riemannian', 0.0))
        kind, value = is_riemannian(line_spec(c=1.0), q)
        self.assertEqual(kind, 'degenerate')
        assert_almost_equal(value, 1.0)
        kind, value = is_riemannian(line_spec(c=2.0), q)
        self.assertEqual(kind, 'indefinite')
        assert_almost_equal(value, 4.0)
        self.assertEqual(is_riemannian(line_spec(c=5.0, variant='H'), q)[0],
                         'riemannian')

    def test_degenerate_family(self):
        spec = line_spec(c=1.0)
        for q in product_points(spec, 20):
            self.assertLess(abs(det_closed_form_G(spec, q)), 1E-9)
            b1, b2, residual = degeneracy_constants(spec, q)
            assert_almost_equal(residual, 0.0)
        self.assertRaises(DegenerateMetricError, cometric, spec, [2, 3])

    def test_agrees_with_eigenvalues(self):
        for c in 0.05, 0.2, 0.5:
            spec = surface_spec(c)
            for q in product_points(spec, 30):
                kind, value = is_riemannian(spec, q)
                smallest = np.linalg.eigvalsh(assemble(spec, q))[0]
                self.assertEqual(kind == 'riemannian', smallest > 0)


class TestCometric(TestCase):

    def test_worked_example(self):
        spec = line_spec()
        assert_array_almost_equal(cometric(spec, [2, 3]),
                                  np.array([[4, -3], [-3, 9]])/27.0)

    def test_doubly_warped(self):
        spec = surface_spec(0.0)
        q = spec.point([1, 1.5], [0.3, 2])
        inv = cometric(spec, q)
        d = spec.at(q)
        assert_array_almost_equal(inv[:2, :2], np.eye(2)/d.f2**2)
        assert_array_almost_equal(inv[2:, 2:], 4*np.eye(2)/d.f1**2)
        self.assertTrue(np.all(inv[:2, 2:] == 0))

    def test_ill_conditioned(self):
        # h = diag(1 + 9e14, 4) at (2, 3)
        spec = line_spec(c=1E7, variant='H')
        with self.assertWarns(RuntimeWarning):
            inv = cometric(spec, [2, 3])
        assert_allclose(inv[1, 1], 0.25)

    def test_gradients(self):
        spec = line_spec()
        gh, gv = warp_gradients(spec, [2, 3])
        inv = cometric(spec, [2, 3])
        assert_array_almost_equal(gh, inv @ [1, 0])
        assert_array_almost_equal(gv, inv @ [0, 1])
        for variant in 'G', 'H':
            spec = surface_spec(0.3, variant)
            q = spec.point([1.0, 0.8], [0.3, 1.0])
            gh, gv = warp_gradients(spec, q)
            d = spec.at(q)
            inv = np.linalg.inv(assemble(spec, q))
            assert_array_almost_equal(gh, inv @ spec.lift_h(d.df1))
            assert_array_almost_equal(gv, inv @ spec.lift_v(d.df2))


class TestReconstruct(TestCase):

    def check(self, spec, data, q):
        X = reconstruct_vector(spec, data, q)
        G = assemble(spec, q)
        U = data.phi2*spec.lift_h(data.X1) + data.phi1*spec.lift_v(data.X2)
        V = data.psi2*spec.lift_h(data.Y1) + data.psi1*spec.lift_v(data.Y2)
        m1 = spec.m1
        assert_allclose((X @ G)[:m1], (U @ G)[:m1], atol=1E-10)
        assert_allclose((X @ G)[m1:], (V @ G)[m1:], atol=1E-10)
        return X

    def test_generic(self):
        spec = surface_spec(0.2)
        q = spec.point([1.2, 0.7], [0.4, 1.5])
        data = ReconstructionData(0.3, -1.2, 2.0, 0.7, [1, 2], [-0.5, 1],
                                  [0.3, 0.1], [2, -1])
        self.check(spec, data, q)

    def test_consistent_data(self):
        spec = line_spec()
        data = ReconstructionData(2.0, 3.0, 2.0, 3.0, [1.5], [1.5], [-1],
                                  [-1])
        X = self.check(spec, data, [2, 3])
        assert_array_almost_equal(X, [4.5, -2.0])

    def test_uncoupled(self):
        spec = line_spec(c=0.0)
        data = ReconstructionData(2.0, 3.0, 5.0, 7.0, [1], [2], [3], [4])
        X = self.check(spec, data, [2, 3])
        assert_array_almost_equal(X, [3.0, 20.0])


class TestSampling(TestCase):

    def test_deterministic(self):
        spec = surface_spec(0.1)
        a = product_points(spec, 25, seed=3)
        b = product_points(spec, 25, seed=3)
        self.assertEqual(len(a), 25)
        for p, q in zip(a, b):
            self.assertTrue(np.array_equal(p.coords, q.coords))
            self.assertTrue(spec.base.contains(p.p1))
            self.assertTrue(spec.fiber.contains(p.p2))

    def test_metric_field_modes(self):
        spec = surface_spec(0.3)
        q = spec.point([1.0, 0.8], [0.3, 1.5])
        g, dg = metric_field(spec).first_derivatives(q.coords)
        g_fd, dg_fd = metric_field(spec, 'fd').first_derivatives(q.coords)
        assert_array_almost_equal(g, g_fd)
        assert_array_almost_equal(dg, dg_fd, decimal=6)


@settings(max_examples=40, deadline=None)
@given(floats(-0.3, 0.3), floats(0.6, 1.9), floats(0.6, 1.9),
       floats(-4, 4), floats(0.5, 3.5))
def test_determinant_identity(c, x1, x2, x, y):
    spec = surface_spec(c)
    q = spec.point([x1, x2], [x, y])
    d = spec.at(q)
    assume(abs(d.D) > 0.1)
    direct = np.linalg.det(assemble(spec, q))
    assert_allclose(det_closed_form_G(spec, q), direct, rtol=1E-10)
    if d.D > 0:
        assert_allclose(cometric(spec, q) @ assemble(spec, q), np.eye(4),
                        atol=1E-10)


# restricted domains keep sin(theta) and 1/y away from 0 and infinity
FACTORS = {
    'euclidean:1': (['%s1'], [(-1, 1)]),
    'euclidean:2': (['%s1', '%s2'], [(-1, 1)]*2),
    'euclidean:3': (['%s1', '%s2', '%s3'], [(-1, 1)]*3),
    'sphere2': (['%stheta', '%sphi'], [(0.3, 2.8), (-3, 3)]),
    'halfplane2': (['%su', '%sv'], [(-2, 2), (0.5, 2)]),
}


def factor(kind, prefix, a, b):
    """Catalog chart with variables prefixed by ``prefix`` and a warping
    function 2 + a sin(first) + b cos(last), at least 0.8 for a, b <= 0.6."""
    names, domain = FACTORS[kind]
    variables = [name % prefix for name in names]
    chart = catalog(kind, variables, domain)
    return chart, '2 + %r*sin(%s) + %r*cos(%s)' % (a, variables[0], b,
                                                   variables[-1])


@settings(max_examples=60, deadline=None)
@given(sampled_from(sorted(FACTORS)), sampled_from(sorted(FACTORS)),
       floats(-0.5, 0.5), floats(0.1, 0.6), floats(0.1, 0.6),
       floats(0.1, 0.6), floats(0.1, 0.6),
       lists(floats(0.05, 0.95), min_size=6, max_size=6))
def test_catalog_determinant_and_cometric(kind1, kind2, c, a1, b1, a2, b2,
                                          fractions):
    base, f1 = factor(kind1, 'x', a1, b1)
    fiber, f2 = factor(kind2, 'y', a2, b2)
    spec = WarpSpec(base, fiber, f1, f2, c)
    x = [low + t*(high - low)
         for t, (low, high) in zip(fractions, spec.domain)]
    q = spec.point(x)
    d = spec.at(q)
    assume(abs(d.D) > 0.1)
    G = assemble(spec, q)
    assert_allclose(det_closed_form_G(spec, q), np.linalg.det(G),
                    rtol=1E-10)
    if d.D > 0:
        assert_allclose(cometric(spec, q) @ G, np.eye(spec.dim), atol=1E-9)
    h = spec.with_variant('H')
    assert_allclose(cometric(h, q) @ assemble(h, q), np.eye(spec.dim),
                    atol=1E-9)
