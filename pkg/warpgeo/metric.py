'''
The two product metrics on M1 x M2 and their algebraic properties.

Coordinates on the product chart are the base coordinates followed by
the fiber coordinates; every vector and matrix in the package uses this
block order. With b_i = |grad f_i|^2 in g_i,

variant G::

    G = f2^2 g1 (+) f1^2 g2 + c f1 f2 (df1 (x) df2 + df2 (x) df1)

variant H::

    h = (g1 + c^2 f2^2 df1 (x) df1) (+) f1^2 g2

G is Riemannian exactly where c^2 b1 b2 < 1; h always is.
'''

import warnings
from collections import namedtuple
from functools import cached_property

import numpy as np
import scipy.linalg
from scipy.stats import qmc

from . import oracle
from .chart import ScalarField
from .errors import ConfigError, DegenerateMetricError, InconsistencyError, \
     DimensionError
from .expr import Jet2

variants = ('G', 'H')


class ProductPoint(namedtuple('ProductPoint', 'p1 p2')):
    """Point (p1, p2) of M1 x M2."""
    __slots__ = ()

    @property
    def coords(self):
        return np.concatenate((np.asarray(self.p1, dtype=float).ravel(),
                               np.asarray(self.p2, dtype=float).ravel()))


class WarpSpec(object):
    """
    Full description of a product metric: base and fiber charts,
    warping functions f1 (on the base) and f2 (on the fiber), coupling
    constant c and variant ``'G'`` or ``'H'``.
    """

    def __init__(self, base, fiber, f1, f2, c=0.0, variant='G'):
        if variant not in variants:
            raise ConfigError('variant=%s is illegal - range=%s' %
                              (variant, str(variants)), key='variant')
        common = set(base.variables) & set(fiber.variables)
        if common:
            raise ConfigError('base and fiber share variables %s' %
                              ', '.join(sorted(common)), key='fiber')
        self.base = base
        self.fiber = fiber
        self.f1 = f1 if isinstance(f1, ScalarField) else ScalarField(base, f1)
        self.f2 = f2 if isinstance(f2, ScalarField) else ScalarField(fiber, f2)
        if self.f1.chart is not base or self.f2.chart is not fiber:
            raise ConfigError('f1 must live on the base, f2 on the fiber',
                              key='warp')
        self.c = float(c)
        self.variant = variant

    @property
    def m1(self):
        return self.base.dim

    @property
    def m2(self):
        return self.fiber.dim

    @property
    def dim(self):
        return self.m1 + self.m2

    @property
    def variables(self):
        return self.base.variables + self.fiber.variables

    @property
    def domain(self):
        return self.base.domain + self.fiber.domain

    def __repr__(self):
        return 'WarpSpec(%s x %s, f1=%s, f2=%s, c=%g, variant=%s)' % \
               (self.base.name, self.fiber.name, self.f1.expr.source,
                self.f2.expr.source, self.c, self.variant)

    def with_variant(self, variant):
        return WarpSpec(self.base, self.fiber, self.f1, self.f2, self.c,
                        variant)

    def point(self, p1, p2=None):
        """ProductPoint from two factor points or one product vector."""
        if isinstance(p1, ProductPoint):
            return p1
        if p2 is None:
            x = np.asarray(p1, dtype=float).ravel()
            if x.size != self.dim:
                raise DimensionError('product point needs %d coordinates, '
                                     'got %d' % (self.dim, x.size))
            return ProductPoint(x[:self.m1], x[self.m1:])
        return ProductPoint(np.asarray(p1, dtype=float).ravel(),
                            np.asarray(p2, dtype=float).ravel())

    def lift_h(self, v1):
        return np.concatenate((np.asarray(v1, dtype=float), np.zeros(self.m2)))

    def lift_v(self, v2):
        return np.concatenate((np.zeros(self.m1), np.asarray(v2, dtype=float)))

    def at(self, q):
        return PointData(self, self.point(q))


class PointData(object):
    """
    Factor quantities of a WarpSpec at one product point, computed on
    first use. Names follow the formulas: ``df1`` the differential,
    ``gf1`` the gradient in g1, ``b1`` its squared norm, ``H1`` the
    covariant Hessian, ``D = 1 - c^2 b1 b2`` and ``E = 1 + (c f2)^2 b1``.
    """

    def __init__(self, spec, q):
        self.spec = spec
        self.q = q
        self.c = spec.c
        self.p1 = spec.base._point(q.p1)
        self.p2 = spec.fiber._point(q.p2)

    @cached_property
    def f1(self):
        return self.spec.f1.value(self.p1)

    @cached_property
    def f2(self):
        return self.spec.f2.value(self.p2)

    @cached_property
    def g1(self):
        return self.spec.base.metric_at(self.p1)

    @cached_property
    def g2(self):
        return self.spec.fiber.metric_at(self.p2)

    @cached_property
    def g1inv(self):
        return np.linalg.inv(self.g1)

    @cached_property
    def g2inv(self):
        return np.linalg.inv(self.g2)

    @cached_property
    def df1(self):
        return self.spec.f1.jet(self.p1).gradient

    @cached_property
    def df2(self):
        return self.spec.f2.jet(self.p2).gradient

    @cached_property
    def gf1(self):
        return self.g1inv @ self.df1

    @cached_property
    def gf2(self):
        return self.g2inv @ self.df2

    @cached_property
    def b1(self):
        return float(self.df1 @ self.gf1)

    @cached_property
    def b2(self):
        return float(self.df2 @ self.gf2)

    @cached_property
    def H1(self):
        return self.spec.f1.covariant_hessian(self.p1)

    @cached_property
    def H2(self):
        return self.spec.f2.covariant_hessian(self.p2)

    @cached_property
    def D(self):
        return 1 - self.c**2*self.b1*self.b2

    @cached_property
    def K(self):
        return (self.c*self.f2)**2

    @cached_property
    def E(self):
        return 1 + self.K*self.b1

    def require_riemannian(self, tol=1E-9):
        if self.spec.variant == 'G' and self.D <= tol:
            raise DegenerateMetricError(
                'c^2 b1 b2 = %g is not below 1 at %s' %
                (1 - self.D, list(self.q.coords)), diagnostic=1 - self.D)


def _entries(spec, env):
    """
    Metric entries of the product as a nested list. ``env`` maps every
    product variable to a float (plain evaluation) or to a Jet2 over
    the product coordinates (jets of the entries).
    """
    m1, m2, n = spec.m1, spec.m2, spec.dim
    c = spec.c
    g1, g2 = spec.base.metric, spec.fiber.metric
    f1 = spec.f1.expr.evaluate_in(env)
    f2 = spec.f2.expr.evaluate_in(env)
    d1 = [e.evaluate_in(env) for e in spec.f1.partials]
    d2 = [e.evaluate_in(env) for e in spec.f2.partials]
    G = [[0.0]*n for i in range(n)]
    for i in range(m1):
        for j in range(i, m1):
            if spec.variant == 'G':
                v = f2*f2*g1[i][j].evaluate_in(env)
            else:
                v = g1[i][j].evaluate_in(env) + c*c*f2*f2*d1[i]*d1[j]
            G[i][j] = G[j][i] = v
    for a in range(m2):
        for b in range(a, m2):
            G[m1+a][m1+b] = G[m1+b][m1+a] = f1*f1*g2[a][b].evaluate_in(env)
    if spec.variant == 'G' and c != 0:
        for i in range(m1):
            for a in range(m2):
                G[i][m1+a] = G[m1+a][i] = c*f1*f2*d1[i]*d2[a]
    return G


def _env(spec, x, jets=False):
    x = np.asarray(x, dtype=float).ravel()
    n = spec.dim
    if jets:
        return dict((v, Jet2.variable(x[k], k, n))
                    for k, v in enumerate(spec.variables))
    return dict(zip(spec.variables, x))


def _values(spec, x):
    G = _entries(spec, _env(spec, x))
    return np.array([[float(v) for v in row] for row in G])


def _jets(spec, x):
    G = _entries(spec, _env(spec, x, jets=True))
    n = spec.dim
    G = [[v if isinstance(v, Jet2) else Jet2.constant(v, n) for v in row]
         for row in G]
    return oracle.stack_jets(G)


def assemble(spec, q):
    """The product metric matrix at q (base block first)."""
    q = spec.point(q)
    spec.base._point(q.p1)
    spec.fiber._point(q.p2)
    return _values(spec, q.coords)


def metric_field(spec, mode='dual'):
    """The assembled metric as an oracle ``MetricField``."""
    return oracle.MetricField(
        spec.dim, lambda x: _values(spec, x), lambda x: _jets(spec, x),
        mode=mode, domain=spec.domain,
        name='%s(%s x %s)' % (spec.variant, spec.base.name, spec.fiber.name))


def det_closed_form_G(spec, q):
    """det g1 det g2 f1^(2 m2) f2^(2 m1) (1 - c^2 b1 b2)."""
    d = spec.at(q)
    return float(np.linalg.det(d.g1)*np.linalg.det(d.g2) *
                 d.f1**(2*spec.m2)*d.f2**(2*spec.m1)*d.D)


def det_frame_G(spec, q):
    """Determinant of G in factor-orthonormal frames: f1^(2 m2) f2^(2 m1) D."""
    d = spec.at(q)
    return float(d.f1**(2*spec.m2)*d.f2**(2*spec.m1)*d.D)


def is_riemannian(spec, q, tol=1E-9):
    """
    Classify the metric at q as ``'riemannian'``, ``'degenerate'`` or
    ``'indefinite'`` from c^2 b1 b2, and return it with that value.
    Away from the degenerate set the answer is cross-checked by a
    Cholesky factorization of the assembled matrix.
    """
    if spec.variant == 'H':
        return 'riemannian', 0.0
    d = spec.at(q)
    value = 1 - d.D
    if abs(d.D) <= tol:
        return 'degenerate', value
    kind = 'riemannian' if d.D > 0 else 'indefinite'
    if abs(d.D) > 1E-6:
        try:
            scipy.linalg.cholesky(assemble(spec, q), lower=True)
            definite = True
        except scipy.linalg.LinAlgError:
            definite = False
        if definite != (kind == 'riemannian'):
            raise InconsistencyError(
                'c^2 b1 b2 = %g says %s but Cholesky says %s at %s' %
                (value, kind, 'definite' if definite else 'not definite',
                 list(spec.point(q).coords)))
    return kind, value


def cometric(spec, q, tol=1E-9):
    """Inverse metric at q: closed form for G, numerical for H."""
    d = spec.at(q)
    m1 = spec.m1
    if spec.variant == 'G':
        d.require_riemannian(tol)
    g = assemble(spec, q)
    cond = np.linalg.cond(g)
    if cond > 1E12:
        warnings.warn('metric %s at %s has condition number %.3e' %
                      (spec.variant, list(d.q.coords), cond), RuntimeWarning)
    if spec.variant == 'H':
        return np.linalg.inv(g)
    c, D = d.c, d.D
    inv = np.zeros((spec.dim, spec.dim))
    inv[:m1, :m1] = (d.g1inv + c**2*d.b2/D*np.outer(d.gf1, d.gf1))/d.f2**2
    inv[m1:, m1:] = (d.g2inv + c**2*d.b1/D*np.outer(d.gf2, d.gf2))/d.f1**2
    cross = -c/(d.f1*d.f2*D)*np.outer(d.gf1, d.gf2)
    inv[:m1, m1:] = cross
    inv[m1:, :m1] = cross.T
    return inv


def warp_gradients(spec, q, tol=1E-9):
    """grad(f1^h) and grad(f2^v) in the product metric, closed form."""
    d = spec.at(q)
    c = d.c
    if spec.variant == 'G':
        d.require_riemannian(tol)
        g1 = (spec.lift_h(d.gf1/d.f2**2) -
              spec.lift_v(c*d.b1/(d.f1*d.f2)*d.gf2))/d.D
        g2 = (spec.lift_v(d.gf2/d.f1**2) -
              spec.lift_h(c*d.b2/(d.f1*d.f2)*d.gf1))/d.D
        return g1, g2
    g1 = spec.lift_h(d.gf1 - d.K*d.b1/d.E*d.gf1)
    g2 = spec.lift_v(d.gf2/d.f1**2)
    return g1, g2


ReconstructionData = namedtuple('ReconstructionData',
                                'phi1 phi2 psi1 psi2 X1 Y1 X2 Y2')


def reconstruct_vector(spec, data, q, tol=1E-9):
    """
    The product vector X with G(X, Z^h) = G(phi2 X1^h + phi1 X2^v, Z^h)
    for base vectors Z and G(X, Z^v) = G(psi2 Y1^h + psi1 Y2^v, Z^v) for
    fiber vectors Z.
    """
    if spec.variant != 'G':
        raise ConfigError('reconstruct_vector needs variant G',
                          key='variant')
    d = spec.at(q)
    gh, gv = warp_gradients(spec, q, tol)
    X1, Y1 = np.asarray(data.X1, float), np.asarray(data.Y1, float)
    X2, Y2 = np.asarray(data.X2, float), np.asarray(data.Y2, float)
    k = d.c*d.f1*d.f2
    alpha = k*(data.psi2*(Y1 @ d.df1) - data.phi2*(X1 @ d.df1))
    beta = k*(data.psi1*(Y2 @ d.df2) - data.phi1*(X2 @ d.df2))
    return (data.phi2*spec.lift_h(X1) + data.psi1*spec.lift_v(Y2)
            + alpha*gv - beta*gh)


def degeneracy_constants(spec, q):
    """
    (b1, b2, b1 - 1/(c^2 b2)). Where G degenerates, b1 and b2 are
    constants tied by b1 = 1/(c^2 b2), so the residual vanishes.
    """
    d = spec.at(q)
    if d.c == 0 or d.b2 == 0:
        return d.b1, d.b2, float('inf')
    return d.b1, d.b2, d.b1 - 1/(d.c**2*d.b2)


def product_points(spec, count, seed=42, margin=1E-3):
    """Deterministic low-discrepancy sample of product points."""
    if count < 1:
        return []
    sampler = qmc.Halton(d=spec.dim, scramble=True, seed=seed)
    low = np.array([a + margin*(b - a) for a, b in spec.domain])
    high = np.array([b - margin*(b - a) for a, b in spec.domain])
    return [spec.point(x) for x in qmc.scale(sampler.random(count), low, high)]


class LiftedScalar(object):
    """
    A scalar field of one factor seen as a function of the product
    coordinates, in the form the oracle accepts (callable, with jet).
    """

    def __init__(self, spec, field):
        if field.chart is not spec.base and field.chart is not spec.fiber:
            raise ConfigError('field %s lives on neither factor' %
                              field.expr.source)
        self.spec = spec
        self.field = field

    def __repr__(self):
        side = 'h' if self.field.chart is self.spec.base else 'v'
        return 'LiftedScalar((%s)^%s)' % (self.field.expr.source, side)

    def __call__(self, x):
        return float(self.field.expr.evaluate_in(_env(self.spec, x)))

    def jet(self, x):
        v = self.field.expr.evaluate_in(_env(self.spec, x, jets=True))
        if not isinstance(v, Jet2):
            v = Jet2.constant(v, self.spec.dim)
        return v
