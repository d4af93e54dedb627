'''
Curvature of the metric h when grad f1 and grad f2 are parallel, in
closed form and from the coordinate oracle.

Conventions: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
Ric(X,Y) = trace(V -> R(V,X)Y), (X ^ Y)Z = g(Y,Z) X - g(X,Z) Y.
With K = (c f2)^2 and E = 1 + K b1, for base vectors X1, Y1, Z1 and
fiber vectors X2, Y2, Z2::

    R(X1,Y1)Z1 = (R1(X1,Y1)Z1)^h
    R(X1,Y1)Z2 = 0
    R(X2,Y2)Z2 = (R2(X2,Y2)Z2)^v - b1/E ((X2 ^ Y2)Z2)^v
                 + c^2 f1 f2 b1/E^2 ((X2 ^ Y2)Z2)(f2) (gf1)^h
    R(X2,Y2)Z1 = c^2 f2 b1 Z1(f1)/(f1 E) ((X2 ^ Y2) gf2)^v
    R(X1,Y2)Z1 = c^2 X1(ln f1) Z1(ln f1) Y2(f2)/E (gf2)^v
    R(X1,Y2)Z2 = c^2 X1(ln f1)/E (f2 b1 ((gf2 ^ Y2)Z2)^v
                                  - f1 Y2(f2) Z2(f2)/E (gf1)^h)

Ricci and scalar curvature are evaluated as displayed::

    Ric(X1,Y1) = Ric1(X1,Y1) - c^2 b2/E X1(ln f1) Y1(ln f1)
    Ric(X1,Y2) = c^2 (m2-1) b1 f2/E X1(ln f1) Y2(f2)
    Ric(X2,Y2) = Ric2(X2,Y2) + c^2 b1/E^2 X2(f2) Y2(f2)
                 - (m2-1) b1/E g2(X2,Y2)
    S = S1 + S2/f1^2 - m2 (m2-1) b1/(f1^2 E)

Against the oracle the fiber Ricci display is off by
-2 c^2 b1 X2(f2) Y2(f2)/E^2 and the scalar display by
-2 c^2 b1 b2/(f1^2 E^2); ``ricci_discrepancy_H`` and
``scalar_discrepancy_H`` give these differences. Both vanish when c = 0
or f2 is constant.
'''

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .chart import euclidean, sphere2
from .connection import LiftedVectorField
from .errors import ConfigError, HypothesisError
from .metric import WarpSpec, assemble, metric_field


@dataclass
class CurvatureReport:
    object: str
    closed_form: object
    oracle: object
    hessian_norms: tuple = None

    @property
    def abs_diff(self):
        return float(np.max(np.abs(np.asarray(self.closed_form) -
                                   np.asarray(self.oracle))))


def wedge(g, X, Y, Z):
    """(X ^ Y)Z = g(Y,Z) X - g(X,Z) Y."""
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    return (Y @ g @ Z)*X - (X @ g @ Z)*Y


def check_parallel(spec, q, tol=1E-8):
    """
    Max-abs entries of the covariant Hessians of f1 and f2 at q; raises
    HypothesisError when either exceeds ``tol``.
    """
    d = spec.at(q)
    norms = (float(np.max(np.abs(d.H1))), float(np.max(np.abs(d.H2))))
    if max(norms) > tol:
        raise HypothesisError(norms, tol)
    return norms


def _require_H(spec):
    if spec.variant != 'H':
        raise ConfigError('curvature closed forms need variant H',
                          key='variant')


def _vector(spec, V, q):
    if isinstance(V, LiftedVectorField):
        return V.lifted(spec, q)
    V = np.asarray(V, dtype=float)
    if V.size != spec.dim:
        raise ValueError('product vector needs %d components, got %d' %
                         (spec.dim, V.size))
    return V


def _split(spec, V):
    return V[:spec.m1], V[spec.m1:]


def _factor_riemann(chart, p):
    return oracle.riemann(chart.metric_field(), p)


class _Blocks(object):
    """Closed-form curvature pieces at one point."""

    def __init__(self, spec, q):
        self.spec = spec
        self.d = d = spec.at(q)
        self.R1 = _factor_riemann(spec.base, d.p1)
        self.R2 = _factor_riemann(spec.fiber, d.p2)

    def hhh(self, X, Y, Z):
        return self.spec.lift_h(oracle.apply_riemann(self.R1, X, Y, Z))

    def vvv(self, X, Y, Z):
        d, spec = self.d, self.spec
        w = wedge(d.g2, X, Y, Z)
        return (spec.lift_v(oracle.apply_riemann(self.R2, X, Y, Z)
                            - d.b1/d.E*w)
                + d.c**2*d.f1*d.f2*d.b1/d.E**2*(w @ d.df2)*spec.lift_h(d.gf1))

    def vvh(self, X, Y, Z):
        d = self.d
        return self.spec.lift_v(d.c**2*d.f2*d.b1*(Z @ d.df1)/(d.f1*d.E)
                                * wedge(d.g2, X, Y, d.gf2))

    def hvh(self, X, Y, Z):
        d = self.d
        return self.spec.lift_v(d.c**2*(X @ d.df1)*(Z @ d.df1)/d.f1**2
                                * (Y @ d.df2)/d.E*d.gf2)

    def hvv(self, X, Y, Z):
        d, spec = self.d, self.spec
        XL = (X @ d.df1)/d.f1
        return d.c**2*XL/d.E*(
            spec.lift_v(d.f2*d.b1*wedge(d.g2, d.gf2, Y, Z))
            - d.f1*(Y @ d.df2)*(Z @ d.df2)/d.E*spec.lift_h(d.gf1))

    def apply(self, X, Y, Z):
        """R(X,Y)Z for product vectors, by trilinearity over the blocks."""
        X1, X2 = _split(self.spec, X)
        Y1, Y2 = _split(self.spec, Y)
        Z1, Z2 = _split(self.spec, Z)
        return (self.hhh(X1, Y1, Z1)
                + self.vvv(X2, Y2, Z2) + self.vvh(X2, Y2, Z1)
                + self.hvh(X1, Y2, Z1) + self.hvv(X1, Y2, Z2)
                - self.hvh(Y1, X2, Z1) - self.hvv(Y1, X2, Z2))


def riemann_closed_H(spec, X, Y, Z, q, tol=1E-8):
    """R(X,Y)Z under the parallel-gradient hypothesis."""
    _require_H(spec)
    q = spec.point(q)
    check_parallel(spec, q, tol)
    X, Y, Z = (_vector(spec, V, q) for V in (X, Y, Z))
    return _Blocks(spec, q).apply(X, Y, Z)


def riemann_oracle(spec, q, mode='dual'):
    """R^l_kij of the assembled metric (any variant)."""
    q = spec.point(q)
    return oracle.riemann(metric_field(spec, mode), q.coords)


def apply_riemann_oracle(spec, X, Y, Z, q, mode='dual'):
    q = spec.point(q)
    X, Y, Z = (_vector(spec, V, q) for V in (X, Y, Z))
    return oracle.apply_riemann(riemann_oracle(spec, q, mode), X, Y, Z)


def ricci_closed_H(spec, X, Y, q, tol=1E-8):
    """Ric(X,Y) from the three block displays."""
    _require_H(spec)
    q = spec.point(q)
    check_parallel(spec, q, tol)
    X, Y = _vector(spec, X, q), _vector(spec, Y, q)
    d = spec.at(q)
    c, E, m2 = d.c, d.E, spec.m2
    X1, X2 = _split(spec, X)
    Y1, Y2 = _split(spec, Y)
    Ric1 = oracle.ricci(spec.base.metric_field(), d.p1)
    Ric2 = oracle.ricci(spec.fiber.metric_field(), d.p2)

    def mixed(U1, V2):
        return c**2*(m2 - 1)*d.b1*d.f2/E*(U1 @ d.df1)/d.f1*(V2 @ d.df2)

    hh = X1 @ Ric1 @ Y1 - c**2*d.b2/E*(X1 @ d.df1)*(Y1 @ d.df1)/d.f1**2
    vv = (X2 @ Ric2 @ Y2 + c**2*d.b1/E**2*(X2 @ d.df2)*(Y2 @ d.df2)
          - (m2 - 1)*d.b1/E*(X2 @ d.g2 @ Y2))
    return float(hh + vv + mixed(X1, Y2) + mixed(Y1, X2))


def ricci_oracle(spec, X, Y, q, mode='dual'):
    q = spec.point(q)
    X, Y = _vector(spec, X, q), _vector(spec, Y, q)
    return float(X @ oracle.ricci(metric_field(spec, mode), q.coords) @ Y)


def ricci_discrepancy_H(spec, X, Y, q):
    """Oracle minus display for Ric: -2 c^2 b1 X2(f2) Y2(f2)/E^2."""
    q = spec.point(q)
    X, Y = _vector(spec, X, q), _vector(spec, Y, q)
    d = spec.at(q)
    X2, Y2 = _split(spec, X)[1], _split(spec, Y)[1]
    return float(-2*d.c**2*d.b1*(X2 @ d.df2)*(Y2 @ d.df2)/d.E**2)


def scalar_closed_H(spec, q, tol=1E-8):
    _require_H(spec)
    q = spec.point(q)
    check_parallel(spec, q, tol)
    d = spec.at(q)
    S1 = oracle.scalar(spec.base.metric_field(), d.p1)
    S2 = oracle.scalar(spec.fiber.metric_field(), d.p2)
    m2 = spec.m2
    return float(S1 + S2/d.f1**2 - m2*(m2 - 1)*d.b1/(d.f1**2*d.E))


def scalar_oracle(spec, q, mode='dual'):
    q = spec.point(q)
    return oracle.scalar(metric_field(spec, mode), q.coords)


def scalar_discrepancy_H(spec, q):
    """Oracle minus display for S: -2 c^2 b1 b2/(f1^2 E^2)."""
    d = spec.at(q)
    return float(-2*d.c**2*d.b1*d.b2/(d.f1**2*d.E**2))


def compare_curvature(spec, q, mode='dual', tol=1E-8):
    """
    Closed-form Riemann tensor (R[l,k,i,j] = R^l_kij), Ricci tensor and
    scalar curvature of h at q next to the oracle values of the
    assembled metric. Every report carries the Hessian norms of the
    parallel-gradient check; a violation raises HypothesisError.
    """
    _require_H(spec)
    q = spec.point(q)
    norms = check_parallel(spec, q, tol)
    n = spec.dim
    basis = np.eye(n)
    R = riemann_oracle(spec, q, mode)
    closed = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                closed[:, k, i, j] = riemann_closed_H(
                    spec, basis[i], basis[j], basis[k], q, tol)
    Ric = np.einsum('ibia->ab', R)
    display = np.array([[ricci_closed_H(spec, basis[a], basis[b], q, tol)
                         for b in range(n)] for a in range(n)])
    S = float(np.einsum('ab,ab->', np.linalg.inv(assemble(spec, q)), Ric))
    return [CurvatureReport('riemann', closed, R, norms),
            CurvatureReport('ricci', display, Ric, norms),
            CurvatureReport('scalar', scalar_closed_H(spec, q, tol), S, norms)]


def scalar_constant_curvature(m1, k1, m2, k2, f1_val, f2_val, c, b1):
    """
    S = m1 (m1-1) k1 + m2 (m2-1)/f1^2 (k2 - b1/(1 + (c f2)^2 b1)) for
    factors of constant sectional curvature k1, k2.
    """
    if not f1_val > 0:
        raise ValueError('f1_val=%g must be positive' % f1_val)
    return (m1*(m1 - 1)*k1
            + m2*(m2 - 1)/f1_val**2*(k2 - b1/(1 + (c*f2_val)**2*b1)))


def sectional_curvature(spec, X, Y, q, mode='dual'):
    q = spec.point(q)
    return oracle.sectional_curvature(metric_field(spec, mode), q.coords,
                                      _vector(spec, X, q), _vector(spec, Y, q))


def fiber_plane_curvature(spec, q, mode='dual'):
    """
    f1^2 times the oracle sectional curvature of every coordinate plane
    of the fiber, the expected magnitude b1/E for a flat fiber, and the
    sign found (+1, -1, or 0 when all values vanish).
    """
    q = spec.point(q)
    d = spec.at(q)
    m1, m2 = spec.m1, spec.m2
    if m2 < 2:
        raise ValueError('fiber planes need a fiber of dimension >= 2')
    values = []
    for i in range(m2):
        for j in range(i + 1, m2):
            X = np.zeros(spec.dim)
            Y = np.zeros(spec.dim)
            X[m1+i] = 1.0
            Y[m1+j] = 1.0
            values.append(d.f1**2*sectional_curvature(spec, X, Y, q, mode))
    values = np.array(values)
    worst = values[np.argmax(np.abs(values))]
    sign = 0 if worst == 0 else int(math.copysign(1, worst))
    return values, d.b1/d.E, sign


def converse_flat_spec(c=0.5, s=1.0):
    """
    Variant-H spec over the half line times the unit sphere with
    f1 = x/sqrt(1 - c^2 s^2) and f2 = s; its metric is a constant
    multiple of the flat metric dx^2 + x^2 g_sphere.
    """
    if not (c*s)**2 < 1:
        raise ValueError('need c^2 s^2 < 1, got %g' % (c*s)**2)
    beta = 1/math.sqrt(1 - (c*s)**2)
    base = euclidean(1, variables=['r'], domain=[(0.25, 5.0)], name='halfline')
    fiber = sphere2()
    return WarpSpec(base, fiber, '%r*r' % beta, '%r' % s, c, 'H')
