'''
Gradients of lifted functions and the Levi-Civita connection of the
product metrics, in closed form and through the coordinate oracle.

Closed forms, with grad the product gradient and gf_i the gradient of
f_i in g_i (factor connections and Hessians come from the oracle on
each chart):

variant G, with B_i(X,Y) = c f_i H^{f_i}(X,Y) + c X(f_i) Y(f_i) - g_i(X,Y)::

    nabla_{X^h} Y^h = (nabla^1_X Y)^h + f2 B_1(X,Y) grad(f2^v)
    nabla_{X^v} Y^v = (nabla^2_X Y)^v + f1 B_2(X,Y) grad(f1^h)
    nabla_{X^h} Y^v = -c X(f1) Y(f2) (f2 grad(f1^h) + f1 grad(f2^v))
                      + Y(ln f2) X^h + X(ln f1) Y^v

variant H, with K = (c f2)^2 and E = 1 + K b1::

    nabla_{X^h} Y^h = (nabla^1_X Y)^h + K H^{f1}(X,Y)/E (gf1)^h
                      - c^2 f2 X(ln f1) Y(ln f1) (gf2)^v
    nabla_{X^v} Y^v = (nabla^2_X Y)^v - f1 g2(X,Y)/E (gf1)^h
    nabla_{X^h} Y^v = c^2 f2 X(f1) Y(f2)/E (gf1)^h + X(ln f1) Y^v

Lifted fields commute across factors, so nabla_{Y^v} X^h = nabla_{X^h} Y^v.
'''

import numpy as np

from . import oracle
from .errors import ConfigError, DimensionError
from .expr import Expression, parse, constant
from .metric import assemble, metric_field, warp_gradients

sides = ('base', 'fiber')


class LiftedVectorField(object):
    """
    Vector field on the base (``side='base'``, lifted horizontally) or
    on the fiber (``side='fiber'``, lifted vertically), with one
    Expression per coordinate of the owning chart.
    """

    def __init__(self, side, chart, components):
        if side not in sides:
            raise ValueError('side=%s is illegal - range=%s' %
                             (side, str(sides)))
        if len(components) != chart.dim:
            raise DimensionError('%d components for a %d-dimensional chart' %
                                 (len(components), chart.dim))
        self.side = side
        self.chart = chart
        self.components = [
            e if isinstance(e, Expression) else parse(str(e), chart.variables)
            for e in components]

    @classmethod
    def constant(cls, side, chart, vector):
        return cls(side, chart, [constant(v, chart.variables) for v in vector])

    @classmethod
    def coordinate(cls, side, chart, k):
        vector = np.zeros(chart.dim)
        vector[k] = 1.0
        return cls.constant(side, chart, vector)

    def __repr__(self):
        return 'LiftedVectorField(%s, %s)' % (
            self.side, ', '.join(e.source for e in self.components))

    def factor_point(self, q):
        return q.p1 if self.side == 'base' else q.p2

    def values(self, p):
        return np.array([e.evaluate(p) for e in self.components])

    def jacobian(self, p):
        """J[i,k] = d_i X^k on the owning chart."""
        J = np.empty((self.chart.dim, self.chart.dim))
        for k, e in enumerate(self.components):
            J[:, k] = e.jet(p).gradient
        return J

    def lifted(self, spec, q):
        v = self.values(self.factor_point(q))
        return spec.lift_h(v) if self.side == 'base' else spec.lift_v(v)

    def lifted_jacobian(self, spec, q):
        """Product-chart J[i,k] = d_i X^k of the lifted field."""
        n, m1 = spec.dim, spec.m1
        J = np.zeros((n, n))
        block = self.jacobian(self.factor_point(q))
        if self.side == 'base':
            J[:m1, :m1] = block
        else:
            J[m1:, m1:] = block
        return J


def _side_of(spec, chart):
    if chart is spec.base:
        return 'base'
    if chart is spec.fiber:
        return 'fiber'
    raise ConfigError('chart %s belongs to neither factor' % chart.name)


def _check_side(spec, X):
    if _side_of(spec, X.chart) != X.side:
        raise ConfigError('%s field lives on chart %s' % (X.side, X.chart.name))


def grad_lift_warp(spec, which, q, tol=1E-9):
    """grad(f1^h) (``which='f1'``) or grad(f2^v) (``which='f2'``)."""
    if which not in ('f1', 'f2'):
        raise ValueError('which=%s is illegal - range=(f1, f2)' % which)
    gh, gv = warp_gradients(spec, q, tol)
    return gh if which == 'f1' else gv


def grad_lift(spec, field, q, tol=1E-9):
    """Gradient of the lift of a scalar field living on either factor."""
    q = spec.point(q)
    d = spec.at(q)
    c = d.c
    if spec.variant == 'G':
        d.require_riemannian(tol)
    side = _side_of(spec, field.chart)
    if side == 'base':
        p = d.p1
        dphi = field.jet(p).gradient
        gphi = d.g1inv @ dphi
        along = float(dphi @ d.gf1)
        if spec.variant == 'G':
            gh, gv = warp_gradients(spec, q, tol)
            return spec.lift_h(gphi/d.f2**2) - c*d.f1*along/d.f2*gv
        return spec.lift_h(gphi - d.K*along/d.E*d.gf1)
    p = d.p2
    dphi = field.jet(p).gradient
    gphi = d.g2inv @ dphi
    if spec.variant == 'G':
        along = float(dphi @ d.gf2)
        gh, gv = warp_gradients(spec, q, tol)
        return spec.lift_v(gphi/d.f1**2) - c*d.f2*along/d.f1*gh
    return spec.lift_v(gphi/d.f1**2)


def lifted_differential(spec, field, q):
    q = spec.point(q)
    if _side_of(spec, field.chart) == 'base':
        return spec.lift_h(field.jet(q.p1).gradient)
    return spec.lift_v(field.jet(q.p2).gradient)


def grad_lift_oracle(spec, field, q, mode='dual'):
    """Index raising of d(phi lift) with the assembled metric."""
    q = spec.point(q)
    return oracle.gradient(metric_field(spec, mode), q.coords,
                           lifted_differential(spec, field, q))


def b_tensor(spec, side, X, Y, q):
    """B_i(X,Y) = c f_i H^{f_i}(X,Y) + c X(f_i) Y(f_i) - g_i(X,Y)."""
    if side not in (1, 2):
        raise ValueError('side=%s is illegal - range=(1, 2)' % side)
    d = spec.at(q)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if side == 1:
        f, df, H, g = d.f1, d.df1, d.H1, d.g1
    else:
        f, df, H, g = d.f2, d.df2, d.H2, d.g2
    c = d.c
    return float(c*f*(X @ H @ Y) + c*(X @ df)*(Y @ df) - X @ g @ Y)


def _factor_nabla(X, Y, p):
    """nabla_X Y on the common chart of X and Y."""
    return oracle.covariant_derivative(Y.chart.metric_field(), p, X.values(p),
                                       Y.values(p), Y.jacobian(p))


def _mixed(spec, d, Xh, Yv, tol):
    """nabla_{X^h} Y^v for base vector Xh and fiber vector Yv at d.q."""
    c = d.c
    Xf1 = float(Xh @ d.df1)
    Yf2 = float(Yv @ d.df2)
    if spec.variant == 'G':
        gh, gv = warp_gradients(spec, d.q, tol)
        return (-c*Xf1*Yf2*(d.f2*gh + d.f1*gv)
                + Yf2/d.f2*spec.lift_h(Xh) + Xf1/d.f1*spec.lift_v(Yv))
    return (c**2*d.f2*Yf2*Xf1/d.E*spec.lift_h(d.gf1)
            + Xf1/d.f1*spec.lift_v(Yv))


def nabla_lifted(spec, X, Y, q, tol=1E-9):
    """Closed-form nabla_X Y for lifted fields X and Y at q."""
    q = spec.point(q)
    _check_side(spec, X)
    _check_side(spec, Y)
    d = spec.at(q)
    if spec.variant == 'G':
        d.require_riemannian(tol)
    c = d.c
    if X.side != Y.side:
        if X.side == 'base':
            return _mixed(spec, d, X.values(d.p1), Y.values(d.p2), tol)
        return _mixed(spec, d, Y.values(d.p1), X.values(d.p2), tol)

    if X.side == 'base':
        p = d.p1
        Xv, Yv = X.values(p), Y.values(p)
        nabla = spec.lift_h(_factor_nabla(X, Y, p))
        if spec.variant == 'G':
            gh, gv = warp_gradients(spec, q, tol)
            return nabla + d.f2*b_tensor(spec, 1, Xv, Yv, q)*gv
        XL, YL = (Xv @ d.df1)/d.f1, (Yv @ d.df1)/d.f1
        return (nabla + d.K*(Xv @ d.H1 @ Yv)/d.E*spec.lift_h(d.gf1)
                - c**2*d.f2*XL*YL*spec.lift_v(d.gf2))

    p = d.p2
    Xv, Yv = X.values(p), Y.values(p)
    nabla = spec.lift_v(_factor_nabla(X, Y, p))
    if spec.variant == 'G':
        gh, gv = warp_gradients(spec, q, tol)
        return nabla + d.f1*b_tensor(spec, 2, Xv, Yv, q)*gh
    return nabla - d.f1*(Xv @ d.g2 @ Yv)/d.E*spec.lift_h(d.gf1)


def nabla_oracle(spec, X, Y, q, mode='dual'):
    """nabla_X Y from the Christoffel symbols of the assembled metric."""
    q = spec.point(q)
    return oracle.covariant_derivative(
        metric_field(spec, mode), q.coords, X.lifted(spec, q),
        Y.lifted(spec, q), Y.lifted_jacobian(spec, q))


def bracket(spec, X, Y, q):
    """Lie bracket of lifted fields; lifts from different factors commute."""
    q = spec.point(q)
    if X.side != Y.side:
        return np.zeros(spec.dim)
    p = X.factor_point(q)
    v = X.values(p) @ Y.jacobian(p) - Y.values(p) @ X.jacobian(p)
    return spec.lift_h(v) if X.side == 'base' else spec.lift_v(v)


def torsion_residual(spec, X, Y, q):
    """max |nabla_X Y - nabla_Y X - [X,Y]|."""
    r = (nabla_lifted(spec, X, Y, q) - nabla_lifted(spec, Y, X, q)
         - bracket(spec, X, Y, q))
    return float(np.max(np.abs(r)))


def metric_compatibility_residual(spec, X, Y, Z, q, step=1E-5):
    """
    |X(G(Y,Z)) - G(nabla_X Y, Z) - G(Y, nabla_X Z)|, the directional
    derivative taken by central differences along the lift of X.
    """
    q = spec.point(q)
    x = q.coords
    direction = X.lifted(spec, q)

    def inner(t):
        qt = spec.point(x + t*direction)
        return float(Y.lifted(spec, qt) @ assemble(spec, qt) @
                     Z.lifted(spec, qt))

    derivative = (inner(step) - inner(-step))/(2*step)
    G = assemble(spec, q)
    rhs = (nabla_lifted(spec, X, Y, q) @ G @ Z.lifted(spec, q)
           + Y.lifted(spec, q) @ G @ nabla_lifted(spec, X, Z, q))
    return float(abs(derivative - rhs))
