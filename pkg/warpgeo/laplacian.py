'''
Laplace-Beltrami operator of lifted functions, closed form against the
coordinate oracle, and the harmonicity defects of the warping functions.

Sign convention: Delta phi = div grad phi = g^ij (d_i d_j phi - Gamma^k_ij d_k phi).

In the closed forms Delta_i is the Laplacian of g_i, B_i = grad f_i (b_i)
and, for variant H, K = (c f2)^2, E = 1 + K b1, P = grad f1 (phi1).
'''

from dataclasses import dataclass

import numpy as np

from . import oracle
from .chart import ScalarField
from .errors import ConfigError
from .metric import metric_field, LiftedScalar


@dataclass
class LaplacianReport:
    which: str
    point: np.ndarray
    closed_form: float
    oracle: float

    @property
    def abs_diff(self):
        return abs(self.closed_form - self.oracle)


def _roles(spec, d, which):
    """
    Quantities of f_i (``own``) and f_{3-i} (``other``) for the lift of
    f_i, so that Delta(f2^v) is the role swap of Delta(f1^h).
    """
    if which == 'f1':
        own = (spec.f1, d.p1, d.f1, d.b1, spec.m1)
        other = (spec.f2, d.p2, d.f2, d.b2, spec.m2)
    elif which == 'f2':
        own = (spec.f2, d.p2, d.f2, d.b2, spec.m2)
        other = (spec.f1, d.p1, d.f1, d.b1, spec.m1)
    else:
        raise ValueError('which=%s is illegal - range=(f1, f2)' % which)
    return own, other


def _terms_G(spec, which, q, tol):
    d = spec.at(q)
    if spec.variant != 'G':
        raise ConfigError('closed form needs variant G', key='variant')
    d.require_riemannian(tol)
    (fi, pi, vi, bi, mi), (fj, pj, vj, bj, mj) = _roles(spec, d, which)
    c, D = d.c, d.D
    lap_i = fi.laplacian(pi)
    lap_j = fj.laplacian(pj)
    Bi = fi.grad_of_b(pi)
    Bj = fj.grad_of_b(pj)
    factor_part = (lap_i/vj - c*bi*lap_j/vi)/(vj*D)
    rest = (bi*(c*(1 - mi)*bj + mj)/(vi*vj)/(vj*D)
            + c**2/(2*vj*D**2)*(bj*Bi/vj - c*bi**2*Bj/vi))
    return factor_part, rest, vj*D


def laplacian_lift_G(spec, which, q, tol=1E-9):
    """Delta(f1^h) (``which='f1'``) or Delta(f2^v) (``which='f2'``) for G."""
    factor_part, rest, scale = _terms_G(spec, which, q, tol)
    return float(factor_part + rest)


def laplacian_lift_G_parallel(spec, which, q, tol=1E-9):
    """
    Delta of the lifted warping function when both gradients are
    parallel::

        Delta(f1^h) = ((1-m1) c b1 b2 + m2 b1)/(f1 f2^2 D)
        Delta(f2^v) = ((1-m2) c b1 b2 + m1 b2)/(f1^2 f2 D)
    """
    d = spec.at(q)
    d.require_riemannian(tol)
    c, b1, b2 = d.c, d.b1, d.b2
    if which == 'f1':
        return ((1 - spec.m1)*c*b1*b2 + spec.m2*b1)/(d.f1*d.f2**2*d.D)
    if which == 'f2':
        return ((1 - spec.m2)*c*b1*b2 + spec.m1*b2)/(d.f1**2*d.f2*d.D)
    raise ValueError('which=%s is illegal - range=(f1, f2)' % which)


def _field(spec, field):
    if field == 'f1':
        return spec.f1
    if field == 'f2':
        return spec.f2
    if not isinstance(field, ScalarField):
        raise TypeError('field is %s, must be ScalarField, "f1" or "f2"' %
                        type(field))
    return field


def laplacian_lift_H(spec, field, q):
    """Delta of the lift of a field on either factor, metric h."""
    if spec.variant != 'H':
        raise ConfigError('closed form needs variant H', key='variant')
    field = _field(spec, field)
    d = spec.at(q)
    c, K, E = d.c, d.K, d.E
    if field.chart is spec.base:
        p = d.p1
        dphi = field.jet(p).gradient
        P = float(dphi @ d.gf1)
        H_phi = float(d.gf1 @ field.covariant_hessian(p) @ d.gf1)
        H_f = float(d.gf1 @ d.H1 @ d.gf1)
        return float(field.laplacian(p) + spec.m2*P/(d.f1*E)
                     - K/E*(P*spec.f1.laplacian(p) + H_phi - K*P/E*H_f))
    if field.chart is not spec.fiber:
        raise ConfigError('field %s lives on neither factor' %
                          field.expr.source)
    p = d.p2
    along = float(field.jet(p).gradient @ d.gf2)
    return float((field.laplacian(p) + c**2*d.f2*d.b1*along/E)/d.f1**2)


def laplacian_lift(spec, field, q, tol=1E-9):
    """Closed-form Laplacian of a lift, dispatched on the variant."""
    if spec.variant == 'H':
        return laplacian_lift_H(spec, field, q)
    field = _field(spec, field)
    if field is spec.f1:
        return laplacian_lift_G(spec, 'f1', q, tol)
    if field is spec.f2:
        return laplacian_lift_G(spec, 'f2', q, tol)
    raise ConfigError('variant G has closed-form Laplacians only for f1 '
                      'and f2', key='fields')


def laplacian_oracle(spec, field, q, mode='dual'):
    """Laplace-Beltrami of the lifted field under the assembled metric."""
    q = spec.point(q)
    return oracle.laplace_beltrami(metric_field(spec, mode),
                                   LiftedScalar(spec, _field(spec, field)),
                                   q.coords)


def compare(spec, field, q, mode='dual', tol=1E-9):
    q = spec.point(q)
    name = field if isinstance(field, str) else field.expr.source
    return LaplacianReport(name, q.coords, laplacian_lift(spec, field, q, tol),
                           laplacian_oracle(spec, field, q, mode))


def harmonicity_defect(spec, which, q, tol=1E-9):
    """
    The part of Delta(f1^h) or Delta(f2^v) that survives when f1 and f2
    are harmonic on their factors; the lift is harmonic iff it is zero.
    For G the expression is rescaled by f_{3-i} D, for H it is the
    Laplacian itself with the factor Laplacian terms dropped::

        H:  f1^h:  m2 b1/(f1 E) - K H^{f1}(gf1, gf1)/E^2
            f2^v:  c^2 f2 b1 b2/(f1^2 E)
    """
    if spec.variant == 'G':
        factor_part, rest, scale = _terms_G(spec, which, q, tol)
        return float(rest*scale)
    d = spec.at(q)
    if which == 'f1':
        return float(spec.m2*d.b1/(d.f1*d.E)
                     - d.K*(d.gf1 @ d.H1 @ d.gf1)/d.E**2)
    if which == 'f2':
        return float(d.c**2*d.f2*d.b1*d.b2/(d.f1**2*d.E))
    raise ValueError('which=%s is illegal - range=(f1, f2)' % which)
