'''
Explicit orthonormal frames of the product metrics and the sum
identities behind the Laplacian formulas.

Both constructions start from g_i-orthonormal factor frames e_k
(Gram-Schmidt of the coordinate basis, in coordinate order).

Variant G. Base vectors u_k = e_k^h / f2. On the fiber, with
a_j = e_j(f2), A_j = sum_{i<j} a_i^2, D_j = 1 - c^2 b1 A_j and
T_j = sum_{i<j} a_i e_i::

    u'_j = -c a_j/(f2 D_j) (gf1)^h + e_j^v/f1 + c^2 b1 a_j/(f1 D_j) T_j^v
    |u'_j|^2 = D_{j+1}/D_j

Variant H. Fiber vectors e_j^v / f1. On the base, with a_i = e_i(f1),
B_i = sum_{j<i} a_j^2, E_i = 1 + (c f2)^2 B_i and T_i = sum_{j<i} a_j e_j::

    u'_i = -(c f2)^2 a_i/E_i T_i^h + e_i^h
    |u'_i|^2 = E_{i+1}/E_i
'''

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import oracle
from .errors import DegenerateMetricError, NotPositiveDefiniteError
from .metric import assemble, metric_field, LiftedScalar


@dataclass
class FrameData:
    """
    Frame of the product metric at one point. ``vectors`` holds the
    normalized frame, one product vector per row, base-indexed vectors
    first. ``a``, ``partial`` (A_j or B_i, one more entry than ``a``),
    ``T`` and ``norms`` describe the non-trivial block: the fiber block
    for variant G, the base block for variant H. ``denominators`` are
    D_j (G) or E_i (H).
    """
    variant: str
    vectors: np.ndarray
    a: np.ndarray
    partial: np.ndarray
    T: list
    norms: np.ndarray
    denominators: np.ndarray
    unnormalized: np.ndarray = dataclass_field(default=None, repr=False)


def factor_orthonormal_frame(chart, p):
    """Gram-Schmidt of the coordinate basis under g(p); rows are vectors."""
    g = chart.metric_at(p)
    n = chart.dim
    frame = np.zeros((n, n))
    for k in range(n):
        v = np.zeros(n)
        v[k] = 1.0
        for e in frame[:k]:
            v = v - (e @ g @ v)*e
        norm2 = v @ g @ v
        if not norm2 > 0:
            raise NotPositiveDefiniteError(chart.name, p, norm2)
        frame[k] = v/np.sqrt(norm2)
    return frame


def _partial_sums(a):
    return np.concatenate(([0.0], np.cumsum(a**2)))


def _partial_vectors(a, frame):
    T = [np.zeros(frame.shape[1])]
    for i in range(len(a)):
        T.append(T[-1] + a[i]*frame[i])
    return T


def product_frame(spec, q, guard=1E-8):
    """
    Orthonormal frame of the product metric at q as a FrameData.

    Rows of ``vectors`` are product vectors: the m1 base-indexed
    vectors first, then the m2 fiber-indexed ones. For variant G the
    base rows are e_k^h / f2 and the fiber rows the normalized u'_j;
    for variant H the base rows are the normalized u'_i and the fiber
    rows e_j^v / f1 (see the module docstring).

    ``guard`` only applies to variant G: DegenerateMetricError is
    raised when the smallest D_j = 1 - c^2 b1 A_j falls below it.
    The variant H denominators E_i are at least 1.
    """
    q = spec.point(q)
    d = spec.at(q)
    c = d.c
    E1 = factor_orthonormal_frame(spec.base, d.p1)
    E2 = factor_orthonormal_frame(spec.fiber, d.p2)
    m1, m2 = spec.m1, spec.m2
    rows = []
    if spec.variant == 'G':
        for k in range(m1):
            rows.append(spec.lift_h(E1[k]/d.f2))
        a = E2 @ d.df2
        A = _partial_sums(a)
        den = 1 - c**2*d.b1*A
        if np.min(den) < guard:
            raise DegenerateMetricError(
                'frame denominator 1 - c^2 b1 A_j = %g below %g at %s' %
                (np.min(den), guard, list(q.coords)), diagnostic=1 - d.D)
        T = _partial_vectors(a, E2)
        raw = []
        for j in range(m2):
            u = (-c*a[j]/(d.f2*den[j])*spec.lift_h(d.gf1)
                 + spec.lift_v(E2[j]/d.f1)
                 + spec.lift_v(c**2*d.b1*a[j]/(d.f1*den[j])*T[j]))
            raw.append(u)
        norms = np.sqrt(den[1:]/den[:-1])
        rows.extend(u/n for u, n in zip(raw, norms))
    else:
        a = E1 @ d.df1
        A = _partial_sums(a)
        den = 1 + d.K*A
        T = _partial_vectors(a, E1)
        raw = [spec.lift_h(E1[i] - d.K*a[i]/den[i]*T[i]) for i in range(m1)]
        norms = np.sqrt(den[1:]/den[:-1])
        rows.extend(u/n for u, n in zip(raw, norms))
        for j in range(m2):
            rows.append(spec.lift_v(E2[j]/d.f1))
    return FrameData(spec.variant, np.array(rows), a, A, T, norms, den,
                     np.array(raw))


def gram_matrix(spec, frame, q):
    return frame.vectors @ assemble(spec, q) @ frame.vectors.T


def sum_identities(spec, q, guard=1E-8):
    """
    Residuals (left minus right side) of the algebraic identities the
    frame sums collapse to, keyed by a short name. Variant G uses the
    fiber quantities a_j, A_j, D_j; variant H the base ones.
    """
    q = spec.point(q)
    d = spec.at(q)
    fr = product_frame(spec, q, guard)
    a, A, den, T = fr.a, fr.partial, fr.denominators, fr.T
    norm2 = fr.norms**2
    m = len(a)
    res = {}
    if spec.variant == 'G':
        s = d.c**2*d.b1
        D = d.D
        # tail[j] = sum_{i>=j} a_i^2/(D_i D_{i+1})
        terms = a**2/(den[:-1]*den[1:])
        tail = np.concatenate((np.cumsum(terms[::-1])[::-1], [0.0]))
        res['telescoping'] = max(abs(1/den[j] + s*tail[j] - 1/D)
                                 for j in range(m))
        res['neighbours'] = max(
            [abs((den[j+1]*den[j-1] + (s*a[j]*a[j-1])**2) /
                 (den[j]*(1 - s*(A[j+1] - a[j-1]**2))) - 1)
             for j in range(1, m)] or [0.0])
        res['norms'] = max(abs(1/norm2[j] + (s*a[j])**2*tail[j+1]
                               - (1 - s*(d.b2 - a[j]**2))/D)
                           for j in range(m))
        w = a/(np.sqrt(norm2)*den[:-1])
        vector = (s*sum(w[j]**2*T[j] for j in range(m))
                  + sum(a[j]/(norm2[j]*den[j])*e for j, e in
                        enumerate(factor_orthonormal_frame(spec.fiber, d.p2))))
        res['gradient'] = float(np.max(np.abs(vector - d.gf2/D)))
        res['squared_norm'] = abs(
            s*np.sum(a**2*A[:-1]/(norm2*den[:-1]**2))
            + np.sum(a**2/(norm2*den[:-1])) - d.b2/D)
        res['weights'] = abs(np.sum(w**2) - d.b2/D)
    else:
        K, E = d.K, d.E
        terms = a**2/(den[:-1]*den[1:])
        # after[j] = sum_{i>j} a_i^2/(E_i E_{i+1})
        after = np.concatenate((np.cumsum(terms[::-1])[::-1], [0.0]))[1:]
        res['telescoping'] = max(abs(K*after[j] - 1/den[j+1] + 1/E)
                                 for j in range(m))
        res['norms'] = max(abs(K**2*a[j]**2*after[j] + den[j]/den[j+1]
                               - (1 - K*a[j]**2/E)) for j in range(m))
    res['partial_sums'] = abs(A[0]) + abs(A[-1] - (d.b2 if spec.variant == 'G'
                                                   else d.b1))
    return res


def sum_identities_residual(spec, q, guard=1E-8):
    return float(max(sum_identities(spec, q, guard).values()))


def frame_derivative_residual(spec, q, guard=1E-8):
    """
    Worst deviation from the derivative identities of the frame:
    u_j(f1^h) = -(c f1 b1/f2) u_j(f2^v), u'_j(f1^h) = -c b1 a_j/(f2 D_j),
    u'_j(f2^v) = a_j/(f1 D_j) and T_j(f2) = A_j = g2(T_j, T_j) for G;
    u'_i(f1^h) = a_i/E_i and T_i(f1) = B_i = g1(T_i, T_i) for H.
    """
    q = spec.point(q)
    d = spec.at(q)
    fr = product_frame(spec, q, guard)
    c = d.c
    df1 = spec.lift_h(d.df1)
    df2 = spec.lift_v(d.df2)
    worst = 0.0
    if spec.variant == 'G':
        m1 = spec.m1
        for j in range(spec.m2):
            u = fr.vectors[m1+j]
            raw = fr.unnormalized[j]
            den = fr.denominators[j]
            worst = max(worst,
                        abs(u @ df1 + c*d.f1*d.b1/d.f2*(u @ df2)),
                        abs(raw @ df1 + c*d.b1*fr.a[j]/(d.f2*den)),
                        abs(raw @ df2 - fr.a[j]/(d.f1*den)),
                        abs(fr.T[j] @ d.df2 - fr.partial[j]),
                        abs(fr.T[j] @ d.g2 @ fr.T[j] - fr.partial[j]))
        return float(worst)
    for i in range(spec.m1):
        raw = fr.unnormalized[i]
        worst = max(worst,
                    abs(raw @ df1 - fr.a[i]/fr.denominators[i]),
                    abs(fr.T[i] @ d.df1 - fr.partial[i]),
                    abs(fr.T[i] @ d.g1 @ fr.T[i] - fr.partial[i]))
    return float(worst)


def frame_trace_laplacian(spec, field, q, mode='dual', guard=1E-8):
    """
    sum_j Hess(phi)(u_j, u_j) over the product frame, with the Hessian
    of the lifted field taken from the oracle.
    """
    q = spec.point(q)
    fr = product_frame(spec, q, guard)
    H = oracle.hessian(metric_field(spec, mode), LiftedScalar(spec, field),
                       q.coords)
    return float(np.einsum('ji,ik,jk->', fr.vectors, H, fr.vectors))
