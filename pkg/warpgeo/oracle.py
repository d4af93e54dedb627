'''
Coordinate oracle: Christoffel symbols, covariant derivatives,
curvature, gradients and the Laplace-Beltrami operator of an arbitrary
metric given as a matrix-valued function of the coordinates.

Nothing in this module knows about warped products. It only sees a
``MetricField``, so its results are an independent check of closed
forms derived elsewhere.

Conventions (index order of the returned arrays)::

    dg[k,i,j]      = d_k g_ij
    Gamma[k,i,j]   = Gamma^k_ij
                   = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)
    dGamma[m,k,i,j] = d_m Gamma^k_ij
    R[l,k,i,j]     = R^l_kij, the components of R(d_i, d_j) d_k, where
                     R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
                               - nabla_[X,Y] Z
    Ric[a,b]       = trace(V -> R(V, d_a) d_b) = R^i_bia

Derivatives of the metric come either from dual numbers (exact, mode
``'dual'``) or from central differences (mode ``'fd'``; step ``step``
for metric derivatives, ``curvature_step`` for derivatives of the
Christoffel symbols).
'''

import numpy as np

from .errors import DimensionError, DegenerateMetricError, OutOfDomainError
from .expr import Jet2

MAX_DIM = 8


def stack_jets(entries):
    """
    Turn an n x n nested list of Jet2 objects into the arrays
    (g, dg, d2g) with dg[k,i,j] = d_k g_ij and d2g[k,l,i,j] = d_k d_l g_ij.
    """
    n = len(entries)
    size = None
    for row in entries:
        for e in row:
            if isinstance(e, Jet2):
                size = e.size
                break
        if size is not None:
            break
    if size is None:
        raise ValueError('stack_jets needs at least one Jet2 entry')
    g = np.zeros((n, n))
    dg = np.zeros((size, n, n))
    d2g = np.zeros((size, size, n, n))
    for i in range(n):
        for j in range(n):
            e = entries[i][j]
            if isinstance(e, Jet2):
                g[i, j] = e.value
                dg[:, i, j] = e.gradient
                d2g[:, :, i, j] = e.hessian
            else:
                g[i, j] = e
    return g, dg, d2g


class MetricField(object):
    """
    Metric as a matrix-valued function of the coordinates.

    ``evaluate(p)`` returns the symmetric matrix. In mode ``'dual'``
    the field must also have ``evaluate_jets(p)`` returning
    ``(g, dg, d2g)`` (see ``stack_jets``). ``domain`` is an optional
    list of open intervals used to check that finite-difference
    stencils stay inside the chart.
    """
    modes = ('dual', 'fd')

    def __init__(self, dim, evaluate, evaluate_jets=None, mode='dual',
                 step=1E-4, curvature_step=1E-3, domain=None, name='metric'):
        if dim > MAX_DIM:
            raise DimensionError(
                'oracle curvature is limited to dimension %d, got %d' %
                (MAX_DIM, dim))
        if mode not in self.modes:
            raise ValueError('mode=%s is illegal - range=%s' %
                             (mode, str(self.modes)))
        if mode == 'dual' and evaluate_jets is None:
            raise ValueError('mode "dual" needs a jet-capable evaluator')
        self.dim = dim
        self.evaluate = evaluate
        self.evaluate_jets = evaluate_jets
        self.mode = mode
        self.step = step
        self.curvature_step = curvature_step
        self.domain = domain
        self.name = name

    def with_mode(self, mode):
        """Return a copy of this field using another derivative mode."""
        return MetricField(self.dim, self.evaluate, self.evaluate_jets, mode,
                           self.step, self.curvature_step, self.domain,
                           self.name)

    def __repr__(self):
        return 'MetricField(%s, dim=%d, mode=%s)' % (self.name, self.dim,
                                                      self.mode)

    def _interior(self, p, reach):
        if self.domain is None or self.mode == 'dual':
            return
        for x, (low, high) in zip(p, self.domain):
            if not (low < x - reach and x + reach < high):
                raise OutOfDomainError(self.name, p)

    def matrix(self, p):
        return np.asarray(self.evaluate(np.asarray(p, dtype=float)))

    def inverse(self, p):
        g = self.matrix(p)
        try:
            return np.linalg.inv(g)
        except np.linalg.LinAlgError:
            raise DegenerateMetricError('singular metric %s at %s' %
                                        (self.name, list(p)))

    def first_derivatives(self, p):
        """Return (g, dg)."""
        p = np.asarray(p, dtype=float)
        if self.mode == 'dual':
            g, dg, d2g = self.evaluate_jets(p)
            return g, dg
        self._interior(p, self.step)
        h = self.step
        dg = np.zeros((self.dim, self.dim, self.dim))
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = h
            dg[k] = (self.matrix(p + e) - self.matrix(p - e))/(2*h)
        return self.matrix(p), dg


def _christoffel(ginv, dg):
    lower = np.einsum('ijl->lij', dg) + np.einsum('jil->lij', dg) - dg
    return 0.5*np.einsum('kl,lij->kij', ginv, lower)


def _inverse(g):
    try:
        return np.linalg.inv(g)
    except np.linalg.LinAlgError:
        raise DegenerateMetricError('singular metric')


def christoffel(mf, p):
    """Gamma[k,i,j] = Gamma^k_ij at p."""
    g, dg = mf.first_derivatives(p)
    return _christoffel(_inverse(g), dg)


def christoffel_derivative(mf, p):
    """dGamma[m,k,i,j] = d_m Gamma^k_ij at p."""
    p = np.asarray(p, dtype=float)
    n = mf.dim
    if mf.mode == 'fd':
        mf._interior(p, mf.curvature_step + mf.step)
        h = mf.curvature_step
        dgamma = np.zeros((n, n, n, n))
        for m in range(n):
            e = np.zeros(n)
            e[m] = h
            dgamma[m] = (christoffel(mf, p + e) - christoffel(mf, p - e))/(2*h)
        return dgamma
    g, dg, d2g = mf.evaluate_jets(p)
    ginv = _inverse(g)
    dginv = -np.einsum('ka,mab,bl->mkl', ginv, dg, ginv)
    lower = np.einsum('ijl->lij', dg) + np.einsum('jil->lij', dg) - dg
    dlower = np.einsum('mijl->mlij', d2g) + np.einsum('mjil->mlij', d2g) - d2g
    return 0.5*(np.einsum('mkl,lij->mkij', dginv, lower) +
                np.einsum('kl,mlij->mkij', ginv, dlower))


def riemann(mf, p):
    """R[l,k,i,j] = R^l_kij at p."""
    gamma = christoffel(mf, p)
    dgamma = christoffel_derivative(mf, p)
    return (np.einsum('iljk->lkij', dgamma) - np.einsum('jlik->lkij', dgamma)
            + np.einsum('lim,mjk->lkij', gamma, gamma)
            - np.einsum('ljm,mik->lkij', gamma, gamma))


def lower_riemann(mf, p):
    """R_lkij = g_lm R^m_kij."""
    return np.einsum('lm,mkij->lkij', mf.matrix(p), riemann(mf, p))


def apply_riemann(R, X, Y, Z):
    """Components of R(X,Y)Z for R[l,k,i,j] = R^l_kij."""
    return np.einsum('lkij,i,j,k->l', R, X, Y, Z)


def ricci(mf, p):
    return np.einsum('ibia->ab', riemann(mf, p))


def scalar(mf, p):
    return float(np.einsum('ab,ab->', mf.inverse(p), ricci(mf, p)))


def ricci_divergence(mf, p, step=None):
    """
    Return ``(div_Ric, half_dS)`` at p, where::

        div_Ric[b] = g^am (d_m Ric_ab - Gamma^k_ma Ric_kb - Gamma^k_mb Ric_ak)
        half_dS[b] = d_b S / 2

    The partial derivatives of Ric and S are central differences with
    ``step`` (default ``mf.curvature_step``). The contracted Bianchi
    identity says the two vectors agree.
    """
    p = np.asarray(p, dtype=float)
    n = mf.dim
    h = mf.curvature_step if step is None else step
    mf._interior(p, h + mf.curvature_step + mf.step)
    dric = np.zeros((n, n, n))
    dS = np.zeros(n)
    for m in range(n):
        e = np.zeros(n)
        e[m] = h
        dric[m] = (ricci(mf, p + e) - ricci(mf, p - e))/(2*h)
        dS[m] = (scalar(mf, p + e) - scalar(mf, p - e))/(2*h)
    gamma = christoffel(mf, p)
    ric = ricci(mf, p)
    nabla = (dric - np.einsum('kma,kb->mab', gamma, ric)
             - np.einsum('kmb,ak->mab', gamma, ric))
    return np.einsum('am,mab->b', mf.inverse(p), nabla), 0.5*dS


def sectional_curvature(mf, p, X, Y):
    """g(R(X,Y)Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2)."""
    g = mf.matrix(p)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    area = X @ g @ X * (Y @ g @ Y) - (X @ g @ Y)**2
    if area <= 0:
        raise ValueError('sectional_curvature: X and Y are linearly dependent')
    numerator = np.einsum('lkij,l,k,i,j->', lower_riemann(mf, p), X, Y, X, Y)
    return float(numerator/area)


def covariant_derivative(mf, p, X, Y, dY):
    """
    (nabla_X Y)^k = X^i dY[i,k] + Gamma^k_ij X^i Y^j, where
    dY[i,k] = d_i Y^k are the partial derivatives of Y at p.
    """
    X = np.asarray(X, dtype=float)
    return X @ np.asarray(dY) + np.einsum('kij,i,j->k', christoffel(mf, p),
                                          X, np.asarray(Y, dtype=float))


def gradient(mf, p, dphi):
    """Raise the index of the differential dphi."""
    return np.linalg.solve(mf.matrix(p), np.asarray(dphi, dtype=float))


def scalar_derivatives(mf, phi, p):
    """
    First and second partial derivatives of phi at p. phi is either
    an object with a ``jet(p)`` method returning a Jet2 (used in dual
    mode) or a plain callable (central differences).
    """
    p = np.asarray(p, dtype=float)
    if mf.mode == 'dual' and hasattr(phi, 'jet'):
        j = phi.jet(p)
        return j.gradient, j.hessian
    n = p.size
    h, h2 = mf.step, mf.curvature_step
    mf._interior(p, h2)
    d = np.zeros(n)
    dd = np.zeros((n, n))
    f0 = phi(p)
    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        d[i] = (phi(p + ei) - phi(p - ei))/(2*h)
        ei[i] = h2
        dd[i, i] = (phi(p + ei) - 2*f0 + phi(p - ei))/h2**2
        for j in range(i):
            ej = np.zeros(n)
            ej[j] = h2
            dd[i, j] = dd[j, i] = (phi(p + ei + ej) - phi(p + ei - ej)
                                   - phi(p - ei + ej) + phi(p - ei - ej))/(4*h2**2)
    return d, dd


def hessian(mf, phi, p):
    """Covariant Hessian d_i d_j phi - Gamma^k_ij d_k phi."""
    d, dd = scalar_derivatives(mf, phi, p)
    return dd - np.einsum('kij,k->ij', christoffel(mf, p), d)


def laplace_beltrami(mf, phi, p):
    """g^ij (d_i d_j phi - Gamma^k_ij d_k phi)."""
    return float(np.einsum('ij,ij->', mf.inverse(p), hessian(mf, phi, p)))
