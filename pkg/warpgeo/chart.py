'''
Factor manifolds as coordinate charts over open boxes, and scalar
fields on them.

A ``Chart`` stores its metric as a symmetric matrix of
``Expression`` objects; only the upper triangle is given, the lower
triangle refers to the same objects. Built-in charts:

===============  ==========================================  ==============
Catalog name     Metric                                      Variables
===============  ==========================================  ==============
euclidean:<n>    identity                                    x1, ..., xn
sphere2          diag(1, sin(theta)^2)                       theta, phi
halfplane2       diag(1/y^2, 1/y^2)                          x, y
custom           components given by the caller              any
===============  ==========================================  ==============
'''

import math

import numpy as np
import scipy.linalg
from scipy.stats import qmc

from . import oracle
from .errors import OutOfDomainError, NotPositiveDefiniteError, \
     DomainError, DimensionError, ConfigError
from .expr import Expression, parse, constant, jet_inverse, Jet2


class Chart(object):
    """
    Coordinate chart (M, g) over an open box.

    ``components`` maps index pairs ``(i, j)`` with ``i <= j`` to an
    Expression or an expression string over ``variables``; missing
    off-diagonal entries are zero, missing diagonal entries are an
    error.
    """
    quick_description = 'metric components given as expressions'

    def __init__(self, name, variables, domain, components, kind='custom'):
        self.name = name
        self.variables = tuple(variables)
        self.kind = kind
        n = len(self.variables)
        if n == 0:
            raise DimensionError('chart %s has no coordinates' % name)
        if len(set(self.variables)) != n:
            raise ConfigError('repeated variable name in %s' %
                              str(self.variables), key=name)
        self.domain = [(float(low), float(high)) for low, high in domain]
        if len(self.domain) != n:
            raise DimensionError('chart %s: %d variables but %d domain intervals'
                                 % (name, n, len(self.domain)))
        for low, high in self.domain:
            if not low < high:
                raise ConfigError('empty interval (%g, %g)' % (low, high),
                                  key=name)

        metric = [[None]*n for i in range(n)]
        for (i, j), e in components.items():
            if i > j:
                i, j = j, i
            if not (0 <= i and j < n):
                raise DimensionError('chart %s: metric index (%d, %d) out of '
                                     'range' % (name, i, j))
            if not isinstance(e, Expression):
                e = parse(str(e), self.variables)
            metric[i][j] = metric[j][i] = e
        zero = constant(0.0, self.variables)
        for i in range(n):
            if metric[i][i] is None:
                raise ConfigError('diagonal metric component g%d%d is missing'
                                  % (i+1, i+1), key=name)
            for j in range(i+1, n):
                if metric[i][j] is None:
                    metric[i][j] = metric[j][i] = zero
        self.metric = metric

    @property
    def dim(self):
        return len(self.variables)

    def __repr__(self):
        return 'Chart(%s, variables=%s)' % (self.name, ', '.join(self.variables))

    def contains(self, p):
        p = np.asarray(p, dtype=float).ravel()
        return p.size == self.dim and all(
            low < x < high for x, (low, high) in zip(p, self.domain))

    def _point(self, p):
        p = np.asarray(p, dtype=float).ravel()
        if p.size != self.dim:
            raise DimensionError('chart %s expects %d coordinates, got %d' %
                                 (self.name, self.dim, p.size))
        if not self.contains(p):
            raise OutOfDomainError(self.name, p)
        return p

    def metric_values(self, p):
        """Metric matrix at p, without domain or definiteness checks."""
        n = self.dim
        g = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = self.metric[i][j].evaluate(p)
        return g

    def metric_at(self, p):
        p = self._point(p)
        g = self.metric_values(p)
        try:
            scipy.linalg.cholesky(g, lower=True)
        except scipy.linalg.LinAlgError:
            raise NotPositiveDefiniteError(self.name, p,
                                           np.linalg.eigvalsh(g)[0])
        return g

    def metric_jets(self, p):
        """Jet2 entries of the metric at p, as a nested list."""
        p = np.asarray(p, dtype=float)
        n = self.dim
        jets = [[None]*n for i in range(n)]
        for i in range(n):
            for j in range(i, n):
                jets[i][j] = jets[j][i] = self.metric[i][j].jet(p)
        return jets

    def metric_field(self, mode='dual'):
        return oracle.MetricField(
            self.dim, self.metric_values,
            lambda p: oracle.stack_jets(self.metric_jets(p)),
            mode=mode, domain=self.domain, name=self.name)

    def sample(self, count, seed=42, margin=1E-3):
        """
        Deterministic low-discrepancy points inside the domain, keeping
        a distance of ``margin`` times the box width from every face.
        """
        if count < 1:
            return np.zeros((0, self.dim))
        sampler = qmc.Halton(d=self.dim, scramble=True, seed=seed)
        low = np.array([a + margin*(b - a) for a, b in self.domain])
        high = np.array([b - margin*(b - a) for a, b in self.domain])
        return qmc.scale(sampler.random(count), low, high)

    def check_positive_definite(self, count=1000, seed=42, margin=1E-3):
        """Cholesky test at ``count`` sampled points; returns the count."""
        for p in self.sample(count, seed, margin):
            self.metric_at(p)
        return count

    def field(self, source):
        return ScalarField(self, source)


class ScalarField(object):
    """
    Scalar function on a chart. Partial derivatives are kept as
    symbolic expressions so that the squared gradient norm
    ``b = g^jk d_j f d_k f`` can itself be evaluated as a jet.
    Instances are callable and have ``jet(p)``, so they can be handed
    to the oracle directly.
    """

    def __init__(self, chart, expr):
        self.chart = chart
        if not isinstance(expr, Expression):
            expr = parse(str(expr), chart.variables)
        elif expr.variables != chart.variables:
            expr = parse(expr.serialize(), chart.variables)
        self.expr = expr
        self._partials = None

    def __repr__(self):
        return 'ScalarField(%s on %s)' % (self.expr.source, self.chart.name)

    def __call__(self, p):
        return self.expr.evaluate(p)

    def value(self, p):
        return self.expr.evaluate(p)

    def jet(self, p):
        return self.expr.jet(p)

    @property
    def partials(self):
        if self._partials is None:
            self._partials = [self.expr.differentiate(v)
                              for v in self.chart.variables]
        return self._partials

    def grad_vec(self, p):
        """(grad f)^j = g^jk d_k f."""
        g = self.chart.metric_at(p)
        return np.linalg.solve(g, self.jet(p).gradient)

    def grad_norm_sq(self, p):
        return float(self.jet(p).gradient @ self.grad_vec(p))

    def covariant_hessian(self, p, mode='dual'):
        p = self.chart._point(p)
        h = oracle.hessian(self.chart.metric_field(mode), self, p)
        return 0.5*(h + h.T)

    def laplacian(self, p, mode='dual'):
        p = self.chart._point(p)
        return oracle.laplace_beltrami(self.chart.metric_field(mode), self, p)

    def b_jet(self, p):
        """Jet2 of b = |grad f|^2 at p."""
        p = self.chart._point(p)
        ginv = jet_inverse(self.chart.metric_jets(p))
        df = [d.jet(p) for d in self.partials]
        n = self.chart.dim
        b = Jet2.constant(0.0, n)
        for j in range(n):
            for k in range(n):
                b = b + ginv[j][k]*df[j]*df[k]
        return b

    def grad_of_b(self, p):
        """grad f (b), the derivative of b along grad f."""
        return float(self.b_jet(p).gradient @ self.grad_vec(p))

    def check_positive(self, points):
        """Raise DomainError unless the field is positive at every point."""
        for p in points:
            v = self.value(p)
            if not v > 0:
                raise DomainError('%s is not positive at %s (value %g)' %
                                  (self.expr.source, list(p), v))


def euclidean(n, variables=None, domain=None, prefix='x', name=None):
    if variables is None:
        variables = ['%s%d' % (prefix, i+1) for i in range(n)]
    if domain is None:
        domain = [(-5.0, 5.0)]*n
    components = dict(((i, i), constant(1.0, variables)) for i in range(n))
    return Chart(name or 'euclidean:%d' % n, variables, domain, components,
                 kind='euclidean:%d' % n)


def sphere2(variables=('theta', 'phi'), domain=None, name='sphere2'):
    if domain is None:
        domain = [(0.0, math.pi), (-math.pi, math.pi)]
    t = variables[0]
    components = {(0, 0): '1', (1, 1): 'sin(%s)^2' % t}
    return Chart(name, variables, domain, components, kind='sphere2')


def halfplane2(variables=('x', 'y'), domain=None, name='halfplane2'):
    if domain is None:
        domain = [(-5.0, 5.0), (0.25, 4.0)]
    y = variables[1]
    components = {(0, 0): '1/%s^2' % y, (1, 1): '1/%s^2' % y}
    return Chart(name, variables, domain, components, kind='halfplane2')


_catalog = (
    ('euclidean:<n>', 'flat n-dimensional chart, identity metric'),
    ('sphere2', 'unit 2-sphere in polar coordinates, diag(1, sin(theta)^2)'),
    ('halfplane2', 'hyperbolic upper half-plane, diag(1/y^2, 1/y^2)'),
)


def list_catalog():
    """(name, description) of every chart kind, custom charts last."""
    return list(_catalog) + [('custom', Chart.quick_description)]


def catalog(kind, variables=None, domain=None, components=None, name=None):
    """
    Build a chart from its catalog name. ``variables`` and ``domain``
    override the defaults; ``components`` is required for ``custom``.
    """
    if kind.startswith('euclidean'):
        head, sep, tail = kind.partition(':')
        if head != 'euclidean' or not tail.isdigit() or int(tail) < 1:
            raise ConfigError('expected euclidean:<n>, got "%s"' % kind,
                              key=name)
        return euclidean(int(tail), variables, domain, name=name)
    kwargs = {}
    if variables is not None:
        kwargs['variables'] = tuple(variables)
    if domain is not None:
        kwargs['domain'] = domain
    if name is not None:
        kwargs['name'] = name
    if kind == 'sphere2':
        return sphere2(**kwargs)
    if kind == 'halfplane2':
        return halfplane2(**kwargs)
    if kind == 'custom':
        if not components or variables is None or domain is None:
            raise ConfigError('custom chart needs variables, domain and '
                              'metric components', key=name)
        return Chart(name or 'custom', variables, domain, components)
    raise ConfigError('unknown chart kind "%s"; known: %s' %
                      (kind, ', '.join(k for k, d in list_catalog())),
                      key=name)
