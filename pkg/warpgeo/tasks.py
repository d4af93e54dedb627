'''
Verification tasks: each task evaluates the closed forms of one group
of geometric objects at a set of product points and compares them with
the coordinate oracle.

Every task is a subclass of ``Task``. The superclass holds the
parameter machinery (registered names, types, ranges, defaults) and
the sweep loop ``run``; a subclass only implements ``evaluate``, which
returns the report rows for one point::

    class MyTask(Task):
        name = 'mine'
        quick_description = 'Compares something'
        _optional_parameters = Task._optional_parameters + ['metric_tol']

        def evaluate(self, index, q):
            closed, exact = ..., ...
            return [self.compare('mine:quantity', index, q, closed, exact,
                                 'metric_tol')]

Parameters can be given to the constructor or changed later with
``set``. Tolerances are multiplied by ``tolerance_scale``; the ones
that compare against the oracle are further relaxed by
``fd_relaxation`` when ``oracle_mode`` is ``'fd'``.
'''

import pprint
import sys

import numpy as np

from . import oracle
from .chart import ScalarField
from .connection import LiftedVectorField, nabla_lifted, nabla_oracle, \
     torsion_residual, metric_compatibility_residual, grad_lift, \
     grad_lift_oracle
from .curvature import compare_curvature, ricci_discrepancy_H, \
     scalar_oracle, scalar_discrepancy_H
from .errors import DegenerateMetricError, HypothesisError, InconsistencyError
from .frame import product_frame, gram_matrix, factor_orthonormal_frame, \
     sum_identities_residual, frame_derivative_residual, frame_trace_laplacian
from .laplacian import laplacian_lift, laplacian_oracle, \
     laplacian_lift_G_parallel, harmonicity_defect
from .metric import WarpSpec, assemble, metric_field, is_riemannian, \
     det_closed_form_G, det_frame_G, cometric, product_points
from .report import Row

# Collection of all parameters of all tasks (their order in the
# documentation follows the _optional_parameters lists)

_parameters = dict(

    spec = dict(
        help='The product metric to verify (a ``WarpSpec``).',
        type=WarpSpec),

    samples = dict(
        help='Number of product points in the sweep.',
        default=100,
        type=int,
        range=(1, 100000)),

    seed = dict(
        help='Seed of the scrambled Halton sequence that places the points.',
        default=42,
        type=int),

    margin = dict(
        help='Distance of sampled points from the faces of the domain, '
             'as a fraction of the box width.',
        default=1E-3,
        type=float,
        range=(0.0, 0.49)),

    oracle_mode = dict(
        help='Derivatives of the assembled metric in the oracle: '
             'dual numbers or central differences.',
        default='dual',
        type=str,
        range=('dual', 'fd')),

    tolerance_scale = dict(
        help='Factor applied to every tolerance.',
        default=1.0,
        type=(float, int),
        extra_check=lambda x: x > 0),

    fd_relaxation = dict(
        help='Extra factor on oracle tolerances when oracle_mode is "fd".',
        default=100.0,
        type=(float, int),
        extra_check=lambda x: x >= 1),

    verbose = dict(
        help='Integer reflecting output of intermediate quantities.',
        default=0,
        type=int,
        range=(0, 4)),

    degeneracy_tol = dict(
        help='Band around c^2 b1 b2 = 1 classified as degenerate.',
        default=1E-9,
        type=float),

    parallel_tol = dict(
        help='Largest covariant Hessian entry of f1, f2 accepted as a '
             'parallel gradient.',
        default=1E-8,
        type=float),

    frame_guard = dict(
        help='Smallest frame denominator 1 - c^2 b1 A_j accepted.',
        default=1E-8,
        type=float),

    metric_tol = dict(
        help='Tolerance of determinant (relative), cometric and '
             'gradient comparisons.',
        default=1E-10,
        type=float),

    connection_tol = dict(
        help='Tolerance of connection and frame-trace comparisons.',
        default=1E-6,
        type=float),

    torsion_tol = dict(
        help='Tolerance of the torsion residual.',
        default=1E-8,
        type=float),

    compatibility_tol = dict(
        help='Tolerance of the metric compatibility residual.',
        default=1E-6,
        type=float),

    frame_tol = dict(
        help='Tolerance of Gram matrices, frame norms and frame identities.',
        default=1E-10,
        type=float),

    identity_tol = dict(
        help='Tolerance of the frame sum identities.',
        default=1E-10,
        type=float),

    laplacian_tol = dict(
        help='Tolerance of Laplacian comparisons.',
        default=1E-5,
        type=float),

    curvature_tol = dict(
        help='Tolerance of curvature comparisons.',
        default=1E-5,
        type=float),

    fields = dict(
        help='Extra test functions (``ScalarField`` objects on either '
             'factor) whose lifts are checked.',
        default=(),
        type=(list, tuple),
        extra_check=lambda fields: all(isinstance(f, ScalarField)
                                       for f in fields)),

    oracle_only_curvature = dict(
        help='Report oracle curvature for variant G, which has no '
             'closed forms.',
        default=False,
        type=bool),
    )

# tolerances of comparisons against the oracle
_oracle_tolerances = ('connection_tol', 'laplacian_tol', 'curvature_tol',
                      'metric_tol')


def _format_parameters_table(parameter_names):
    """
    reST table of parameter names and the help text (with default)
    registered in _parameters.
    """
    import textwrap
    max_line_width = 71
    c1 = max([len(name) for name in list(parameter_names) + ['Name']]) + 1
    c2 = max_line_width - c1
    hrule = '='*c1 + ' ' + '='*c2 + '\n'
    s = hrule + 'Name' + ' '*(c1-3) + 'Description\n' + hrule
    for name in parameter_names:
        s += '%%-%ds' % (c1+1) % name
        text = _parameters[name]['help']
        if 'default' in _parameters[name]:
            text += ' (default: %s)' % str(_parameters[name]['default'])
        text = textwrap.wrap(text, c2, break_long_words=False)
        for i in range(1, len(text)):
            text[i] = ' '*(c1+1) + text[i]
        s += '\n'.join(text) + '\n'
    return s + hrule


def table_of_parameters(classname):
    """
    Return reST tables of the required and optional parameters of a
    task class, to be appended to its doc string.
    """
    req_prm = getattr(classname, '_required_parameters')
    opt_prm = getattr(classname, '_optional_parameters')
    for name in list(req_prm) + list(opt_prm):
        if not name in _parameters:
            print('Parameter "%s" used in class %s is not registered in '
                  '_parameters.' % (name, classname.__name__))
            sys.exit(1)
    s = """
Required input arguments:

""" + _format_parameters_table(req_prm) + \
"""
Optional input arguments:

""" + _format_parameters_table(opt_prm)
    indent = 4
    return '\n'.join(' '*indent + line for line in s.splitlines())


def typeset_toc(toc):
    toc = sorted(toc)
    column1_width = max([len(classname) for classname, descr in toc])
    column2_width = max([len(descr) for classname, descr in toc])
    hrule = '='*(column1_width + 1) + ' ' + '='*(column2_width)

    def line(name, descr):
        return '%%-%ds %%s' % (column1_width+1) % (name, descr)
    lines = [hrule, line('Classname', 'Short description'), hrule] + \
            [line(name, descr) for name, descr in toc] + [hrule]
    return '\n'.join(lines)


class Task(object):
    """
    Superclass for verification tasks on a product metric ``spec``.

    Attributes stored in this class:

    ==========  =====================================================
    Name        Description
    ==========  =====================================================
    spec        the ``WarpSpec`` under test
    rows        report rows of the latest ``run``
    PRM         an attribute for each optional and required parameter
    ==========  =====================================================
    """
    name = None
    quick_description = 'Superclass of verification tasks'

    _required_parameters = ['spec']
    _optional_parameters = ['samples', 'seed', 'margin', 'oracle_mode',
                            'tolerance_scale', 'fd_relaxation', 'verbose',
                            'degeneracy_tol']

    def __init__(self, spec, **kwargs):
        self._parameters = dict(
            (key, value.copy()) for key, value in _parameters.items()
            if key in self._optional_parameters or
               key in self._required_parameters)

        for name in self._parameters:
            if 'default' in self._parameters[name]:
                setattr(self, name, self._parameters[name]['default'])

        nones = [name for name in kwargs if kwargs[name] is None]
        for name in nones:
            del kwargs[name]
        kwargs['spec'] = spec
        self.set(**kwargs)
        self.rows = []

    def set(self, strict=False, **kwargs):
        """
        Assign values to one or more parameters, given as keyword
        arguments. With ``strict`` unregistered names raise ValueError,
        otherwise they are ignored. Values are checked for type, range
        and any ``extra_check`` before they are assigned.
        """
        for name in list(kwargs):
            if name not in self._parameters:
                if strict:
                    raise ValueError('set: parameter %s=%s has illegal name'
                                     % (name, kwargs[name]))
                del kwargs[name]
            elif kwargs[name] is None:
                del kwargs[name]

        self.check_input_types(**kwargs)
        self.check_input_range(**kwargs)
        self.check_extra(**kwargs)

        for name in kwargs:
            setattr(self, name, kwargs[name])

    def check_input_types(self, **kwargs):
        """Check whether all existing inputs are of right specified type."""
        parameters = self._parameters
        for name in kwargs:
            if 'type' not in parameters[name]:
                continue
            types = parameters[name]['type']
            if not isinstance(types, (list, tuple)):
                types = (types,)
            value = kwargs[name]
            # bool is an int but never a legal count or tolerance
            if isinstance(value, bool) and bool not in types:
                ok_type = False
            else:
                ok_type = isinstance(value, tuple(types))
            if not ok_type:
                raise TypeError('%s is %s, must be %s' %
                                (name, type(value), list(types)))
        return True

    def check_input_range(self, **kwargs):
        """Check whether all existing inputs are in right specified range."""
        parameters = self._parameters
        for name in kwargs:
            if 'range' not in parameters[name]:
                continue
            ranges, value = parameters[name]['range'], kwargs[name]
            if isinstance(value, (float, int)) and \
                   not isinstance(ranges[0], str):
                low, high = ranges
                if not low <= value <= high:
                    raise ValueError('%s=%s is illegal - range=[%s, %s]' %
                                     (name, value, low, high))
            elif value not in ranges:
                raise ValueError('%s=%s is illegal - range=%s' %
                                 (name, value, str(ranges)))
        return True

    def check_extra(self, **kwargs):
        """Run the ``extra_check`` function registered for a parameter."""
        p = self._parameters
        for name in kwargs:
            if 'extra_check' not in p[name]:
                continue
            if not p[name]['extra_check'](kwargs[name]):
                raise ValueError('Improper value (=%s) for parameter %s.' %
                                 (str(kwargs[name]), name))
        for name, value in kwargs.items():
            if name.endswith('_tol') or name == 'frame_guard':
                if not value > 0:
                    raise ValueError('%s=%s must be positive' % (name, value))
        return True

    def get(self, parameter_name=None, print_info=False):
        """
        Return value of specified input parameters.
        If parameter_name is None, return dict of all inputs.
        """
        if parameter_name is None:
            all_args = dict((name, getattr(self, name))
                            for name in self._parameters
                            if hasattr(self, name))
            if print_info:
                print(pprint.pformat(all_args))
            return all_args
        if hasattr(self, parameter_name):
            value = getattr(self, parameter_name)
            if print_info:
                print('%s = %s' % (parameter_name, value))
            return value
        raise AttributeError('Parameter %s is not set' % parameter_name)

    def _print_method(self, default):
        args = []
        for name in self._parameters:
            if name == 'spec' or not hasattr(self, name):
                continue
            value = getattr(self, name)
            specified = 'default' not in self._parameters[name] or \
                        value != self._parameters[name]['default']
            if default or specified:
                args.append('%s=%s' % (name, value))
        return '%s(%s)' % (self.__class__.__name__, ', '.join(args))

    def __repr__(self):
        return self._print_method(default=True)

    def __str__(self):
        return self._print_method(default=False)

    def tolerance(self, name):
        value = getattr(self, name)*self.tolerance_scale
        if self.oracle_mode == 'fd' and name in _oracle_tolerances:
            value *= self.fd_relaxation
        return value

    def points(self):
        return product_points(self.spec, self.samples, self.seed, self.margin)

    def mf(self):
        return metric_field(self.spec, self.oracle_mode)

    def compare(self, task, index, q, closed_form, exact, tolerance,
                scale=1.0):
        """
        Row comparing ``closed_form`` with ``exact``; arrays are
        summarized by the entry with the largest deviation.
        ``tolerance`` is a registered name, ``scale`` makes it relative.
        """
        closed_form = np.asarray(closed_form, dtype=float)
        exact = np.asarray(exact, dtype=float)
        diff = np.abs(closed_form - exact)
        k = int(np.argmax(diff)) if diff.size else 0
        c, e = float(closed_form.flat[k]), float(exact.flat[k])
        d = abs(c - e)
        tol = self.tolerance(tolerance)*scale
        status = 'pass' if d <= tol else 'fail'
        if self.verbose > 2:
            print('%s, point %d: closed form %.16g, oracle %.16g, diff %.3e '
                  '(%s)' % (task, index, c, e, d, status))
        return Row(task, index, tuple(self.spec.point(q).coords), c, e, d,
                   status)

    def _failure_row(self, index, q, status):
        return Row('%s:hypothesis' % self.name if status == 'violation'
                   else '%s:degenerate' % self.name,
                   index, tuple(self.spec.point(q).coords),
                   float('nan'), float('nan'), float('nan'), status)

    def run(self, points=None):
        """
        Evaluate the task at every point (the deterministic sample when
        ``points`` is None) and return the report rows.
        """
        if points is None:
            points = self.points()
        if self.verbose > 0:
            print('%s: %d points, oracle_mode=%s' %
                  (self.__class__.__name__, len(points), self.oracle_mode))
        self.rows = []
        for index, q in enumerate(points):
            q = self.spec.point(q)
            try:
                rows = self.evaluate(index, q)
            except DegenerateMetricError as e:
                if self.verbose > 1:
                    print('%s, point %d: %s' % (self.name, index, e))
                rows = [self._failure_row(index, q, 'degenerate')]
            except HypothesisError as e:
                if self.verbose > 1:
                    print('%s, point %d: %s' % (self.name, index, e))
                rows = [self._failure_row(index, q, 'violation')]
            if self.verbose > 1:
                print('%s, point %d: %d rows' % (self.name, index, len(rows)))
            self.rows.extend(rows)
        return self.rows

    def evaluate(self, index, q):
        """Return the report rows of one point."""
        raise NotImplementedError


class MetricTask(Task):
    """
    Determinant identity and positivity criterion. For G the
    closed-form determinant is compared (relatively) with the direct
    determinant of the assembled matrix, the frame version with the
    determinant in factor-orthonormal frames, and the classification
    from c^2 b1 b2 with a Cholesky factorization.
    """
    name = 'metric'
    quick_description = 'Determinant and positivity of the product metric'
    _optional_parameters = Task._optional_parameters + ['metric_tol']

    def evaluate(self, index, q):
        spec = self.spec
        G = assemble(spec, q)
        rows = []
        try:
            np.linalg.cholesky(G)
            definite = 1.0
        except np.linalg.LinAlgError:
            definite = 0.0
        try:
            kind, value = is_riemannian(spec, q, self.degeneracy_tol)
        except InconsistencyError as e:
            if self.verbose > 1:
                print('metric, point %d: %s' % (index, e))
            kind = 'riemannian' if spec.at(q).D > 0 else 'indefinite'
        if kind == 'degenerate':
            rows.append(self._failure_row(index, q, 'degenerate'))
        else:
            rows.append(self.compare('metric:classification', index, q,
                                     float(kind == 'riemannian'), definite,
                                     'metric_tol'))
        if spec.variant == 'G':
            direct = np.linalg.det(G)
            scale = max(1.0, abs(direct))
            rows.append(self.compare('metric:det', index, q,
                                     det_closed_form_G(spec, q), direct,
                                     'metric_tol', scale))
            d = spec.at(q)
            E = np.zeros((spec.dim, spec.dim))
            E[:spec.m1, :spec.m1] = factor_orthonormal_frame(spec.base, d.p1)
            E[spec.m1:, spec.m1:] = factor_orthonormal_frame(spec.fiber, d.p2)
            framed = np.linalg.det(E @ G @ E.T)
            rows.append(self.compare('metric:det_frame', index, q,
                                     det_frame_G(spec, q), framed,
                                     'metric_tol', max(1.0, abs(framed))))
        return rows


class CometricTask(Task):
    """cometric(q) times the assembled metric against the identity."""
    name = 'cometric'
    quick_description = 'Closed-form inverse metric'
    _optional_parameters = Task._optional_parameters + ['metric_tol']

    def evaluate(self, index, q):
        product = cometric(self.spec, q, self.degeneracy_tol) @ \
                  assemble(self.spec, q)
        return [self.compare('cometric:identity', index, q, product,
                             np.eye(self.spec.dim), 'metric_tol')]


def _gradient_fields(spec):
    """Lifted fields whose components are the partials of f1 and f2."""
    return [LiftedVectorField('base', spec.base, spec.f1.partials),
            LiftedVectorField('fiber', spec.fiber, spec.f2.partials)]


def _coordinate_fields(spec):
    return ([LiftedVectorField.coordinate('base', spec.base, k)
             for k in range(spec.m1)] +
            [LiftedVectorField.coordinate('fiber', spec.fiber, k)
             for k in range(spec.m2)])


class ConnectionTask(Task):
    """
    Closed-form gradients of lifts and the closed-form connection
    against the oracle. Coordinate fields are compared all at once
    through the Christoffel symbols; the non-constant fields built
    from the partials of f1 and f2 are compared pairwise and used for
    the torsion and metric compatibility residuals.
    """
    name = 'connection'
    quick_description = 'Gradients of lifts and Levi-Civita connection'
    _optional_parameters = Task._optional_parameters + \
        ['metric_tol', 'connection_tol', 'torsion_tol', 'compatibility_tol',
         'fields']

    def evaluate(self, index, q):
        spec = self.spec
        rows = []
        for field in [spec.f1, spec.f2] + list(self.fields):
            label = 'connection:grad(%s)' % field.expr.source
            rows.append(self.compare(label, index, q,
                                     grad_lift(spec, field, q,
                                               self.degeneracy_tol),
                                     grad_lift_oracle(spec, field, q,
                                                      self.oracle_mode),
                                     'metric_tol'))

        coordinate = _coordinate_fields(spec)
        n = spec.dim
        closed = np.zeros((n, n, n))
        for i, X in enumerate(coordinate):
            for j, Y in enumerate(coordinate):
                closed[:, i, j] = nabla_lifted(spec, X, Y, q,
                                               self.degeneracy_tol)
        gamma = oracle.christoffel(self.mf(), spec.point(q).coords)
        rows.append(self.compare('connection:christoffel', index, q, closed,
                                 gamma, 'connection_tol'))

        W = _gradient_fields(spec)
        nabla = np.array([nabla_lifted(spec, X, Y, q) for X in W for Y in W])
        exact = np.array([nabla_oracle(spec, X, Y, q, self.oracle_mode)
                          for X in W for Y in W])
        rows.append(self.compare('connection:gradient_fields', index, q,
                                 nabla, exact, 'connection_tol'))

        pairs = [(X, Y) for X in W for Y in W + coordinate[:1]]
        rows.append(self.compare('connection:torsion', index, q,
                                 max(torsion_residual(spec, X, Y, q)
                                     for X, Y in pairs), 0.0, 'torsion_tol'))
        rows.append(self.compare(
            'connection:compatibility', index, q,
            max(metric_compatibility_residual(spec, X, W[0], W[1], q)
                for X in W + coordinate), 0.0, 'compatibility_tol'))
        return rows


class FrameTask(Task):
    """
    Orthonormality of the product frame, its stored norms, the
    derivative identities of the frame vectors, and the Laplacian of
    the lifted warping functions as a trace over the frame.
    """
    name = 'frame'
    quick_description = 'Explicit orthonormal frame of the product metric'
    _optional_parameters = Task._optional_parameters + \
        ['frame_tol', 'frame_guard', 'connection_tol']

    def evaluate(self, index, q):
        spec = self.spec
        spec.at(q).require_riemannian(self.degeneracy_tol)
        fr = product_frame(spec, q, self.frame_guard)
        G = assemble(spec, q)
        rows = [self.compare('frame:gram', index, q, gram_matrix(spec, fr, q),
                             np.eye(spec.dim), 'frame_tol')]
        measured = np.sqrt(np.einsum('ji,ik,jk->j', fr.unnormalized, G,
                                     fr.unnormalized))
        rows.append(self.compare('frame:norms', index, q, fr.norms, measured,
                                 'frame_tol'))
        rows.append(self.compare('frame:derivatives', index, q,
                                 frame_derivative_residual(spec, q,
                                                       self.frame_guard),
                                 0.0, 'frame_tol'))
        traces = [frame_trace_laplacian(spec, f, q, self.oracle_mode,
                                        self.frame_guard)
                  for f in (spec.f1, spec.f2)]
        exact = [laplacian_oracle(spec, f, q, self.oracle_mode)
                 for f in (spec.f1, spec.f2)]
        rows.append(self.compare('frame:trace_laplacian', index, q, traces,
                                 exact, 'connection_tol'))
        return rows


class IdentitiesTask(Task):
    """Worst residual of the frame sum identities."""
    name = 'identities'
    quick_description = 'Telescoping sum identities of the frame'
    _optional_parameters = Task._optional_parameters + \
        ['identity_tol', 'frame_guard']

    def evaluate(self, index, q):
        self.spec.at(q).require_riemannian(self.degeneracy_tol)
        return [self.compare('identities:sums', index, q,
                             sum_identities_residual(self.spec, q,
                                                     self.frame_guard),
                             0.0, 'identity_tol')]


class LaplacianTask(Task):
    """
    Closed-form Laplacians of the lifted warping functions (and, for
    variant H, of the extra test fields) against the oracle. Where the
    gradients are parallel the simplified G expressions are compared
    with the full ones; where f1 and f2 are harmonic the harmonicity
    defect is compared with the rescaled Laplacian.
    """
    name = 'laplacian'
    quick_description = 'Laplacians of lifted functions'
    _optional_parameters = Task._optional_parameters + \
        ['laplacian_tol', 'parallel_tol', 'frame_tol', 'fields']

    def evaluate(self, index, q):
        spec = self.spec
        d = spec.at(q)
        rows = []
        fields = [spec.f1, spec.f2]
        if spec.variant == 'H':
            fields += list(self.fields)
        values = {}
        for field in fields:
            closed = laplacian_lift(spec, field, q, self.degeneracy_tol)
            exact = laplacian_oracle(spec, field, q, self.oracle_mode)
            values[id(field)] = exact
            rows.append(self.compare('laplacian:%s' % field.expr.source,
                                     index, q, closed, exact,
                                     'laplacian_tol'))
        parallel = max(np.max(np.abs(d.H1)), np.max(np.abs(d.H2))) <= \
                   self.parallel_tol
        if spec.variant == 'G' and parallel:
            for which in ('f1', 'f2'):
                rows.append(self.compare(
                    'laplacian:%s:parallel' % which, index, q,
                    laplacian_lift_G_parallel(spec, which, q,
                                              self.degeneracy_tol),
                    laplacian_lift(spec, which, q, self.degeneracy_tol),
                    'frame_tol'))
        harmonic_tol = self.tolerance('laplacian_tol')
        if abs(spec.f1.laplacian(d.p1)) <= harmonic_tol and \
           abs(spec.f2.laplacian(d.p2)) <= harmonic_tol:
            for which, field, other in (('f1', spec.f1, d.f2),
                                        ('f2', spec.f2, d.f1)):
                scale = other*d.D if spec.variant == 'G' else 1.0
                rows.append(self.compare(
                    'laplacian:%s:defect' % which, index, q,
                    harmonicity_defect(spec, which, q, self.degeneracy_tol),
                    values[id(field)]*scale, 'laplacian_tol'))
        return rows


class CurvatureTask(Task):
    """
    Riemann tensor, Ricci tensor and scalar curvature of variant H
    under the parallel-gradient hypothesis, against the oracle. The
    Ricci and scalar displays are compared as they stand; the
    ``*_gap`` rows compare the observed oracle-minus-display
    differences with their predicted values. For variant G only oracle
    values are reported, and only when ``oracle_only_curvature`` is set.
    """
    name = 'curvature'
    quick_description = 'Curvature of the metric h with parallel gradients'
    _optional_parameters = Task._optional_parameters + \
        ['curvature_tol', 'parallel_tol', 'oracle_only_curvature']

    def evaluate(self, index, q):
        spec = self.spec
        q = spec.point(q)
        if spec.variant == 'G':
            if not self.oracle_only_curvature:
                return []
            S = scalar_oracle(spec, q, self.oracle_mode)
            return [Row('curvature:scalar', index, tuple(q.coords),
                        float('nan'), S, float('nan'), 'oracle-only')]
        riemann, ricci, scalar = compare_curvature(spec, q, self.oracle_mode,
                                                   self.parallel_tol)
        if self.verbose > 2:
            print('curvature, point %d: Hessian norms %s' %
                  (index, riemann.hessian_norms))
        n = spec.dim
        basis = np.eye(n)
        rows = [self.compare('curvature:riemann', index, q,
                             riemann.closed_form, riemann.oracle,
                             'curvature_tol')]
        Ric, display = ricci.oracle, ricci.closed_form
        gap = np.array([[ricci_discrepancy_H(spec, basis[a], basis[b], q)
                         for b in range(n)] for a in range(n)])
        rows.append(self.compare('curvature:ricci', index, q, display, Ric,
                                 'curvature_tol'))
        rows.append(self.compare('curvature:ricci_gap', index, q, gap,
                                 Ric - display, 'curvature_tol'))
        S, display_S = scalar.oracle, scalar.closed_form
        rows.append(self.compare('curvature:scalar', index, q, display_S, S,
                                 'curvature_tol'))
        rows.append(self.compare('curvature:scalar_gap', index, q,
                                 scalar_discrepancy_H(spec, q), S - display_S,
                                 'curvature_tol'))
        return rows


def list_all_tasks():
    """Return the task names and classes, in run order."""
    return [(cls.name, cls) for cls in
            (MetricTask, CometricTask, ConnectionTask, FrameTask,
             IdentitiesTask, LaplacianTask, CurvatureTask)]


def task_class(name):
    for key, cls in list_all_tasks():
        if key == name:
            return cls
    raise ValueError('task=%s is illegal - range=%s' %
                     (name, str([key for key, cls in list_all_tasks()])))
