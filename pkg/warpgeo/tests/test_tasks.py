"""
Run every task on a few product metrics with known outcome, and test
the parameter machinery shared by the tasks.
"""
from unittest import TestCase

import numpy as np

from warpgeo.chart import ScalarField, euclidean, halfplane2
from warpgeo.metric import WarpSpec
from warpgeo.tasks import Task, MetricTask, ConnectionTask, LaplacianTask, \
     CurvatureTask, list_all_tasks, task_class, table_of_parameters


def curved_spec(variant='G', c=0.1):
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    fiber = halfplane2(domain=[(-2, 2), (0.5, 2)])
    return WarpSpec(base, fiber, 'x1 + x2^2', '2 + x*y/4', c, variant)


def hyperbolic_fiber_spec(c=0.5):
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    fiber = halfplane2(domain=[(-2, 2), (0.5, 2)])
    return WarpSpec(base, fiber, 'x1 + x2', '2', c, 'H')


def linear_spec(c, variant='H', f1='x1 + 2*x2'):
    base = euclidean(2, variables=['x1', 'x2'], domain=[(0.5, 2)]*2)
    fiber = euclidean(2, variables=['y1', 'y2'], domain=[(0.5, 2)]*2)
    return WarpSpec(base, fiber, f1, '1 + y1 - y2/2', c, variant)


def degenerate_spec():
    base = euclidean(1, variables=['x'], domain=[(0.5, 5)])
    fiber = euclidean(1, variables=['y'], domain=[(0.5, 5)])
    return WarpSpec(base, fiber, 'x', 'y', 1.0, 'G')


# Each problem gives the spec, keyword arguments for the tasks and the
# expected status of every row, either for all tasks or per task name
# (tasks missing from a per-task dict are not run).

CoupledG = dict(
    help='variant G with curved fiber, every closed form agrees',
    spec=curved_spec(),
    kwargs=dict(samples=5),
    status='pass',
    )

HyperbolicFiber = dict(
    help='variant H with parallel gradients and constant f2',
    spec=hyperbolic_fiber_spec(),
    kwargs=dict(samples=5),
    status='pass',
    )

DisplayGaps = dict(
    help='variant H with both warping functions varying: the Ricci and '
         'scalar displays miss a term, the predicted gaps agree',
    spec=linear_spec(1.5),
    kwargs=dict(samples=4),
    status={'curvature': {'curvature:riemann': 'pass',
                          'curvature:ricci': 'fail',
                          'curvature:ricci_gap': 'pass',
                          'curvature:scalar': 'fail',
                          'curvature:scalar_gap': 'pass'}},
    )

NotParallel = dict(
    help='variant H where grad f1 is not parallel',
    spec=linear_spec(0.5, f1='x1^2 + x2'),
    kwargs=dict(samples=3),
    status={'curvature': {'curvature:hypothesis': 'violation'}},
    )

Degenerate = dict(
    help='variant G with c^2 b1 b2 = 1 everywhere',
    spec=degenerate_spec(),
    kwargs=dict(samples=3),
    status={'metric': {'metric:degenerate': 'degenerate',
                       'metric:det': 'pass',
                       'metric:det_frame': 'pass'},
            'connection': {'connection:degenerate': 'degenerate'},
            'frame': {'frame:degenerate': 'degenerate'},
            'laplacian': {'laplacian:degenerate': 'degenerate'}},
    )


def _run_test_problems(problem):
    print(problem['help'])
    expected = problem['status']
    for name, cls in list_all_tasks():
        if isinstance(expected, dict) and name not in expected:
            continue
        task = cls(problem['spec'], **problem['kwargs'])
        print('Testing %s' % name)
        rows = task.run()
        for row in rows:
            if isinstance(expected, dict):
                status = expected[name][row.task]
            else:
                status = expected
            assert row.status == status, \
                   '%s, point %d: %s, expected %s (diff %g)' % \
                   (row.task, row.point_index, row.status, status,
                    row.abs_diff)
        print('...ok')


def test_coupled_G():
    _run_test_problems(CoupledG)


def test_hyperbolic_fiber():
    _run_test_problems(HyperbolicFiber)


def test_display_gaps():
    _run_test_problems(DisplayGaps)


def test_not_parallel():
    _run_test_problems(NotParallel)


def test_degenerate():
    _run_test_problems(Degenerate)


def test_fd_oracle():
    task = LaplacianTask(curved_spec(), samples=4, margin=0.05,
                         oracle_mode='fd')
    rows = task.run()
    assert len(rows) == 8
    assert all(row.status == 'pass' for row in rows)


class TestRows(TestCase):

    def test_curvature_rows_of_G(self):
        spec = curved_spec()
        self.assertEqual(CurvatureTask(spec, samples=3).run(), [])
        rows = CurvatureTask(spec, samples=3, oracle_only_curvature=True).run()
        self.assertEqual([r.status for r in rows], ['oracle-only']*3)
        self.assertTrue(all(np.isnan(r.closed_form) for r in rows))

    def test_extra_fields(self):
        spec = curved_spec('H')
        fields = [ScalarField(spec.base, 'sin(x1)'),
                  ScalarField(spec.fiber, 'x*y')]
        rows = LaplacianTask(spec, samples=2, fields=fields).run()
        names = sorted(set(r.task for r in rows))
        self.assertEqual(names, ['laplacian:2 + x*y/4', 'laplacian:sin(x1)',
                                 'laplacian:x*y', 'laplacian:x1 + x2^2'])
        rows = ConnectionTask(spec, samples=2, fields=fields).run()
        self.assertIn('connection:grad(sin(x1))', [r.task for r in rows])

    def test_explicit_points(self):
        task = MetricTask(curved_spec(), samples=50)
        rows = task.run([[1, 1, 0, 1], [1.5, 0.7, 0.3, 1.2]])
        self.assertEqual(set(r.point_index for r in rows), {0, 1})
        self.assertEqual(rows[0].coords, (1.0, 1.0, 0.0, 1.0))

    def test_deterministic(self):
        a = ConnectionTask(curved_spec(), samples=3, seed=7).run()
        b = ConnectionTask(curved_spec(), samples=3, seed=7).run()
        self.assertEqual(a, b)

    def test_superclass(self):
        self.assertRaises(NotImplementedError, Task(curved_spec()).run)


class TestParameters(TestCase):

    def test_defaults(self):
        task = MetricTask(curved_spec())
        self.assertEqual(task.samples, 100)
        self.assertEqual(task.get('oracle_mode'), 'dual')
        self.assertEqual(task.get()['metric_tol'], 1E-10)
        self.assertRaises(AttributeError, task.get, 'laplacian_tol')

    def test_types(self):
        spec = curved_spec()
        self.assertRaises(TypeError, MetricTask, spec, samples=2.5)
        self.assertRaises(TypeError, MetricTask, spec, samples=True)
        self.assertRaises(TypeError, MetricTask, 'spec')
        self.assertRaises(TypeError, ConnectionTask, spec, fields='x1')

    def test_ranges(self):
        spec = curved_spec()
        self.assertRaises(ValueError, MetricTask, spec, samples=0)
        self.assertRaises(ValueError, MetricTask, spec, oracle_mode='exact')
        self.assertRaises(ValueError, MetricTask, spec, margin=0.5)
        self.assertRaises(ValueError, MetricTask, spec, metric_tol=0.0)
        self.assertRaises(ValueError, MetricTask, spec, tolerance_scale=-1)
        self.assertRaises(ValueError, MetricTask, spec, fd_relaxation=0.5)
        self.assertRaises(ValueError, ConnectionTask, spec, fields=['x1'])

    def test_set(self):
        task = MetricTask(curved_spec())
        task.set(samples=7, bogus=1, metric_tol=None)
        self.assertEqual(task.samples, 7)
        self.assertEqual(task.metric_tol, 1E-10)
        self.assertFalse(hasattr(task, 'bogus'))
        self.assertRaises(ValueError, task.set, strict=True, bogus=1)
        # parameters of other tasks are ignored
        task = MetricTask(curved_spec(), laplacian_tol=1.0)
        self.assertFalse(hasattr(task, 'laplacian_tol'))

    def test_tolerance(self):
        task = ConnectionTask(curved_spec(), tolerance_scale=10)
        self.assertAlmostEqual(task.tolerance('torsion_tol'), 1E-7)
        task.set(oracle_mode='fd')
        self.assertAlmostEqual(task.tolerance('connection_tol'), 1E-3)
        self.assertAlmostEqual(task.tolerance('torsion_tol'), 1E-7)

    def test_repr(self):
        task = MetricTask(curved_spec(), samples=5)
        self.assertEqual(str(task), 'MetricTask(samples=5)')
        self.assertIn('metric_tol=1e-10', repr(task))

    def test_lookup(self):
        self.assertIs(task_class('laplacian'), LaplacianTask)
        self.assertRaises(ValueError, task_class, 'torsion')
        self.assertEqual([name for name, cls in list_all_tasks()],
                         ['metric', 'cometric', 'connection', 'frame',
                          'identities', 'laplacian', 'curvature'])

    def test_documentation(self):
        table = table_of_parameters(MetricTask)
        self.assertIn('Optional input arguments', table)
        self.assertIn('metric_tol', table)
        self.assertIn('metric_tol', MetricTask.__doc__)
