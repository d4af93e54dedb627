"""
The ``warpgeo`` package checks closed-form differential geometry of
generalized warped product metrics on M1 x M2 against a coordinate
oracle. The factors are coordinate charts whose metric components are
expressions; the product metric is either

  * variant G: f2^2 g1 + f1^2 g2 + c f1 f2 (df1 (x) df2 + df2 (x) df1), or
  * variant H: g1 + c^2 f2^2 df1 (x) df1 + f1^2 g2,

with f1 a positive function on M1 and f2 a positive function on M2.
The closed forms (determinant, cometric, gradients, connection,
orthonormal frames, Laplacians, curvature) are evaluated directly
from the factor data; the oracle assembles the product metric and
computes Christoffel symbols and curvature from its derivatives, which
come from dual numbers or central differences.

The comparisons are grouped in verification tasks:
"""

_tutorial = r'''

Basic Usage
===========

.. code-block:: python

        import warpgeo

        base = warpgeo.euclidean(1, variables=['x'], domain=[(0.5, 5)])
        fiber = warpgeo.euclidean(1, variables=['y'], domain=[(0.5, 5)])
        spec = warpgeo.WarpSpec(base, fiber, 'x', 'y', c=0.5, variant='G')

        q = spec.point([2], [3])
        warpgeo.assemble(spec, q)          # [[9, 3], [3, 4]]
        warpgeo.det_closed_form_G(spec, q) # 27

        task = warpgeo.LaplacianTask(spec, samples=20)
        rows = task.run()
        report = warpgeo.VerificationReport(rows)
        print(report)

Parameters of a task can be given to the constructor or later through
``task.set(prm=value)``; the tables below list them per task. The same
sweeps are run from the command line with ``warpgeo run <runfile>``
(see ``warpgeo.config`` for the run file format).
'''

import inspect

from .errors import *
from .expr import parse, constant, Expression, Jet2
from .chart import Chart, ScalarField, euclidean, sphere2, halfplane2, \
     catalog, list_catalog
from .metric import WarpSpec, ProductPoint, assemble, metric_field, \
     det_closed_form_G, det_frame_G, is_riemannian, cometric, \
     warp_gradients, reconstruct_vector, ReconstructionData, \
     degeneracy_constants, product_points
from .connection import LiftedVectorField, grad_lift, grad_lift_oracle, \
     nabla_lifted, nabla_oracle, b_tensor
from .frame import product_frame, factor_orthonormal_frame, sum_identities
from .laplacian import laplacian_lift, laplacian_lift_G, laplacian_lift_H, \
     laplacian_oracle, harmonicity_defect
from .curvature import riemann_closed_H, ricci_closed_H, scalar_closed_H, \
     scalar_constant_curvature, converse_flat_spec, compare_curvature, \
     CurvatureReport
from .report import VerificationReport
from .tasks import Task, MetricTask, CometricTask, ConnectionTask, FrameTask, \
     IdentitiesTask, LaplacianTask, CurvatureTask, list_all_tasks, task_class
from .tasks import table_of_parameters, typeset_toc
from .config import load_config, RunConfig
from .version import version as __version__

# Update doc strings of the tasks with their parameters
class_, classname = None, None
classnames = [name for name, obj in list(locals().items())
              if inspect.isclass(obj) and issubclass(obj, Task)]

toc = []
for classname in classnames:
    class_ = eval(classname)
    setattr(class_, '__doc__',
            (class_.__doc__ or '') + table_of_parameters(class_))
    toc.append((classname, class_.quick_description))

__doc__ = __doc__ + typeset_toc(toc) + _tutorial

# Do not pollute namespace
try:
    del class_, classname, classnames, toc, typeset_toc, \
        table_of_parameters, inspect
except NameError:
    pass
