'''
Command line interface::

    warpgeo check <runfile>                 load and validate only
    warpgeo run <runfile> [--out report.csv]
    warpgeo point <runfile> --at 2,3        every object at one point
    warpgeo catalog                         built-in charts

Options of ``run`` and ``point``: ``--tolerance-scale r``,
``--fd-oracle``, ``--samples n``, ``--seed s``, ``--verbose n``.

Exit status: 0 if every comparison passed, 1 if a comparison failed,
a hypothesis was violated or the metric degenerated at a sample
point, 2 on errors in the run file, in expressions or in the domain
of the warping functions (no report is written then).
'''

import argparse
import sys

import numpy as np

from . import oracle
from .chart import list_catalog
from .config import load_config
from .connection import grad_lift, grad_lift_oracle
from .curvature import check_parallel, riemann_oracle, \
     scalar_closed_H, scalar_oracle
from .errors import WarpGeoError, ConfigError, DomainError, \
     ExpressionSyntaxError, UndeclaredVariableError, DimensionError, \
     NotPositiveDefiniteError
from .frame import product_frame, gram_matrix
from .laplacian import laplacian_lift, laplacian_oracle, harmonicity_defect
from .metric import assemble, is_riemannian, cometric, det_closed_form_G, \
     metric_field, product_points
from .report import VerificationReport
from .tasks import task_class
from .version import version

# errors that end a run with status 2
input_errors = (ConfigError, DomainError, ExpressionSyntaxError,
                UndeclaredVariableError, DimensionError,
                NotPositiveDefiniteError)


def _parameters(config, tolerance_scale=None, fd_oracle=False, samples=None,
                seed=None, verbose=None):
    kwargs = config.task_parameters()
    overrides = dict(tolerance_scale=tolerance_scale, samples=samples,
                     seed=seed, verbose=verbose,
                     oracle_mode='fd' if fd_oracle else None)
    for name, value in overrides.items():
        if value is not None:
            kwargs[name] = value
    return kwargs


def check_domain(config, points):
    """
    Positivity of f1, f2 and of the factor metrics at the sample
    points; raises DomainError or NotPositiveDefiniteError.
    """
    spec = config.spec
    p1s = [q.p1 for q in points]
    p2s = [q.p2 for q in points]
    spec.f1.check_positive(p1s)
    spec.f2.check_positive(p2s)
    for field in config.fields.values():
        for p in (p1s if field.chart is spec.base else p2s):
            field.value(p)
    for p in p1s:
        spec.base.metric_at(p)
    for p in p2s:
        spec.fiber.metric_at(p)


def run(config, tolerance_scale=None, fd_oracle=False, samples=None,
        seed=None, verbose=None):
    """
    Run the tasks of ``config`` over the sample points and return the
    VerificationReport; ``report.exit_code()`` is the process status.
    """
    kwargs = _parameters(config, tolerance_scale, fd_oracle, samples, seed,
                         verbose)
    tasks = [task_class(name)(config.spec, **kwargs) for name in config.tasks]
    first = tasks[0]
    points = product_points(config.spec, first.samples, first.seed,
                            first.margin)
    check_domain(config, points)
    header = dict(spec=repr(config.spec), samples=first.samples,
                  seed=first.seed, oracle_mode=first.oracle_mode,
                  tolerance_scale=first.tolerance_scale,
                  tasks=', '.join(config.tasks))
    rows = []
    for task in tasks:
        if task.verbose > 0:
            print(repr(task))
        rows.extend(task.run(points))
    return VerificationReport(rows, header)


def _show(label, compute):
    try:
        value = compute()
    except WarpGeoError as e:
        print('%s: %s' % (label, e))
        return
    if isinstance(value, np.ndarray):
        text = np.array2string(value, precision=10, suppress_small=True)
        print('%s:\n%s' % (label, text))
    else:
        print('%s: %s' % (label, value))


def dump_point(config, coords, mode='dual', tol=1E-9):
    """Print every closed-form object and its oracle value at one point."""
    spec = config.spec
    q = spec.point(coords)
    mf = metric_field(spec, mode)
    x = q.coords
    print('%r at %s' % (spec, list(x)))
    _show('metric', lambda: assemble(spec, q))
    _show('classification', lambda: is_riemannian(spec, q, tol))
    if spec.variant == 'G':
        _show('det (closed form)', lambda: det_closed_form_G(spec, q))
    _show('det (direct)', lambda: float(np.linalg.det(assemble(spec, q))))
    _show('cometric', lambda: cometric(spec, q, tol))
    for field in [spec.f1, spec.f2] + list(config.fields.values()):
        source = field.expr.source
        _show('grad(%s) (closed form)' % source,
              lambda: grad_lift(spec, field, q, tol))
        _show('grad(%s) (oracle)' % source,
              lambda: grad_lift_oracle(spec, field, q, mode))
        if spec.variant == 'H' or field is spec.f1 or field is spec.f2:
            _show('laplacian(%s) (closed form)' % source,
                  lambda: laplacian_lift(spec, field, q, tol))
        _show('laplacian(%s) (oracle)' % source,
              lambda: laplacian_oracle(spec, field, q, mode))
    for which in ('f1', 'f2'):
        _show('harmonicity defect %s' % which,
              lambda: harmonicity_defect(spec, which, q, tol))
    _show('christoffel (oracle)', lambda: oracle.christoffel(mf, x))
    _show('frame', lambda: product_frame(spec, q).vectors)
    _show('frame gram', lambda: gram_matrix(spec, product_frame(spec, q), q))
    _show('ricci (oracle)', lambda: oracle.ricci(mf, x))
    _show('scalar (oracle)', lambda: scalar_oracle(spec, q, mode))
    if spec.variant == 'H':
        _show('parallel gradients', lambda: check_parallel(spec, q))
        _show('scalar (closed form)', lambda: scalar_closed_H(spec, q))
    _show('riemann (oracle)', lambda: riemann_oracle(spec, q, mode))


def _coordinates(text):
    try:
        return [float(v) for v in text.replace(',', ' ').split()]
    except ValueError:
        raise ConfigError('"%s" is not a list of numbers' % text, key='--at')


def _parser():
    parser = argparse.ArgumentParser(
        prog='warpgeo',
        description='Verify closed-form geometry of generalized warped '
                    'product metrics against a coordinate oracle.')
    parser.add_argument('--version', action='version', version=version)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('check', help='load and validate a run file')
    p.add_argument('config', help='run file (INI)')

    for name, help in (('run', 'run the verification sweep'),
                       ('point', 'show every object at one point')):
        p = sub.add_parser(name, help=help)
        p.add_argument('config', help='run file (INI)')
        p.add_argument('--tolerance-scale', dest='tolerance_scale',
                       type=float, default=None,
                       help='multiply every tolerance by this factor')
        p.add_argument('--fd-oracle', dest='fd_oracle', action='store_true',
                       help='finite differences instead of dual numbers '
                            'in the oracle')
        p.add_argument('--samples', type=int, default=None,
                       help='number of sample points')
        p.add_argument('--seed', type=int, default=None,
                       help='seed of the sample sequence')
        p.add_argument('--verbose', type=int, default=None,
                       help='verbosity level 0-4')
        if name == 'run':
            p.add_argument('--out', default=None,
                           help='CSV report file (overrides [run] out)')
        else:
            p.add_argument('--at', required=True,
                           help='product coordinates, e.g. "2,3"')

    sub.add_parser('catalog', help='list the built-in charts')
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.command == 'catalog':
        for name, description in list_catalog():
            print('%-16s %s' % (name, description))
        return 0
    try:
        config = load_config(args.config)
        if args.command == 'check':
            points = product_points(config.spec,
                                    config.parameters.get('samples', 100),
                                    config.parameters.get('seed', 42),
                                    config.parameters.get('margin', 1E-3))
            check_domain(config, points)
            print('%s: %r, tasks %s' % (args.config, config.spec,
                                        ', '.join(config.tasks)))
            return 0
        if args.command == 'point':
            dump_point(config, _coordinates(args.at),
                       'fd' if args.fd_oracle else
                       config.parameters.get('oracle_mode', 'dual'))
            return 0
        report = run(config, args.tolerance_scale, args.fd_oracle,
                     args.samples, args.seed, args.verbose)
    except input_errors as e:
        print('error: %s' % e, file=sys.stderr)
        return 2
    except (TypeError, ValueError) as e:
        # parameter checks of the tasks
        print('error: %s' % e, file=sys.stderr)
        return 2
    print(report.format_table())
    out = args.out or config.out
    if out:
        report.write_csv(out)
    return report.exit_code()


if __name__ == '__main__':
    sys.exit(main())
