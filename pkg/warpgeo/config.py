'''
Run files. A run file is an INI file::

    [chart.m1]
    kind = euclidean:1
    variables = x
    domain = (0.5, 5)

    [chart.m2]
    kind = custom
    variables = u, v
    domain = (0.1, 3), (-pi, pi)
    g11 = 1
    g22 = "sin(u)^2"

    [warp]
    base = m1
    fiber = m2
    f1 = "x"
    f2 = "1 + u^2"
    c = 0.5
    variant = G

    [field.phi]
    chart = m1
    expr = "x^3"

    [sampling]
    samples = 100
    seed = 42
    margin = 1e-3

    [tolerances]
    laplacian_tol = 1e-6

    [run]
    tasks = metric, cometric, laplacian
    out = report.csv

Chart kinds are the catalog names (``warpgeo catalog``); ``custom``
charts give the metric components ``g<i><j>`` (1-based, upper
triangle; missing off-diagonal entries are zero). Domains are
``(low, high)`` pairs, one per variable, and may use ``pi``.
Expressions may be quoted. Keys of ``[tolerances]`` are registered
task parameters; ``[run]`` also accepts ``oracle_mode``, ``verbose``
and ``oracle_only_curvature``.
'''

import configparser
import re
from dataclasses import dataclass, field

from . import chart as charts
from .chart import ScalarField
from .errors import ConfigError, WarpGeoError
from .expr import parse
from .metric import WarpSpec, variants
from .tasks import _parameters, list_all_tasks

_tolerance_names = sorted(name for name in _parameters
                          if name.endswith('_tol') or
                          name in ('frame_guard', 'tolerance_scale',
                                   'fd_relaxation'))
_sampling_names = ('samples', 'seed', 'margin')
_run_names = ('tasks', 'out', 'oracle_mode', 'verbose', 'oracle_only_curvature')
_warp_names = ('base', 'fiber', 'f1', 'f2', 'c', 'variant')


@dataclass
class RunConfig:
    """Validated contents of a run file."""
    spec: WarpSpec
    charts: dict
    fields: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    out: str = None
    path: str = None

    def task_parameters(self):
        """Keyword arguments for the task constructors."""
        kwargs = dict(self.parameters)
        kwargs['fields'] = list(self.fields.values())
        return kwargs


def _unquote(text):
    text = text.strip()
    if len(text) > 1 and text[0] == text[-1] and text[0] in '"\'':
        return text[1:-1]
    return text


def _names(text):
    return [name for name in re.split(r'[\s,]+', _unquote(text)) if name]


def _number(text, key):
    text = _unquote(text)
    try:
        return float(parse(text, ()).evaluate(()))
    except WarpGeoError as e:
        raise ConfigError('"%s" is not a number (%s)' % (text, e), key=key)


def _domain(text, key):
    pairs = re.findall(r'\(([^()]*)\)', _unquote(text))
    if not pairs:
        raise ConfigError('expected (low, high) pairs, got "%s"' % text,
                          key=key)
    domain = []
    for pair in pairs:
        bounds = pair.split(',')
        if len(bounds) != 2:
            raise ConfigError('expected (low, high), got "(%s)"' % pair,
                              key=key)
        low, high = [_number(b, key) for b in bounds]
        if not low < high:
            raise ConfigError('empty interval (%g, %g)' % (low, high),
                              key=key)
        domain.append((low, high))
    return domain


def _expression(text, variables, key):
    try:
        return parse(_unquote(text), variables)
    except WarpGeoError as e:
        raise ConfigError(str(e), key=key)


def _chart(name, section):
    key = 'chart.%s' % name
    if 'kind' not in section:
        raise ConfigError('missing kind', key=key)
    kind = _unquote(section['kind'])
    variables = _names(section['variables']) if 'variables' in section \
                else None
    domain = _domain(section['domain'], key + '.domain') \
             if 'domain' in section else None
    components = {}
    for option in section:
        m = re.match(r'^g(\d)(\d)$', option)
        if m:
            i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
            if i < 0 or j < 0:
                raise ConfigError('components are numbered from 1',
                                  key='%s.%s' % (key, option))
            if variables is None:
                raise ConfigError('components need variables', key=key)
            components[(min(i, j), max(i, j))] = _expression(
                section[option], variables, '%s.%s' % (key, option))
        elif option not in ('kind', 'variables', 'domain'):
            raise ConfigError('unknown key', key='%s.%s' % (key, option))
    if components and kind != 'custom':
        raise ConfigError('metric components need kind = custom', key=key)
    if variables is not None and domain is not None and \
       len(variables) != len(domain):
        raise ConfigError('%d variables but %d domain intervals' %
                          (len(variables), len(domain)), key=key)
    try:
        return charts.catalog(kind, variables, domain, components or None,
                              name=name)
    except ConfigError:
        raise
    except WarpGeoError as e:
        raise ConfigError(str(e), key=key)


def _lookup(defined, name, key):
    if name not in defined:
        raise ConfigError('undefined chart "%s"' % name, key=key)
    return defined[name]


def _boolean(text, key):
    value = _unquote(text).lower()
    if value in ('1', 'yes', 'true', 'on'):
        return True
    if value in ('0', 'no', 'false', 'off'):
        return False
    raise ConfigError('"%s" is not a boolean' % text, key=key)


def _integer(text, key):
    try:
        return int(_unquote(text))
    except ValueError:
        raise ConfigError('"%s" is not an integer' % text, key=key)


def load_config(path):
    """Read and validate a run file; raise ConfigError naming the key."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as f:
            parser.read_file(f)
    except OSError as e:
        raise ConfigError('cannot read run file (%s)' % e.strerror, key=path)
    except configparser.Error as e:
        raise ConfigError(str(e).replace('\n', ' '), key=path)

    defined = {}
    for section in parser.sections():
        if section.startswith('chart.'):
            name = section[len('chart.'):]
            defined[name] = _chart(name, parser[section])
        elif section not in ('warp', 'sampling', 'tolerances', 'run') and \
             not section.startswith('field.'):
            raise ConfigError('unknown section', key=section)

    if not parser.has_section('warp'):
        raise ConfigError('missing section', key='warp')
    warp = parser['warp']
    for option in warp:
        if option not in _warp_names:
            raise ConfigError('unknown key', key='warp.%s' % option)
    for option in ('base', 'fiber', 'f1', 'f2'):
        if option not in warp:
            raise ConfigError('missing key', key='warp.%s' % option)
    base = _lookup(defined, _unquote(warp['base']), 'warp.base')
    fiber = _lookup(defined, _unquote(warp['fiber']), 'warp.fiber')
    if base is fiber:
        raise ConfigError('base and fiber must be different charts',
                          key='warp.fiber')
    f1 = ScalarField(base, _expression(warp['f1'], base.variables, 'warp.f1'))
    f2 = ScalarField(fiber, _expression(warp['f2'], fiber.variables,
                                        'warp.f2'))
    c = _number(warp['c'], 'warp.c') if 'c' in warp else 0.0
    variant = _unquote(warp.get('variant', 'G')).upper()
    if variant not in variants:
        raise ConfigError('variant=%s is illegal - range=%s' %
                          (variant, str(variants)), key='warp.variant')
    spec = WarpSpec(base, fiber, f1, f2, c, variant)

    fields = {}
    for section in parser.sections():
        if not section.startswith('field.'):
            continue
        name = section[len('field.'):]
        s = parser[section]
        for option in ('chart', 'expr'):
            if option not in s:
                raise ConfigError('missing key', key='%s.%s' % (section, option))
        owner = _lookup(defined, _unquote(s['chart']), section + '.chart')
        if owner is not base and owner is not fiber:
            raise ConfigError('chart "%s" is neither base nor fiber' %
                              _unquote(s['chart']), key=section + '.chart')
        fields[name] = ScalarField(
            owner, _expression(s['expr'], owner.variables, section + '.expr'))

    parameters = {}
    if parser.has_section('sampling'):
        for option, text in parser['sampling'].items():
            key = 'sampling.%s' % option
            if option not in _sampling_names:
                raise ConfigError('unknown key', key=key)
            parameters[option] = _number(text, key) if option == 'margin' \
                                 else _integer(text, key)
    if parser.has_section('tolerances'):
        for option, text in parser['tolerances'].items():
            key = 'tolerances.%s' % option
            if option not in _tolerance_names:
                raise ConfigError('not a registered tolerance', key=key)
            parameters[option] = _number(text, key)

    task_names = [name for name, cls in list_all_tasks()]
    tasks = list(task_names)
    out = None
    if parser.has_section('run'):
        run = parser['run']
        for option, text in run.items():
            key = 'run.%s' % option
            if option not in _run_names:
                raise ConfigError('unknown key', key=key)
        if 'tasks' in run:
            tasks = _names(run['tasks'])
            if not tasks:
                raise ConfigError('empty task list', key='run.tasks')
            for name in tasks:
                if name not in task_names:
                    raise ConfigError('unknown task "%s" - range=%s' %
                                      (name, str(task_names)), key='run.tasks')
        if 'out' in run:
            out = _unquote(run['out']) or None
        if 'oracle_mode' in run:
            parameters['oracle_mode'] = _unquote(run['oracle_mode'])
        if 'verbose' in run:
            parameters['verbose'] = _integer(run['verbose'], 'run.verbose')
        if 'oracle_only_curvature' in run:
            parameters['oracle_only_curvature'] = _boolean(
                run['oracle_only_curvature'], 'run.oracle_only_curvature')

    _check_parameters(parameters)
    return RunConfig(spec, defined, fields, tasks, parameters, out, path)


def _check_parameters(parameters):
    """Type and range of parameter values, reported as ConfigError."""
    for name, value in parameters.items():
        p = _parameters[name]
        if 'range' in p:
            legal = p['range']
            if isinstance(legal[0], str):
                ok = value in legal
            else:
                ok = legal[0] <= value <= legal[1]
            if not ok:
                raise ConfigError('%s is illegal - range=%s' %
                                  (value, str(legal)), key=name)
        if 'extra_check' in p and not p['extra_check'](value):
            raise ConfigError('improper value %s' % value, key=name)
        if name.endswith('_tol') and not value > 0:
            raise ConfigError('%s must be positive' % value, key=name)
