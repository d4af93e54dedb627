'''
Exceptions raised by the package. Every class derives from
``WarpGeoError`` and from the builtin exception that plain
code would raise in the same situation, so ``except ValueError``
keeps working.
'''


class WarpGeoError(Exception):
    pass


class ExpressionSyntaxError(WarpGeoError, ValueError):
    def __init__(self, message, offset):
        WarpGeoError.__init__(self, '%s at offset %d' % (message, offset))
        self.offset = offset


class UndeclaredVariableError(WarpGeoError, ValueError):
    def __init__(self, name, offset=None):
        WarpGeoError.__init__(self, 'undeclared variable "%s"' % name)
        self.name = name
        self.offset = offset


class DomainError(WarpGeoError, ValueError):
    def __init__(self, message, subexpression=None):
        if subexpression is not None:
            message = '%s in %s' % (message, subexpression)
        WarpGeoError.__init__(self, message)
        self.subexpression = subexpression


class OutOfDomainError(DomainError):
    def __init__(self, chart_name, point):
        DomainError.__init__(
            self, 'point %s is outside the domain of chart %s' %
            (list(point), chart_name))
        self.point = point


class NotPositiveDefiniteError(WarpGeoError, ValueError):
    def __init__(self, name, point, smallest_eigenvalue):
        WarpGeoError.__init__(
            self, 'metric of %s is not positive definite at %s '
            '(smallest eigenvalue %g)' % (name, list(point), smallest_eigenvalue))
        self.point = point
        self.smallest_eigenvalue = smallest_eigenvalue


class DegenerateMetricError(WarpGeoError, ArithmeticError):
    def __init__(self, message, diagnostic=None):
        WarpGeoError.__init__(self, message)
        self.diagnostic = diagnostic


class InconsistencyError(WarpGeoError, ArithmeticError):
    pass


class HypothesisError(WarpGeoError, ValueError):
    def __init__(self, hessian_norms, tolerance):
        WarpGeoError.__init__(
            self, 'gradients are not parallel: Hessian norms %s exceed %g' %
            (tuple('%.3e' % h for h in hessian_norms), tolerance))
        self.hessian_norms = tuple(hessian_norms)


class ConfigError(WarpGeoError, ValueError):
    def __init__(self, message, key=None):
        if key is not None:
            message = '%s: %s' % (key, message)
        WarpGeoError.__init__(self, message)
        self.key = key


class DimensionError(WarpGeoError, ValueError):
    pass
