'''
Small expression language used for metric components, warping
functions and test fields.

Grammar (``^`` is right-associative and binds tighter than unary minus,
so ``-x^2`` is ``-(x^2)``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := number | 'pi' | name | func '(' expr ')' | '(' expr ')'

The built-in functions are

=====  ===========================================
Name   Domain checked at evaluation time
=====  ===========================================
sin    none
cos    none
tan    none
exp    none
log    argument > 0
sqrt   argument > 0
sinh   none
cosh   none
tanh   none
=====  ===========================================

A parsed ``Expression`` is immutable. It can be evaluated to a float,
or to a ``Jet2`` holding the value, the exact gradient and the exact
Hessian (forward-over-forward dual numbers)::

    >>> e = parse('x1^2 + sin(x2)', ['x1', 'x2'])
    >>> j = eval_jet2(e, [2, 0])
    >>> j.value, j.gradient.tolist()
    (4.0, [4.0, 1.0])

``Expression.differentiate`` returns the symbolic partial derivative;
jets of such derivatives give the third derivatives some geometric
quantities need without third-order jets.
'''

import math
import re
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from .errors import ExpressionSyntaxError, UndeclaredVariableError, \
     DomainError, DegenerateMetricError, DimensionError


class Jet2(object):
    """
    Second-order jet of a scalar function of n variables: value,
    gradient (length n) and the full symmetric Hessian, stored as a
    dense n x n array with both triangles filled. Arrays are never
    modified in place after construction. Every operation builds
    the Hessian from symmetric pieces, so it stays exactly symmetric.
    """
    __slots__ = ('value', 'gradient', 'hessian')

    def __init__(self, value, gradient, hessian):
        self.value = float(value)
        self.gradient = gradient
        self.hessian = hessian

    @classmethod
    def constant(cls, value, n):
        return cls(value, np.zeros(n), np.zeros((n, n)))

    @classmethod
    def variable(cls, value, index, n):
        gradient = np.zeros(n)
        gradient[index] = 1.0
        return cls(value, gradient, np.zeros((n, n)))

    @property
    def size(self):
        return self.gradient.size

    def apply(self, f0, f1, f2):
        """Chain rule for a scalar function with f(v)=f0, f'(v)=f1, f''(v)=f2."""
        g = self.gradient
        return Jet2(f0, f1*g, f1*self.hessian + f2*np.outer(g, g))

    def reciprocal(self):
        v = self.value
        return self.apply(1.0/v, -1.0/v**2, 2.0/v**3)

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.value + other.value, self.gradient + other.gradient,
                        self.hessian + other.hessian)
        return Jet2(self.value + other, self.gradient, self.hessian)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.gradient, -self.hessian)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            cross = np.outer(a.gradient, b.gradient)
            return Jet2(a.value*b.value,
                        a.value*b.gradient + b.value*a.gradient,
                        a.value*b.hessian + b.value*a.hessian + cross + cross.T)
        return Jet2(self.value*other, self.gradient*other, self.hessian*other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self*other.reciprocal()
        return self*(1.0/other)

    def __rtruediv__(self, other):
        return self.reciprocal()*other

    def __repr__(self):
        return 'Jet2(value=%r, gradient=%r, hessian=%r)' % \
               (self.value, self.gradient.tolist(), self.hessian.tolist())


def value_of(x):
    """Plain float value of a float or a Jet2."""
    return x.value if isinstance(x, Jet2) else float(x)


def jet_inverse(matrix):
    """
    Invert a square matrix whose entries are Jet2 objects (or floats)
    by Gauss-Jordan elimination with partial pivoting on the values.
    Returns a list of rows.
    """
    n = len(matrix)
    rows = [list(row) + [1.0 if i == j else 0.0 for j in range(n)]
            for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(value_of(rows[r][col])))
        if value_of(rows[pivot][col]) == 0:
            raise DegenerateMetricError('singular matrix in jet_inverse')
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [x/p for x in rows[col]]
        for r in range(n):
            if r != col:
                factor = rows[r][col]
                rows[r] = [x - factor*y for x, y in zip(rows[r], rows[col])]
    return [row[n:] for row in rows]


# Catalogue of built-in functions:
# name -> (f, f', f'', domain check or None)
def _sec2(v):
    return 1.0/math.cos(v)**2

_FUNCTIONS = dict(
    sin=(math.sin, math.cos, lambda v: -math.sin(v), None),
    cos=(math.cos, lambda v: -math.sin(v), lambda v: -math.cos(v), None),
    tan=(math.tan, _sec2, lambda v: 2*math.tan(v)*_sec2(v), None),
    exp=(math.exp, math.exp, math.exp, None),
    log=(math.log, lambda v: 1.0/v, lambda v: -1.0/v**2, lambda v: v > 0),
    sqrt=(math.sqrt, lambda v: 0.5/math.sqrt(v),
          lambda v: -0.25/(v*math.sqrt(v)), lambda v: v > 0),
    sinh=(math.sinh, math.cosh, math.sinh, None),
    cosh=(math.cosh, math.sinh, math.cosh, None),
    tanh=(math.tanh, lambda v: 1 - math.tanh(v)**2,
          lambda v: -2*math.tanh(v)*(1 - math.tanh(v)**2), None),
    )

_CONSTANTS = dict(pi=math.pi)


# Syntax tree

@dataclass(frozen=True)
class Constant:
    value: float

    def source(self):
        if self.value < 0:
            return '(%r)' % self.value
        return repr(self.value)


@dataclass(frozen=True)
class Variable:
    name: str

    def source(self):
        return self.name


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object

    def source(self):
        return '(%s%s)' % (self.op, self.operand.source())


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object

    def source(self):
        return '(%s %s %s)' % (self.left.source(), self.op, self.right.source())


@dataclass(frozen=True)
class Call:
    name: str
    argument: object

    def source(self):
        return '%s(%s)' % (self.name, self.argument.source())


ZERO = Constant(0.0)
ONE = Constant(1.0)
TWO = Constant(2.0)


# Tokenizer and recursive-descent parser

Token = namedtuple('Token', 'kind text offset')

_NUMBER_REGEXP = re.compile(r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?')
_NAME_REGEXP = re.compile(r'[A-Za-z_][A-Za-z_0-9]*')
_OPERATORS = '+-*/^()'


def tokenize(source):
    tokens = []
    pos = 0
    while pos < len(source):
        ch = source[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch in _OPERATORS:
            tokens.append(Token('op', ch, pos))
            pos += 1
            continue
        m = _NUMBER_REGEXP.match(source, pos)
        if m:
            tokens.append(Token('number', m.group(), pos))
            pos = m.end()
            continue
        m = _NAME_REGEXP.match(source, pos)
        if m:
            tokens.append(Token('name', m.group(), pos))
            pos = m.end()
            continue
        raise ExpressionSyntaxError('unexpected character %r' % ch, pos)
    tokens.append(Token('end', '', len(source)))
    return tokens


class _Parser:

    def __init__(self, source, allowed_vars):
        self.source = source
        self.allowed_vars = set(allowed_vars)
        self.tokens = tokenize(source)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def fail(self, token):
        if token.kind == 'end':
            raise ExpressionSyntaxError('unexpected end of input', token.offset)
        raise ExpressionSyntaxError('unexpected %r' % token.text, token.offset)

    def expect(self, text):
        token = self.advance()
        if token.text != text or token.kind != 'op':
            if token.kind == 'end':
                raise ExpressionSyntaxError(
                    'expected %r before end of input' % text, token.offset)
            raise ExpressionSyntaxError(
                'expected %r, found %r' % (text, token.text), token.offset)

    def parse(self):
        if not self.source.strip():
            raise ExpressionSyntaxError('empty expression', 0)
        node = self.expression()
        if self.peek().kind != 'end':
            self.fail(self.peek())
        return node

    def expression(self):
        node = self.term()
        while self.peek().text in ('+', '-') and self.peek().kind == 'op':
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek().text in ('*', '/') and self.peek().kind == 'op':
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        token = self.peek()
        if token.kind == 'op' and token.text in ('-', '+'):
            self.advance()
            operand = self.unary()
            if token.text == '+':
                return operand
            if isinstance(operand, Constant):
                # -2 is a literal, keeps serialized trees round-trip stable
                return Constant(-operand.value)
            return Unary('-', operand)
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek().text == '^' and self.peek().kind == 'op':
            self.advance()
            node = Binary('^', node, self.unary())
        return node

    def atom(self):
        token = self.advance()
        if token.kind == 'number':
            value = float(token.text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(
                    'number %s is out of range' % token.text, token.offset)
            return Constant(value)
        if token.kind == 'name':
            nxt = self.peek()
            if nxt.kind == 'op' and nxt.text == '(':
                if token.text not in _FUNCTIONS:
                    raise ExpressionSyntaxError(
                        'unknown function %r' % token.text, token.offset)
                self.advance()
                argument = self.expression()
                self.expect(')')
                return Call(token.text, argument)
            if token.text in self.allowed_vars:
                return Variable(token.text)
            if token.text in _CONSTANTS:
                return Constant(_CONSTANTS[token.text])
            raise UndeclaredVariableError(token.text, token.offset)
        if token.kind == 'op' and token.text == '(':
            node = self.expression()
            self.expect(')')
            return node
        self.fail(token)


# Evaluation over floats or Jet2 objects

def _domain_check(ok, message, node):
    if not ok:
        raise DomainError(message, node.source())


def _integer_power(base, k, node):
    if k == 0:
        return 1.0
    if k < 0:
        _domain_check(value_of(base) != 0, 'zero raised to a negative power', node)
        return 1.0/_integer_power(base, -k, node)
    result = None
    square = base
    while k:
        if k & 1:
            result = square if result is None else result*square
        k >>= 1
        if k:
            square = square*square
    return result


def _locally_constant(x):
    if not isinstance(x, Jet2):
        return True
    return not (np.any(x.gradient) or np.any(x.hessian))


def _power(node, env):
    exponent = node.right
    base = _evaluate(node.left, env)
    if isinstance(exponent, Constant) and float(exponent.value).is_integer():
        return _integer_power(base, int(exponent.value), node)
    if isinstance(exponent, Constant):
        _domain_check(value_of(base) > 0,
                      'non-integer power of a non-positive base', node)
        p = exponent.value
        if isinstance(base, Jet2):
            v = base.value
            return base.apply(v**p, p*v**(p - 1), p*(p - 1)*v**(p - 2))
        return base**p
    e = _evaluate(exponent, env)
    k = value_of(e)
    # (-3)^(1+1): an integer exponent that does not vary with the point
    if value_of(base) <= 0 and float(k).is_integer() and _locally_constant(e):
        return _integer_power(base, int(k), node)
    _domain_check(value_of(base) > 0,
                  'non-integer power of a non-positive base', node)
    if not isinstance(base, Jet2) and not isinstance(e, Jet2):
        return base**e
    return _call('exp', e*_call('log', base, node), node)


def _call(name, x, node):
    f, df, d2f, domain = _FUNCTIONS[name]
    v = value_of(x)
    if domain is not None:
        _domain_check(domain(v), '%s of non-positive argument %g' % (name, v),
                      node)
    try:
        if isinstance(x, Jet2):
            return x.apply(f(v), df(v), d2f(v))
        return f(v)
    except (OverflowError, ValueError) as e:
        raise DomainError('%s(%g) failed: %s' % (name, v, e), node.source())


def _evaluate(node, env):
    if isinstance(node, Constant):
        return node.value
    if isinstance(node, Variable):
        return env[node.name]
    if isinstance(node, Unary):
        return -_evaluate(node.operand, env)
    if isinstance(node, Call):
        return _call(node.name, _evaluate(node.argument, env), node)
    if node.op == '^':
        return _power(node, env)
    left = _evaluate(node.left, env)
    right = _evaluate(node.right, env)
    if node.op == '+':
        return left + right
    if node.op == '-':
        return left - right
    if node.op == '*':
        return left*right
    _domain_check(value_of(right) != 0, 'division by zero', node)
    return left/right


# Symbolic differentiation (no simplification beyond literal 0 and 1)

def _is(node, value):
    return isinstance(node, Constant) and node.value == value

def _neg(a):
    if isinstance(a, Constant):
        return Constant(-a.value)
    return Unary('-', a)

def _add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    return Binary('+', a, b)

def _sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return _neg(b)
    return Binary('-', a, b)

def _mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    return Binary('*', a, b)

def _div(a, b):
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    return Binary('/', a, b)


def _outer_derivative(name, u):
    if name == 'sin':
        return Call('cos', u)
    if name == 'cos':
        return _neg(Call('sin', u))
    if name == 'tan':
        return _div(ONE, Binary('^', Call('cos', u), TWO))
    if name == 'exp':
        return Call('exp', u)
    if name == 'log':
        return _div(ONE, u)
    if name == 'sqrt':
        return _div(ONE, _mul(TWO, Call('sqrt', u)))
    if name == 'sinh':
        return Call('cosh', u)
    if name == 'cosh':
        return Call('sinh', u)
    if name == 'tanh':
        return _sub(ONE, Binary('^', Call('tanh', u), TWO))
    raise NotImplementedError('no derivative rule for %s' % name)


def _differentiate(node, name):
    if isinstance(node, Constant):
        return ZERO
    if isinstance(node, Variable):
        return ONE if node.name == name else ZERO
    if isinstance(node, Unary):
        return _neg(_differentiate(node.operand, name))
    if isinstance(node, Call):
        inner = _differentiate(node.argument, name)
        if _is(inner, 0):
            return ZERO
        return _mul(_outer_derivative(node.name, node.argument), inner)
    a, b = node.left, node.right
    da, db = _differentiate(a, name), _differentiate(b, name)
    if node.op == '+':
        return _add(da, db)
    if node.op == '-':
        return _sub(da, db)
    if node.op == '*':
        return _add(_mul(da, b), _mul(a, db))
    if node.op == '/':
        return _div(_sub(_mul(da, b), _mul(a, db)), Binary('^', b, TWO))
    # power
    if isinstance(b, Constant):
        if _is(da, 0):
            return ZERO
        k = b.value
        outer = ONE if k == 1 else Binary('^', a, Constant(k - 1))
        return _mul(_mul(Constant(k), outer), da)
    return _mul(node, _add(_mul(db, Call('log', a)), _div(_mul(b, da), a)))


class Expression(object):
    """
    Parsed expression over a fixed tuple of declared variables.

    ``ast`` is the syntax tree, ``source`` the text it was parsed from
    (for derived expressions: the canonical serialization) and
    ``variables`` the declared names, in the order used by point vectors.
    """

    def __init__(self, ast, source, variables):
        self.ast = ast
        self.source = source
        self.variables = tuple(variables)

    def __eq__(self, other):
        return isinstance(other, Expression) and self.ast == other.ast

    def __hash__(self):
        return hash(self.ast)

    def __repr__(self):
        return 'Expression(%r)' % self.source

    def __str__(self):
        return self.source

    def serialize(self):
        """Fully parenthesized text that parses back to the same tree."""
        return self.ast.source()

    def is_constant(self):
        return not self.names()

    def names(self):
        """Set of variable names occurring in the tree."""
        found = set()
        stack = [self.ast]
        while stack:
            node = stack.pop()
            if isinstance(node, Variable):
                found.add(node.name)
            elif isinstance(node, Unary):
                stack.append(node.operand)
            elif isinstance(node, Binary):
                stack.extend((node.left, node.right))
            elif isinstance(node, Call):
                stack.append(node.argument)
        return found

    def _env(self, point):
        point = np.asarray(point, dtype=float).ravel()
        if point.size != len(self.variables):
            raise DimensionError(
                'point has %d coordinates, expression %s declares %d variables'
                % (point.size, self.source, len(self.variables)))
        return point

    def evaluate(self, point):
        point = self._env(point)
        return float(_evaluate(self.ast, dict(zip(self.variables, point))))

    def evaluate_in(self, env):
        """
        Evaluate with ``env`` mapping variable names to floats or Jet2
        objects (all jets of one size). Returns a float or a Jet2.
        """
        return _evaluate(self.ast, env)

    def jet(self, point):
        return eval_jet2(self, point)

    def differentiate(self, name):
        if name not in self.variables:
            raise UndeclaredVariableError(name)
        ast = _differentiate(self.ast, name)
        return Expression(ast, ast.source(), self.variables)


def parse(source, allowed_vars):
    """
    Parse ``source`` into an ``Expression`` whose variables are
    ``allowed_vars``. Raises ``ExpressionSyntaxError`` (with the
    offending offset) or ``UndeclaredVariableError``.
    """
    if not isinstance(source, str):
        raise TypeError('source is %s, must be str' % type(source))
    ast = _Parser(source, allowed_vars).parse()
    return Expression(ast, source, allowed_vars)


def constant(value, allowed_vars=()):
    node = Constant(float(value))
    return Expression(node, node.source(), allowed_vars)


def eval_jet2(expr, point):
    """Value, exact gradient and exact Hessian of ``expr`` at ``point``."""
    point = expr._env(point)
    n = point.size
    env = dict((name, Jet2.variable(x, i, n))
               for i, (name, x) in enumerate(zip(expr.variables, point)))
    result = _evaluate(expr.ast, env)
    if not isinstance(result, Jet2):
        result = Jet2.constant(result, n)
    return result
