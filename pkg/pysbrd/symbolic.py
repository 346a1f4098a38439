"""PySBRD symbolic tool kit.

Builds the benchmark objectives as SymPy expressions.  Differentiating
these gives gradients that are independent of the hand written ones in
:mod:`pysbrd.objectives`, which makes them a useful oracle.

Requires SymPy.

"""

import sympy

from sympy import Symbol as sym

from pysbrd.objectives import BenchmarkId, STYBLINSKI_TANG_MINIMIZER


###############################################################################

def coordinates(d):
  """Return the symbols ``x0, ..., x{d-1}``."""
  return [ sym('x%d' % i, real=True) for i in range(d) ]


def benchmark_expression(benchmark, d):
  r"""Build the symbolic objective of *benchmark* in *d* dimensions.

  Returns ``(F, xs)`` where *F* is a SymPy expression in the symbols
  *xs*.  For example::

    >>> F, xs = benchmark_expression('rastrigin', 2)
    >>> F
    x0**2 + x1**2 - 10*cos(2*pi*x0) - 10*cos(2*pi*x1) + 20

  """

  benchmark = BenchmarkId(benchmark)
  xs = coordinates(d)

  if benchmark == BenchmarkId.ACKLEY:
    r = sympy.sqrt(sum(x**2 for x in xs) / d)
    c = sum(sympy.cos(2*sympy.pi*x) for x in xs) / d
    F = -20*sympy.exp(-sympy.Rational(1, 5)*r) - sympy.exp(c) + 20 + sympy.E

  elif benchmark == BenchmarkId.RASTRIGIN:
    F = 10*d + sum(x**2 - 10*sympy.cos(2*sympy.pi*x) for x in xs)

  elif benchmark == BenchmarkId.ROSENBROCK:
    if d < 2:
      raise ValueError('rosenbrock needs d >= 2, got %d' % d)
    F = sum(100*(xs[i+1] - xs[i]**2)**2 + (1 - xs[i])**2 for i in range(d-1))

  else:
    F = sympy.Rational(1, 2) * sum(x**4 - 16*x**2 + 5*x for x in xs)

  return F, xs


def symbolic_gradient(benchmark, d):
  """Return a numerical gradient function obtained by differentiating
  :func:`benchmark_expression`.

  The returned callable maps a length *d* array to a length *d* list
  of floats.
  """

  F, xs = benchmark_expression(benchmark, d)
  dF = [ sympy.diff(F, x) for x in xs ]
  func = sympy.lambdify([xs], dF, modules='numpy')

  def gradient(x):
    return [ float(v) for v in func(list(x)) ]

  return gradient


def minimum_value(benchmark, d):
  """Return F at the known minimizer, evaluated symbolically (as a float)."""

  benchmark = BenchmarkId(benchmark)
  F, xs = benchmark_expression(benchmark, d)

  if benchmark == BenchmarkId.STYBLINSKI_TANG:
    xstar = sympy.Float(STYBLINSKI_TANG_MINIMIZER, 30)
  elif benchmark == BenchmarkId.ROSENBROCK:
    xstar = 1
  else:
    xstar = 0

  return float(F.subs({ x: xstar for x in xs }).evalf(30))
