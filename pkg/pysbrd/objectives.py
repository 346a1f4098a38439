"""PySBRD benchmark objectives.

Each benchmark comes with an analytic gradient, a default
initialization box and its known global minimizer.  Objectives and
gradients accept batched input of shape ``(..., d)``.

"""

import enum

import numpy as np

from pysbrd.core import ObjectiveProblem


###############################################################################
# benchmark functions

def ackley(x):
  r"""Ackley function.

  .. math::

    F(x) = -20 \exp\left(-0.2 \sqrt{\tfrac{1}{d} \sum_i x_i^2}\right)
           - \exp\left(\tfrac{1}{d} \sum_i \cos(2 \pi x_i)\right) + 20 + e
  """

  x = np.asarray(x, np.float64)
  d = x.shape[-1]
  r = np.sqrt(np.sum(x**2, axis=-1) / d)
  c = np.sum(np.cos(2*np.pi*x), axis=-1) / d
  # grouped so that F(0) is exactly zero
  return (20.0 - 20.0*np.exp(-0.2*r)) + (np.e - np.exp(c))


def ackley_gradient(x):
  """Gradient of :func:`ackley`; the zero vector at the origin."""

  x = np.asarray(x, np.float64)
  d = x.shape[-1]
  r = np.sqrt(np.sum(x**2, axis=-1, keepdims=True) / d)
  c = np.sum(np.cos(2*np.pi*x), axis=-1, keepdims=True) / d

  # the radial term is not differentiable at r = 0
  safe = np.where(r > 0.0, r, 1.0)
  radial = np.where(r > 0.0, 4.0 * np.exp(-0.2*safe) * x / (d * safe), 0.0)
  periodic = (2*np.pi / d) * np.exp(c) * np.sin(2*np.pi*x)
  return radial + periodic


def rastrigin(x):
  """Rastrigin function, ``10 d + sum(x**2 - 10 cos(2 pi x))``."""

  x = np.asarray(x, np.float64)
  d = x.shape[-1]
  return 10.0*d + np.sum(x**2 - 10.0*np.cos(2*np.pi*x), axis=-1)


def rastrigin_gradient(x):
  x = np.asarray(x, np.float64)
  return 2.0*x + 20.0*np.pi*np.sin(2*np.pi*x)


def rosenbrock(x):
  """Rosenbrock function, ``sum(100 (x[i+1] - x[i]**2)**2 + (1 - x[i])**2)``."""

  x = np.asarray(x, np.float64)
  a, b = x[..., :-1], x[..., 1:]
  return np.sum(100.0*(b - a**2)**2 + (1.0 - a)**2, axis=-1)


def rosenbrock_gradient(x):
  x = np.asarray(x, np.float64)
  a, b = x[..., :-1], x[..., 1:]
  g = np.zeros_like(x)
  g[..., :-1] += -400.0*a*(b - a**2) - 2.0*(1.0 - a)
  g[..., 1:] += 200.0*(b - a**2)
  return g


def styblinski_tang(x):
  """Styblinski-Tang function, ``sum(x**4 - 16 x**2 + 5 x) / 2``."""

  x = np.asarray(x, np.float64)
  return 0.5 * np.sum(x**4 - 16.0*x**2 + 5.0*x, axis=-1)


def styblinski_tang_gradient(x):
  x = np.asarray(x, np.float64)
  return 2.0*x**3 - 16.0*x + 2.5


###############################################################################
# benchmark registry

STYBLINSKI_TANG_MINIMIZER = -2.903534


class BenchmarkId(str, enum.Enum):
  """Stable benchmark identifiers (also used on the command line)."""

  ACKLEY = 'ackley'
  RASTRIGIN = 'rastrigin'
  ROSENBROCK = 'rosenbrock'
  STYBLINSKI_TANG = 'styblinski'


# id: (objective, gradient, default box, minimizer coordinate, minimum dimension)
_BENCHMARKS = {
  BenchmarkId.ACKLEY:          (ackley, ackley_gradient, (-3.0, 3.0), 0.0, 1),
  BenchmarkId.RASTRIGIN:       (rastrigin, rastrigin_gradient, (-5.12, 5.12), 0.0, 1),
  BenchmarkId.ROSENBROCK:      (rosenbrock, rosenbrock_gradient, (-2.048, 2.048), 1.0, 2),
  BenchmarkId.STYBLINSKI_TANG: (styblinski_tang, styblinski_tang_gradient, (-3.0, 3.0),
                                STYBLINSKI_TANG_MINIMIZER, 1),
}


def benchmark_names():
  """Return the benchmark identifiers accepted by :func:`make_benchmark`."""
  return [ b.value for b in BenchmarkId ]


def make_benchmark(benchmark, d, box=None):
  """Return the benchmark *benchmark* in *d* dimensions.

  :param benchmark: :class:`BenchmarkId` or its string value
  :param d:         dimension
  :param box:       ``(lower, upper)`` initialization box override; each
                    side is a scalar or a length *d* array

  Default boxes: Ackley and Styblinski-Tang ``[-3, 3]^d``, Rosenbrock
  ``[-2.048, 2.048]^d``, Rastrigin ``[-5.12, 5.12]^d``.
  """

  try:
    benchmark = BenchmarkId(benchmark)
  except ValueError:
    raise ValueError("unknown benchmark %r, must be one of: %s"
                     % (benchmark, ', '.join(benchmark_names())))

  func, grad, default_box, xstar, dmin = _BENCHMARKS[benchmark]

  if d < dmin:
    raise ValueError('%s needs d >= %d, got %d' % (benchmark.value, dmin, d))

  lower, upper = default_box if box is None else box

  return ObjectiveProblem(dimension=d, evaluate=func, gradient=grad,
                          lower=lower, upper=upper,
                          known_minimizer=np.full(d, xstar),
                          name=benchmark.value)


###############################################################################
# finite differences

def finite_diff_gradient(problem, x, step=1.0e-6):
  """Central finite difference approximation of the gradient at *x*.

  :param problem: :class:`ObjectiveProblem` (or anything with ``evaluate``)
  :param x:       evaluation point
  :param step:    difference step *h*
  """

  if not step > 0.0:
    raise ValueError('finite difference step must be positive, got %r' % (step,))

  x = np.asarray(x, np.float64)
  g = np.empty_like(x)
  for k in range(x.size):
    e = np.zeros_like(x)
    e[k] = step
    g[k] = (problem.evaluate(x + e) - problem.evaluate(x - e)) / (2*step)
  return g
