"""Test the symbolic benchmark expressions."""

import numpy as np
import pytest
import sympy

from pysbrd.core import RandomSource
from pysbrd.objectives import benchmark_names, make_benchmark
from pysbrd.symbolic import benchmark_expression, minimum_value, symbolic_gradient


def test_rastrigin_expression():

  F, xs = benchmark_expression('rastrigin', 2)
  x0, x1 = xs
  expected = 20 + x0**2 + x1**2 - 10*sympy.cos(2*sympy.pi*x0) - 10*sympy.cos(2*sympy.pi*x1)
  assert sympy.simplify(F - expected) == 0


def test_expressions_match_objectives():

  rng = RandomSource(5)
  for name in benchmark_names():
    F, xs = benchmark_expression(name, 3)
    func = sympy.lambdify([xs], F, modules='numpy')
    problem = make_benchmark(name, 3)
    for x in rng.uniform(-2.0, 2.0, (20, 3)):
      np.testing.assert_allclose(func(list(x)), problem.evaluate(x), rtol=1e-12, atol=1e-12)


def test_symbolic_gradients():

  rng = RandomSource(6)
  for name in benchmark_names():
    gradient = symbolic_gradient(name, 3)
    problem = make_benchmark(name, 3)
    for x in rng.uniform(-2.0, 2.0, (20, 3)):
      g = problem.gradient(x)
      np.testing.assert_allclose(gradient(x), g, rtol=1e-9, atol=1e-9)


def test_minimum_values():

  assert abs(minimum_value('ackley', 5)) < 1e-25
  assert minimum_value('rastrigin', 3) == 0.0
  assert minimum_value('rosenbrock', 3) == 0.0
  np.testing.assert_allclose(minimum_value('styblinski', 2), -78.3323314, atol=1e-5)


if __name__ == '__main__':
  pytest.main([__file__])
