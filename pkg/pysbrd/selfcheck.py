"""PySBRD self checks.

Quick numerical consistency checks run by ``pysbrd check``: gradients
against finite differences and SymPy, conservation of mass, and the
geometric and descent guarantees of a step.

"""

import logging

from dataclasses import dataclass

import numpy as np

from pysbrd.core import Mode, RandomSource, SolverConfig, init_swarm
from pysbrd.direction import random_descent_direction
from pysbrd.linesearch import descent_bound
from pysbrd.objectives import benchmark_names, finite_diff_gradient, make_benchmark
from pysbrd.solver import run, step
from pysbrd.symbolic import symbolic_gradient

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
  name:   str
  passed: bool
  detail: str = ''


def _points(problem, rng, count):
  lower, upper = problem.init_box
  return rng.uniform(lower, upper, size=(count, problem.dimension))


###############################################################################
# checks

def check_fd_gradients(seed=0, d=3, count=5):
  rng = RandomSource(seed)
  worst = 0.0
  for name in benchmark_names():
    problem = make_benchmark(name, d)
    for x in _points(problem, rng, count):
      g = np.asarray(problem.gradient(x))
      fd = finite_diff_gradient(problem, x)
      worst = max(worst, float(np.max(np.abs(g - fd) / (1.0 + np.abs(g)))))
  return worst < 1e-5, 'max relative deviation %.2e' % worst


def check_symbolic_gradients(seed=0, d=3, count=5):
  rng = RandomSource(seed)
  worst = 0.0
  for name in benchmark_names():
    problem = make_benchmark(name, d)
    gradient = symbolic_gradient(name, d)
    for x in _points(problem, rng, count):
      g = np.asarray(problem.gradient(x))
      worst = max(worst, float(np.max(np.abs(g - gradient(x)) / (1.0 + np.abs(g)))))
  return worst < 1e-10, 'max relative deviation %.2e' % worst


def check_mass_conservation(seed=0, nmax=30):
  problem = make_benchmark('ackley', 4)
  worst = 0.0
  for mode in Mode:
    config = SolverConfig(n_agents=20, nmax=nmax, mode=mode)
    rng = RandomSource(seed)
    swarm = init_swarm(problem, config, rng)
    for _ in range(nmax):
      swarm, _record = step(swarm, problem, config, rng)
      worst = max(worst, abs(swarm.total_mass() - 1.0))
  return worst < 1e-12, 'max total mass deviation %.2e' % worst


def check_directions(seed=0, count=200):
  rng = RandomSource(seed)
  worst_norm, worst_cos = 0.0, 0.0
  for _ in range(count):
    d = int(rng.uniform(2, 12))
    g = rng.normal(d) * rng.uniform(0.1, 10.0)
    m_rel = float(rng.uniform(1e-3, 1.0))
    sample = random_descent_direction(g, m_rel, Mode.SBRD, rng)
    gg = g @ g
    worst_norm = max(worst_norm, abs(np.sqrt(sample.p @ sample.p) - np.sqrt(gg)) / np.sqrt(gg))
    worst_cos = max(worst_cos, 0.5*(1.0 + m_rel) - (sample.p @ g) / gg)
  passed = worst_norm < 1e-12 and worst_cos < 1e-12
  return passed, 'norm deviation %.2e, cap violation %.2e' % (worst_norm, worst_cos)


def check_backtracking(seed=0):
  problem = make_benchmark('rastrigin', 3)
  config = SolverConfig(n_agents=15, nmax=25)
  result = run(problem, config, seed)
  moves = [ m for record in result.trace for m in record.moves ]
  for m in moves:
    bound = descent_bound(m.f_old, config.lam*m.m_rel, m.h, m.grad_sq)
    if m.f_new > bound or not 0.0 < m.h <= config.h0:
      return False, 'agent %d: F %r above bound %r at h = %r' % (m.index, m.f_new, bound, m.h)
  return True, '%d accepted moves' % len(moves)


CHECKS = [
  ('finite difference gradients', check_fd_gradients),
  ('symbolic gradients', check_symbolic_gradients),
  ('mass conservation', check_mass_conservation),
  ('descent directions', check_directions),
  ('backtracking descent', check_backtracking),
]


def run_all(seed=0):
  """Run every check and return a list of :class:`CheckResult`."""

  results = []
  for name, check in CHECKS:
    try:
      passed, detail = check(seed)
    except Exception as exc:
      passed, detail = False, '%s: %s' % (type(exc).__name__, exc)
    logger.info('%s: %s (%s)', name, 'ok' if passed else 'FAILED', detail)
    results.append(CheckResult(name, bool(passed), detail))
  return results
