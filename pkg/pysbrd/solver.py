"""PySBRD swarm solver.

One iteration of the swarm consists of

1. merging agents that are closer than *tolmerge*,
2. transferring mass to the minimizer and eliminating light agents,
3. moving every active agent along its (random) descent direction with
   a mass weighted backtracking step.

Agents are visited in index order, so a single seeded
:class:`~pysbrd.core.RandomSource` reproduces a run exactly.

"""

import enum
import logging

from dataclasses import dataclass, field
from typing import List

import numpy as np

from pysbrd.core import Mode, RandomSource, init_swarm
from pysbrd.direction import random_descent_direction
from pysbrd.linesearch import backtrack
from pysbrd.mass import (apply_transfer, eliminate_light, merge_close,
                         relative_masses, transfer_fractions)

logger = logging.getLogger(__name__)


class Termination(str, enum.Enum):
  RESIDUAL = 'residual'
  MAX_ITER = 'max_iter'
  SINGLE_STATIONARY_AGENT = 'single_stationary_agent'


@dataclass
class AgentMove:
  """One accepted agent update: ``F(new) <= F(old) - c lambda m h |grad|^2``."""

  index:   int
  f_old:   float
  f_new:   float
  h:       float
  m_rel:   float
  grad_sq: float
  angle:   float


@dataclass
class IterationRecord:
  """Diagnostics of iteration *n*.

  ``f_min`` and ``minimizer_pos`` describe the swarm minimizer after the
  update of iteration *n*; ``heaviest_prev_pos`` is the position, before
  the update, of the agent that is heaviest after the mass transfer.
  """

  n:                   int
  n_active:            int
  f_min:               float
  f_max:               float
  minimizer_pos:       np.ndarray
  heaviest_mass:       float
  heaviest_prev_pos:   np.ndarray
  heaviest_prev_value: float
  total_evals:         int
  total_grad_evals:    int
  mean_step:           float
  mean_angle:          float
  residual:            float
  n_stationary:        int
  n_rejected:          int
  moves:               List[AgentMove] = field(default_factory=list)

  def to_dict(self, moves=True):
    out = {
      'n': self.n,
      'n_active': self.n_active,
      'f_min': self.f_min,
      'f_max': self.f_max,
      'minimizer_pos': [ float(v) for v in self.minimizer_pos ],
      'heaviest_mass': self.heaviest_mass,
      'heaviest_prev_pos': [ float(v) for v in self.heaviest_prev_pos ],
      'heaviest_prev_value': self.heaviest_prev_value,
      'total_evals': self.total_evals,
      'total_grad_evals': self.total_grad_evals,
      'mean_step': self.mean_step,
      'mean_angle': self.mean_angle,
      'residual': self.residual,
      'n_stationary': self.n_stationary,
      'n_rejected': self.n_rejected,
    }
    if moves:
      out['moves'] = [ vars(m).copy() for m in self.moves ]
    return out


@dataclass
class RunResult:
  best_position:    np.ndarray
  best_value:       float
  iterations_used:  int
  termination:      Termination
  trace:            List[IterationRecord]
  seed:             int
  total_evals:      int = 0
  total_grad_evals: int = 0
  metadata:         dict = field(default_factory=dict)

  def to_dict(self):
    """Summary of the run without its trace."""
    return {
      'best_position': [ float(v) for v in self.best_position ],
      'best_value': float(self.best_value),
      'iterations_used': int(self.iterations_used),
      'termination': self.termination.value,
      'seed': int(self.seed),
      'total_evals': self.total_evals,
      'total_grad_evals': self.total_grad_evals,
      'metadata': self.metadata,
    }


###############################################################################

def step(swarm, problem, config, rng, evals=0, grad_evals=0):
  """Advance *swarm* by one iteration.

  :param swarm:      :class:`~pysbrd.core.SwarmState`
  :param problem:    :class:`~pysbrd.core.ObjectiveProblem`
  :param config:     :class:`~pysbrd.core.SolverConfig`
  :param rng:        :class:`~pysbrd.core.RandomSource`
  :param evals:      objective evaluations so far
  :param grad_evals: gradient evaluations so far

  Returns the new swarm and an :class:`IterationRecord`.  The input
  swarm is not modified.
  """

  n = swarm.iteration

  swarm = merge_close(swarm, config.tolmerge)
  i_n = swarm.minimizer_index
  idx = swarm.active_indices()
  f_max = float(swarm.f_values[idx].max())

  eta = transfer_fractions(swarm.f_values[idx], config.q_exponent, config.epsilon)
  swarm = apply_transfer(swarm, eta)
  swarm = eliminate_light(swarm, config.tolm, swarm.n_initial)
  swarm.refresh_indices()

  j = swarm.heaviest_index
  heaviest_prev_pos = swarm.positions[j].copy()
  heaviest_prev_value = float(swarm.f_values[j])
  heaviest_mass = float(swarm.masses[j])

  m_rel = relative_masses(swarm)
  x_min_old = swarm.positions[i_n].copy()

  moves, stationary, rejected = [], 0, 0
  for i in swarm.active_indices():
    x = swarm.positions[i]
    g = np.asarray(problem.gradient(x), np.float64)
    grad_evals += 1
    if not np.all(np.isfinite(g)):
      raise FloatingPointError('non-finite gradient at agent %d' % i)

    grad_sq = float(g @ g)
    if np.sqrt(grad_sq) <= config.grad_floor:
      stationary += 1
      continue

    direction = random_descent_direction(g, m_rel[i], config.mode, rng)
    ls = backtrack(problem, x, direction.p, grad_sq, config.lam*m_rel[i],
                   config.gamma, config.h0, config.max_shrinks,
                   swarm.f_values[i], half=config.half_descent)
    evals += ls.evals
    if not ls.accepted:
      rejected += 1
      continue

    moves.append(AgentMove(int(i), float(swarm.f_values[i]), ls.f_new, ls.h,
                           float(m_rel[i]), grad_sq, direction.angle))
    swarm.positions[i] = x - ls.h * direction.p
    swarm.f_values[i] = ls.f_new

  if not np.all(np.isfinite(swarm.f_values[swarm.active])):
    raise FloatingPointError('non-finite objective value after iteration %d' % n)

  swarm.iteration = n + 1
  swarm.refresh_indices()
  k = swarm.minimizer_index

  record = IterationRecord(
    n=n,
    n_active=swarm.n_active,
    f_min=float(swarm.f_values[k]),
    f_max=f_max,
    minimizer_pos=swarm.positions[k].copy(),
    heaviest_mass=heaviest_mass,
    heaviest_prev_pos=heaviest_prev_pos,
    heaviest_prev_value=heaviest_prev_value,
    total_evals=evals,
    total_grad_evals=grad_evals,
    mean_step=float(np.mean([ m.h for m in moves ])) if moves else 0.0,
    mean_angle=float(np.mean([ m.angle for m in moves ])) if moves else 0.0,
    residual=float(np.linalg.norm(swarm.positions[i_n] - x_min_old)),
    n_stationary=stationary,
    n_rejected=rejected,
    moves=moves)

  return swarm, record


def run_metadata(problem, config):
  """Decisions that make runs comparable, recorded with every result."""
  return {
    'mode': Mode(config.mode).value,
    'merge_before_transfer': True,
    'tolm_reference': 'initial_agents',
    'half_descent': config.half_descent,
    'direction_fallback': 'gradient' if problem.dimension == 1 else None,
  }


def run(problem, config, seed, record_trace=True):
  """Run the swarm solver from a seeded random initialization.

  :param problem:      :class:`~pysbrd.core.ObjectiveProblem`
  :param config:       :class:`~pysbrd.core.SolverConfig`
  :param seed:         seed of the run's :class:`~pysbrd.core.RandomSource`
  :param record_trace: keep one :class:`IterationRecord` per iteration

  Iterations stop when a single stationary agent remains, when the
  minimizer of the iteration moved by at most *tolres*, or after
  *nmax* iterations.  The best active agent is reported.
  """

  rng = RandomSource(seed)
  swarm = init_swarm(problem, config, rng)
  evals, grad_evals = config.n_agents, 0

  trace = []
  termination = Termination.MAX_ITER

  for _ in range(config.nmax):
    swarm, record = step(swarm, problem, config, rng, evals, grad_evals)
    evals, grad_evals = record.total_evals, record.total_grad_evals
    if record_trace:
      trace.append(record)

    logger.debug('n=%d active=%d f_min=%.10g residual=%.3e',
                 record.n, record.n_active, record.f_min, record.residual)

    if record.n_active == 1 and record.n_stationary == 1:
      termination = Termination.SINGLE_STATIONARY_AGENT
      break
    if record.residual <= config.tolres:
      termination = Termination.RESIDUAL
      break

  k = swarm.minimizer_index
  result = RunResult(best_position=swarm.positions[k].copy(),
                     best_value=float(swarm.f_values[k]),
                     iterations_used=swarm.iteration,
                     termination=termination,
                     trace=trace,
                     seed=seed,
                     total_evals=evals,
                     total_grad_evals=grad_evals,
                     metadata=run_metadata(problem, config))

  logger.debug('%s run (seed %s): %s after %d iterations, best F = %.10g',
              result.metadata['mode'], seed, termination.value,
              result.iterations_used, result.best_value)
  return result
