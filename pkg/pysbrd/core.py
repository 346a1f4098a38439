"""PySBRD core types: agents, swarms, problems, configuration and randomness.

All other modules share the types defined here.  A swarm keeps one row
per *initial* agent; agents that are eliminated or merged away are
flagged inactive instead of being removed, so an agent index is a
stable identity for the whole run.

"""

import enum

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


###############################################################################
# modes and configuration

class Mode(str, enum.Enum):
  """Descent direction protocol.

  * ``SBRD`` - random descent directions in a mass dependent spherical cap.
  * ``SBGD`` - plain gradient directions.
  """

  SBRD = 'sbrd'
  SBGD = 'sbgd'


@dataclass(frozen=True)
class SolverConfig:
  """Scalar knobs of the swarm solver.

  :param n_agents:    number of agents *N*
  :param q_exponent:  mass transfer exponent *q* (>= 1)
  :param lam:         descent parameter lambda in (0, 1)
  :param gamma:       backtracking shrinkage factor in (0, 1)
  :param h0:          initial (largest) step size
  :param tolm:        elimination threshold, relative to 1/N
  :param tolmerge:    merging distance
  :param tolres:      termination threshold on the minimizer displacement
  :param nmax:        maximum number of iterations
  :param epsilon:     guard added to Fmax - Fmin
  :param grad_floor:  agents with a smaller gradient norm do not move
  :param max_shrinks: cap on the number of backtracking contractions
  :param mode:        :class:`Mode`
  :param half_descent: use the halved descent guard (default ``True``)

  The configuration is validated on construction; an invalid value
  raises ``ValueError``.
  """

  n_agents:     int = 10
  q_exponent:   float = 2.0
  lam:          float = 0.2
  gamma:        float = 0.9
  h0:           float = 1.0
  tolm:         float = 1.0e-4
  tolmerge:     float = 1.0e-3
  tolres:       float = 1.0e-4
  nmax:         int = 200
  epsilon:      float = 1.0e-12
  grad_floor:   float = 1.0e-12
  max_shrinks:  int = 100
  mode:         Mode = Mode.SBRD
  half_descent: bool = True

  def __post_init__(self):
    object.__setattr__(self, 'mode', Mode(self.mode))

    if int(self.n_agents) != self.n_agents or self.n_agents < 1:
      raise ValueError('n_agents must be a positive integer, got %r' % (self.n_agents,))
    if not self.q_exponent >= 1.0:
      raise ValueError('q_exponent must be >= 1, got %r' % (self.q_exponent,))
    if not 0.0 < self.lam < 1.0:
      raise ValueError('lambda must lie in (0, 1), got %r' % (self.lam,))
    if not 0.0 < self.gamma < 1.0:
      raise ValueError('gamma must lie in (0, 1), got %r' % (self.gamma,))
    for name in ('h0', 'tolm', 'tolmerge', 'tolres', 'epsilon'):
      value = getattr(self, name)
      if not (np.isfinite(value) and value > 0.0):
        raise ValueError('%s must be a positive real, got %r' % (name, value))
    if not self.grad_floor >= 0.0:
      raise ValueError('grad_floor must be nonnegative, got %r' % (self.grad_floor,))
    if int(self.nmax) != self.nmax or self.nmax < 0:
      raise ValueError('nmax must be a nonnegative integer, got %r' % (self.nmax,))
    if int(self.max_shrinks) != self.max_shrinks or self.max_shrinks < 1:
      raise ValueError('max_shrinks must be a positive integer, got %r' % (self.max_shrinks,))


###############################################################################
# problems

@dataclass
class ObjectiveProblem:
  """An objective *F* with its gradient and an initialization box.

  :param dimension:       search space dimension *d*
  :param evaluate:        callable returning F(x)
  :param gradient:        callable returning the gradient of F at x
  :param lower:           lower corner of the initialization box
  :param upper:           upper corner of the initialization box
  :param known_minimizer: global minimizer (optional, used to score runs)
  :param name:            short identifier

  The box is only used to draw initial positions; agents are free to
  leave it.
  """

  dimension:       int
  evaluate:        Callable
  gradient:        Callable
  lower:           np.ndarray
  upper:           np.ndarray
  known_minimizer: Optional[np.ndarray] = None
  name:            str = 'objective'

  def __post_init__(self):
    if self.dimension < 1:
      raise ValueError('dimension must be >= 1, got %r' % (self.dimension,))

    d = self.dimension
    self.lower = np.broadcast_to(np.asarray(self.lower, np.float64), (d,)).copy()
    self.upper = np.broadcast_to(np.asarray(self.upper, np.float64), (d,)).copy()

    if not np.all(self.lower < self.upper):
      raise ValueError('degenerate box: lower must be < upper in every coordinate')
    if self.known_minimizer is not None:
      self.known_minimizer = np.asarray(self.known_minimizer, np.float64)
      if self.known_minimizer.shape != (d,):
        raise ValueError('known minimizer must have length %d' % d)

  @property
  def init_box(self):
    return self.lower, self.upper


###############################################################################
# randomness

class RandomSource(object):
  """Seeded source of uniform and standard normal variates.

  Wraps a PCG64 ``numpy.random.Generator``; equal seeds give equal
  streams.
  """

  def __init__(self, seed=None):
    self.seed = seed
    self._rng = np.random.default_rng(seed)

  def uniform(self, low=0.0, high=1.0, size=None):
    """Uniform variates on ``[low, high)``."""
    return self._rng.uniform(low, high, size)

  def normal(self, size=None):
    """Standard normal variates."""
    return self._rng.standard_normal(size)

  @property
  def state(self):
    """Snapshot of the generator state."""
    return self._rng.bit_generator.state


###############################################################################
# agents and swarms

@dataclass(frozen=True)
class Agent:
  """Read-only view of one agent of a swarm."""

  index:    int
  position: np.ndarray
  mass:     float
  active:   bool


@dataclass
class SwarmState:
  """Agents at iteration *n*.

  :param positions:       (N0, d) array of agent positions
  :param masses:          (N0,) array of masses (zero for inactive agents)
  :param active:          (N0,) boolean mask
  :param f_values:        (N0,) cached objective values
  :param iteration:       iteration counter *n*
  :param minimizer_index: index of the active agent with the smallest F
  :param heaviest_index:  index of the heaviest active agent
  """

  positions:       np.ndarray
  masses:          np.ndarray
  active:          np.ndarray
  f_values:        np.ndarray
  iteration:       int = 0
  minimizer_index: int = 0
  heaviest_index:  int = 0

  @property
  def n_initial(self):
    return self.positions.shape[0]

  @property
  def dimension(self):
    return self.positions.shape[1]

  @property
  def n_active(self):
    return int(np.count_nonzero(self.active))

  def active_indices(self):
    """Indices of the active agents, in increasing order."""
    return np.flatnonzero(self.active)

  def agent(self, i):
    return Agent(int(i), self.positions[i].copy(), float(self.masses[i]), bool(self.active[i]))

  @property
  def agents(self):
    return [ self.agent(i) for i in range(self.n_initial) ]

  def total_mass(self):
    return float(self.masses[self.active].sum())

  def f_min(self):
    return float(self.f_values[self.minimizer_index])

  def refresh_indices(self):
    """Recompute the minimizer and heaviest indices over active agents.

    Ties resolve to the lowest index.
    """
    idx = self.active_indices()
    if idx.size == 0:
      raise ValueError('swarm has no active agents')
    self.minimizer_index = int(idx[np.argmin(self.f_values[idx])])
    self.heaviest_index = int(idx[np.argmax(self.masses[idx])])
    return self

  def copy(self):
    return SwarmState(self.positions.copy(), self.masses.copy(),
                      self.active.copy(), self.f_values.copy(),
                      self.iteration, self.minimizer_index, self.heaviest_index)


def make_swarm(positions, masses, f_values, active=None, iteration=0):
  """Build a swarm from explicit arrays.

  :param positions: (N, d) positions (a 1d array is read as N points in 1d)
  :param masses:    (N,) masses
  :param f_values:  (N,) objective values at *positions*
  :param active:    (N,) mask (default: all active)
  """

  positions = np.array(positions, np.float64)
  if positions.ndim == 1:
    positions = positions[:, np.newaxis]
  masses = np.array(masses, np.float64)
  f_values = np.array(f_values, np.float64)
  n = positions.shape[0]

  if active is None:
    active = np.ones(n, bool)
  active = np.array(active, bool)

  if masses.shape != (n,) or f_values.shape != (n,) or active.shape != (n,):
    raise ValueError('positions, masses, f_values and active must describe the same agents')
  if not np.all(np.isfinite(positions)):
    raise ValueError('agent positions must be finite')
  if np.any(masses[active] <= 0.0):
    raise ValueError('active agents must have positive mass')

  masses[~active] = 0.0
  swarm = SwarmState(positions, masses, active, f_values, iteration)
  return swarm.refresh_indices()


def init_swarm(problem, config, rng):
  """Draw N agents uniformly in the problem's box, each with mass 1/N.

  :param problem: :class:`ObjectiveProblem`
  :param config:  :class:`SolverConfig`
  :param rng:     :class:`RandomSource`
  """

  d, n = problem.dimension, config.n_agents
  if d < 1:
    raise ValueError('dimension must be >= 1')

  lower, upper = problem.init_box
  if not np.all(lower < upper):
    raise ValueError('degenerate box: lower must be < upper in every coordinate')

  positions = rng.uniform(lower, upper, size=(n, d))
  f_values = np.array([ problem.evaluate(x) for x in positions ], np.float64)
  if not np.all(np.isfinite(f_values)):
    raise FloatingPointError('objective is not finite at an initial agent')

  masses = np.full(n, 1.0 / n)
  swarm = SwarmState(positions, masses, np.ones(n, bool), f_values, 0)
  return swarm.refresh_indices()
