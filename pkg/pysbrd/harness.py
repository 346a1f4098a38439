"""PySBRD experiment harness.

Runs *k* independent seeded solver runs for every cell of a
(agents, q, mode) grid and aggregates success rates.  Each run draws
its seed from the base seed and the cell and run identifiers, so the
results do not depend on how runs are scheduled over worker
processes.

"""

import csv
import hashlib
import itertools
import json
import logging
import multiprocessing
import time

from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from tqdm import tqdm

from pysbrd.core import Mode, SolverConfig
from pysbrd.objectives import make_benchmark
from pysbrd.solver import run

logger = logging.getLogger(__name__)

CSV_FIELDS = [ 'function', 'dim', 'agents', 'q', 'mode', 'runs', 'successes',
               'rate', 'mean_iters', 'mean_fevals', 'mean_gevals', 'errors',
               'base_seed' ]

MASK64 = (1 << 64) - 1


###############################################################################
# seeds

def splitmix64(x):
  """One SplitMix64 output for the state *x* (64 bit integers)."""
  z = (x + 0x9E3779B97F4A7C15) & MASK64
  z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
  z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
  return z ^ (z >> 31)


def cell_key(function, dim, agents, q, mode):
  """64 bit identifier of a cell (blake2b of ``function:dim:agents:q:mode``)."""
  text = '%s:%d:%d:%r:%s' % (function, dim, agents, float(q), Mode(mode).value)
  return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), 'little')


def derive_seed(base_seed, key, run_id):
  """Seed of run *run_id* in the cell *key*.

  ``splitmix64(splitmix64(splitmix64(base_seed) ^ key) ^ run_id)``
  """
  x = splitmix64(base_seed & MASK64)
  x = splitmix64(x ^ (key & MASK64))
  return splitmix64(x ^ (run_id & MASK64))


###############################################################################
# experiment description

@dataclass(frozen=True)
class ExperimentSpec:
  """A grid of cells for one benchmark in one dimension.

  :param function:       benchmark identifier
  :param dim:            dimension
  :param agents:         agent counts N
  :param q_values:       mass transfer exponents q
  :param modes:          :class:`~pysbrd.core.Mode` values
  :param runs:           runs per cell (k)
  :param base_seed:      base seed
  :param box:            ``(lower, upper)`` override of the initialization box
  :param success_radius: a run succeeds if its best agent lies this close to
                         the known minimizer
  :param solver:         remaining solver knobs (N, q and mode are set per cell)
  """

  function:       str
  dim:            int
  agents:         tuple = (10,)
  q_values:       tuple = (2.0,)
  modes:          tuple = (Mode.SBRD,)
  runs:           int = 200
  base_seed:      int = 0
  box:            Optional[tuple] = None
  success_radius: float = 0.1
  solver:         SolverConfig = SolverConfig()

  def __post_init__(self):
    object.__setattr__(self, 'agents', tuple(int(n) for n in self.agents))
    object.__setattr__(self, 'q_values', tuple(float(q) for q in self.q_values))
    object.__setattr__(self, 'modes', tuple(Mode(m) for m in self.modes))

    if self.runs < 1:
      raise ValueError('runs must be >= 1, got %r' % (self.runs,))
    if not self.success_radius > 0.0:
      raise ValueError('success radius must be positive, got %r' % (self.success_radius,))
    if not (self.agents and self.q_values and self.modes):
      raise ValueError('agents, q values and modes must be nonempty')

    # fail early on a bad benchmark, dimension, box or knob
    make_benchmark(self.function, self.dim, self.box)
    for n, q, mode in self.cells():
      self.config(n, q, mode)

  def cells(self):
    """Cells ``(agents, q, mode)`` in output order."""
    return list(itertools.product(self.agents, self.q_values, self.modes))

  def config(self, agents, q, mode):
    return replace(self.solver, n_agents=agents, q_exponent=q, mode=mode)


@dataclass
class CellResult:
  function:    str
  dim:         int
  agents:      int
  q:           float
  mode:        str
  runs:        int
  successes:   int
  rate:        float
  mean_iters:  float
  mean_fevals: float
  mean_gevals: float
  errors:      int
  base_seed:   int
  wall_time:   float = field(default=0.0, compare=False)

  def to_row(self):
    return { name: getattr(self, name) for name in CSV_FIELDS }

  @classmethod
  def from_row(cls, row):
    return cls(function=str(row['function']),
               dim=int(row['dim']),
               agents=int(row['agents']),
               q=float(row['q']),
               mode=str(row['mode']),
               runs=int(row['runs']),
               successes=int(row['successes']),
               rate=float(row['rate']),
               mean_iters=float(row['mean_iters']),
               mean_fevals=float(row['mean_fevals']),
               mean_gevals=float(row['mean_gevals']),
               errors=int(row['errors']),
               base_seed=int(row['base_seed']))


@dataclass
class BenchResult:
  cells:     List[CellResult] = field(default_factory=list)
  metadata:  dict = field(default_factory=dict, compare=False)
  wall_time: float = field(default=0.0, compare=False)

  def extend(self, other):
    self.cells.extend(other.cells)
    self.wall_time += other.wall_time
    if not self.metadata:
      self.metadata = dict(other.metadata)
    return self


@dataclass
class RunOutcome:
  success:    bool
  iterations: int = 0
  evals:      int = 0
  grad_evals: int = 0
  error:      Optional[str] = None
  elapsed:    float = 0.0


###############################################################################
# running

def success_check(x_sol, x_star, radius=0.1):
  """``True`` if *x_sol* lies within Euclidean distance *radius* of *x_star*."""

  x_sol = np.asarray(x_sol, np.float64)
  x_star = np.asarray(x_star, np.float64)
  if x_sol.shape != x_star.shape:
    raise ValueError('dimension mismatch: %s vs %s' % (x_sol.shape, x_star.shape))
  # boundary inclusive up to rounding in the difference
  return bool(np.linalg.norm(x_sol - x_star) <= radius*(1.0 + 1e-12))


def run_task(task):
  """Run one seeded solve; errors are captured in the outcome."""

  function, dim, box, config, seed, radius = task
  start = time.perf_counter()
  try:
    problem = make_benchmark(function, dim, box)
    result = run(problem, config, seed, record_trace=False)
    ok = success_check(result.best_position, problem.known_minimizer, radius)
    return RunOutcome(ok, result.iterations_used, result.total_evals,
                      result.total_grad_evals, None, time.perf_counter() - start)
  except Exception as exc:
    logger.warning('run with seed %d failed: %s', seed, exc)
    return RunOutcome(False, error='%s: %s' % (type(exc).__name__, exc),
                      elapsed=time.perf_counter() - start)


def _tasks(spec):
  tasks = []
  for n, q, mode in spec.cells():
    key = cell_key(spec.function, spec.dim, n, q, mode)
    config = spec.config(n, q, mode)
    for r in range(spec.runs):
      tasks.append((spec.function, spec.dim, spec.box, config,
                    derive_seed(spec.base_seed, key, r), spec.success_radius))
  return tasks


def _aggregate(spec, n, q, mode, outcomes):
  done = [ o for o in outcomes if o.error is None ]
  successes = sum(o.success for o in done)

  def mean(values):
    return float(np.mean(values)) if values else 0.0

  return CellResult(function=spec.function, dim=spec.dim, agents=n, q=q,
                    mode=Mode(mode).value, runs=spec.runs, successes=successes,
                    rate=successes / spec.runs,
                    mean_iters=mean([ o.iterations for o in done ]),
                    mean_fevals=mean([ o.evals for o in done ]),
                    mean_gevals=mean([ o.grad_evals for o in done ]),
                    errors=len(outcomes) - len(done),
                    base_seed=spec.base_seed,
                    wall_time=sum(o.elapsed for o in outcomes))


def experiment_metadata(spec):
  s = spec.solver
  return {
    'lambda': s.lam, 'gamma': s.gamma, 'h0': s.h0, 'tolm': s.tolm,
    'tolmerge': s.tolmerge, 'tolres': s.tolres, 'nmax': s.nmax,
    'epsilon': s.epsilon, 'grad_floor': s.grad_floor,
    'max_shrinks': s.max_shrinks, 'half_descent': s.half_descent,
    'success_radius': spec.success_radius,
    'box': None if spec.box is None else [ np.asarray(b, np.float64).tolist() for b in spec.box ],
    'merge_before_transfer': True,
    'tolm_reference': 'initial_agents',
    'seed_derivation': 'splitmix64(splitmix64(splitmix64(base) ^ blake2b64(cell)) ^ run)',
  }


def run_experiment(spec, threads=1, progress=False):
  """Run every cell of *spec*.

  :param spec:     :class:`ExperimentSpec`
  :param threads:  number of worker processes (1 runs in process)
  :param progress: show a progress bar

  Runs that raise are counted in the ``errors`` column and as failures.
  The result does not depend on *threads*.
  """

  start = time.perf_counter()
  tasks = _tasks(spec)
  bar = dict(total=len(tasks), disable=not progress, leave=False,
             desc='%s d=%d' % (spec.function, spec.dim))

  if threads <= 1:
    outcomes = [ run_task(t) for t in tqdm(tasks, **bar) ]
  else:
    chunksize = max(1, len(tasks) // (8*threads))
    with multiprocessing.Pool(processes=threads) as pool:
      outcomes = list(tqdm(pool.imap(run_task, tasks, chunksize), **bar))

  result = BenchResult(metadata=experiment_metadata(spec))
  for c, (n, q, mode) in enumerate(spec.cells()):
    cell = _aggregate(spec, n, q, mode, outcomes[c*spec.runs:(c+1)*spec.runs])
    logger.info('%s d=%d N=%d q=%g %s: %d/%d (%.1f%%), %d errors, %.1fs',
                cell.function, cell.dim, cell.agents, cell.q, cell.mode,
                cell.successes, cell.runs, 100*cell.rate, cell.errors, cell.wall_time)
    result.cells.append(cell)

  result.wall_time = time.perf_counter() - start
  return result


###############################################################################
# published tables

AGENTS = (10, 25, 50, 100)
BOTH = (Mode.SBRD, Mode.SBGD)

# name: [ (function, dimensions, q values, modes, box), ... ]
TABLES = {
  'ackley':             [ ('ackley', range(12, 21), (2.0,), BOTH, None) ],
  'rastrigin':          [ ('rastrigin', range(2, 7), (2.0,), BOTH, None) ],
  'rosenbrock':         [ ('rosenbrock', range(2, 7), (2.0,), BOTH, None) ],
  'styblinski':         [ ('styblinski', range(2, 13, 2), (2.0,), BOTH, None) ],
  'ackley-offcentered': [ ('ackley', range(12, 19, 2), (2.0,), BOTH, (-3.0, -1.0)) ],
  'ackley-q4':          [ ('ackley', range(12, 21, 2), (4.0,), BOTH, None) ],
  'ackley-q8':          [ ('ackley', range(12, 21, 2), (8.0,), BOTH, None) ],
  'q-powers':           [ ('ackley', range(14, 21, 2), (8.0, 4.0), (Mode.SBRD,), None),
                          ('rastrigin', range(2, 6), (8.0, 4.0), (Mode.SBRD,), None),
                          ('rosenbrock', range(3, 7), (8.0, 4.0), (Mode.SBRD,), None),
                          ('styblinski', range(6, 13, 2), (8.0, 4.0), (Mode.SBRD,), None) ],
}


def table_specs(name, runs=200, base_seed=0, solver=SolverConfig()):
  """Expand the published table *name* into one spec per benchmark and
  dimension, each over the agent counts :data:`AGENTS`."""

  try:
    blocks = TABLES[name]
  except KeyError:
    raise ValueError('unknown table %r, must be one of: %s' % (name, ', '.join(TABLES)))

  return [ ExperimentSpec(function=function, dim=d, agents=AGENTS, q_values=q_values,
                          modes=modes, runs=runs, base_seed=base_seed, box=box,
                          solver=solver)
           for function, dims, q_values, modes, box in blocks
           for d in dims ]


###############################################################################
# files

def write_csv(result, f):
  writer = csv.DictWriter(f, fieldnames=CSV_FIELDS, lineterminator='\n')
  writer.writeheader()
  for cell in result.cells:
    writer.writerow(cell.to_row())


def read_csv(f):
  reader = csv.DictReader(f)
  if reader.fieldnames != CSV_FIELDS:
    raise ValueError('unexpected CSV header: %s' % ','.join(reader.fieldnames or []))
  return BenchResult([ CellResult.from_row(row) for row in reader ])


def write_json(result, f):
  json.dump({ 'metadata': result.metadata,
              'rows': [ cell.to_row() for cell in result.cells ] }, f, indent=2)
  f.write('\n')


def read_json(f):
  data = json.load(f)
  return BenchResult([ CellResult.from_row(row) for row in data['rows'] ],
                     metadata=data.get('metadata', {}))


def write_trace(trace, f, fmt='json'):
  """Write one record per iteration: JSON lines, or CSV with vectors as
  space separated numbers (per-agent moves are only kept in JSON)."""

  if fmt == 'json':
    for record in trace:
      f.write(json.dumps(record.to_dict()) + '\n')
    return

  if fmt != 'csv':
    raise ValueError("trace format must be 'json' or 'csv', got %r" % (fmt,))

  writer = None
  for record in trace:
    row = record.to_dict(moves=False)
    for name in ('minimizer_pos', 'heaviest_prev_pos'):
      row[name] = ' '.join(repr(v) for v in row[name])
    if writer is None:
      writer = csv.DictWriter(f, fieldnames=list(row), lineterminator='\n')
      writer.writeheader()
    writer.writerow(row)


def write_result(result, f):
  """Write the summary of a single :class:`~pysbrd.solver.RunResult` as JSON."""

  json.dump(result.to_dict(), f, indent=2)
  f.write('\n')
