"""Test the experiment harness."""

import io
import json

import numpy as np
import pytest

from pysbrd.core import Mode, SolverConfig
from pysbrd.harness import (CSV_FIELDS, TABLES, BenchResult, ExperimentSpec,
                            cell_key, derive_seed, read_csv, read_json,
                            run_experiment, run_task, success_check,
                            table_specs, write_csv, write_json, write_trace)
from pysbrd.objectives import make_benchmark
from pysbrd.solver import run


def small_spec(**kwargs):
  args = dict(function='ackley', dim=2, agents=(5, 8), q_values=(2.0,),
              modes=(Mode.SBRD, Mode.SBGD), runs=4, base_seed=7,
              solver=SolverConfig(nmax=20))
  args.update(kwargs)
  return ExperimentSpec(**args)


######################################################################
# success and seeds

def test_success_check():

  x_star = np.array([1.0, -2.0])
  assert success_check(x_star, x_star)
  assert success_check(x_star + [0.1, 0.0], x_star)
  assert not success_check(x_star + [0.08, 0.08], x_star)
  assert not success_check(x_star + [0.1001, 0.0], x_star)

  with pytest.raises(ValueError):
    success_check([0.0, 0.0, 0.0], x_star)


def test_success_check_boundary_at_minimizers():

  for name in ('ackley', 'rastrigin', 'rosenbrock', 'styblinski'):
    x_star = make_benchmark(name, 2).known_minimizer
    for offset in ([0.1, 0.0], [0.0, -0.1], [0.06, 0.08]):
      assert success_check(x_star + offset, x_star), (name, offset)
    assert not success_check(x_star + [0.0, 0.1001], x_star)


def test_derive_seed():

  key = cell_key('ackley', 14, 25, 2.0, 'sbrd')
  assert key == cell_key('ackley', 14, 25, 2, Mode.SBRD)
  assert key != cell_key('ackley', 14, 25, 2.0, 'sbgd')

  seeds = [ derive_seed(7, key, r) for r in range(1000) ]
  assert len(set(seeds)) == 1000
  assert all(0 <= s < 2**64 for s in seeds)
  assert seeds[3] == derive_seed(7, key, 3)
  assert seeds[0] != derive_seed(8, key, 0)


def test_spec_validation():

  with pytest.raises(ValueError):
    small_spec(runs=0)
  with pytest.raises(ValueError):
    small_spec(success_radius=0.0)
  with pytest.raises(ValueError):
    small_spec(function='sphere')
  with pytest.raises(ValueError):
    small_spec(q_values=(0.5,))
  with pytest.raises(ValueError):
    small_spec(agents=())

  spec = small_spec(modes=('sbgd',))
  assert spec.modes == (Mode.SBGD,)
  assert spec.cells() == [ (5, 2.0, Mode.SBGD), (8, 2.0, Mode.SBGD) ]


######################################################################
# running

def test_run_task_matches_solver():

  config = SolverConfig(n_agents=6, nmax=30)
  outcome = run_task(('styblinski', 2, None, config, 99, 0.1))
  result = run(make_benchmark('styblinski', 2), config, 99)

  assert outcome.error is None
  assert outcome.iterations == result.iterations_used
  assert outcome.evals == result.total_evals
  assert outcome.success == success_check(result.best_position, np.full(2, -2.903534))


def test_run_task_error():

  config = SolverConfig(n_agents=6, nmax=30)
  outcome = run_task(('rosenbrock', 1, None, config, 1, 0.1))
  assert not outcome.success
  assert 'ValueError' in outcome.error


def test_run_experiment_cells():

  spec = small_spec(q_values=(2.0, 8.0), agents=(5,), modes=(Mode.SBRD,))
  result = run_experiment(spec)

  assert [ (c.agents, c.q, c.mode) for c in result.cells ] == [ (5, 2.0, 'sbrd'), (5, 8.0, 'sbrd') ]
  for cell in result.cells:
    assert cell.runs == 4 and cell.errors == 0
    assert 0 <= cell.successes <= 4
    assert cell.rate == cell.successes / 4
    assert cell.mean_iters > 0.0 and cell.mean_fevals > 0.0
    assert cell.base_seed == 7


def test_deterministic_success():

  # one heavy agent on a wide basin always finds the minimizer
  spec = ExperimentSpec(function='styblinski', dim=1, agents=(1,), runs=3,
                        box=(-3.0, -2.0), solver=SolverConfig(nmax=200))
  result = run_experiment(spec)
  assert result.cells[0].rate == 1.0


def test_thread_count_invariance():

  spec = small_spec()
  serial = run_experiment(spec, threads=1)
  parallel = run_experiment(spec, threads=3)
  assert serial == parallel
  assert serial.cells == parallel.cells


def test_single_cell_rerun():

  grid = run_experiment(small_spec())
  for cell in grid.cells:
    alone = run_experiment(small_spec(agents=(cell.agents,), modes=(Mode(cell.mode),)))
    assert alone.cells == [ cell ]


def test_errors_are_counted():

  # the objective overflows at every initial agent
  spec = small_spec(function='rosenbrock', agents=(5,), modes=(Mode.SBRD,), box=(1e200, 2e200))
  result = run_experiment(spec)
  cell = result.cells[0]
  assert cell.errors == cell.runs
  assert cell.successes == 0
  assert cell.mean_iters == 0.0


######################################################################
# files

def test_csv_round_trip():

  result = run_experiment(small_spec())
  f = io.StringIO()
  write_csv(result, f)

  text = f.getvalue()
  assert text.splitlines()[0] == ','.join(CSV_FIELDS)
  assert len(text.splitlines()) == 1 + len(result.cells)

  assert read_csv(io.StringIO(text)) == result


def test_json_round_trip():

  result = run_experiment(small_spec())
  f = io.StringIO()
  write_json(result, f)

  data = json.loads(f.getvalue())
  assert set(data) == { 'metadata', 'rows' }
  assert list(data['rows'][0]) == CSV_FIELDS

  back = read_json(io.StringIO(f.getvalue()))
  assert back == result
  assert back.metadata['tolm_reference'] == 'initial_agents'


def test_read_csv_bad_header():

  with pytest.raises(ValueError):
    read_csv(io.StringIO('function,dim\nackley,2\n'))


def test_write_trace():

  result = run(make_benchmark('rosenbrock', 2), SolverConfig(n_agents=10, nmax=15), 1)

  f = io.StringIO()
  write_trace(result.trace, f, 'json')
  records = [ json.loads(line) for line in f.getvalue().splitlines() ]
  assert len(records) == len(result.trace)
  assert records[-1]['f_min'] == result.trace[-1].f_min
  assert 'moves' in records[0]

  f = io.StringIO()
  write_trace(result.trace, f, 'csv')
  lines = f.getvalue().splitlines()
  assert len(lines) == 1 + len(result.trace)
  header = lines[0].split(',')
  assert 'moves' not in header
  pos = lines[1].split(',')[header.index('minimizer_pos')]
  np.testing.assert_array_equal([ float(v) for v in pos.split() ], result.trace[0].minimizer_pos)

  with pytest.raises(ValueError):
    write_trace(result.trace, io.StringIO(), 'xml')


######################################################################
# published tables

def test_table_specs():

  specs = table_specs('ackley', runs=10, base_seed=3)
  assert [ s.dim for s in specs ] == list(range(12, 21))
  for s in specs:
    assert s.agents == (10, 25, 50, 100)
    assert s.modes == (Mode.SBRD, Mode.SBGD)
    assert s.runs == 10 and s.base_seed == 3

  specs = table_specs('ackley-offcentered')
  assert specs[0].box == (-3.0, -1.0)

  specs = table_specs('q-powers', runs=5)
  assert [ (s.function, s.dim) for s in specs ][:5] == [ ('ackley', 14), ('ackley', 16), ('ackley', 18),
                                                         ('ackley', 20), ('rastrigin', 2) ]
  assert len(specs) == 16
  for s in specs:
    assert s.q_values == (8.0, 4.0)
    assert s.modes == (Mode.SBRD,)
    assert len(s.cells()) == 8

  assert set(TABLES) >= { 'ackley', 'rastrigin', 'rosenbrock', 'styblinski' }
  with pytest.raises(ValueError):
    table_specs('table-9')


def test_bench_result_extend():

  a = BenchResult(run_experiment(small_spec(agents=(5,))).cells)
  b = run_experiment(small_spec(agents=(8,)))
  a.extend(b)
  assert [ c.agents for c in a.cells ] == [ 5, 5, 8, 8 ]


if __name__ == '__main__':
  pytest.main([__file__])
