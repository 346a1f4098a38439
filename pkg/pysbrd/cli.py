"""PySBRD command line interface.

Subcommands:

* ``run``   - a single seeded run; writes its per-iteration trace.
* ``bench`` - a success rate sweep over agents, q and mode (or a
  published table); writes CSV or JSON.
* ``check`` - self checks; exits with status 3 if any fails.

Option values come from built-in defaults, then a ``--config`` file of
``key = value`` lines (keys are option names), then the command line.
The ``SWARM_SEED`` environment variable overrides ``--seed``.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 self-check
failure.

"""

import argparse
import logging
import os
import sys

from dataclasses import dataclass, replace
from typing import Optional

from pysbrd import harness, selfcheck, solver
from pysbrd.core import Mode, SolverConfig
from pysbrd.objectives import benchmark_names, make_benchmark
from pysbrd.version import version

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_CHECK = 0, 1, 2, 3

_defaults = SolverConfig()


@dataclass(frozen=True)
class CliConfig:
  command:      str
  function:     str = 'ackley'
  dim:          int = 2
  agents:       tuple = (_defaults.n_agents,)
  q:            tuple = (_defaults.q_exponent,)
  mode:         tuple = (_defaults.mode,)
  lam:          float = _defaults.lam
  gamma:        float = _defaults.gamma
  h0:           float = _defaults.h0
  tolm:         float = _defaults.tolm
  tolmerge:     float = _defaults.tolmerge
  tolres:       float = _defaults.tolres
  nmax:         int = _defaults.nmax
  max_shrinks:  int = _defaults.max_shrinks
  full_descent: bool = False
  runs:         int = 200
  seed:         int = 0
  box_lo:       Optional[float] = None
  box_hi:       Optional[float] = None
  radius:       float = 0.1
  threads:      int = 1
  table:        Optional[str] = None
  out:          str = '-'
  result:       Optional[str] = None
  format:       str = 'csv'
  progress:     bool = False
  verbosity:    int = 0

  @property
  def box(self):
    if self.box_lo is None:
      return None
    return (self.box_lo, self.box_hi)

  def solver_config(self, agents=None, q=None, mode=None):
    return SolverConfig(n_agents=self.agents[0] if agents is None else agents,
                        q_exponent=self.q[0] if q is None else q,
                        mode=self.mode[0] if mode is None else mode,
                        lam=self.lam, gamma=self.gamma, h0=self.h0,
                        tolm=self.tolm, tolmerge=self.tolmerge,
                        tolres=self.tolres, nmax=self.nmax,
                        max_shrinks=self.max_shrinks,
                        half_descent=not self.full_descent)

  def experiment_specs(self):
    """Experiment grids of a ``bench`` command."""
    base = self.solver_config()
    if self.table is not None:
      specs = harness.table_specs(self.table, self.runs, self.seed, base)
      return [ replace(s, success_radius=self.radius) for s in specs ]
    return [ harness.ExperimentSpec(function=self.function, dim=self.dim,
                                    agents=self.agents, q_values=self.q,
                                    modes=self.mode, runs=self.runs,
                                    base_seed=self.seed, box=self.box,
                                    success_radius=self.radius, solver=base) ]


###############################################################################
# argument parsing

class ArgumentParser(argparse.ArgumentParser):
  """Argument parser exiting with the usage error status."""

  def error(self, message):
    self.print_usage(sys.stderr)
    self.exit(EXIT_USAGE, '%s: error: %s\n' % (self.prog, message))


def _mode(value):
  try:
    return Mode(value.lower())
  except ValueError:
    raise argparse.ArgumentTypeError("invalid mode %r (choose from 'sbrd', 'sbgd')" % value)


# (flag, add_argument keywords); the flag is also the config file key
_COMMON = [
  ('--function', dict(default='ackley', choices=benchmark_names(), help='benchmark objective')),
  ('--dim', dict(type=int, default=2, help='dimension d')),
  ('--lambda', dict(dest='lam', type=float, default=_defaults.lam, help='descent parameter lambda')),
  ('--gamma', dict(type=float, default=_defaults.gamma, help='backtracking shrinkage factor')),
  ('--h0', dict(type=float, default=_defaults.h0, help='initial step size')),
  ('--tolm', dict(type=float, default=_defaults.tolm, help='elimination threshold (relative to 1/N)')),
  ('--tolmerge', dict(type=float, default=_defaults.tolmerge, help='merging distance')),
  ('--tolres', dict(type=float, default=_defaults.tolres, help='minimizer displacement at which to stop')),
  ('--nmax', dict(type=int, default=_defaults.nmax, help='maximum number of iterations')),
  ('--max-shrinks', dict(type=int, default=_defaults.max_shrinks, help='maximum backtracking contractions')),
  ('--full-descent', dict(action='store_true', help='drop the factor 1/2 in the descent guard')),
  ('--seed', dict(type=int, default=0, help='(base) seed; SWARM_SEED overrides it')),
  ('--box-lo', dict(type=float, default=None, help='lower bound of the initialization box (default: per benchmark)')),
  ('--box-hi', dict(type=float, default=None, help='upper bound of the initialization box (default: per benchmark)')),
]

_RUN = [
  ('--agents', dict(type=int, default=_defaults.n_agents, help='number of agents N')),
  ('--q', dict(type=float, default=_defaults.q_exponent, help='mass transfer exponent')),
  ('--mode', dict(type=_mode, default=_defaults.mode.value, help='sbrd or sbgd')),
  ('--out', dict(default='-', help="trace file ('-' for stdout)")),
  ('--format', dict(default='json', choices=['csv', 'json'], help='trace format (JSON lines or CSV)')),
  ('--result', dict(default=None, help='also write a JSON summary of the run to this file')),
]

_BENCH = [
  ('--agents', dict(type=int, nargs='+', default=[_defaults.n_agents], help='numbers of agents N')),
  ('--q', dict(type=float, nargs='+', default=[_defaults.q_exponent], help='mass transfer exponents')),
  ('--mode', dict(type=_mode, nargs='+', default=[_defaults.mode.value], help='sbrd and/or sbgd')),
  ('--runs', dict(type=int, default=200, help='runs per cell')),
  ('--radius', dict(type=float, default=0.1, help='success radius around the known minimizer')),
  ('--threads', dict(type=int, default=1, help='worker processes')),
  ('--table', dict(default=None, choices=sorted(harness.TABLES),
                   help='sweep a published table (overrides function, dim, agents, q, mode and box)')),
  ('--progress', dict(action='store_true', help='show a progress bar')),
  ('--out', dict(default='-', help="results file ('-' for stdout)")),
  ('--format', dict(default='csv', choices=['csv', 'json'], help='results format')),
]

_CHECK = [
  ('--seed', dict(type=int, default=0, help='seed of the checks; SWARM_SEED overrides it')),
]

_COMMANDS = {
  'run':   ('run the solver once and write its trace', _COMMON + _RUN),
  'bench': ('measure success rates over a grid of cells', _COMMON + _BENCH),
  'check': ('run the self checks', _CHECK),
}


def _dest(flag, kwargs):
  return kwargs.get('dest', flag.lstrip('-').replace('-', '_'))


def build_parser():
  parser = ArgumentParser(prog='pysbrd', description='Swarm-based random and gradient descent.')
  parser.add_argument('--version', action='version', version='%(prog)s ' + version())
  parser.add_argument('-v', '--verbose', dest='verbosity', action='store_const', const=1, default=0,
                      help='log debugging output')
  parser.add_argument('-q', '--quiet', dest='verbosity', action='store_const', const=-1,
                      help='log warnings and errors only')

  commands = parser.add_subparsers(dest='command', metavar='COMMAND')
  commands.required = True
  parser.commands = {}
  for name, (description, options) in _COMMANDS.items():
    sub = commands.add_parser(name, help=description, description=description,
                              formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub.add_argument('--config', default=None, help='file of key = value option defaults')
    for flag, kwargs in options:
      sub.add_argument(flag, **kwargs)
    parser.commands[name] = sub

  return parser


###############################################################################
# config files

_TRUE = { '1', 'true', 'yes', 'on' }
_FALSE = { '0', 'false', 'no', 'off' }


def read_config_file(path):
  """Read ``key = value`` lines; ``#`` starts a comment.

  Returns a dict of option name (with dashes) to raw string value.
  """

  values = {}
  with open(path) as f:
    for lineno, line in enumerate(f, 1):
      line = line.split('#', 1)[0].strip()
      if not line:
        continue
      if '=' not in line:
        raise ValueError('%s:%d: expected key = value' % (path, lineno))
      key, value = (s.strip() for s in line.split('=', 1))
      values[key.replace('_', '-').lstrip('-')] = value
  return values


def _convert(flag, kwargs, raw):
  if kwargs.get('action') == 'store_true':
    if raw.lower() in _TRUE:
      return True
    if raw.lower() in _FALSE:
      return False
    raise ValueError('%s: expected a boolean, got %r' % (flag, raw))

  convert = kwargs.get('type', str)
  try:
    if kwargs.get('nargs') == '+':
      return [ convert(v) for v in raw.replace(',', ' ').split() ]
    value = convert(raw)
  except (argparse.ArgumentTypeError, ValueError) as exc:
    raise ValueError('%s: %s' % (flag, exc))

  if 'choices' in kwargs and value not in kwargs['choices']:
    raise ValueError('%s: invalid choice %r' % (flag, value))
  return value


def _config_defaults(command, raw):
  options = dict(_COMMANDS[command][1])
  defaults = {}
  for key, value in raw.items():
    flag = '--' + key
    if flag not in options:
      raise ValueError('unknown config key %r for %s' % (key, command))
    defaults[_dest(flag, options[flag])] = _convert(flag, options[flag], value)
  return defaults


###############################################################################

def parse_args(argv):
  """Parse *argv* (without the program name) into a :class:`CliConfig`.

  Invalid values end the process with status 1 and a one line
  diagnostic.
  """

  parser = build_parser()
  args = parser.parse_args(argv)

  if args.config is not None:
    try:
      raw = read_config_file(args.config)
      defaults = _config_defaults(args.command, raw)
    except OSError as exc:
      parser.error('cannot read config file %s: %s' % (args.config, exc.strerror))
    except ValueError as exc:
      parser.error(str(exc))

    # command line flags still take precedence over the file
    parser.commands[args.command].set_defaults(**defaults)
    args = parser.parse_args(argv)

  fields = { k: v for k, v in vars(args).items() if k != 'config' }
  for name in ('agents', 'q', 'mode'):
    if name in fields:
      value = fields[name]
      fields[name] = tuple(value) if isinstance(value, list) else (value,)
  if 'mode' in fields:
    fields['mode'] = tuple(Mode(m) for m in fields['mode'])

  if 'SWARM_SEED' in os.environ:
    try:
      fields['seed'] = int(os.environ['SWARM_SEED'])
    except ValueError:
      parser.error('SWARM_SEED must be an integer, got %r' % os.environ['SWARM_SEED'])

  config = CliConfig(**fields)

  try:
    _validate(config)
  except ValueError as exc:
    parser.error(str(exc))

  return config


def _validate(config):
  if config.command == 'check':
    return
  if (config.box_lo is None) != (config.box_hi is None):
    raise ValueError('--box-lo and --box-hi must be given together')

  if config.command == 'run':
    config.solver_config()
    make_benchmark(config.function, config.dim, config.box)
  else:
    if config.threads < 1:
      raise ValueError('threads must be >= 1, got %d' % config.threads)
    config.experiment_specs()


###############################################################################
# commands

def _open_out(path):
  if path == '-':
    return sys.stdout, False
  return open(path, 'w', newline=''), True


def _run(config):
  problem = make_benchmark(config.function, config.dim, config.box)
  result = solver.run(problem, config.solver_config(), config.seed)

  logger.info('%s %s d=%d N=%d seed=%d: %s after %d iterations, best F = %.10g at %s',
              result.metadata['mode'], config.function, config.dim, config.agents[0],
              config.seed, result.termination.value, result.iterations_used,
              result.best_value, result.best_position)

  f, close = _open_out(config.out)
  try:
    harness.write_trace(result.trace, f, config.format)
  finally:
    if close:
      f.close()

  if config.result is not None:
    with open(config.result, 'w') as f:
      harness.write_result(result, f)


def _bench(config):
  result = harness.BenchResult()
  for spec in config.experiment_specs():
    result.extend(harness.run_experiment(spec, config.threads, config.progress))

  f, close = _open_out(config.out)
  try:
    if config.format == 'json':
      harness.write_json(result, f)
    else:
      harness.write_csv(result, f)
  finally:
    if close:
      f.close()


def _check(config):
  results = selfcheck.run_all(config.seed)
  for r in results:
    print('%-30s %s  %s' % (r.name, 'ok' if r.passed else 'FAILED', r.detail))
  return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def configure_logging(verbosity):
  level = { -1: logging.WARNING, 0: logging.INFO, 1: logging.DEBUG }[verbosity]
  logging.basicConfig(level=level, format='%(levelname)s:%(name)s: %(message)s',
                      stream=sys.stderr)


def main(config):
  """Execute *config* and return the exit status."""

  configure_logging(config.verbosity)

  try:
    if config.command == 'check':
      return _check(config)
    if config.command == 'run':
      _run(config)
    else:
      _bench(config)
  except OSError as exc:
    logger.error('cannot write %s: %s', exc.filename or config.out, exc.strerror or exc)
    return EXIT_RUNTIME
  except (ArithmeticError, ValueError) as exc:
    logger.error('%s failed: %s', config.command, exc)
    return EXIT_RUNTIME

  return EXIT_OK


def entry(argv=None):
  """Console script entry point."""
  if argv is None:
    argv = sys.argv[1:]
  sys.exit(main(parse_args(argv)))
