"""The PySBRD module."""

from pysbrd import core
from pysbrd import objectives
from pysbrd import mass
from pysbrd import direction
from pysbrd import linesearch
from pysbrd import solver
from pysbrd import harness
from pysbrd import symbolic
from pysbrd import version

from pysbrd.core import Mode, ObjectiveProblem, RandomSource, SolverConfig
from pysbrd.objectives import make_benchmark
from pysbrd.solver import Termination, run
