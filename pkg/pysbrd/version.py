"""PySBRD version information.

   To obtain the version of PySBRD::

     >>> import pysbrd.version
     >>> pysbrd.version.version()
     >>> pysbrd.version.git_version()

   The version files are written by ``setup.py``; a source checkout
   that was never built reports ``'unknown'``.

   """

import importlib


def _version(name):
  try:
    module = importlib.import_module('pysbrd.' + name)
  except ImportError:
    return 'unknown'
  return module.version


def version():
  """Return current version."""
  return _version('__version__')


def git_version():
  """Return current *git* version (if available)."""
  return _version('__git_version__')
