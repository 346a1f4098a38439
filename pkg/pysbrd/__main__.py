from pysbrd.cli import entry

entry()
