#
# PySBRD documentation build configuration file
#

import os
import sys

# path to autogen'ed modules
sys.path.insert(0, os.path.abspath('..'))

# numpy and sympy are needed at import time; mock the progress bar only
autodoc_mock_imports = [ 'tqdm' ]

# extentions
extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax']

# general configuration
source_suffix  = '.rst'
master_doc     = 'index'

# html configuration
pygments_style = 'sphinx'
html_theme     = 'default'

html_sidebars = {
    '**': ['globaltoc.html', 'searchbox.html'],
    }

# project information
project   = 'PySBRD'
copyright = '2026, the PySBRD developers'

exec(open('../version.py').read())      # this sets 'version'
release = version
