'''PySBRD setup script.'''

import os
import re

from setuptools import setup


###############################################################################
# version

exec(open('version.py').read())         # this sets 'version'

with open('README', 'r') as file:
    long_description = file.read()


###############################################################################
# save git version to 'pysbrd/__git_version__.py'

try:
    git_head_file = os.path.join(os.path.dirname(__file__), '.git', 'HEAD')
    with open(git_head_file) as f:
        ref = re.match(r'ref: (.+)', f.readline()).group(1)

    git_head_file = os.path.join(os.path.dirname(__file__), '.git', ref)
    with open(git_head_file) as f:
        git_version = f.readline().rstrip()

except (OSError, AttributeError):
    git_version = 'not_available'

git_version_file = os.path.join(os.path.dirname(__file__),
                                'pysbrd', '__git_version__.py')
with open(git_version_file, 'w') as f:
    f.write("version = '%s'\n" % (git_version))


###############################################################################
# save version to 'pysbrd/__version__.py'

version_file = os.path.join(os.path.dirname(__file__),
                            'pysbrd', '__version__.py')
with open(version_file, 'w') as f:
    f.write("version = '%s'\n" % (version))


###############################################################################
# setup!

setup(

    name         = "PySBRD",
    packages     = ['pysbrd'],
    version      = version,
    description  = "Swarm-based random descent and swarm-based gradient descent.",
    license      = "BSD",
    keywords     = "swarm, global optimization, gradient descent, random descent, benchmark",

    python_requires  = '>=3.8',
    install_requires = ['numpy>=1.17', 'sympy', 'tqdm'],
    extras_require   = { 'test': ['pytest'], 'docs': ['sphinx'] },

    entry_points = {
        'console_scripts': ['pysbrd = pysbrd.cli:entry'],
    },

    long_description = long_description,

    classifiers = [
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering',
        'Topic :: Scientific/Engineering :: Mathematics',
        ],

    )
