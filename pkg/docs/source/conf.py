# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.append(os.path.abspath('../..'))

import spextree

project = 'spextree'
copyright = '2025, the spextree developers'
author = 'the spextree developers'

release = spextree.__version__

extensions = [
    'sphinx.ext.napoleon',
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

autoclass_content = "both"
html_show_sourcelink = False
add_module_names = False

exclude_patterns = []

html_theme = 'sphinx_rtd_theme'
