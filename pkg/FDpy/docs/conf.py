# -*- coding: utf-8 -*-
#
# FDpy documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('../..'))

extensions = [
    'sphinx.ext.autosummary',
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'numpydoc',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'FDpy'
copyright = u'2026, FDpy developers'
version = '0.1'
release = '0.1.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'
numpydoc_show_class_members = False

html_theme = 'default'
htmlhelp_basename = 'FDpydoc'
