# -*- coding: utf-8 -*-
#
# CosheafTools documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('../'))

from cosheaftools.core import _version

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.coverage',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'CosheafTools'
version = _version.__version__
release = _version.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
html_show_copyright = False
htmlhelp_basename = 'CosheafToolsdoc'

man_pages = [
    (master_doc, 'cosheaftools', 'CosheafTools Documentation', [], 1)
]
