# -*- coding: utf-8 -*-

from os.path import dirname
import sys
sys.path.insert(0, dirname(dirname(dirname(__file__))))

import dacsec

# -- General configuration ------------------------------------------------
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.inheritance_diagram',
    'sphinx.ext.mathjax',
]

templates_path = []  # ['_templates']
source_suffix = '.rst'
master_doc = 'index'

# General information about the project.
project = u'dacsec'
copyright = u'2024, dacsec developers'

# The short X.Y version.
version = '.'.join(dacsec.__version__.split('.')[:2])
# The full version, including alpha/beta/rc tags.
release = dacsec.__version__

exclude_patterns = []

pygments_style = 'sphinx'


# -- Options for HTML output ----------------------------------------------
html_theme = 'default'
html_static_path = []  # ['_static']

# Output file base name for HTML help builder.
htmlhelp_basename = 'dacsecdoc'


# -- Options for manual page output ---------------------------------------
man_pages = [
    ('index', 'dacsec', u'dacsec Documentation',
     [u'dacsec developers'], 1)
]


# -- Extensions -----------------------------------------------------------
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
autodoc_member_order = 'bysource'
autodoc_default_options = {'members': True}
inheritance_graph_attrs = dict(rankdir="TB")
