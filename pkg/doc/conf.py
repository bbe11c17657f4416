# scenelabel documentation build configuration file.

import sys, os

# -- General configuration -----------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
]

templates_path = ['_templates']

source_suffix = '.rst'

master_doc = 'index'

project = 'scenelabel'
copyright = '2026, The scenelabel developers'

# Filled in by pbr when the package is built.
version = 'VERSION'
release = 'VERSION'

exclude_trees = ['_build']

pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------

html_theme = 'default'

html_static_path = ['_static']

htmlhelp_basename = 'scenelabeldoc'

# -- Options for LaTeX output --------------------------------------------

latex_documents = [
  ('index', 'scenelabel.tex', 'scenelabel Documentation',
   'The scenelabel developers', 'manual'),
]

intersphinx_mapping = {
    'py3': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
}
