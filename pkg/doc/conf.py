# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see
# http://www.sphinx-doc.org/en/master/config

import re

import fracpg

# -- Project information -----------------------------------------------------

project = "fracpg"
copyright = "2024, The fracpg authors"
author = "The fracpg authors"

# The full version, including alpha/beta/rc tags
release = fracpg.__version__
# The short X.Y version
version = re.sub(r"^(\d+\.\d+).*", r"\1", release)

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.viewcode",
    "sphinxcontrib.programoutput",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "sphinx"

# -- Options for HTML output -------------------------------------------------

html_theme = "alabaster"
html_show_sphinx = True
html_show_sourcelink = False
htmlhelp_basename = "fracpgdoc"

# -- Options for manual page output ------------------------------------------

man_pages = [(master_doc, "fracpg", "fracpg Documentation", [author], 1)]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}
