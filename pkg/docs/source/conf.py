# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

from __future__ import annotations

import logging
import re
import sys
from pathlib import Path
from typing import Any

# Configure the logger
logging.basicConfig(
    filename="docs.log",
    level=logging.DEBUG,
    format="%(asctime)s - %(levelname)s - %(message)s",
)

# -- Path setup --------------------------------------------------------------

conf_dir = Path(__file__).resolve().parent
repo_root = conf_dir.parent.parent

sys.path.insert(0, str(repo_root))


# -- Project information -----------------------------------------------------

project = "Real Conic Bundles"
copyright = "2026, the real-conic-bundles developers"
author = "the real-conic-bundles developers"
try:
    from real_conic_bundles import __version__

    release = __version__
except Exception:
    release = "unknown"

# -- General configuration ---------------------------------------------------

extensions = [
    # Sphinx extensions
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    # Third-party extensions
    "autodocsumm",
    "numpydoc",
    "sphinx_copybutton",
    "sphinx_design",
    "sphinx_toolbox.more_autodoc.overloads",
]

autosummary_generate = True

# Render docstring text in `single backticks` as code.
default_role = "code"

maximum_signature_line_length = 88

templates_path = ["_templates"]

exclude_patterns = ["Thumbs.db", ".DS_Store"]

overloads_location = ["bottom"]
language = "python"

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "polars": ("https://docs.pola.rs/api/python/stable/", None),
}

# -- Options for HTML output -------------------------------------------------

html_theme = "pydata_sphinx_theme"
html_static_path = ["_static"]
html_show_sourcelink = False

html_theme_options = {
    "show_version_warning_banner": False,
    "navbar_end": ["theme-switcher", "navbar-icon-links"],
    "check_switcher": False,
}


def _minify_classpaths(s: str) -> str:
    logging.debug(f"classpath: {s}")
    return re.sub(
        pattern=r"real_conic_bundles\.[a-z_]+\.([A-Za-z_]+)",
        repl=r"\1",
        string=s,
    )


def process_signature(  # noqa: D103
    app: object,
    what: object,
    name: object,
    obj: object,
    opts: object,
    sig: str,
    ret: str,
) -> tuple[str, str]:
    logging.debug(f"process_sig: {sig}")
    logging.debug(f"return_sig: {ret}")
    return (
        _minify_classpaths(sig) if sig else sig,
        _minify_classpaths(ret) if ret else ret,
    )


def setup(app: Any) -> None:  # noqa: D103
    app.connect("autodoc-process-signature", process_signature)
