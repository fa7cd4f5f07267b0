# Sphinx configuration for the pyautotune documentation.

import os.path
import re

_INIT = os.path.join(os.path.dirname(__file__), '..', 'pyautotune', '__init__.py')
with open(_INIT, encoding='utf-8') as _infile:
    _match = re.search(r'^VERSION = \((\d+), (\d+), (\d+)\)', _infile.read(), re.M)

project = 'pyautotune'
author = 'the pyautotune developers'
copyright = '2026, ' + author
release = '.'.join(_match.groups())
version = '.'.join(_match.groups()[:2])

extensions = []
source_suffix = '.rst'
master_doc = 'index'
language = 'en'
exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'alabaster'
