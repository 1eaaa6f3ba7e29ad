# qcrystals/__init__.py
from ._version import __version__
