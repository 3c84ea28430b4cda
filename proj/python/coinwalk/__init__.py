"""Coined quantum walk on a ring whose coin is a quantum baker map."""

from ._coinwalk import *  # noqa: F401,F403
from ._coinwalk import __doc__  # noqa: F401

__version__ = "1.0.0"
