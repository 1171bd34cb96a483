"""Conformal change detection: transducer, Simple Jumper martingale, cryptic shifts."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
