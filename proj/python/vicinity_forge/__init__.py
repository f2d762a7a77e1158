"""Vicinal data augmentation over embedding tables (MIXUP, MIXAG, SSMBA) and
the accompanying evaluation statistics."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
