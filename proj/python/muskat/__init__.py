"""Periodic Muskat interface simulator: spectral evolution, turning diagnostics
and the building-block integral checks."""

from ._muskat import *  # noqa: F401,F403
from ._muskat import __version__, lemma  # noqa: F401
