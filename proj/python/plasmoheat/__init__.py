"""Heat generation by clusters of plasmonic nanoparticles."""

from plasmoheat._core import *  # noqa: F401,F403
from plasmoheat import _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
