"""Journal citation clusters and country co-authorship networks."""

from ._fieldmap import *  # noqa: F401,F403
from ._fieldmap import __version__  # noqa: F401
