"""FRAN handover signaling and uplink resource-allocation simulator."""

from fran._core import *  # noqa: F401,F403
from fran._core import __doc__  # noqa: F401

__version__ = "0.1.0"
