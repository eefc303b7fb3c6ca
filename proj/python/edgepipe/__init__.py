"""DNN pipeline partitioning and placement planner for edge clusters."""

from edgepipe._core import *  # noqa: F401,F403
from edgepipe import _core as core  # noqa: F401

__version__ = "0.1.0"
