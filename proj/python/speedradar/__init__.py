"""Python bindings for the speed-radar toolkit."""

from ._core import *  # noqa: F401,F403
