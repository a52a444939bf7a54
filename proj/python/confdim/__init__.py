"""Certified conformal-dimension lower bounds on finite metric nets."""

try:
    from ._confdim import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # in-tree builds put the module next to the package
    from _confdim import *  # noqa: F401,F403

from ._version import __version__  # noqa: F401
