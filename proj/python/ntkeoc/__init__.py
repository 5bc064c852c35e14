"""Exact infinite-width NTK of critically initialized (a,b)-ReLU networks."""

try:
    from ._ntkeoc import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _ntkeoc import *  # noqa: F401,F403  (in-tree build on PYTHONPATH)
