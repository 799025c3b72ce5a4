"""Continuous fluid antenna system (CFAS) simulation and analytics.

Thin re-export of the compiled module; see the individual docstrings.
"""

try:
    from . import _cfas as _core  # installed layout: extension inside the package
except ImportError:  # in-tree layout: extension on sys.path next to the package
    import _cfas as _core

__version__ = _core.__version__

_exported = [name for name in dir(_core) if not name.startswith("_")]
globals().update({name: getattr(_core, name) for name in _exported})
__all__ = sorted(_exported)
