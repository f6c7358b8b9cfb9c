"""Hot loops of the diagonaliser and the rational enumerations.

The compiled module is used when it was built; otherwise (or when
``REGCANTOR_PURE_PYTHON`` is set) the pure-Python module is used.  Both
compute identical results.
"""

import os

from . import _pykernels

BACKEND = "python"
if not os.environ.get("REGCANTOR_PURE_PYTHON"):
    try:
        from . import _ctrisect as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

preference = _impl.preference
choose_third = _impl.choose_third
run_stages = _impl.run_stages
coprime_band = _impl.coprime_band

__all__ = ["BACKEND", "preference", "choose_third", "run_stages", "coprime_band"]
