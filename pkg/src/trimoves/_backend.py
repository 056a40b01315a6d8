"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the
fallback and the reference.  Set ``TRIMOVES_PURE=1`` to force the pure
backend (the benchmark and the test suite use this to compare the two).
Both backends are bit-for-bit interchangeable.
"""

import os

from . import _intcore_py

if os.environ.get("TRIMOVES_PURE"):
    _impl = _intcore_py
    BACKEND = "pure"
else:
    try:
        from . import _intcore_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _intcore_py
        BACKEND = "pure"

det_int = _impl.det_int
sign_det_int = _impl.sign_det_int
echelon_int = _impl.echelon_int
rank_int = _impl.rank_int
minor_vector_int = _impl.minor_vector_int
solve_int = _impl.solve_int
