"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over. Setting ``CAMELOT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("CAMELOT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.NAME

horner = _impl.horner
horner_many = _impl.horner_many
matmul = _impl.matmul
hadamard = _impl.hadamard
yates = _impl.yates
poly_mul = _impl.poly_mul
poly_divmod = _impl.poly_divmod
interpolate = _impl.interpolate
lagrange_basis = _impl.lagrange_basis
bipoly_mul = _impl.bipoly_mul
sieve_extract = _impl.sieve_extract
form62_contract = _impl.form62_contract


def available_backends():
    """Names and modules of every backend importable in this process."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
