"""Kernel dispatch.

Uses the compiled extension when it imports, otherwise the pure-Python
module. Set ``BENTDESIGN_PURE=1`` to force the fallback.
"""

import os

from . import _fallback

if os.environ.get("BENTDESIGN_PURE") == "1":
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _fallback

BACKEND = _impl.BACKEND

rref = _impl.rref
sd_scan = _impl.sd_scan
weight_distribution = _impl.weight_distribution
codewords_of_weight = _impl.codewords_of_weight
scan_affine = _impl.scan_affine
gl_rows = _fallback.gl_rows


def backends():
    """Available kernel modules, compiled first."""
    out = []
    try:
        from . import _kernels

        out.append(_kernels)
    except ImportError:
        pass
    out.append(_fallback)
    return out
