"""Hot-kernel dispatch: the compiled core when built, numpy otherwise.

Set ``NMBQC_PURE_PYTHON=1`` to force the numpy kernels even when the
extension is importable.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
if not os.environ.get("NMBQC_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

branch_blocks = _impl.branch_blocks
channel_overlaps = _impl.channel_overlaps

__all__ = ["BACKEND", "branch_blocks", "channel_overlaps"]
