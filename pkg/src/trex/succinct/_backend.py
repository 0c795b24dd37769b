"""Pick the compiled kernels when available; ``TREX_PURE_PYTHON=1`` forces Python."""
from __future__ import annotations

import os

BACKEND = "pure"

if not os.environ.get("TREX_PURE_PYTHON"):
    try:
        from ._kernels import PlainBits, RRRBits, WaveletCore  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        pass

if BACKEND == "pure":
    from ._pure import PlainBits, RRRBits, WaveletCore

__all__ = ["BACKEND", "PlainBits", "RRRBits", "WaveletCore"]
