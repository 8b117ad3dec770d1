"""Monte Carlo kernels: the compiled extension when built, else the NumPy fallback.

Set ``ARITHCODE_PURE=1`` to force the fallback. Both produce identical bits
and identical float intervals for the same arguments.
"""

import os

from . import _pykernels
from ._pykernels import GAMMA, TRIAL_GAMMA, mix64, stream_key

_impl = _pykernels
if not os.environ.get("ARITHCODE_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND: str = _impl.BACKEND
message_bits = _impl.message_bits
encode_float = _impl.encode_float

__all__ = [
    "BACKEND",
    "GAMMA",
    "TRIAL_GAMMA",
    "encode_float",
    "message_bits",
    "mix64",
    "stream_key",
]
