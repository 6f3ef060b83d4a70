"""Select the integration kernel at import time.

The compiled extension is preferred when it built; otherwise the pure
Python reference takes over with identical results.  Setting the
environment variable PUSHTRACK_PURE=1 forces the pure kernel, which the
benchmark and the bit-identity tests use to exercise both paths in one
process (the forced path reads the flag at import, the test helpers call
the modules directly).
"""

import os

if os.environ.get("PUSHTRACK_PURE") == "1":
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl
    except ImportError:
        from . import _fallback as _impl

integrate_push = _impl.integrate_push
kernel_kind: str = _impl.KIND
