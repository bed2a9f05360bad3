"""Kernel backend selection.

Imports the compiled Cython kernel when it was built, otherwise the
pure-Python twin.  Set SMOOTHLOCUS_PURE=1 to force the fallback (used by
the benchmark and the backend-equivalence tests).
"""

import os

from . import pure

if os.environ.get("SMOOTHLOCUS_PURE"):
    impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _speedups as impl

        BACKEND = "speedups"
    except ImportError:
        impl = pure
        BACKEND = "pure"

GREVLEX = pure.GREVLEX
LEX = pure.LEX
BLOCK = pure.BLOCK
