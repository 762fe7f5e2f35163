"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``RELKIT_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from relkit.relalg import _pykernels

BACKEND = "python"
compose = _pykernels.compose
converse = _pykernels.converse
closure = _pykernels.closure

if os.environ.get("RELKIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from relkit.relalg import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        compose = _ckernels.compose
        converse = _ckernels.converse
        closure = _ckernels.closure
