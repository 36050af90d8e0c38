"""Kernel selection: the compiled search is used when the extension built,
the numpy fallback otherwise.  Set FO2_KERNEL=python to force the fallback
(the benchmark and the kernel-parity tests import both directly)."""

import os

from . import _purecore

search_formula = _purecore.search_formula

if os.environ.get("FO2_KERNEL", "").lower() in ("python", "pure"):
    search_tables = _purecore.search_tables
    BACKEND = "python"
else:
    try:
        from . import _fastcore

        search_tables = _fastcore.search_tables
        BACKEND = "compiled"
    except ImportError:
        search_tables = _purecore.search_tables
        BACKEND = "python"
