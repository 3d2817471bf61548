"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; the numpy fallback
is used otherwise.  Set ``DIVAP_KERNELS=py`` to force the fallback or
``DIVAP_KERNELS=c`` to insist on the compiled backend (raising if it
was not built).
"""

from __future__ import annotations

import os

_choice = os.environ.get("DIVAP_KERNELS", "auto").lower()

if _choice == "py":
    from . import _pykernels as _impl
elif _choice == "c":
    from . import _ckernels as _impl  # type: ignore[attr-defined]
elif _choice == "auto":
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined,no-redef]
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]
else:
    raise RuntimeError(f"DIVAP_KERNELS must be 'auto', 'c' or 'py', got {_choice!r}")

BACKEND = "compiled" if _impl.__name__.endswith("_ckernels") else "numpy"

tau2_range = _impl.tau2_range
kloosterman_sum = _impl.kloosterman_sum
kloosterman_table = _impl.kloosterman_table
weil_scan_worst = _impl.weil_scan_worst

__all__ = [
    "BACKEND",
    "tau2_range",
    "kloosterman_sum",
    "kloosterman_table",
    "weil_scan_worst",
]
