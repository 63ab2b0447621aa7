"""Kernel backend selection.

The hot per-document forward/backward lives either in the compiled extension
(``riskspan._kernels._core``, built from _core.pyx) or in the numpy fallback
(``riskspan._kernels.pyref``). Selection happens once at import:

* RISKSPAN_BACKEND=compiled  require the extension, fail loudly if missing
* RISKSPAN_BACKEND=python    force the numpy fallback
* unset / auto               compiled if importable, else python

Both backends expose the same ``forward``/``backward`` contract (documented
in pyref) and agree numerically to ~1e-12 relative; results are bit-exactly
reproducible within a backend but not across backends.
"""

from __future__ import annotations

import os

from . import pyref

KIND_WINDOW = pyref.KIND_WINDOW
KIND_ATTENTION = pyref.KIND_ATTENTION
LOG_EPS = pyref.LOG_EPS

_choice = os.environ.get("RISKSPAN_BACKEND", "auto").lower()
if _choice not in ("auto", "compiled", "python"):
    raise ValueError(
        f"RISKSPAN_BACKEND={_choice!r}: expected auto, compiled, or python"
    )

if _choice == "python":
    _impl = pyref
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "RISKSPAN_BACKEND=compiled but riskspan._kernels._core is not "
                "built; reinstall the package with a C toolchain available"
            ) from None
        _impl = pyref

forward = _impl.forward
backward = _impl.backward


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return _impl.NAME
