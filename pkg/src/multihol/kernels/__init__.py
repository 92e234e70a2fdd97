"""Hot loops behind a backend switch.

numba is used when importable; set ``MULTIHOL_DISABLE_NUMBA=1`` to force the
pure-numpy path.  Both backends are importable side by side through
``get_backend`` for benchmarking and cross-checking.
"""
import os
from importlib import import_module

_NAMES = (
    "mult_table",
    "circle_table",
    "count_hom_failures",
    "count_assoc_failures",
    "count_brace_failures",
    "circle_stats",
    "criterion_scan",
    "batch_invertible",
    "stabilizer_scan",
    "regular_closure",
)


def numba_disabled() -> bool:
    return os.environ.get("MULTIHOL_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")


def get_backend(name: str):
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    return import_module(f"._{name}", __name__)


def _select():
    if not numba_disabled():
        try:
            return get_backend("numba")
        except ImportError:
            pass
    return get_backend("numpy")


backend = _select()
BACKEND = backend.NAME

for _name in _NAMES:
    globals()[_name] = getattr(backend, _name)

__all__ = ["BACKEND", "backend", "get_backend", "numba_disabled", *_NAMES]
