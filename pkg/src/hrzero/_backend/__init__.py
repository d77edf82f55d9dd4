"""Kernel backend selection: compiled extension if available, else pure Python.

Set HRZERO_BACKEND=python to force the fallback.  `use()` switches the active
backend temporarily (used by the benchmark and the parity tests).
"""

import contextlib
import os

from . import _families, _pure

if os.environ.get("HRZERO_BACKEND", "") == "python":
    _impl = _pure
    IMPLEMENTATION = "python"
else:
    try:
        from . import _core as _impl

        IMPLEMENTATION = "cython"
    except ImportError:
        _impl = _pure
        IMPLEMENTATION = "python"

_active = _impl


def available() -> dict:
    """Map backend name -> module for every importable backend."""
    impls = {"python": _pure}
    if IMPLEMENTATION == "cython":
        impls["cython"] = _impl
    return impls


def active_name() -> str:
    return "cython" if _active is not _pure else "python"


@contextlib.contextmanager
def use(name: str):
    """Temporarily switch the active backend ('cython' or 'python')."""
    global _active
    impls = available()
    if name not in impls:
        raise ValueError(f"backend {name!r} not available; have {sorted(impls)}")
    previous = _active
    _active = impls[name]
    try:
        yield
    finally:
        _active = previous


def adaptive(f, fid, params, a, b, rel_tol, abs_tol, max_subdiv):
    return _active.adaptive(f, fid, params, a, b, rel_tol, abs_tol, max_subdiv)


def dijkstra(n_vertices, indptr, indices, weights, source):
    return _active.dijkstra(n_vertices, indptr, indices, weights, source)


def gauss_kronrod_rule():
    return _active.gauss_kronrod_rule()
