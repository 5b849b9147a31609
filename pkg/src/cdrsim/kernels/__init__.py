"""Vectorized rate kernel with a compiled backend and a numpy fallback.

The compiled extension is used when it was built; otherwise the numpy
implementation is selected at import. :func:`set_backend` switches
explicitly, mainly for benchmarks and cross-checks.
"""
from __future__ import annotations

import numpy as np

from . import _rates_py

try:
    from . import _rates as _rates_cy
except ImportError:  # extension not built
    _rates_cy = None

__all__ = ["available_backends", "get_backend", "pair_table", "scheme_rates", "set_backend"]

_BACKENDS = {"python": _rates_py.scheme_rates}
if _rates_cy is not None:
    _BACKENDS["cython"] = _rates_cy.scheme_rates

_active = "cython" if "cython" in _BACKENDS else "python"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def get_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Select ``"cython"`` or ``"python"``; returns the previous backend."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    previous, _active = _active, name
    return previous


def scheme_rates(h1, h2, h3, h4, h5, n: float, backend: str | None = None) -> np.ndarray:
    """Rates of REF, S1..S4 for 1-D gain arrays, shape ``(5, 2, size)``.

    Axis 1 is (relayed, direct). Values are the normalized bits that each
    user receives in one basic block.
    """
    fn = _BACKENDS[backend or _active]
    arrays = [np.ascontiguousarray(h, dtype=np.complex128) for h in (h1, h2, h3, h4, h5)]
    return fn(*arrays, float(n))


def pair_table(state, backend: str | None = None) -> np.ndarray:
    """Rates for every (relayed r, direct d) pairing of a cell state.

    Returns shape ``(5, 2, k, k)`` indexed ``[scheme, side, r, d]``.
    """
    k = state.k
    shape = (k, k)
    h1 = np.full(k * k, state.g_bs_rs, dtype=np.complex128)
    h2 = np.broadcast_to(state.g_rs_user[:, None], shape).ravel()
    h3 = np.broadcast_to(state.g_bs_user[None, :], shape).ravel()
    h4 = state.g_inter.ravel()
    h5 = np.broadcast_to(state.g_rs_direct[None, :], shape).ravel()
    return scheme_rates(h1, h2, h3, h4, h5, state.n, backend=backend).reshape(5, 2, k, k)
