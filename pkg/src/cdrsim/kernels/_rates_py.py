"""Pure numpy implementation of the per-draw rate kernel."""
from __future__ import annotations

import numpy as np


def scheme_rates(h1, h2, h3, h4, h5, n: float) -> np.ndarray:
    """Rates of all schemes for equally shaped 1-D gain arrays.

    Returns an array of shape ``(5, 2, size)`` indexed by scheme
    (REF, S1, S2, S3, S4), side (relayed, direct) and draw.
    """
    h1, h2, h3, h4, h5 = (np.ascontiguousarray(h, dtype=np.complex128) for h in (h1, h2, h3, h4, h5))
    size = h1.shape[0]
    if any(h.shape != (size,) for h in (h2, h3, h4, h5)):
        raise ValueError("gain arrays must have equal length")
    if not n > 0:
        raise ValueError("noise power must be positive")
    g1, g2, g3, g4, g5 = (np.abs(h) ** 2 / n for h in (h1, h2, h3, h4, h5))
    gr = g1 * g2 / (g1 + g2 + 1.0)
    gb2 = np.abs(h2 * h3 - h1 * h4) ** 2 / (n * n)
    s = g1 + g2 + g5 + 1.0
    t = g3 + 1.0

    out = np.empty((5, 2, size))
    out[0, 0] = 0.5 * np.log2(1.0 + gr)
    out[0, 1] = np.log2(1.0 + g3)
    out[1, 0] = np.log2(1.0 + g1 * g2 / (g1 + g2 + g4 + g1 * g4 + 1.0))
    out[1, 1] = np.log2(1.0 + g3 * (g1 + 1.0) / (2.0 * g1 + 1.0))
    out[2, 0] = np.log2(1.0 + g1 * g2 / (2.0 * g1 + g2 + 1.0))
    out[2, 1] = np.log2(1.0 + (g3 * s + g5 * (g1 + gb2)) / ((g4 + 1.0) * s + g2 * g5))
    out[3, 0] = np.log2(1.0 + gr)
    out[3, 1] = np.log2(1.0 + g3 * t * (g1 + 1.0) / ((g1 + g5 + 1.0) * t + g1 * g5))
    out[4, 0] = np.log2(1.0 + g1 * g2 * t / (g1 * g5 + s * t))
    out[4, 1] = np.log2(1.0 + g3 + g1 * g5 / (s + g1 * g2))
    return out
