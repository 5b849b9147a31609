"""Linear MMSE receiver for 2x2 virtual-MIMO systems.

The receive vector is ``y = h1 x1 + h2 x2 + z`` with column vectors
``h1 = [h11, h12]`` and ``h2 = [h21, h22]``, unit-power symbols and diagonal
noise covariance ``n * diag(1, alpha)`` or ``n * diag(alpha, 1)``. The SINR of
stream ``x1`` after whitening the interference-plus-noise is
``h1^H (h2 h2^H + N)^{-1} h1``.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

__all__ = [
    "AlphaPosition",
    "VirtualMimo",
    "gamma_a",
    "gamma_b",
    "sinr_mmse_closed",
    "sinr_mmse_oracle",
]

logger = logging.getLogger(__name__)

_ILL_CONDITIONED = 1e12


class AlphaPosition(enum.Enum):
    """Receive branch whose noise power is scaled by ``alpha``."""

    FIRST_BRANCH = 1
    SECOND_BRANCH = 2


@dataclass(frozen=True)
class VirtualMimo:
    h11: complex
    h12: complex
    h21: complex
    h22: complex
    n: float
    alpha: float = 1.0
    alpha_position: AlphaPosition = AlphaPosition.SECOND_BRANCH

    def __post_init__(self):
        if not self.n > 0:
            raise ValueError(f"noise power must be positive, got {self.n!r}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")

    def gamma_matrix(self) -> tuple[float, float, float, float]:
        """``(g11, g12, g21, g22)``, each ``|h_ij|^2 / n``."""
        n = self.n
        return (
            abs(self.h11) ** 2 / n,
            abs(self.h12) ** 2 / n,
            abs(self.h21) ** 2 / n,
            abs(self.h22) ** 2 / n,
        )

    def noise_diag(self) -> tuple[float, float]:
        if self.alpha_position is AlphaPosition.FIRST_BRANCH:
            return self.n * self.alpha, self.n
        return self.n, self.n * self.alpha


def gamma_a(m: VirtualMimo) -> float:
    """Normalized squared inner product of the two columns.

    Not needed by the SINR expressions; exposed for completeness.
    """
    inner = m.h11.conjugate() * m.h21 + m.h12.conjugate() * m.h22
    return abs(inner) ** 2 / m.n**2


def gamma_b(m: VirtualMimo) -> float:
    """Normalized squared determinant ``|h11 h22 - h21 h12|^2 / n^2``."""
    det = m.h11 * m.h22 - m.h21 * m.h12
    return abs(det) ** 2 / m.n**2


def sinr_mmse_closed(m: VirtualMimo) -> float:
    """Closed-form MMSE SINR of the first stream."""
    g11, g12, g21, g22 = m.gamma_matrix()
    gb = gamma_b(m)
    a = m.alpha
    if m.alpha_position is AlphaPosition.SECOND_BRANCH:
        return (a * g11 + g12 + gb) / (a * g21 + g22 + a)
    return (g11 + a * g12 + gb) / (g21 + a * g22 + a)


def sinr_mmse_oracle(m: VirtualMimo) -> float:
    """MMSE SINR of the first stream by explicit inversion of ``K_z``.

    ``K_z = h2 h2^H + N`` is inverted with the 2x2 cofactor formula and the
    quadratic form ``h1^H K_z^{-1} h1`` evaluated directly.
    """
    n1, n2 = m.noise_diag()
    # K_z = [[a, b], [conj(b), c]]
    a = abs(m.h21) ** 2 + n1
    c = abs(m.h22) ** 2 + n2
    b = m.h21 * m.h22.conjugate()
    # a*c - |b|^2 expanded; avoids cancellation for a strong interferer
    det = n1 * n2 + n1 * abs(m.h22) ** 2 + n2 * abs(m.h21) ** 2
    if __debug__ and logger.isEnabledFor(logging.DEBUG):
        tr = a + c
        disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
        lo = (tr - disc) / 2.0
        if lo <= 0 or (tr + disc) / 2.0 / lo > _ILL_CONDITIONED:
            logger.debug("near-singular interference covariance: %r", m)
    u1, u2 = m.h11, m.h12
    # h1^H adj(K) h1 with adj(K) = [[c, -b], [-conj(b), a]]
    quad = c * abs(u1) ** 2 + a * abs(u2) ** 2 - 2.0 * (u1.conjugate() * b * u2).real
    return quad / det
