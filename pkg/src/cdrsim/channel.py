"""Rayleigh fading channels for the relay-aided cell.

Every link gain is a circularly symmetric complex Gaussian with variance 1/2
per component, so that ``E|h|^2 = 1``. Noise power ``n`` sets the average SNR
``1/n`` of every link.

Channel naming for one (relayed, direct) user pairing:

====  =========================================
h1    BS - RS
h2    RS - relayed user
h3    BS - direct user
h4    relayed user - direct user (inter-user)
h5    RS - direct user
====  =========================================
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelDraw",
    "NetworkChannelState",
    "capacity",
    "db_to_noise",
    "draw_network",
    "draw_pairs",
    "draw_rayleigh",
    "extract_pair",
    "make_rng",
    "snr",
]

_COMPONENT_STD = math.sqrt(0.5)


def make_rng(seed: int | np.random.SeedSequence | None = None) -> np.random.Generator:
    """Return a PCG64 generator; accepts an integer seed or a SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def db_to_noise(snr_db: float) -> float:
    """Noise power giving an average link SNR of ``snr_db`` at unit power."""
    return 10.0 ** (-snr_db / 10.0)


def draw_rayleigh(rng: np.random.Generator, size=None):
    """Draw unit-power Rayleigh gains.

    Returns a Python ``complex`` when ``size`` is None, otherwise a
    ``complex128`` array of the given shape.
    """
    if size is None:
        re, im = rng.standard_normal(2) * _COMPONENT_STD
        return complex(re, im)
    shape = (size,) if np.isscalar(size) else tuple(size)
    parts = rng.standard_normal(shape + (2,)) * _COMPONENT_STD
    return parts[..., 0] + 1j * parts[..., 1]


def snr(h: complex, n: float) -> float:
    """Instantaneous SNR ``|h|^2 / n`` of a unit-power transmission."""
    if not n > 0:
        raise ValueError(f"noise power must be positive, got {n!r}")
    return abs(h) ** 2 / n


def capacity(gamma: float) -> float:
    """Shannon rate ``log2(1 + gamma)`` in bits/s/Hz."""
    if gamma < 0:
        raise ValueError(f"SNR must be nonnegative, got {gamma!r}")
    return math.log2(1.0 + gamma)


def _check_noise(n: float) -> None:
    if not (n > 0 and math.isfinite(n)):
        raise ValueError(f"noise power must be positive and finite, got {n!r}")


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of the five gains of a (relayed, direct) pairing."""

    h1: complex
    h2: complex
    h3: complex
    h4: complex
    h5: complex
    n: float

    def __post_init__(self):
        _check_noise(self.n)
        for name in ("h1", "h2", "h3", "h4", "h5"):
            h = complex(getattr(self, name))
            if not (math.isfinite(h.real) and math.isfinite(h.imag)):
                raise ValueError(f"{name} is not finite: {h!r}")
            object.__setattr__(self, name, h)

    @property
    def gains(self) -> tuple[complex, complex, complex, complex, complex]:
        return (self.h1, self.h2, self.h3, self.h4, self.h5)

    @property
    def gammas(self) -> tuple[float, float, float, float, float]:
        """Per-link SNRs ``(g1, ..., g5)``."""
        return tuple(abs(h) ** 2 / self.n for h in self.gains)

    @property
    def gamma_relay(self) -> float:
        """End-to-end AF SNR of the BS-RS-relayed user link."""
        g1, g2 = self.gammas[:2]
        return g1 * g2 / (g1 + g2 + 1.0)

    @classmethod
    def from_gammas(cls, g1, g2, g3, g4, g5, n: float = 1.0) -> "ChannelDraw":
        """Build a draw with real positive gains reproducing the given SNRs."""
        return cls(*(math.sqrt(g * n) for g in (g1, g2, g3, g4, g5)), n=n)


@dataclass(frozen=True, eq=False)
class NetworkChannelState:
    """Channel realizations of every user in the cell for one frame.

    Attributes
    ----------
    g_bs_rs : complex
        BS - RS gain, shared by all relayed users.
    g_rs_user : ndarray, shape (k,)
        RS - relayed user gains.
    g_bs_user : ndarray, shape (k,)
        BS - direct user gains.
    g_inter : ndarray, shape (k, k)
        Relayed user ``r`` to direct user ``d`` gain at ``[r, d]``.
    g_rs_direct : ndarray, shape (k,)
        RS - direct user gains.
    n : float
        Noise power.
    """

    g_bs_rs: complex
    g_rs_user: np.ndarray
    g_bs_user: np.ndarray
    g_inter: np.ndarray
    g_rs_direct: np.ndarray
    n: float

    def __post_init__(self):
        _check_noise(self.n)
        object.__setattr__(self, "g_bs_rs", complex(self.g_bs_rs))
        k = len(self.g_rs_user)
        for name in ("g_rs_user", "g_bs_user", "g_inter", "g_rs_direct"):
            arr = np.array(getattr(self, name), dtype=np.complex128)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if (
            self.g_bs_user.shape != (k,)
            or self.g_rs_direct.shape != (k,)
            or self.g_inter.shape != (k, k)
        ):
            raise ValueError("inconsistent user counts in channel state")

    @property
    def k(self) -> int:
        return len(self.g_rs_user)

    def __eq__(self, other):
        if not isinstance(other, NetworkChannelState):
            return NotImplemented
        return (
            self.n == other.n
            and self.g_bs_rs == other.g_bs_rs
            and all(
                np.array_equal(getattr(self, a), getattr(other, a))
                for a in ("g_rs_user", "g_bs_user", "g_inter", "g_rs_direct")
            )
        )

    __hash__ = None


def draw_network(k: int, n: float, rng: np.random.Generator) -> NetworkChannelState:
    """Draw all ``1 + 3k + k^2`` gains of a ``k`` + ``k`` user cell.

    Gains are consumed from ``rng`` in a fixed order: h1, RS-user, BS-user,
    inter-user (row major), RS-direct.
    """
    if k < 1:
        raise ValueError(f"need at least one user per side, got k={k}")
    _check_noise(n)
    g = draw_rayleigh(rng, 1 + 3 * k + k * k)
    return NetworkChannelState(
        g_bs_rs=complex(g[0]),
        g_rs_user=g[1 : 1 + k],
        g_bs_user=g[1 + k : 1 + 2 * k],
        g_inter=g[1 + 2 * k : 1 + 2 * k + k * k].reshape(k, k),
        g_rs_direct=g[1 + 2 * k + k * k :],
        n=n,
    )


def extract_pair(state: NetworkChannelState, relayed: int, direct: int) -> ChannelDraw:
    """The five-gain view of ``state`` seen by one (relayed, direct) pairing."""
    k = state.k
    if not (0 <= relayed < k and 0 <= direct < k):
        raise IndexError(f"user pair ({relayed}, {direct}) out of range for k={k}")
    return ChannelDraw(
        h1=state.g_bs_rs,
        h2=state.g_rs_user[relayed],
        h3=state.g_bs_user[direct],
        h4=state.g_inter[relayed, direct],
        h5=state.g_rs_direct[direct],
        n=state.n,
    )


def draw_pairs(count: int, n: float, rng: np.random.Generator) -> np.ndarray:
    """Independent two-user draws as a ``(5, count)`` complex array (rows h1..h5)."""
    _check_noise(n)
    return draw_rayleigh(rng, (5, count))
