"""Per-block rates of the reference and coordinated direct/relay schemes.

A block serves one relayed user and one direct user in two slots. Rates are
normalized bits delivered per block: a hop lasting ``tau`` slots at
end-to-end SINR ``g`` delivers ``tau * log2(1 + g)``. This gives the half
weight of the relayed rate in the reference scheme (two half-slot hops) and
full weight for the coordinated schemes (two full-slot hops).

====  ==========  ==========
kind  relayed     direct
====  ==========  ==========
S1    RD          DU
S2    RU          DD
S3    RD          DD
S4    RU          DU
====  ==========  ==========
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .channel import ChannelDraw
from .mmse import AlphaPosition, VirtualMimo, sinr_mmse_closed

__all__ = [
    "BLOCK_SLOTS",
    "RatePair",
    "SchemeKind",
    "TrafficType",
    "amplification_factor",
    "check_lambda",
    "prioritize",
    "rate",
    "rate_prioritized",
    "rate_reference",
    "rate_s1",
    "rate_s2",
    "rate_s3",
    "rate_s4",
    "sinr_reference",
    "sinr_s1",
    "sinr_s2",
    "sinr_s3",
    "sinr_s4",
    "s2_virtual_mimo",
    "s3_virtual_mimo",
    "s4_virtual_mimos",
]

BLOCK_SLOTS = 2.0


class TrafficType(enum.Enum):
    DD = "DD"
    DU = "DU"
    RD = "RD"
    RU = "RU"

    @property
    def is_direct(self) -> bool:
        return self in (TrafficType.DD, TrafficType.DU)


class SchemeKind(enum.Enum):
    REF = "REF"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"

    @property
    def relayed_type(self) -> TrafficType | None:
        return _SERVES[self][0]

    @property
    def direct_type(self) -> TrafficType | None:
        return _SERVES[self][1]


_SERVES = {
    SchemeKind.REF: (None, None),
    SchemeKind.S1: (TrafficType.RD, TrafficType.DU),
    SchemeKind.S2: (TrafficType.RU, TrafficType.DD),
    SchemeKind.S3: (TrafficType.RD, TrafficType.DD),
    SchemeKind.S4: (TrafficType.RU, TrafficType.DU),
}


@dataclass(frozen=True)
class RatePair:
    """Outcome of one block.

    ``rate_relayed`` and ``rate_direct`` are the normalized bits delivered to
    each user over the block; ``bits`` is their sum.
    """

    rate_relayed: float
    rate_direct: float
    slots: float = BLOCK_SLOTS

    @property
    def bits(self) -> float:
        return self.rate_relayed + self.rate_direct


def _c(g):
    return math.log2(1.0 + g)


def amplification_factor(*gains: complex, n: float) -> float:
    """RS gain normalizing its forwarded signal to unit power."""
    return 1.0 / (sum(abs(h) ** 2 for h in gains) + n)


def sinr_reference(ch: ChannelDraw) -> tuple[float, float]:
    """(relayed, direct) SNRs of orthogonal transmission.

    Channel reciprocity makes the same pair of values valid for all four
    traffic combinations, so there is a single reference scheme.
    """
    g1, g2, g3, _, _ = ch.gammas
    return g1 * g2 / (g1 + g2 + 1.0), g3


def rate_reference(ch: ChannelDraw) -> RatePair:
    g_rel, g_dir = sinr_reference(ch)
    return RatePair(0.5 * _c(g_rel), _c(g_dir))


def sinr_s1(ch: ChannelDraw) -> tuple[float, float]:
    """BS sends x1 via the RS while the direct user uplinks x2.

    The BS cancels its own x1 from the relayed signal; the relayed user
    treats x2 as interference.
    """
    g1, g2, g3, g4, _ = ch.gammas
    g_rel = g1 * g2 / (g1 + g2 + g4 + g1 * g4 + 1.0)
    g_dir = g3 * (g1 + 1.0) / (2.0 * g1 + 1.0)
    return g_rel, g_dir


def rate_s1(ch: ChannelDraw) -> RatePair:
    g_rel, g_dir = sinr_s1(ch)
    return RatePair(_c(g_rel), _c(g_dir))


def s2_virtual_mimo(ch: ChannelDraw) -> VirtualMimo:
    """Two-slot receive model of the direct user in S2, stream order (x4, x3)."""
    g = amplification_factor(ch.h1, ch.h2, n=ch.n)
    sg = math.sqrt(g)
    return VirtualMimo(
        h11=ch.h3,
        h12=sg * ch.h1 * ch.h5,
        h21=ch.h4,
        h22=sg * ch.h2 * ch.h5,
        n=ch.n,
        alpha=1.0 + g * abs(ch.h5) ** 2,
        alpha_position=AlphaPosition.SECOND_BRANCH,
    )


def sinr_s2(ch: ChannelDraw) -> tuple[float, float]:
    """Relayed user uplinks x3 while the BS downlinks x4 to the direct user."""
    g1, g2, *_ = ch.gammas
    g_rel = g1 * g2 / (2.0 * g1 + g2 + 1.0)
    g_dir = sinr_mmse_closed(s2_virtual_mimo(ch))
    return g_rel, g_dir


def rate_s2(ch: ChannelDraw) -> RatePair:
    g_rel, g_dir = sinr_s2(ch)
    return RatePair(_c(g_rel), _c(g_dir))


def s3_virtual_mimo(ch: ChannelDraw) -> VirtualMimo:
    """Two-slot receive model of the direct user in S3, stream order (x4, x1)."""
    g = amplification_factor(ch.h1, n=ch.n)
    return VirtualMimo(
        h11=0j,
        h12=ch.h3,
        h21=ch.h3,
        h22=math.sqrt(g) * ch.h1 * ch.h5,
        n=ch.n,
        alpha=1.0 + g * abs(ch.h5) ** 2,
        alpha_position=AlphaPosition.SECOND_BRANCH,
    )


def sinr_s3(ch: ChannelDraw) -> tuple[float, float]:
    """Both downlinks; the direct user receives while the RS forwards x1."""
    g1, g2, g3, _, g5 = ch.gammas
    g_rel = g1 * g2 / (g1 + g2 + 1.0)
    g_dir = g3 * (g3 + 1.0) * (g1 + 1.0) / ((g1 + g5 + 1.0) * (g3 + 1.0) + g1 * g5)
    return g_rel, g_dir


def rate_s3(ch: ChannelDraw) -> RatePair:
    g_rel, g_dir = sinr_s3(ch)
    return RatePair(_c(g_rel), _c(g_dir))


def s4_virtual_mimos(ch: ChannelDraw) -> tuple[VirtualMimo, VirtualMimo]:
    """BS receive models in S4 for the relayed stream and the direct stream."""
    g = amplification_factor(ch.h2, ch.h5, n=ch.n)
    sg = math.sqrt(g)
    relayed_col = (0j, sg * ch.h1 * ch.h2)
    direct_col = (ch.h3, sg * ch.h1 * ch.h5)
    alpha = 1.0 + g * abs(ch.h1) ** 2
    relayed = VirtualMimo(*relayed_col, *direct_col, n=ch.n, alpha=alpha)
    direct = VirtualMimo(*direct_col, *relayed_col, n=ch.n, alpha=alpha)
    return relayed, direct


def sinr_s4(ch: ChannelDraw) -> tuple[float, float]:
    """Both uplinks; the BS combines the direct slot with the relayed slot."""
    g1, g2, g3, _, g5 = ch.gammas
    s = g1 + g2 + g5 + 1.0
    g_rel = g1 * g2 * (g3 + 1.0) / (g1 * g5 + s * (g3 + 1.0))
    g_dir = g3 + g1 * g5 / (s + g1 * g2)
    return g_rel, g_dir


def rate_s4(ch: ChannelDraw) -> RatePair:
    g_rel, g_dir = sinr_s4(ch)
    return RatePair(_c(g_rel), _c(g_dir))


_RATES = {
    SchemeKind.REF: "rate_reference",
    SchemeKind.S1: "rate_s1",
    SchemeKind.S2: "rate_s2",
    SchemeKind.S3: "rate_s3",
    SchemeKind.S4: "rate_s4",
}


def rate(kind: SchemeKind, ch: ChannelDraw) -> RatePair:
    return globals()[_RATES[kind]](ch)


def check_lambda(lam: float) -> float:
    if not -1.0 < lam < 1.0:
        raise ValueError(f"prioritizing factor must lie in (-1, 1), got {lam!r}")
    return float(lam)


def prioritize(rate_relayed, rate_direct, c_direct, c_relay, lam: float):
    """Reapportion a basic block's time by the prioritizing factor ``lam``.

    For ``lam > 0`` the basic block shrinks to ``1 - lam`` of its length and
    the freed ``2 lam`` slots carry a direct transmission at ``c_direct``
    bits/slot. For ``lam < 0`` the freed ``2|lam|`` slots carry a two-hop
    relayed transmission, ``|lam|`` slots per hop at ``c_relay`` bits/slot.
    Works elementwise on arrays.
    """
    if lam > 0:
        keep = 1.0 - lam
        return keep * rate_relayed, keep * rate_direct + 2.0 * lam * c_direct
    if lam < 0:
        keep = 1.0 + lam
        return keep * rate_relayed - lam * c_relay, keep * rate_direct
    return rate_relayed, rate_direct


def rate_prioritized(kind: SchemeKind, ch: ChannelDraw, lam: float) -> RatePair:
    if kind is SchemeKind.REF:
        raise ValueError("prioritization applies to coordinated schemes only")
    lam = check_lambda(lam)
    basic = rate(kind, ch)
    if lam == 0.0:
        return basic
    g_relay, g3 = sinr_reference(ch)
    rel, dirc = prioritize(basic.rate_relayed, basic.rate_direct, _c(g3), _c(g_relay), lam)
    return RatePair(float(rel), float(dirc))
