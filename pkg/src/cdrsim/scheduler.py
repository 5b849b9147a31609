"""Per-frame user selection for the multi-user disciplines.

A frame is four slots. The reference discipline spends one slot per traffic
type (relayed users use two half slots). Coordinated disciplines fill the
frame with two 2-slot blocks of one family: S1 + S2 or S3 + S4. Between them
the two blocks of a family cover all four queues, so every nonempty queue
loses one request per frame.

When a block cannot pair two users, the lone request is served in
reference fashion inside the block and the block is marked partial.

Tie-breaks are deterministic: lowest direct index, then lowest relayed
index, then family S34 over S12.
"""
from __future__ import annotations

import enum
import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .channel import NetworkChannelState
from .schemes import SchemeKind, TrafficType

__all__ = [
    "Block",
    "Family",
    "FrameRates",
    "FrameSchedule",
    "SchedulerKind",
    "TrafficType",
    "WaitingList",
    "brute_force_frame",
    "build_frame",
    "build_frame_bdcdr",
    "build_frame_brcdr",
    "build_frame_exhaustive",
    "build_frame_fixed",
    "build_frame_reference",
    "table_one",
]

FRAME_SLOTS = 4.0
_SCHEME_ROW = {SchemeKind.REF: 0, SchemeKind.S1: 1, SchemeKind.S2: 2, SchemeKind.S3: 3, SchemeKind.S4: 4}


class Family(enum.Enum):
    S12 = "S12"
    S34 = "S34"
    REFERENCE = "REFERENCE"
    PARTIAL = "PARTIAL"


FAMILY_SCHEMES = {
    Family.S12: (SchemeKind.S1, SchemeKind.S2),
    Family.S34: (SchemeKind.S3, SchemeKind.S4),
}
# reference frame pairs the queues the same way as S3 + S4
_REFERENCE_PAIRS = ((TrafficType.RD, TrafficType.DD), (TrafficType.RU, TrafficType.DU))


class SchedulerKind(enum.Enum):
    REFERENCE = "REFERENCE"
    FIXED_S12 = "FIXED_S12"
    FIXED_S34 = "FIXED_S34"
    EXHAUSTIVE = "EXHAUSTIVE"
    BDCDR = "BDCDR"
    BRCDR = "BRCDR"


class WaitingList:
    """Four FIFO queues of pending requests.

    Direct queues (DD, DU) hold direct-user indices, relayed queues (RD, RU)
    hold relayed-user indices; both index ranges start at 0.
    """

    def __init__(self, queues: Mapping[TrafficType, Iterable[int]] | None = None):
        self.queues = {t: [] for t in TrafficType}
        for t, users in (queues or {}).items():
            self.queues[TrafficType(t)] = [int(u) for u in users]
        for side in ((TrafficType.DD, TrafficType.DU), (TrafficType.RD, TrafficType.RU)):
            users = self.queues[side[0]] + self.queues[side[1]]
            if len(set(users)) != len(users):
                raise ValueError(f"a user is queued twice among {side[0].value}/{side[1].value}")

    def __getitem__(self, t: TrafficType) -> list[int]:
        return self.queues[t]

    def __len__(self) -> int:
        return sum(len(q) for q in self.queues.values())

    def __bool__(self) -> bool:
        return len(self) > 0

    def __eq__(self, other):
        if not isinstance(other, WaitingList):
            return NotImplemented
        return self.queues == other.queues

    def __repr__(self):
        body = ", ".join(f"{t.value}={q}" for t, q in self.queues.items())
        return f"WaitingList({body})"

    def copy(self) -> "WaitingList":
        return WaitingList(self.queues)

    def head(self, t: TrafficType) -> int | None:
        q = self.queues[t]
        return q[0] if q else None

    def remove(self, t: TrafficType, user: int | None) -> None:
        if user is not None:
            self.queues[t].remove(user)


def table_one() -> tuple[WaitingList, dict]:
    """The ten-user waiting list used as the worked example of scheduling.

    Returns the list (``k = 5``) and a map from (TrafficType, index) to the
    1-based user label: direct users are 1..5, relayed users 6..10.
    """
    wl = WaitingList(
        {
            TrafficType.DD: [0, 3, 4],
            TrafficType.DU: [1, 2],
            TrafficType.RD: [0, 1, 3],
            TrafficType.RU: [2, 4],
        }
    )
    labels = {}
    for t in TrafficType:
        offset = 1 if t.is_direct else 6
        for i in range(5):
            labels[(t, i)] = i + offset
    return wl, labels


@dataclass(frozen=True)
class Block:
    """One 2-slot block of a frame.

    ``rate_relayed`` and ``rate_direct`` are normalized bits delivered to the
    served users. ``partial`` marks a block that could not pair two users.
    """

    scheme: SchemeKind
    relayed_type: TrafficType
    direct_type: TrafficType
    relayed: int | None
    direct: int | None
    rate_relayed: float
    rate_direct: float
    c_relay: float = 0.0
    c_direct: float = 0.0
    slots: float = 2.0

    @property
    def partial(self) -> bool:
        return self.scheme is not SchemeKind.REF and (self.relayed is None or self.direct is None)

    @property
    def coordinated(self) -> bool:
        return self.scheme is not SchemeKind.REF and not self.partial

    @property
    def bits(self) -> float:
        return self.rate_relayed + self.rate_direct


@dataclass(frozen=True)
class FrameSchedule:
    family: Family
    assignments: tuple[Block, ...]
    chosen_family: Family | None = field(default=None, compare=False)

    @property
    def frame_bits(self) -> float:
        return sum(b.bits for b in self.assignments)

    @property
    def frame_slots(self) -> float:
        return sum(b.slots for b in self.assignments)

    @property
    def bits_relayed(self) -> float:
        return sum(b.rate_relayed for b in self.assignments)

    @property
    def bits_direct(self) -> float:
        return sum(b.rate_direct for b in self.assignments)

    def served(self) -> dict[TrafficType, int | None]:
        """User index served for each traffic type (None for an idle slot)."""
        out = {}
        for b in self.assignments:
            out[b.direct_type] = b.direct
            out[b.relayed_type] = b.relayed
        return {t: out[t] for t in TrafficType}


class FrameRates:
    """Rate table of every scheme and (relayed, direct) pair for one frame."""

    def __init__(self, state: NetworkChannelState, backend: str | None = None):
        self.state = state
        self.table = kernels.pair_table(state, backend=backend)
        # pairing-independent single-user rates per 2-slot block
        self.ref_relayed = self.table[0, 0, :, 0]
        self.ref_direct = self.table[0, 1, 0, :]
        self.c_relay = 2.0 * self.ref_relayed
        self.c_direct = self.ref_direct

    def block(self, scheme: SchemeKind, relayed: int | None, direct: int | None,
              relayed_type: TrafficType | None = None,
              direct_type: TrafficType | None = None) -> Block:
        rt = relayed_type or scheme.relayed_type
        dt = direct_type or scheme.direct_type
        if relayed is not None and direct is not None and scheme is not SchemeKind.REF:
            row = _SCHEME_ROW[scheme]
            rel = float(self.table[row, 0, relayed, direct])
            dirc = float(self.table[row, 1, relayed, direct])
        else:
            rel = float(self.ref_relayed[relayed]) if relayed is not None else 0.0
            dirc = float(self.ref_direct[direct]) if direct is not None else 0.0
        return Block(
            scheme=scheme,
            relayed_type=rt,
            direct_type=dt,
            relayed=relayed,
            direct=direct,
            rate_relayed=rel,
            rate_direct=dirc,
            c_relay=float(self.c_relay[relayed]) if relayed is not None else 0.0,
            c_direct=float(self.c_direct[direct]) if direct is not None else 0.0,
        )

    def block_bits(self, scheme: SchemeKind, relayed: int | None, direct: int | None) -> float:
        return self.block(scheme, relayed, direct).bits

    def pair_bits(self, scheme: SchemeKind) -> np.ndarray:
        """Basic-block bits of ``scheme`` for all pairs, shape ``(k, k)`` as ``[r, d]``."""
        row = _SCHEME_ROW[scheme]
        return self.table[row, 0] + self.table[row, 1]


def _require(wl: WaitingList) -> None:
    if not wl:
        raise ValueError("all queues are empty")


def _frame(family: Family, blocks: list[Block], wl: WaitingList) -> FrameSchedule:
    for b in blocks:
        wl.remove(b.relayed_type, b.relayed)
        wl.remove(b.direct_type, b.direct)
    shown = family
    if family in FAMILY_SCHEMES and not any(b.coordinated for b in blocks):
        shown = Family.PARTIAL
    return FrameSchedule(shown, tuple(blocks), chosen_family=family)


def build_frame_reference(wl: WaitingList, state: NetworkChannelState,
                          rates: FrameRates | None = None) -> FrameSchedule:
    """Serve the head of every queue in its own slot."""
    _require(wl)
    rates = rates or FrameRates(state)
    blocks = [
        rates.block(SchemeKind.REF, wl.head(rt), wl.head(dt), rt, dt)
        for rt, dt in _REFERENCE_PAIRS
    ]
    return _frame(Family.REFERENCE, blocks, wl)


def build_frame_fixed(family: Family, wl: WaitingList, state: NetworkChannelState,
                      rates: FrameRates | None = None) -> FrameSchedule:
    """Pair queue heads first-in-first-out within a fixed scheme family."""
    _require(wl)
    family = Family(family)
    rates = rates or FrameRates(state)
    blocks = [
        rates.block(s, wl.head(s.relayed_type), wl.head(s.direct_type))
        for s in FAMILY_SCHEMES[family]
    ]
    return _frame(family, blocks, wl)


def _best_single(values: np.ndarray, users: list[int]) -> int | None:
    if not users:
        return None
    idx = np.asarray(sorted(users))
    return int(idx[np.argmax(values[idx])])


def _best_exhaustive(rates: FrameRates, scheme: SchemeKind, wl: WaitingList):
    rq, dq = wl[scheme.relayed_type], wl[scheme.direct_type]
    if rq and dq:
        r_idx, d_idx = np.asarray(sorted(rq)), np.asarray(sorted(dq))
        # rows = direct, cols = relayed: flat argmax gives the lexicographic tie-break
        sub = rates.pair_bits(scheme)[np.ix_(r_idx, d_idx)].T
        di, ri = np.unravel_index(int(np.argmax(sub)), sub.shape)
        return int(r_idx[ri]), int(d_idx[di])
    return _best_single(rates.ref_relayed, rq), _best_single(rates.ref_direct, dq)


def _best_direct_first(rates: FrameRates, scheme: SchemeKind, wl: WaitingList):
    rq, dq = wl[scheme.relayed_type], wl[scheme.direct_type]
    d = _best_single(rates.ref_direct, dq)
    if d is None or not rq:
        return _best_single(rates.ref_relayed, rq), d
    return _best_single(rates.pair_bits(scheme)[:, d], rq), d


def _best_relayed_first(rates: FrameRates, scheme: SchemeKind, wl: WaitingList):
    rq, dq = wl[scheme.relayed_type], wl[scheme.direct_type]
    r = _best_single(rates.ref_relayed, rq)
    if r is None or not dq:
        return r, _best_single(rates.ref_direct, dq)
    return r, _best_single(rates.pair_bits(scheme)[r, :], dq)


def _build_selective(pick, wl: WaitingList, state: NetworkChannelState,
                     rates: FrameRates | None) -> FrameSchedule:
    _require(wl)
    rates = rates or FrameRates(state)
    best = None
    for family in (Family.S34, Family.S12):
        blocks = [rates.block(s, *pick(rates, s, wl)) for s in FAMILY_SCHEMES[family]]
        total = sum(b.bits for b in blocks)
        if best is None or total > best[0]:
            best = (total, family, blocks)
    _, family, blocks = best
    return _frame(family, blocks, wl)


def build_frame_exhaustive(wl: WaitingList, state: NetworkChannelState,
                           rates: FrameRates | None = None) -> FrameSchedule:
    """Best pair per block over all candidates, then the better family.

    The two blocks of a family draw on disjoint queues, so maximizing each
    separately is the same as searching all four-user combinations jointly.
    """
    return _build_selective(_best_exhaustive, wl, state, rates)


def build_frame_bdcdr(wl: WaitingList, state: NetworkChannelState,
                      rates: FrameRates | None = None) -> FrameSchedule:
    """Best direct user (max BS link SNR) first, then its best relayed partner."""
    return _build_selective(_best_direct_first, wl, state, rates)


def build_frame_brcdr(wl: WaitingList, state: NetworkChannelState,
                      rates: FrameRates | None = None) -> FrameSchedule:
    """Best relayed user (max end-to-end AF SNR) first, then its best direct partner."""
    return _build_selective(_best_relayed_first, wl, state, rates)


def build_frame(kind: SchedulerKind, wl: WaitingList, state: NetworkChannelState,
                rates: FrameRates | None = None) -> FrameSchedule:
    kind = SchedulerKind(kind)
    if kind is SchedulerKind.REFERENCE:
        return build_frame_reference(wl, state, rates)
    if kind is SchedulerKind.FIXED_S12:
        return build_frame_fixed(Family.S12, wl, state, rates)
    if kind is SchedulerKind.FIXED_S34:
        return build_frame_fixed(Family.S34, wl, state, rates)
    if kind is SchedulerKind.EXHAUSTIVE:
        return build_frame_exhaustive(wl, state, rates)
    if kind is SchedulerKind.BDCDR:
        return build_frame_bdcdr(wl, state, rates)
    return build_frame_brcdr(wl, state, rates)


def brute_force_frame(wl: WaitingList, block_bits) -> tuple[float, Family, tuple]:
    """Joint enumeration of every four-user choice under both families.

    ``block_bits(scheme, relayed, direct)`` gives one block's bits. Returns
    ``(frame_bits, family, choice)`` where ``choice`` is
    ``((r_a, d_a), (r_b, d_b))`` for the family's two schemes. Does not
    modify ``wl``. Candidates are visited in tie-break order and only a
    strictly better total replaces the incumbent.
    """
    _require(wl)

    def options(t):
        q = sorted(wl[t])
        return q if q else [None]

    best = None
    for family in (Family.S34, Family.S12):
        sa, sb = FAMILY_SCHEMES[family]
        for da, ra, db, rb in itertools.product(
            options(sa.direct_type), options(sa.relayed_type),
            options(sb.direct_type), options(sb.relayed_type),
        ):
            total = block_bits(sa, ra, da) + block_bits(sb, rb, db)
            if best is None or total > best[0]:
                best = (total, family, ((ra, da), (rb, db)))
    return best
