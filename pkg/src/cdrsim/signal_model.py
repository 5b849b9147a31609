"""Sample-level signal models of each scheme, used as a numerical oracle.

Received samples are written as linear combinations of unit-power data
symbols and independent noise terms of power ``n``. The relay gain is derived
from the power actually entering the RS, and SINRs come from a generic
whitened quadratic form solved with ``numpy.linalg``. Nothing here reuses the
closed-form expressions in :mod:`cdrsim.schemes`.
"""
from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .channel import ChannelDraw
from .schemes import SchemeKind

__all__ = ["Signal", "oracle_sinrs", "received_signals", "sinr"]


class Signal:
    """A received sample ``sum_s c_s * s`` over named symbols and noises.

    Names starting with ``z`` are noise terms of power ``n``; the rest are
    unit-power data symbols.
    """

    def __init__(self, terms=None):
        self.terms = defaultdict(complex, terms or {})

    def __add__(self, other: "Signal") -> "Signal":
        out = Signal(self.terms)
        for name, coef in other.terms.items():
            out.terms[name] += coef
        return out

    def __rmul__(self, scale: complex) -> "Signal":
        return Signal({name: scale * c for name, c in self.terms.items()})

    def power(self, n: float) -> float:
        return sum(abs(c) ** 2 * (n if name.startswith("z") else 1.0) for name, c in self.terms.items())

    def cancel(self, known) -> "Signal":
        return Signal({name: c for name, c in self.terms.items() if name not in known})


def _tx(**terms) -> Signal:
    return Signal(terms)


def _forward(y_rs: Signal, n: float) -> Signal:
    """Unit-power amplify-and-forward of the RS observation."""
    return math.sqrt(1.0 / y_rs.power(n)) * y_rs


def sinr(branches, desired: str, n: float, known=()) -> float:
    """Linear MMSE SINR of ``desired`` from the stacked ``branches``.

    Symbols in ``known`` are cancelled first; every other symbol is treated
    as interference.
    """
    branches = [b.cancel(known) for b in branches]
    names = set().union(*(b.terms for b in branches))
    names.discard(desired)
    if len(branches) == 1:
        t = branches[0].terms
        spread = sum(abs(t[s]) ** 2 * (n if s.startswith("z") else 1.0) for s in names)
        return abs(t.get(desired, 0j)) ** 2 / spread
    names = sorted(names)
    h = np.array([b.terms.get(desired, 0j) for b in branches])
    v = np.array([[b.terms.get(s, 0j) for b in branches] for s in names])
    w = np.array([n if s.startswith("z") else 1.0 for s in names])
    cov = (v.T * w) @ v.conj()
    return float(np.real(h.conj() @ np.linalg.solve(cov, h)))


def received_signals(kind: SchemeKind, ch: ChannelDraw) -> dict:
    """Received samples per node and slot for one block."""
    h1, h2, h3, h4, h5 = ch.gains
    n = ch.n
    if kind is SchemeKind.REF:
        y_r = _tx(x1=h1, zR1=1.0)
        return {
            "y_R1": y_r,
            "y_11": h2 * _forward(y_r, n) + _tx(z1=1.0),
            "y_B2": _tx(x2=h3, zB=1.0),
        }
    if kind is SchemeKind.S1:
        y_r = _tx(x1=h1, zR1=1.0)
        f = _forward(y_r, n)
        return {
            "y_R1": y_r,
            "y_12": h2 * f + _tx(x2=h4, z1=1.0),
            "y_B2": h1 * f + _tx(x2=h3, zB=1.0),
        }
    if kind is SchemeKind.S2:
        y_r = _tx(x3=h2, x4=h1, zR1=1.0)
        f = _forward(y_r, n)
        return {
            "y_R1": y_r,
            "y_21": _tx(x3=h4, x4=h3, z21=1.0),
            "y_B2": h1 * f + _tx(zB=1.0),
            "y_22": h5 * f + _tx(z22=1.0),
        }
    if kind is SchemeKind.S3:
        y_r = _tx(x1=h1, zR1=1.0)
        f = _forward(y_r, n)
        return {
            "y_R1": y_r,
            "y_21": _tx(x1=h3, z21=1.0),
            "y_12": h2 * f + _tx(z1=1.0),
            "y_22": h5 * f + _tx(x4=h3, z22=1.0),
        }
    if kind is SchemeKind.S4:
        y_r = _tx(x3=h2, x2=h5, zR1=1.0)
        return {
            "y_R1": y_r,
            "y_B1": _tx(x2=h3, zB1=1.0),
            "y_B2": h1 * _forward(y_r, n) + _tx(zB2=1.0),
        }
    raise ValueError(kind)


def oracle_sinrs(kind: SchemeKind, ch: ChannelDraw) -> tuple[float, float]:
    """(relayed, direct) end-to-end SINRs computed from the signal model."""
    y = received_signals(kind, ch)
    n = ch.n
    if kind is SchemeKind.REF:
        return sinr([y["y_11"]], "x1", n), sinr([y["y_B2"]], "x2", n)
    if kind is SchemeKind.S1:
        return sinr([y["y_12"]], "x1", n), sinr([y["y_B2"]], "x2", n, known={"x1"})
    if kind is SchemeKind.S2:
        return (
            sinr([y["y_B2"]], "x3", n, known={"x4"}),
            sinr([y["y_21"], y["y_22"]], "x4", n),
        )
    if kind is SchemeKind.S3:
        return sinr([y["y_12"]], "x1", n), sinr([y["y_21"], y["y_22"]], "x4", n)
    if kind is SchemeKind.S4:
        branches = [y["y_B1"], y["y_B2"]]
        return sinr(branches, "x3", n), sinr(branches, "x2", n)
    raise ValueError(kind)
