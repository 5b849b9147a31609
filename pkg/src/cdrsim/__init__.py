"""Coordinated direct/relay transmission in relay-aided cells.

Closed-form two-user rates, an MMSE virtual-MIMO receiver, multi-user
schedulers and a Monte Carlo session simulator.
"""
from .channel import ChannelDraw, NetworkChannelState, capacity, draw_network, extract_pair, snr
from .scheduler import FrameSchedule, SchedulerKind, WaitingList
from .schemes import RatePair, SchemeKind, TrafficType
from .session import AggregateStats, SessionConfig, lambda_sweep, run_monte_carlo

__version__ = "0.1.0"

__all__ = [
    "AggregateStats",
    "ChannelDraw",
    "FrameSchedule",
    "NetworkChannelState",
    "RatePair",
    "SchedulerKind",
    "SchemeKind",
    "SessionConfig",
    "TrafficType",
    "WaitingList",
    "capacity",
    "draw_network",
    "extract_pair",
    "lambda_sweep",
    "run_monte_carlo",
    "snr",
]
