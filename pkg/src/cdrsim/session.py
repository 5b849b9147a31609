"""Session generation, frame-by-frame execution and Monte Carlo sweeps.

A session starts with one request per user; frames are scheduled until every
request is served, with fresh channels each frame. Throughput is delivered
normalized bits over consumed slots, idle slots included.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .channel import db_to_noise, draw_network, draw_pairs, make_rng
from .scheduler import FrameSchedule, SchedulerKind, TrafficType, WaitingList, build_frame
from .schemes import SchemeKind, check_lambda, prioritize

__all__ = [
    "AggregateStats",
    "SessionConfig",
    "SessionResult",
    "apply_priority",
    "generate_session",
    "lambda_sweep",
    "run_monte_carlo",
    "run_session",
    "session_rng",
]

DEFAULT_LAMBDA_GRID = tuple(round(x, 1) for x in np.arange(-0.8, 0.81, 0.2))
SWEEP_SCHEMES = (SchemeKind.REF, SchemeKind.S1, SchemeKind.S2, SchemeKind.S3, SchemeKind.S4)


@dataclass(frozen=True)
class SessionConfig:
    k: int = 10
    p_u: float = 0.5
    n: float = 0.1
    lam: float = 0.0
    scheduler: SchedulerKind = SchedulerKind.EXHAUSTIVE
    sessions: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be at least 1, got {self.k}")
        if self.sessions < 1:
            raise ValueError(f"sessions must be at least 1, got {self.sessions}")
        if not 0.0 <= self.p_u <= 1.0:
            raise ValueError(f"p_u must lie in [0, 1], got {self.p_u}")
        if not (self.n > 0 and math.isfinite(self.n)):
            raise ValueError(f"noise power must be positive, got {self.n}")
        if self.seed < 0:
            raise ValueError(f"seed must be nonnegative, got {self.seed}")
        check_lambda(self.lam)
        object.__setattr__(self, "scheduler", SchedulerKind(self.scheduler))

    @classmethod
    def from_snr_db(cls, snr_db: float, **kwargs) -> "SessionConfig":
        return cls(n=db_to_noise(snr_db), **kwargs)

    @property
    def snr_db(self) -> float:
        return -10.0 * math.log10(self.n)


@dataclass
class SessionResult:
    total_bits: float = 0.0
    total_slots: float = 0.0
    bits_relayed: float = 0.0
    bits_direct: float = 0.0
    served: int = 0
    frames: int = 0
    per_frame_records: list[FrameSchedule] = field(default_factory=list)

    @property
    def throughput(self) -> float:
        return self.total_bits / self.total_slots if self.total_slots else 0.0


@dataclass(frozen=True)
class AggregateStats:
    mean_throughput: float
    std_error: float
    mean_rate_relayed: float
    mean_rate_direct: float
    sessions: int
    mean_frames: float


def session_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream of session ``index``; same as ``SeedSequence(seed).spawn``."""
    return make_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def generate_session(cfg: SessionConfig, rng: np.random.Generator) -> WaitingList:
    """One request per user: uplink with probability ``p_u``, else downlink."""
    up_direct = rng.random(cfg.k) < cfg.p_u
    up_relayed = rng.random(cfg.k) < cfg.p_u
    return WaitingList(
        {
            TrafficType.DD: np.flatnonzero(~up_direct),
            TrafficType.DU: np.flatnonzero(up_direct),
            TrafficType.RD: np.flatnonzero(~up_relayed),
            TrafficType.RU: np.flatnonzero(up_relayed),
        }
    )


def apply_priority(frame: FrameSchedule, lam: float) -> FrameSchedule:
    """Reapportion time inside every fully coordinated block of ``frame``."""
    if lam == 0.0:
        return frame
    blocks = []
    for b in frame.assignments:
        if b.coordinated:
            rel, dirc = prioritize(b.rate_relayed, b.rate_direct, b.c_direct, b.c_relay, lam)
            b = replace(b, rate_relayed=rel, rate_direct=dirc)
        blocks.append(b)
    return replace(frame, assignments=tuple(blocks))


def run_session(cfg: SessionConfig, wl: WaitingList, rng: np.random.Generator,
                keep_records: bool = True) -> SessionResult:
    """Schedule frames until ``wl`` is empty; ``wl`` is consumed."""
    result = SessionResult()
    while wl:
        before = len(wl)
        state = draw_network(cfg.k, cfg.n, rng)
        frame = apply_priority(build_frame(cfg.scheduler, wl, state), cfg.lam)
        if len(wl) == before:
            raise RuntimeError("scheduler served no request")
        result.served += before - len(wl)
        result.frames += 1
        result.total_bits += frame.frame_bits
        result.total_slots += frame.frame_slots
        result.bits_relayed += frame.bits_relayed
        result.bits_direct += frame.bits_direct
        if keep_records:
            result.per_frame_records.append(frame)
    return result


def _session_numbers(cfg: SessionConfig, index: int) -> tuple[float, float, float, int]:
    rng = session_rng(cfg.seed, index)
    wl = generate_session(cfg, rng)
    res = run_session(cfg, wl, rng, keep_records=False)
    slots = res.total_slots
    return res.total_bits / slots, res.bits_relayed / slots, res.bits_direct / slots, res.frames


def _run_chunk(cfg: SessionConfig, start: int, stop: int, backend: str) -> list:
    kernels.set_backend(backend)
    return [_session_numbers(cfg, i) for i in range(start, stop)]


def run_monte_carlo(cfg: SessionConfig, workers: int = 1) -> AggregateStats:
    """Average session throughput over ``cfg.sessions`` independent sessions.

    Session ``i`` always uses substream ``i`` of ``cfg.seed``, and results are
    combined in session order, so the output does not depend on ``workers``.
    """
    backend = kernels.get_backend()
    if workers <= 1:
        rows = _run_chunk(cfg, 0, cfg.sessions, backend)
    else:
        bounds = np.linspace(0, cfg.sessions, min(workers * 4, cfg.sessions) + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_chunk, cfg, int(a), int(b), backend)
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            rows = [row for fut in futures for row in fut.result()]
    data = np.array(rows, dtype=float)
    count = len(data)
    tput = data[:, 0]
    mean = math.fsum(tput) / count
    std_error = float(np.std(tput, ddof=1) / math.sqrt(count)) if count > 1 else 0.0
    return AggregateStats(
        mean_throughput=mean,
        std_error=std_error,
        mean_rate_relayed=math.fsum(data[:, 1]) / count,
        mean_rate_direct=math.fsum(data[:, 2]) / count,
        sessions=count,
        mean_frames=math.fsum(data[:, 3]) / count,
    )


def lambda_sweep(base: SessionConfig, grid, draws: int | None = None) -> list[dict]:
    """Two-user per-block rates versus the prioritizing factor.

    The same ``draws`` channel realizations (default ``base.sessions``) are
    used at every grid point. Returns one row per (lambda, scheme) with the
    mean relayed, direct and total bits per block and the standard error of
    the total. The reference scheme does not depend on ``lambda``.
    """
    grid = [check_lambda(lam) for lam in grid]
    if not grid:
        raise ValueError("empty lambda grid")
    draws = draws or base.sessions
    h = draw_pairs(draws, base.n, make_rng(base.seed))
    rates = kernels.scheme_rates(*h, base.n)
    c_direct = rates[0, 1]
    c_relay = 2.0 * rates[0, 0]
    rows = []
    for lam in grid:
        for i, scheme in enumerate(SWEEP_SCHEMES):
            rel, dirc = rates[i, 0], rates[i, 1]
            if scheme is not SchemeKind.REF:
                rel, dirc = prioritize(rel, dirc, c_direct, c_relay, lam)
            total = rel + dirc
            rows.append(
                {
                    "lambda": lam,
                    "scheme": scheme.value,
                    "rate_relayed_mean": float(np.mean(rel)),
                    "rate_direct_mean": float(np.mean(dirc)),
                    "sum_mean": float(np.mean(total)),
                    "std_err": float(np.std(total, ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0,
                }
            )
    return rows
