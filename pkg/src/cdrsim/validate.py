"""Self-checks of the closed forms, kernels and schedulers against oracles.

Each check returns a :class:`CheckResult`; :func:`run_checks` runs them all.
Functions are looked up on their modules at call time so a patched
implementation is what gets checked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, mmse, scheduler, schemes, signal_model
from .channel import ChannelDraw, draw_network, draw_rayleigh, make_rng
from .schemes import SchemeKind
from .session import SessionConfig, generate_session

__all__ = ["CheckResult", "random_draw", "random_mimo", "run_checks"]

_CLOSED = {
    SchemeKind.REF: "sinr_reference",
    SchemeKind.S1: "sinr_s1",
    SchemeKind.S2: "sinr_s2",
    SchemeKind.S3: "sinr_s3",
    SchemeKind.S4: "sinr_s4",
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-12)


def random_draw(rng: np.random.Generator) -> ChannelDraw:
    """Random two-user draw at an average SNR between -10 and 30 dB."""
    n = 10.0 ** rng.uniform(-3.0, 1.0)
    return ChannelDraw(*draw_rayleigh(rng, 5), n=n)


def random_mimo(rng: np.random.Generator, position: mmse.AlphaPosition) -> mmse.VirtualMimo:
    g = draw_rayleigh(rng, 4)
    return mmse.VirtualMimo(
        *(complex(x) for x in g),
        n=10.0 ** rng.uniform(-2.0, 1.0),
        alpha=10.0 ** rng.uniform(-1.0, 1.0),
        alpha_position=position,
    )


def check_mmse(count: int, rng: np.random.Generator, tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    for position in mmse.AlphaPosition:
        for _ in range(count):
            m = random_mimo(rng, position)
            worst = max(worst, _rel(mmse.sinr_mmse_closed(m), mmse.sinr_mmse_oracle(m)))
    return CheckResult(
        "mmse closed form vs whitened oracle",
        worst <= tol,
        f"{2 * count} systems, max rel err {worst:.2e} (tol {tol:g})",
    )


def check_scheme_oracle(count: int, rng: np.random.Generator, tol: float = 1e-9) -> CheckResult:
    worst = {kind: 0.0 for kind in SchemeKind}
    for _ in range(count):
        ch = random_draw(rng)
        for kind in SchemeKind:
            closed = getattr(schemes, _CLOSED[kind])(ch)
            oracle = signal_model.oracle_sinrs(kind, ch)
            worst[kind] = max(worst[kind], *(_rel(c, o) for c, o in zip(closed, oracle)))
    bad = [k.value for k, w in worst.items() if w > tol]
    summary = ", ".join(f"{k.value} {w:.1e}" for k, w in worst.items())
    return CheckResult(
        "scheme SINRs vs signal-model oracle",
        not bad,
        f"{count} draws, max rel err {summary}" + (f"; failing {bad}" if bad else ""),
    )


def check_kernels(count: int, rng: np.random.Generator, tol: float = 1e-12) -> CheckResult:
    draws = [random_draw(rng) for _ in range(count)]
    expected = np.array(
        [[[schemes.rate(kind, ch).rate_relayed for ch in draws],
          [schemes.rate(kind, ch).rate_direct for ch in draws]] for kind in SchemeKind]
    )
    worst = {}
    for backend in kernels.available_backends():
        got = np.empty_like(expected)
        for i, ch in enumerate(draws):
            got[:, :, i] = kernels.scheme_rates(*([h] for h in ch.gains), ch.n, backend=backend)[:, :, 0]
        worst[backend] = float(np.max(np.abs(got - expected) / np.maximum(np.abs(expected), 1e-12)))
    ok = all(w <= tol for w in worst.values())
    return CheckResult(
        "rate kernels vs scalar schemes",
        ok,
        ", ".join(f"{b} {w:.1e}" for b, w in worst.items()) + f" (tol {tol:g})",
    )


def check_inequalities(count: int, rng: np.random.Generator) -> CheckResult:
    violations = {"S4 direct >= g3": 0, "S3 direct <= g3": 0, "S3 relayed == gR": 0,
                  "S1 relayed < gR": 0, "S1 relayed == gR at g4=0": 0}
    for i in range(count):
        ch = random_draw(rng)
        g1, g2, g3, g4, g5 = ch.gammas
        g_r = schemes.sinr_reference(ch)[0]
        violations["S4 direct >= g3"] += schemes.sinr_s4(ch)[1] < g3
        violations["S3 direct <= g3"] += schemes.sinr_s3(ch)[1] > g3
        violations["S3 relayed == gR"] += schemes.sinr_s3(ch)[0] != g_r
        violations["S1 relayed < gR"] += not schemes.sinr_s1(ch)[0] < g_r
        if i % 10 == 0:
            silent = ChannelDraw(ch.h1, ch.h2, ch.h3, 0j, ch.h5, n=ch.n)
            violations["S1 relayed == gR at g4=0"] += (
                schemes.sinr_s1(silent)[0] != schemes.sinr_reference(silent)[0]
            )
    total = sum(violations.values())
    detail = f"{count} draws, violations " + ", ".join(f"{k}: {v}" for k, v in violations.items())
    return CheckResult("scheme inequalities", total == 0, detail)


def check_priority(count: int, rng: np.random.Generator, eps: float = 1e-9, tol: float = 1e-6) -> CheckResult:
    worst = 0.0
    exact = True
    for _ in range(count):
        ch = random_draw(rng)
        for kind in (SchemeKind.S1, SchemeKind.S2, SchemeKind.S3, SchemeKind.S4):
            base = schemes.rate(kind, ch)
            zero = schemes.rate_prioritized(kind, ch, 0.0)
            exact &= zero == base
            for lam in (eps, -eps):
                worst = max(worst, abs(schemes.rate_prioritized(kind, ch, lam).bits - base.bits))
    return CheckResult(
        "prioritization continuity at lambda = 0",
        exact and worst < tol,
        f"{count} draws, max |bits(+-{eps:g}) - bits(0)| {worst:.1e}, lambda=0 exact: {exact}",
    )


def scheduler_instances(count: int, rng: np.random.Generator, ks=(1, 2, 3)):
    """Random (waiting list, channel state) pairs for scheduler checks."""
    for i in range(count):
        k = ks[i % len(ks)]
        cfg = SessionConfig(k=k, p_u=float(rng.uniform(0.2, 0.8)), n=10.0 ** rng.uniform(-2, 0.5), sessions=1)
        wl = generate_session(cfg, rng)
        if not wl:
            continue
        yield wl, draw_network(k, cfg.n, rng)


# the reference discipline can beat every coordinated one on a given draw
DOMINATED = (
    scheduler.SchedulerKind.FIXED_S12,
    scheduler.SchedulerKind.FIXED_S34,
    scheduler.SchedulerKind.BDCDR,
    scheduler.SchedulerKind.BRCDR,
)


def _selection(frame: scheduler.FrameSchedule):
    return tuple((b.relayed, b.direct) for b in frame.assignments)


def check_scheduler(count: int, rng: np.random.Generator) -> tuple[CheckResult, CheckResult]:
    mismatched = 0
    dominated = {kind: 0 for kind in DOMINATED}
    seen = 0
    for wl, state in scheduler_instances(count, rng):
        seen += 1
        rates = scheduler.FrameRates(state)
        bits, family, choice = scheduler.brute_force_frame(wl, rates.block_bits)
        frame = scheduler.build_frame_exhaustive(wl.copy(), state, rates)
        if frame.frame_bits != bits or frame.chosen_family is not family or _selection(frame) != choice:
            mismatched += 1
        for kind in dominated:
            other = scheduler.build_frame(kind, wl.copy(), state, rates)
            if other.frame_bits / other.frame_slots > frame.frame_bits / frame.frame_slots:
                dominated[kind] += 1
    equiv = CheckResult(
        "exhaustive scheduler vs joint enumeration",
        mismatched == 0,
        f"{seen} instances (k in 1..3), mismatches {mismatched}",
    )
    dom = CheckResult(
        "exhaustive dominates CDR disciplines per frame",
        not any(dominated.values()),
        f"{seen} instances, violations " + ", ".join(f"{k.value}: {v}" for k, v in dominated.items()),
    )
    return equiv, dom


def _guarded(name: str, fn, *args) -> list[CheckResult]:
    # a broken implementation may raise instead of returning a wrong number
    try:
        out = fn(*args)
    except (ArithmeticError, ValueError, RuntimeError, IndexError) as exc:
        return [CheckResult(name, False, f"raised {type(exc).__name__}: {exc}")]
    return list(out) if isinstance(out, tuple) else [out]


def run_checks(draws: int = 10_000, seed: int = 0) -> list[CheckResult]:
    """Run every self-check; ``draws`` scales the sample counts."""
    rng = make_rng(seed)
    small = max(draws // 10, 10)
    plan = [
        ("mmse closed form vs whitened oracle", check_mmse, draws),
        ("scheme SINRs vs signal-model oracle", check_scheme_oracle, draws),
        ("rate kernels vs scalar schemes", check_kernels, small),
        ("scheme inequalities", check_inequalities, draws),
        ("prioritization continuity at lambda = 0", check_priority, small),
        ("scheduler checks", check_scheduler, max(draws // 10, 100)),
    ]
    results = []
    for name, fn, count in plan:
        results.extend(_guarded(name, fn, count, rng))
    return results


def summarize(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results) and bool(results)
