import math

import numpy as np
import pytest

from cdrsim.channel import (
    ChannelDraw,
    NetworkChannelState,
    capacity,
    db_to_noise,
    draw_network,
    draw_rayleigh,
    extract_pair,
    make_rng,
    snr,
)


def test_draw_rayleigh_is_deterministic():
    a = [draw_rayleigh(make_rng(42)) for _ in range(3)]
    rng1, rng2 = make_rng(42), make_rng(42)
    seq1 = [draw_rayleigh(rng1) for _ in range(5)]
    seq2 = [draw_rayleigh(rng2) for _ in range(5)]
    assert seq1 == seq2
    assert a[0] == a[1] == seq1[0]
    assert isinstance(seq1[0], complex)


def test_draw_rayleigh_moments():
    h = draw_rayleigh(make_rng(7), 10**6)
    assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.01
    assert abs(np.mean(h.real)) < 0.01
    assert abs(np.mean(h.imag)) < 0.01
    assert abs(np.var(h.real) - 0.5) < 0.01


@pytest.mark.parametrize("h, n, expected", [(1 + 0j, 1.0, 1.0), (0j, 0.5, 0.0), (1 + 1j, 0.5, 4.0)])
def test_snr(h, n, expected):
    assert snr(h, n) == pytest.approx(expected)


@pytest.mark.parametrize("n", [0.0, -1.0])
def test_snr_rejects_nonpositive_noise(n):
    with pytest.raises(ValueError):
        snr(1j, n)


@pytest.mark.parametrize("gamma, expected", [(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)])
def test_capacity(gamma, expected):
    assert capacity(gamma) == expected


def test_capacity_rejects_negative():
    with pytest.raises(ValueError):
        capacity(-0.1)


def test_capacity_monotone():
    values = [capacity(g) for g in np.linspace(0, 50, 200)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_db_to_noise():
    assert db_to_noise(10.0) == pytest.approx(0.1)
    assert db_to_noise(0.0) == 1.0


def test_channel_draw_validation():
    with pytest.raises(ValueError):
        ChannelDraw(1, 1, 1, 1, 1, n=0.0)
    with pytest.raises(ValueError):
        ChannelDraw(complex(math.inf, 0), 1, 1, 1, 1, n=1.0)
    ch = ChannelDraw.from_gammas(1.0, 2.0, 3.0, 4.0, 5.0, n=0.5)
    assert ch.gammas == pytest.approx((1, 2, 3, 4, 5))
    assert ch.gamma_relay == pytest.approx(2.0 / 4.0)


def test_draw_network_single_user_has_five_gains():
    state = draw_network(1, 0.1, make_rng(3))
    ch = extract_pair(state, 0, 0)
    assert state.g_inter.shape == (1, 1)
    # same stream consumed in the same order as five single gains
    assert ch.gains == tuple(draw_rayleigh(make_rng(3), 5))


def test_draw_network_counts_and_determinism():
    k = 10
    a = draw_network(k, 0.1, make_rng(5))
    b = draw_network(k, 0.1, make_rng(5))
    total = 1 + a.g_rs_user.size + a.g_bs_user.size + a.g_inter.size + a.g_rs_direct.size
    assert total == 131
    assert a == b
    assert a != draw_network(k, 0.1, make_rng(6))


def test_network_state_is_immutable():
    state = draw_network(3, 0.1, make_rng(0))
    with pytest.raises(ValueError):
        state.g_inter[0, 0] = 0
    with pytest.raises(ValueError):
        NetworkChannelState(1, np.ones(2), np.ones(3), np.ones((2, 2)), np.ones(2), 0.1)


def test_draw_network_rejects_zero_users():
    with pytest.raises(ValueError):
        draw_network(0, 0.1, make_rng(0))


def test_extract_pair_index_structure():
    state = draw_network(4, 0.2, make_rng(9))
    a = extract_pair(state, 1, 2)
    assert a == extract_pair(state, 1, 2)
    b = extract_pair(state, 1, 3)
    assert (a.h1, a.h2) == (b.h1, b.h2)
    assert a.h3 != b.h3 and a.h4 != b.h4 and a.h5 != b.h5
    assert a.h2 == state.g_rs_user[1]
    assert a.h3 == state.g_bs_user[2]
    assert a.h4 == state.g_inter[1, 2]
    assert a.h5 == state.g_rs_direct[2]
    c = extract_pair(state, 0, 2)
    assert c.h1 == a.h1 and (c.h3, c.h5) == (a.h3, a.h5) and c.h2 != a.h2


@pytest.mark.parametrize("pair", [(4, 0), (0, 4), (-1, 0)])
def test_extract_pair_out_of_range(pair):
    state = draw_network(4, 0.2, make_rng(9))
    with pytest.raises(IndexError):
        extract_pair(state, *pair)
