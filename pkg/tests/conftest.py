"""Shared helpers: synthetic channel tables and an independent objective oracle."""

import math

import numpy as np
import pytest

from vlcsec import ChannelTable, NoiseModel
from vlcsec.scenario import _has_one_to_one_assignment

NOISE_W = 1.5848931924611133e-13  # -98 dBm


def make_table(
    rng: np.random.Generator,
    num_leds: int | None = None,
    num_ues: int | None = None,
    zero_frac: float = 0.35,
    power: float = 0.2,
) -> ChannelTable:
    """Random feasible synthetic table whose invariants hold by construction."""
    k = int(num_leds) if num_leds else int(rng.integers(2, 7))
    m = int(num_ues) if num_ues else int(rng.integers(1, min(k, 3) + 1))
    while True:
        gains = rng.uniform(1e-6, 1e-4, size=(k, m))
        gains[rng.random((k, m)) < zero_frac] = 0.0
        reachable = [tuple(int(j) for j in np.nonzero(gains[:, col] > 0)[0]) for col in range(m)]
        if not all(reachable):
            continue
        if not _has_one_to_one_assignment(reachable, k):
            continue
        break
    eve_gains = rng.uniform(0.0, 1e-4, size=k)
    eve_gains[rng.random(k) < 0.5] = 0.0
    return ChannelTable(
        gains=gains,
        eve_gains=eve_gains,
        reachable_sets=tuple(reachable),
        eve_reachable_set=tuple(int(j) for j in np.nonzero(eve_gains > 0)[0]),
        led_powers=np.full(k, power),
    )


def naive_sum_secrecy(table: ChannelTable, indices, noise_var: float) -> float:
    """Plain-loop reference objective, written independently of the evaluator."""
    c = math.e / (2.0 * math.pi)
    total = 0.0
    m_count = len(indices)
    for m in range(m_count):
        sig = (table.led_powers[indices[m]] * table.gains[indices[m], m]) ** 2
        interf = sum(
            (table.led_powers[indices[j]] * table.gains[indices[j], m]) ** 2
            for j in range(m_count)
            if j != m
        )
        r_ue = 0.5 * math.log2(1.0 + c * sig / (interf + noise_var))
        esig = (table.led_powers[indices[m]] * table.eve_gains[indices[m]]) ** 2
        einterf = sum(
            (table.led_powers[indices[j]] * table.eve_gains[indices[j]]) ** 2
            for j in range(m_count)
            if j != m
        )
        r_eve = 0.5 * math.log2(1.0 + c * esig / (einterf + noise_var))
        total += max(0.0, r_ue - r_eve)
    return total


def some_feasible(table: ChannelTable) -> tuple[int, ...]:
    """First feasible vector in lexicographic order, found by backtracking."""

    def descend(m: int, taken: frozenset) -> tuple[int, ...] | None:
        if m == table.num_ues:
            return ()
        for k in table.reachable_sets[m]:
            if k in taken:
                continue
            rest = descend(m + 1, taken | {k})
            if rest is not None:
                return (k,) + rest
        return None

    found = descend(0, frozenset())
    assert found is not None
    return found


@pytest.fixture
def noise() -> NoiseModel:
    return NoiseModel(NOISE_W)
