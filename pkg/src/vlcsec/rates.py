"""Achievable-rate and secrecy-rate evaluation for LED assignments.

Rates use the IM/DD capacity lower bound: an SINR scaled by e/(2 pi)
inside a (1/2) log2(1 + .) expression. Every selected LED transmits at
its configured power; the unit-variance symbol is amplitude-scaled by
that power, so received electrical signal power is (P * h)^2. LEDs not
selected by any user carry illumination only and contribute no
interference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelTable
from .errors import InfeasibleAssignmentError, InvalidParameterError

# e / (2 pi), the SINR scale of the capacity lower bound.
CAPACITY_LB_FACTOR = math.e / (2.0 * math.pi)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise InvalidParameterError(f"power {watts} W has no dBm representation")
    return 10.0 * math.log10(watts) + 30.0


@dataclass(frozen=True)
class NoiseModel:
    """Additive electrical noise variance at the receiver, in watts."""

    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise InvalidParameterError(f"noise variance {self.variance} must be > 0")

    @classmethod
    def from_dbm(cls, dbm: float) -> "NoiseModel":
        return cls(dbm_to_watts(dbm))


@dataclass(frozen=True)
class Assignment:
    """One LED index per user; indices must be distinct and reachable."""

    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)


@dataclass(frozen=True)
class RateReport:
    """Per-user rates, eavesdropper rates, and the hinge secrecy rates."""

    ue_rates: np.ndarray
    eve_rates: np.ndarray
    secrecy_rates: np.ndarray
    sum_secrecy_rate: float


def validate_assignment(table: ChannelTable, assignment: Assignment) -> None:
    """Raise InfeasibleAssignmentError on duplicate or unreachable LEDs."""
    idx = assignment.indices
    if len(idx) != table.num_ues:
        raise InfeasibleAssignmentError(
            f"assignment length {len(idx)} != number of UEs {table.num_ues}"
        )
    if len(set(idx)) != len(idx):
        raise InfeasibleAssignmentError(f"duplicate LED in assignment {idx}")
    for m, k in enumerate(idx):
        if k not in table.reachable_sets[m]:
            raise InfeasibleAssignmentError(f"LED {k} is not reachable by UE {m}")


class SecrecyEvaluator:
    """Vectorized objective evaluation over one channel table.

    Precomputes electrical signal powers once so that candidate
    assignments, single or batched, are scored with a handful of array
    operations. ``calls`` counts objective evaluations, one per scored
    assignment vector.
    """

    def __init__(self, table: ChannelTable, noise: NoiseModel):
        self.table = table
        self.noise_var = noise.variance
        # (K, M) received electrical signal power per LED/user pair.
        self.sig = (table.led_powers[:, None] * table.gains) ** 2
        # (K,) received electrical signal power per LED at the eavesdropper.
        self.eve_sig = (table.led_powers * table.eve_gains) ** 2
        self.calls = 0

    def _rate_arrays(self, batch: np.ndarray):
        # batch: (C, M) integer LED indices.
        m_count = batch.shape[1]
        a = self.sig[batch, :]  # (C, M, M): a[c, j, m] = power of LED x_j at UE m
        own = np.einsum("cmm->cm", a)
        interference = a.sum(axis=1) - own
        ue = 0.5 * np.log2(
            1.0 + CAPACITY_LB_FACTOR * own / (interference + self.noise_var)
        )
        if m_count == 0:
            eve = np.zeros_like(ue)
        else:
            e = self.eve_sig[batch]  # (C, M)
            eve = 0.5 * np.log2(
                1.0
                + CAPACITY_LB_FACTOR
                * e
                / (e.sum(axis=1, keepdims=True) - e + self.noise_var)
            )
        secrecy = np.maximum(ue - eve, 0.0)
        return ue, eve, secrecy

    def values(self, batch: np.ndarray) -> np.ndarray:
        """Sum secrecy rate of each row of a (C, M) index batch."""
        batch = np.asarray(batch, dtype=np.intp)
        self.calls += batch.shape[0]
        _, _, secrecy = self._rate_arrays(batch)
        return secrecy.sum(axis=1)

    def value(self, indices: np.ndarray) -> float:
        return float(self.values(np.asarray(indices, dtype=np.intp)[None, :])[0])

    def report(self, indices: np.ndarray) -> RateReport:
        batch = np.asarray(indices, dtype=np.intp)[None, :]
        self.calls += 1
        ue, eve, secrecy = self._rate_arrays(batch)
        return RateReport(
            ue_rates=ue[0],
            eve_rates=eve[0],
            secrecy_rates=secrecy[0],
            sum_secrecy_rate=float(secrecy[0].sum()),
        )


def rate_report(
    table: ChannelTable, assignment: Assignment, noise: NoiseModel
) -> RateReport:
    """Full per-user rate breakdown for a feasible assignment."""
    validate_assignment(table, assignment)
    return SecrecyEvaluator(table, noise).report(assignment.as_array())


def ue_rate(
    table: ChannelTable, assignment: Assignment, m: int, noise: NoiseModel
) -> float:
    """Achievable rate of user m under inter-user interference."""
    return float(rate_report(table, assignment, noise).ue_rates[m])


def eve_rate(
    table: ChannelTable, assignment: Assignment, m: int, noise: NoiseModel
) -> float:
    """Eavesdropper rate when overhearing the LED serving user m."""
    return float(rate_report(table, assignment, noise).eve_rates[m])


def secrecy_rate(
    table: ChannelTable, assignment: Assignment, m: int, noise: NoiseModel
) -> float:
    """Hinge secrecy rate max(0, user rate - eavesdropper rate) for user m."""
    return float(rate_report(table, assignment, noise).secrecy_rates[m])


def sum_secrecy_rate(
    table: ChannelTable, assignment: Assignment, noise: NoiseModel
) -> float:
    """The optimization objective: total secrecy rate over all users."""
    return rate_report(table, assignment, noise).sum_secrecy_rate
