"""Tabu search over LED assignments.

The search walks the space of feasible assignment vectors. Each iteration
builds M candidate moves, one per user coordinate: candidate q keeps the
current vector except that user q is handed a different reachable LED,
drawn uniformly among those not already in use (a singleton reachable set
leaves the coordinate pinned). Candidates are ranked by sum secrecy rate
and the best acceptable one is committed. A candidate is acceptable when
it beats the incumbent best solution (aspiration), or when every
(LED, user) pair it changes into is off cool-down. Committed changes are
frozen for M iterations via a cool-down matrix indexed (LED, user), which
blocks a quick return to just-abandoned links without pinning the links
the move retains. The run stops at the iteration cap, or once the current
vector has repeated beyond a threshold while sitting at a local maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import ChannelTable
from .errors import InvalidParameterError
from .rates import Assignment, NoiseModel, SecrecyEvaluator, sum_secrecy_rate
from .strategies import random_feasible_indices


def _as_index_array(assignment) -> np.ndarray:
    if isinstance(assignment, Assignment):
        return assignment.as_array()
    return np.asarray(assignment, dtype=np.intp)


@dataclass(frozen=True)
class TsConfig:
    """Tabu search parameters.

    ``max_iterations`` and ``repetition_threshold`` default to 50*M and M
    when left as None; the seed is mandatory so runs are reproducible.
    """

    rng_seed: int
    max_iterations: int | None = None
    repetition_threshold: int | None = None

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise InvalidParameterError("max_iterations must be >= 1")
        if self.repetition_threshold is not None and self.repetition_threshold < 1:
            raise InvalidParameterError("repetition_threshold must be >= 1")

    def resolved(self, num_ues: int) -> tuple[int, int]:
        max_iter = self.max_iterations or 50 * num_ues
        threshold = self.repetition_threshold or max(1, num_ues)
        return max_iter, threshold


@dataclass
class TabuState:
    """Mutable search state: cool-down matrix, incumbent, and counters."""

    tabu: np.ndarray  # (K, M) remaining forbidden iterations per (LED, user)
    current: np.ndarray
    current_value: float
    best: np.ndarray
    best_value: float
    iteration: int = 0
    repetition_count: int = 0
    local_max_flag: bool = False


class TraceRecord(NamedTuple):
    iteration: int
    current_value: float
    best_value: float
    evaluations: int


def generate_neighborhood(
    state: TabuState, table: ChannelTable, rng: np.random.Generator
) -> list[np.ndarray]:
    """Draw M candidate vectors around the current assignment.

    Candidate q reassigns user q to an LED sampled uniformly from that
    user's reachable set minus the LED it currently uses; a singleton
    reachable set pins the coordinate and the candidate collapses to the
    current vector. Drawing an LED held by another user displaces that
    user, who is repaired onto a uniformly chosen LED among those left
    free (including the one user q just vacated, so plain two-user swaps
    are reachable). A candidate whose repair dead-ends also collapses to
    the current vector, which is always feasible.
    """
    m_count = table.num_ues
    current = state.current
    in_use = {int(k) for k in current}
    candidates = []
    for q in range(m_count):
        candidate = current.copy()
        pool = [k for k in table.reachable_sets[q] if k != current[q]]
        if not pool:
            candidates.append(candidate)
            continue
        new_led = int(rng.choice(pool))
        candidate[q] = new_led

        displaced = None
        for j in range(m_count):
            if j != q and current[j] == new_led:
                displaced = j
                break
        if displaced is not None:
            free = [
                k
                for k in table.reachable_sets[displaced]
                if k != new_led and (k not in in_use or k == current[q])
            ]
            if not free:
                candidates.append(current.copy())
                continue
            candidate[displaced] = int(rng.choice(free))
        candidates.append(candidate)
    return candidates


def _changed_coords(candidate: np.ndarray, current: np.ndarray) -> np.ndarray:
    return np.nonzero(candidate != current)[0]


def _select_index(
    candidates: list[np.ndarray], values: np.ndarray, state: TabuState
) -> int | None:
    """Index of the best acceptable candidate, or None if all are blocked.

    Candidates are visited in descending objective order (ties favor the
    lower candidate index). One is acceptable when it beats the incumbent
    best value, or when every (LED, user) pair it changes into is off
    cool-down.
    """
    order = sorted(range(len(candidates)), key=lambda q: (-values[q], q))
    for q in order:
        if values[q] > state.best_value:
            return q
        z = candidates[q]
        changed = _changed_coords(z, state.current)
        if all(state.tabu[z[m], m] == 0 for m in changed):
            return q
    return None


def select_move(
    candidates: list[np.ndarray],
    state: TabuState,
    table: ChannelTable,
    noise: NoiseModel,
) -> np.ndarray | None:
    """Public wrapper around candidate acceptance; scores the candidates itself."""
    if not candidates:
        raise InvalidParameterError("candidate list is empty")
    evaluator = SecrecyEvaluator(table, noise)
    values = evaluator.values(np.stack(candidates))
    q = _select_index(candidates, values, state)
    return None if q is None else candidates[q]


def _decay_tabu(tabu: np.ndarray) -> None:
    np.maximum(tabu - 1, 0, out=tabu)


def _commit(state: TabuState, accepted: np.ndarray, value: float) -> None:
    m_count = accepted.shape[0]
    changed = _changed_coords(accepted, state.current)
    state.current = accepted.copy()
    state.current_value = value
    if value > state.best_value:
        state.best = accepted.copy()
        state.best_value = value
    _decay_tabu(state.tabu)
    # The pairs the move changed into go on cool-down for M iterations.
    state.tabu[accepted[changed], changed] = m_count


def commit_move(
    state: TabuState,
    accepted: np.ndarray,
    table: ChannelTable,
    noise: NoiseModel,
) -> TabuState:
    """Adopt an accepted neighbor and update the cool-down matrix in place."""
    indices = _as_index_array(accepted)
    value = SecrecyEvaluator(table, noise).value(indices)
    _commit(state, indices, value)
    return state


def stopping_check(state: TabuState, config: TsConfig) -> bool:
    """True at the iteration cap, or when stuck at a repeated local maximum."""
    max_iterations, threshold = config.resolved(state.tabu.shape[1])
    if state.iteration >= max_iterations:
        return True
    return state.repetition_count > threshold and state.local_max_flag


def run_tabu_search(
    table: ChannelTable, noise: NoiseModel, config: TsConfig
) -> tuple[Assignment, float, list[TraceRecord]]:
    """Run the full search and return (best assignment, value, trace).

    The starting point is a random feasible assignment drawn from the
    configured seed; the best-so-far value along the trace is
    non-decreasing. Raises an infeasibility error when the instance admits
    no one-to-one assignment at all.
    """
    rng = np.random.default_rng(config.rng_seed)
    evaluator = SecrecyEvaluator(table, noise)

    start = random_feasible_indices(table, rng)
    start_value = evaluator.value(start)
    k_count = table.num_leds
    state = TabuState(
        tabu=np.zeros((k_count, table.num_ues), dtype=np.intp),
        current=start,
        current_value=start_value,
        best=start.copy(),
        best_value=start_value,
    )
    trace = [TraceRecord(0, start_value, start_value, evaluator.calls)]

    while not stopping_check(state, config):
        candidates = generate_neighborhood(state, table, rng)
        values = evaluator.values(np.stack(candidates))
        state.local_max_flag = bool(np.max(values) <= state.current_value)
        q = _select_index(candidates, values, state)
        if q is None:
            moved = False
            _decay_tabu(state.tabu)
        else:
            moved = not np.array_equal(candidates[q], state.current)
            _commit(state, candidates[q], float(values[q]))
        state.repetition_count = 0 if moved else state.repetition_count + 1
        state.iteration += 1
        trace.append(
            TraceRecord(
                state.iteration,
                state.current_value,
                state.best_value,
                evaluator.calls,
            )
        )

    best = Assignment(tuple(int(k) for k in state.best))
    # Canonical single-assignment evaluation of the returned optimum.
    return best, sum_secrecy_rate(table, best, noise), trace
