"""Baseline LED selection strategies and the exhaustive-search oracle.

The three fixed strategies assign LEDs user by user in index order and
never reuse an LED. When a choice leaves some later user without any
remaining LED, the completion backtracks deterministically to the next
candidate, so a strategy only fails on instances that admit no one-to-one
assignment at all. Exhaustive search enumerates every feasible vector and
is kept deliberately simple: it is the trusted oracle the heuristics are
measured against.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Callable, Iterator, Sequence

import numpy as np

from .channel import ChannelTable
from .errors import EnumerationBudgetError, InfeasibleAssignmentError
from .rates import Assignment, NoiseModel, SecrecyEvaluator


class StrategyKind(str, Enum):
    """Every implemented solver, as named on the experiment command line."""

    RANDOM = "random"
    CHANNEL_GAIN = "channel_gain"
    EVE_AWARE_CHANNEL_GAIN = "eve_aware"
    GLOBAL_SEARCH = "global_search"
    TABU_SEARCH = "tabu_search"


OrderFn = Callable[[int, set[int]], Sequence[int]]


def _complete_assignment(table: ChannelTable, order_fn: OrderFn) -> np.ndarray:
    """Depth-first completion over users in index order.

    ``order_fn(m, taken)`` yields the candidate LEDs for user m given the
    already-taken set, best first. Backtracking keeps the completion total
    whenever a feasible assignment exists.
    """
    m_count = table.num_ues
    out = np.empty(m_count, dtype=np.intp)
    taken: set[int] = set()

    def descend(m: int) -> bool:
        if m == m_count:
            return True
        for k in order_fn(m, taken):
            out[m] = k
            taken.add(k)
            if descend(m + 1):
                return True
            taken.remove(k)
        return False

    if not descend(0):
        raise InfeasibleAssignmentError(
            "no one-to-one assignment exists for this instance"
        )
    return out


def random_feasible_indices(
    table: ChannelTable, rng: np.random.Generator
) -> np.ndarray:
    """Random feasible assignment as a raw index array."""

    def order(m: int, taken: set[int]) -> Sequence[int]:
        pool = [k for k in table.reachable_sets[m] if k not in taken]
        return [int(k) for k in rng.permutation(pool)] if pool else []

    return _complete_assignment(table, order)


def random_strategy(table: ChannelTable, rng: np.random.Generator) -> Assignment:
    """Assign each user a uniformly random reachable LED, without reuse."""
    return Assignment(tuple(int(k) for k in random_feasible_indices(table, rng)))


def channel_gain_strategy(table: ChannelTable) -> Assignment:
    """Greedy assignment by strongest own channel gain.

    Users are served in index order; each takes its best untaken LED, with
    ties broken by the lower LED index.
    """

    def order(m: int, taken: set[int]) -> Sequence[int]:
        pool = [k for k in table.reachable_sets[m] if k not in taken]
        return sorted(pool, key=lambda k: (-table.gains[k, m], k))

    return Assignment(tuple(int(k) for k in _complete_assignment(table, order)))


def eve_aware_strategy(table: ChannelTable) -> Assignment:
    """Greedy assignment avoiding LEDs the eavesdropper hears better.

    An LED is banned for user m when its gain at m does not strictly
    exceed its gain at the eavesdropper. Banned LEDs are only used when no
    permitted one remains, in which case the choice degrades to the plain
    channel-gain order.
    """

    def order(m: int, taken: set[int]) -> Sequence[int]:
        pool = [k for k in table.reachable_sets[m] if k not in taken]
        permitted = [k for k in pool if table.gains[k, m] > table.eve_gains[k]]
        banned = [k for k in pool if table.gains[k, m] <= table.eve_gains[k]]
        key = lambda k: (-table.gains[k, m], k)
        return sorted(permitted, key=key) + sorted(banned, key=key)

    return Assignment(tuple(int(k) for k in _complete_assignment(table, order)))


def _feasible_vectors(table: ChannelTable) -> Iterator[np.ndarray]:
    """All feasible assignment vectors in lexicographic order."""
    m_count = table.num_ues
    prefix = np.empty(m_count, dtype=np.intp)
    taken: set[int] = set()

    def descend(m: int) -> Iterator[np.ndarray]:
        if m == m_count:
            yield prefix.copy()
            return
        for k in table.reachable_sets[m]:
            if k in taken:
                continue
            prefix[m] = k
            taken.add(k)
            yield from descend(m + 1)
            taken.remove(k)

    yield from descend(0)


def global_search(
    table: ChannelTable,
    noise: NoiseModel,
    budget: int = 10_000_000,
) -> tuple[Assignment, float, int]:
    """Exact maximizer of the sum secrecy rate by full enumeration.

    Returns the optimal assignment (lexicographically smallest among
    ties), its objective value, and the number of feasible vectors that
    were scored. Raises EnumerationBudgetError when the search space upper
    bound exceeds ``budget``.
    """
    bound = math.prod(len(s) for s in table.reachable_sets)
    if bound > budget:
        raise EnumerationBudgetError(
            f"enumeration bound {bound} exceeds budget {budget}"
        )

    evaluator = SecrecyEvaluator(table, noise)
    best_vec: np.ndarray | None = None
    best_value = -math.inf
    count = 0
    chunk: list[np.ndarray] = []

    def flush() -> None:
        nonlocal best_vec, best_value
        if not chunk:
            return
        values = evaluator.values(np.stack(chunk))
        q = int(np.argmax(values))  # first maximum preserves lex order
        if values[q] > best_value:
            best_value = float(values[q])
            best_vec = chunk[q]
        chunk.clear()

    for vec in _feasible_vectors(table):
        chunk.append(vec)
        count += 1
        if len(chunk) >= 4096:
            flush()
    flush()

    if best_vec is None:
        raise InfeasibleAssignmentError(
            "no one-to-one assignment exists for this instance"
        )
    return Assignment(tuple(int(k) for k in best_vec)), best_value, count
