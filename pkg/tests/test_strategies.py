"""Baseline strategy and exhaustive-search tests with independent oracles."""

import itertools
import math

import numpy as np
import pytest

from vlcsec import (
    Assignment,
    ChannelTable,
    EnumerationBudgetError,
    InfeasibleAssignmentError,
    NoiseModel,
    StrategyKind,
    channel_gain_strategy,
    eve_aware_strategy,
    global_search,
    random_strategy,
    sum_secrecy_rate,
    validate_assignment,
)
from conftest import NOISE_W, make_table, naive_sum_secrecy


def table_from(gains, eve_gains=None, power=0.2):
    gains = np.asarray(gains, dtype=float)
    k, m = gains.shape
    eve_gains = np.zeros(k) if eve_gains is None else np.asarray(eve_gains, dtype=float)
    return ChannelTable(
        gains=gains,
        eve_gains=eve_gains,
        reachable_sets=tuple(
            tuple(int(j) for j in np.nonzero(gains[:, col] > 0)[0]) for col in range(m)
        ),
        eve_reachable_set=tuple(int(j) for j in np.nonzero(eve_gains > 0)[0]),
        led_powers=np.full(k, power),
    )


def nested_loop_oracle(table: ChannelTable, noise: NoiseModel):
    """Independent exhaustive enumerator over LED permutations (M <= 3)."""
    best_vec, best_val = None, -math.inf
    for perm in itertools.permutations(range(table.num_leds), table.num_ues):
        if any(perm[m] not in table.reachable_sets[m] for m in range(table.num_ues)):
            continue
        val = sum_secrecy_rate(table, Assignment(perm), noise)
        if val > best_val:
            best_vec, best_val = perm, val
    return best_vec, best_val


class TestRandomStrategy:
    def test_feasible_on_random_instances(self, noise):
        rng = np.random.default_rng(41)
        for _ in range(200):
            table = make_table(rng)
            assignment = random_strategy(table, rng)
            validate_assignment(table, assignment)

    def test_no_reuse_between_users(self):
        # both users reach LEDs {0, 1} only: never [0,0] or [1,1]
        table = table_from([[1e-5, 2e-5], [3e-5, 1e-5], [0, 0]])
        rng = np.random.default_rng(43)
        seen = set()
        for _ in range(200):
            a = random_strategy(table, rng)
            seen.add(a.indices)
        assert seen == {(0, 1), (1, 0)}

    def test_unique_forced_assignment(self):
        table = table_from([[1e-5, 0], [0, 2e-5]])
        rng = np.random.default_rng(47)
        assert random_strategy(table, rng).indices == (0, 1)

    def test_uniform_over_feasible_vectors(self):
        # 2 users, 3 LEDs, everything reachable: 6 feasible vectors
        table = table_from(np.full((3, 2), 1e-5))
        counts = {}
        n = 10_000
        rng = np.random.default_rng(53)
        for _ in range(n):
            a = random_strategy(table, rng)
            counts[a.indices] = counts.get(a.indices, 0) + 1
        assert len(counts) == 6
        p = 1.0 / 6.0
        bound = 3.0 * math.sqrt(n * p * (1 - p))
        for vec, count in counts.items():
            assert abs(count - n * p) < bound, (vec, count)

    def test_infeasible_instance_raises(self):
        table = table_from([[1e-5, 1e-5], [0, 0]])
        with pytest.raises(InfeasibleAssignmentError):
            random_strategy(table, np.random.default_rng(0))

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(59)
        table = make_table(rng, num_leds=6, num_ues=3)
        a = random_strategy(table, np.random.default_rng(77))
        b = random_strategy(table, np.random.default_rng(77))
        assert a == b


class TestChannelGainStrategy:
    def test_each_user_gets_own_best_when_disjoint(self):
        gains = np.zeros((4, 2))
        gains[0, 0], gains[1, 0] = 5e-5, 1e-5
        gains[2, 1], gains[3, 1] = 1e-5, 7e-5
        assert channel_gain_strategy(table_from(gains)).indices == (0, 3)

    def test_conflict_gives_second_best_to_later_user(self):
        # LED 1 is both users' best; user 0 wins, user 1 takes its second best
        gains = np.array([[2e-5, 3e-5], [9e-5, 9e-5], [1e-5, 4e-5]])
        assert channel_gain_strategy(table_from(gains)).indices == (1, 2)

    def test_single_user_argmax(self):
        gains = np.array([[2e-5], [9e-5], [4e-5]])
        assert channel_gain_strategy(table_from(gains)).indices == (1,)

    def test_tie_broken_by_lower_led_index(self):
        gains = np.array([[5e-5], [5e-5]])
        assert channel_gain_strategy(table_from(gains)).indices == (0,)

    def test_backtracks_when_greedy_dead_ends(self):
        # user 0 prefers LED 0, but that starves user 1 (whose only LED is 0)
        gains = np.array([[9e-5, 1e-5], [2e-5, 0]])
        assert channel_gain_strategy(table_from(gains)).indices == (1, 0)

    def test_truly_infeasible_raises(self):
        gains = np.array([[9e-5, 1e-5], [0, 0]])
        with pytest.raises(InfeasibleAssignmentError):
            channel_gain_strategy(table_from(gains))


class TestEveAwareStrategy:
    def test_equals_channel_gain_when_eve_blind(self):
        rng = np.random.default_rng(61)
        for _ in range(100):
            table = make_table(rng)
            blind = ChannelTable(
                gains=table.gains,
                eve_gains=np.zeros(table.num_leds),
                reachable_sets=table.reachable_sets,
                eve_reachable_set=(),
                led_powers=table.led_powers,
            )
            assert eve_aware_strategy(blind) == channel_gain_strategy(blind)

    def test_avoids_leds_eve_hears_better(self):
        # LED 1 is strongest for the user but Eve hears it even better
        gains = np.array([[5e-5], [9e-5]])
        eve = np.array([0.0, 9.5e-5])
        assert eve_aware_strategy(table_from(gains, eve)).indices == (0,)
        assert channel_gain_strategy(table_from(gains, eve)).indices == (1,)

    def test_equal_gain_counts_as_banned(self):
        gains = np.array([[5e-5], [9e-5]])
        eve = np.array([0.0, 9e-5])  # tie on LED 1: zero secrecy margin
        assert eve_aware_strategy(table_from(gains, eve)).indices == (0,)

    def test_falls_back_to_gain_order_when_all_banned(self):
        gains = np.array([[5e-5], [9e-5]])
        eve = np.array([6e-5, 9.5e-5])  # every reachable LED compromised
        assert eve_aware_strategy(table_from(gains, eve)).indices == (1,)

    def test_feasible_on_random_instances(self, noise):
        rng = np.random.default_rng(67)
        for _ in range(200):
            table = make_table(rng)
            validate_assignment(table, eve_aware_strategy(table))


class TestGlobalSearch:
    def test_single_user_argmax(self, noise):
        gains = np.array([[2e-5], [9e-5], [4e-5]])
        table = table_from(gains)
        best, value, count = global_search(table, noise)
        assert best.indices == (1,)
        assert count == 3
        assert value == sum_secrecy_rate(table, best, noise)

    def test_matches_independent_enumerator(self, noise):
        rng = np.random.default_rng(71)
        for _ in range(100):
            table = make_table(rng, num_leds=int(rng.integers(2, 7)))
            got_vec, got_val, count = global_search(table, noise)
            want_vec, want_val = nested_loop_oracle(table, noise)
            assert got_vec.indices == want_vec
            assert got_val == want_val
            assert count >= 1

    def test_dominates_all_strategies(self, noise):
        rng = np.random.default_rng(73)
        for _ in range(100):
            table = make_table(rng)
            _, best_val, _ = global_search(table, noise)
            for solver in (channel_gain_strategy, eve_aware_strategy):
                assert (
                    sum_secrecy_rate(table, solver(table), noise) <= best_val + 1e-12
                )
            a = random_strategy(table, rng)
            assert sum_secrecy_rate(table, a, noise) <= best_val + 1e-12

    def test_budget_refusal(self, noise):
        table = table_from(np.full((6, 3), 1e-5))
        with pytest.raises(EnumerationBudgetError):
            global_search(table, noise, budget=10)

    def test_evaluation_count_is_feasible_vector_count(self, noise):
        # 3 LEDs fully shared by 2 users: 3*2 = 6 ordered feasible vectors
        table = table_from(np.full((3, 2), 1e-5))
        _, _, count = global_search(table, noise)
        assert count == 6


def test_strategy_kind_enumeration():
    assert {k.value for k in StrategyKind} == {
        "random",
        "channel_gain",
        "eve_aware",
        "global_search",
        "tabu_search",
    }
