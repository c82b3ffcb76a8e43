"""Tests for the brute-force, dynamic-programming and greedy oracles."""

import time

import numpy as np
import pytest

from cli.generate import bench_instance, random_instance
from core.errors import InvalidInput, StateExplosion, TooLarge
from core.pcn import check_flow_feasible
from protocol.validation import validate_inputs
from solvers import (
    SOLVERS,
    build_ilp,
    make_solver,
    solve,
    solve_bruteforce,
    solve_dp,
    solve_dp_bounded,
    solve_greedy,
)
from tests.conftest import make_topology, txn


@pytest.fixture
def three_txn_instance():
    """b = (10, 10); 7 and 6 from h1 to h2, 5 back."""
    topo = make_topology({"h1": 10, "h2": 10})
    txns = [txn("t1", "h1", "h2", 7), txn("t2", "h1", "h2", 6), txn("t3", "h2", "h1", 5)]
    return build_ilp(topo, txns)


@pytest.fixture
def greedy_trap():
    """b = (5, 5); 6 and 4 from h1 to h2, 3 back."""
    topo = make_topology({"h1": 5, "h2": 5})
    txns = [txn("t1", "h1", "h2", 6), txn("t2", "h1", "h2", 4), txn("t3", "h2", "h1", 3)]
    return build_ilp(topo, txns)


def _validated_instance(rng, **kwargs):
    topo, txns = random_instance(rng, **kwargs)
    return build_ilp(topo, validate_inputs(topo, txns).kept)


class TestBruteForce:
    """Tests for the exhaustive oracle."""

    def test_zero_columns_all_selected(self):
        """Transactions that never touch the factory are always feasible."""
        topo = make_topology({"h1": 0}, {"c1": ("h1", 10, 10), "c2": ("h1", 10, 10)})
        inst = build_ilp(topo, [txn("a", "c1", "c2", 3), txn("b", "c2", "c1", 4)])
        solution = solve_bruteforce(inst)
        assert solution.selected == {"a", "b"}
        assert solution.throughput == 7

    def test_three_transactions(self, three_txn_instance):
        """All three fit together: net (+8, -8) against (10, 10)."""
        solution = solve_bruteforce(three_txn_instance)
        assert solution.selected == {"t1", "t2", "t3"}
        assert solution.throughput == 18
        assert solution.flow.factory_demand == (8, -8)

    def test_empty_factory(self):
        """With zero balances a lone cross-hub payment cannot run."""
        inst = build_ilp(make_topology({"h1": 0, "h2": 0}), [txn("t1", "h1", "h2", 5)])
        solution = solve_bruteforce(inst)
        assert solution.selected == frozenset()
        assert solution.throughput == 0

    def test_too_large(self, three_txn_instance):
        """The enumeration limit guards against 2^k blowup."""
        with pytest.raises(TooLarge, match="limited to 2"):
            solve_bruteforce(three_txn_instance, limit=2)

    def test_tie_break_smallest_ids(self, crossing_topology, crossing_transactions):
        """Among equal optima the lexicographically smallest id set wins."""
        solution = solve_bruteforce(build_ilp(crossing_topology, crossing_transactions))
        assert solution.selected == {"t1", "t3"}
        assert solution.throughput == 20


class TestDynamicProgram:
    """Tests for the exact dynamic program."""

    def test_three_transactions(self, three_txn_instance):
        """Matches brute force, selection included."""
        solution = solve_dp(three_txn_instance)
        assert solution.selected == {"t1", "t2", "t3"}
        assert solution.throughput == 18
        assert solution.stats.solver == "dp"

    def test_empty(self, two_hub_topology):
        """k = 0 gives the empty solution."""
        solution = solve_dp(build_ilp(two_hub_topology, []))
        assert solution.selected == frozenset()
        assert solution.throughput == 0
        assert solution.flow.is_zero()

    def test_crossing(self, crossing_topology, crossing_transactions):
        """One v1 -> v3 payment plus the v4 -> v6 payment."""
        solution = solve_dp(build_ilp(crossing_topology, crossing_transactions))
        assert solution.selected == {"t1", "t3"}
        assert solution.throughput == 20
        assert dict(solution.flow.client_net) == {"v1": 10, "v4": 10}
        assert solution.flow.factory_demand == (0, 0)

    def test_state_explosion(self, three_txn_instance):
        """A tiny state budget trips the guard."""
        with pytest.raises(StateExplosion, match="limit is 1"):
            solve_dp_bounded(three_txn_instance, radius=100, state_limit=1)

    def test_not_pruned(self, three_txn_instance):
        """The unbounded program never reports pruning."""
        assert solve_dp(three_txn_instance).stats.pruned is False

    def test_wide_amounts(self):
        """Loads too wide to pack into one key still solve exactly."""
        scale = 10**10
        topo = make_topology({"h1": 2 * scale, "h2": 2 * scale, "h3": 2 * scale})
        hubs = ["h1", "h2", "h3"]
        txns = [
            txn(f"t{j}", hubs[j % 3], hubs[(j + 1 + (j // 3) % 2) % 3], scale + j)
            for j in range(10)
        ]
        inst = build_ilp(topo, txns)
        exact = solve_bruteforce(inst)
        dp = solve_dp(inst)
        assert dp.throughput == exact.throughput
        assert dp.selected == exact.selected
        assert dp.throughput > 0

    def test_wide_amounts_random(self):
        """Matches brute force on 60 instances with amounts near 10^12."""
        rng = np.random.default_rng(71)
        scale = 10**12
        for _ in range(60):
            num_hubs = int(rng.integers(3, 4, endpoint=True))
            hubs = [f"h{i}" for i in range(num_hubs)]
            balances = rng.integers(0, 3, size=num_hubs, endpoint=True) * scale
            topo = make_topology({h: int(b) for h, b in zip(hubs, balances, strict=True)})
            txns = []
            for j in range(int(rng.integers(1, 10, endpoint=True))):
                sender, recipient = rng.choice(num_hubs, size=2, replace=False)
                amount = int(rng.integers(1, 3, endpoint=True)) * scale + int(rng.integers(1000))
                txns.append(txn(f"t{j}", hubs[sender], hubs[recipient], amount))
            inst = build_ilp(topo, txns)
            exact = solve_bruteforce(inst)
            dp = solve_dp(inst)
            assert dp.throughput == exact.throughput
            assert dp.selected == exact.selected

    def test_wide_amounts_state_limit(self):
        """The guard counts real states, not the width of the loads."""
        scale = 10**10
        topo = make_topology({"h1": 10 * scale, "h2": scale, "h3": scale})
        txns = [txn(f"t{j}", "h1", f"h{2 + j % 2}", scale + j) for j in range(6)]
        with pytest.raises(StateExplosion, match="limit is 2"):
            solve_dp_bounded(build_ilp(topo, txns), radius=10**12, state_limit=2)


class TestBoundedDynamicProgram:
    """Tests for the state-radius-bounded program."""

    def test_large_radius_is_exact(self, three_txn_instance):
        """A radius of the total amount prunes nothing."""
        bounded = solve_dp_bounded(three_txn_instance, radius=18)
        exact = solve_dp(three_txn_instance)
        assert bounded.selected == exact.selected
        assert bounded.throughput == exact.throughput
        assert bounded.stats.pruned is False

    def test_zero_radius(self):
        """Only the zero state survives, so only zero columns are selected."""
        topo = make_topology(
            {"h1": 10, "h2": 10}, {"c1": ("h1", 20, 20), "c2": ("h1", 20, 20)}
        )
        txns = [txn("t1", "h1", "h2", 7), txn("t2", "c1", "c2", 4), txn("t3", "h2", "h1", 5)]
        solution = solve_dp_bounded(build_ilp(topo, txns), radius=0)
        assert solution.selected == {"t2"}
        assert solution.throughput == 4
        assert solution.stats.pruned is True

    def test_radius_eight(self, three_txn_instance):
        """Every partial aggregate of the optimum stays within 8."""
        solution = solve_dp_bounded(three_txn_instance, radius=8)
        assert solution.throughput == 18

    def test_negative_radius(self, three_txn_instance):
        """The radius is a non-negative integer."""
        with pytest.raises(InvalidInput, match="radius"):
            solve_dp_bounded(three_txn_instance, radius=-1)


class TestGreedy:
    """Tests for the largest-first heuristic."""

    def test_joint_fit_is_not_enough(self, three_txn_instance):
        """All three fit together, but 7 then 6 overshoots the cover, so 6 is skipped."""
        greedy = solve_greedy(three_txn_instance)
        assert greedy.selected == {"t1", "t3"}
        assert greedy.throughput == 12
        assert solve_bruteforce(three_txn_instance).throughput == 18

    def test_every_prefix_fits(self):
        """When each largest-first prefix fits, greedy selects everything."""
        topo = make_topology({"h1": 10, "h2": 10})
        txns = [txn("t1", "h1", "h2", 7), txn("t2", "h2", "h1", 5), txn("t3", "h1", "h2", 3)]
        greedy = solve_greedy(build_ilp(topo, txns))
        assert greedy.selected == {"t1", "t2", "t3"}
        assert greedy.throughput == 15

    def test_skips_oversized_first(self, greedy_trap):
        """Greedy skips 6, then keeps 4 and 3, while 6 and 3 would do better."""
        greedy = solve_greedy(greedy_trap)
        assert greedy.selected == {"t2", "t3"}
        assert greedy.throughput == 7
        optimum = solve_bruteforce(greedy_trap)
        assert optimum.selected == {"t1", "t3"}
        assert optimum.throughput == 9

    def test_netting_pair_missed(self):
        """Two payments that only fit together are both skipped."""
        topo = make_topology({"h1": 0, "h2": 0})
        inst = build_ilp(topo, [txn("a", "h1", "h2", 5), txn("b", "h2", "h1", 5)])
        assert solve_greedy(inst).throughput == 0
        assert solve_dp(inst).throughput == 10


class TestRegistry:
    """Tests for solver lookup and fallback."""

    def test_all_solvers_registered(self):
        """The four oracles are available by name."""
        assert set(SOLVERS) == {"brute", "dp", "dp-bounded", "greedy"}

    def test_unknown_solver(self):
        """Unknown names are rejected."""
        with pytest.raises(InvalidInput, match="Unknown solver"):
            make_solver("simplex")

    def test_bounded_needs_radius(self):
        """dp-bounded cannot be built without a radius."""
        with pytest.raises(InvalidInput, match="radius"):
            make_solver("dp-bounded")

    def test_fallback_on_explosion(self, three_txn_instance):
        """A configured fallback takes over when the state guard trips."""
        solution = solve(
            three_txn_instance, "dp-bounded", radius=100, fallback="greedy", state_limit=1
        )
        assert solution.stats.solver == "greedy"
        assert solution.throughput == 12

    def test_no_fallback_raises(self, three_txn_instance):
        """Without a fallback the explosion propagates."""
        with pytest.raises(StateExplosion):
            solve(three_txn_instance, "dp-bounded", radius=100, state_limit=1)


class TestOracleProperties:
    """Properties checked over random instances."""

    def test_dp_matches_brute_force(self):
        """Same throughput and same selection on 500 instances with k <= 14."""
        rng = np.random.default_rng(2024)
        for _ in range(500):
            inst = _validated_instance(rng)
            exact = solve_bruteforce(inst)
            dp = solve_dp(inst)
            assert dp.throughput == exact.throughput
            assert dp.selected == exact.selected

    def test_every_oracle_is_feasible(self):
        """Selections satisfy A.x <= b and their flows fit the topology."""
        rng = np.random.default_rng(99)
        for _ in range(200):
            inst = _validated_instance(rng)
            for solution in (
                solve_bruteforce(inst),
                solve_dp(inst),
                solve_greedy(inst),
                solve_dp_bounded(inst, radius=5),
            ):
                indicator = [int(t in solution.selected) for t in inst.txn_ids]
                assert inst.is_feasible(indicator)
                assert check_flow_feasible(inst.topology, solution.flow)
                assert solution.throughput == sum(
                    w for w, x in zip(inst.weights, indicator, strict=True) if x
                )

    def test_radius_is_monotone(self):
        """Larger radii never lose throughput and never beat the exact program."""
        rng = np.random.default_rng(17)
        for _ in range(150):
            inst = _validated_instance(rng)
            exact = solve_dp(inst).throughput
            total = sum(inst.weights)
            values = [solve_dp_bounded(inst, r).throughput for r in (0, 3, 8, 15, total)]
            assert values == sorted(values)
            assert values[-1] == exact
            assert solve_greedy(inst).throughput <= exact

    def test_zero_columns_always_selected(self):
        """Every oracle keeps every transaction that moves no factory balance."""
        rng = np.random.default_rng(23)
        for _ in range(100):
            inst = _validated_instance(rng)
            zero = {inst.txn_ids[j] for j in inst.zero_columns()}
            for solution in (solve_bruteforce(inst), solve_dp(inst), solve_greedy(inst)):
                assert zero <= solution.selected


@pytest.mark.slow
class TestScaling:
    """Wall time of the exact program as k grows."""

    def test_dp_is_roughly_linear_in_k(self):
        """Each doubling of k at most 2.6 times slower, median over five seeds."""
        solver = make_solver("dp")
        sizes = (1000, 2000, 4000)
        seeds = range(5)

        def timed(k: int, seed: int) -> float:
            inst = build_ilp(*bench_instance(3, 5, k, seed))
            start = time.perf_counter()
            solver.solve(inst)
            return time.perf_counter() - start

        times = np.asarray([[timed(k, seed) for k in sizes] for seed in seeds])
        ratios = np.median(times[:, 1:] / times[:, :-1], axis=0)
        assert np.all(ratios <= 2.6), ratios
