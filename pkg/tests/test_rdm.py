"""
Tests for greedy, exhaustive and baseline RDM selection.
"""

import math

import numpy as np
import pytest

from src.core.linalg import inverse, submatrix_removing
from src.core.rdm import (
    METHODS, SelectionResult, approximation_bound, baseline_min_res, baseline_random,
    baseline_top_degree, brute_force_rdm, greedy_rdm, marginal_gain, marginal_gains, select,
)
from src.core.resistance import build_engine, group_resistance
from src.exceptions import BudgetExceededError, ParameterError
from tests.graphs import bidirected, directed_cycle, random_strong_digraph


class TestMarginalGain:

    def test_cycle3(self):
        """Test the marginal gain on the directed 3-cycle block."""
        LXinv = np.array([[1.0, 1.0], [0.0, 1.0]])
        assert marginal_gain(LXinv, 1) == pytest.approx(1.0)

    def test_vector_form_matches_scalar(self):
        """Test that the vector form matches the scalar gain."""
        g = random_strong_digraph(10, seed=40)
        e = build_engine(g)
        sub, _ = submatrix_removing(e.laplacian, [0, 4])
        LXinv = inverse(sub)
        gains = marginal_gains(LXinv)
        for v in range(len(gains)):
            assert gains[v] == pytest.approx(marginal_gain(LXinv, v), rel=1e-12)

    def test_equals_direct_trace_difference(self):
        """Test Delta(Z, v) = Omega(Z) - Omega(Z + v)."""
        g = random_strong_digraph(12, seed=41)
        e = build_engine(g)
        for Z in ([3], [0, 7], [1, 5, 11]):
            sub, kept = submatrix_removing(e.laplacian, Z)
            LXinv = inverse(sub)
            base = group_resistance(e, Z)
            for pos, v in enumerate(kept):
                direct = base - group_resistance(e, Z + [int(v)])
                gain = marginal_gain(LXinv, pos)
                assert gain >= -1e-10
                assert gain == pytest.approx(direct, rel=1e-8, abs=1e-12)


class TestGreedy:

    def test_cycle3_k1(self, cycle3):
        """Test greedy k=1 on the directed 3-cycle."""
        result = greedy_rdm(cycle3, 1)
        assert result.chosen == [0]
        assert result.objective == pytest.approx(2.0)
        assert result.method == 'greedy'

    @pytest.mark.parametrize("n,k", [(6, 2), (9, 3)])
    def test_cycle_symmetry(self, n, k):
        """Test that greedy starts at vertex 0 when all singletons tie."""
        result = greedy_rdm(directed_cycle(n), k)
        assert result.chosen[0] == 0
        assert result.k == k

    @pytest.mark.parametrize("n,k", [(5, 2), (5, 3), (8, 2), (8, 3), (8, 4)])
    def test_cycle_matches_brute_force_set(self, n, k):
        """Test that greedy and exhaustive search pick the same set on cycles."""
        # every k-set has Omega(X) = n - k, so label order decides
        g = directed_cycle(n)
        greedy, exact = greedy_rdm(g, k), brute_force_rdm(g, k)
        assert greedy.chosen == exact.chosen == list(range(k))
        assert greedy.objective == pytest.approx(n - k, abs=1e-9)
        assert exact.objective == pytest.approx(n - k, abs=1e-9)

    def test_step_trace_non_increasing(self):
        """Test that Omega strictly decreases along the greedy trace."""
        result = greedy_rdm(random_strong_digraph(14, seed=5), 6)
        objectives = [value for _, value in result.step_trace]
        assert len(objectives) == 6
        assert all(b < a for a, b in zip(objectives, objectives[1:]))
        assert result.objective == objectives[-1]

    def test_maintained_inverses_match_direct(self):
        """Test the downdated inverses against direct inversion."""
        g = random_strong_digraph(13, seed=9)
        e = build_engine(g)
        result = greedy_rdm(e, 5, trace_inverses=True)
        assert len(result.inverses) == 5
        for step, maintained in enumerate(result.inverses, start=1):
            sub, _ = submatrix_removing(e.laplacian, result.indices[:step])
            direct = inverse(sub)
            np.testing.assert_allclose(maintained, direct, rtol=1e-8, atol=1e-10 * np.abs(direct).max())

    def test_inverses_not_kept_by_default(self, cycle3):
        """Test that inverses are only kept on request."""
        assert greedy_rdm(cycle3, 1).inverses is None

    def test_accepts_engine_or_graph(self):
        """Test that greedy accepts a digraph or a prebuilt engine."""
        g = random_strong_digraph(8, seed=2)
        assert greedy_rdm(g, 3).indices == greedy_rdm(build_engine(g), 3).indices

    def test_k1_equals_brute_force(self, random_graphs):
        """Test that greedy k=1 is exact."""
        for g in random_graphs:
            greedy, exact = greedy_rdm(g, 1), brute_force_rdm(g, 1)
            assert greedy.indices == exact.indices
            assert greedy.objective == pytest.approx(exact.objective, rel=1e-12)

    def test_approximation_guarantee(self):
        """Test the greedy approximation guarantee against the optimum."""
        for s in range(50):
            g = random_strong_digraph(6 + s % 9, seed=500 + s)
            k = 2 + s % 3
            e = build_engine(g)
            greedy = greedy_rdm(e, k)
            opt = brute_force_rdm(e, k)
            best_single = brute_force_rdm(e, 1).objective
            bound = approximation_bound(k)
            assert best_single - greedy.objective >= bound * (best_single - opt.objective) - 1e-8
            assert greedy.objective >= opt.objective - 1e-9 * opt.objective
            assert greedy.approximation_ratio(opt) >= 1.0 - 1e-9

    @pytest.mark.parametrize("k", [0, 3, 4])
    def test_k_out_of_range(self, cycle3, k):
        """Test that k outside 1..n-1 is rejected."""
        with pytest.raises(ParameterError):
            greedy_rdm(cycle3, k)


class TestBruteForce:

    def test_cycle3(self, cycle3):
        """Test exhaustive search on the directed 3-cycle."""
        one = brute_force_rdm(cycle3, 1)
        assert one.chosen == [0]
        assert one.objective == pytest.approx(2.0)
        two = brute_force_rdm(cycle3, 2)
        assert two.chosen == [0, 1]
        assert two.objective == pytest.approx(1.0)
        assert two.method == 'exact'

    def test_optimal_against_every_pair(self):
        """Test that the exhaustive optimum beats every pair."""
        g = random_strong_digraph(7, seed=77)
        e = build_engine(g)
        best = brute_force_rdm(e, 2)
        for i in range(7):
            for j in range(i + 1, 7):
                assert best.objective <= group_resistance(e, [i, j]) + 1e-12

    def test_budget_exceeded(self):
        """Test that C(n, k) above the cap raises BudgetExceededError."""
        g = random_strong_digraph(10, seed=1)
        with pytest.raises(BudgetExceededError) as info:
            brute_force_rdm(g, 5, cap=10)
        assert info.value.required == math.comb(10, 5)
        assert info.value.cap == 10

    def test_cap_at_exact_count_is_allowed(self, cycle3):
        """Test that C(n, k) equal to the cap is allowed."""
        assert brute_force_rdm(cycle3, 2, cap=3).k == 2


class TestBaselines:

    def test_top_degree_picks_hub(self):
        """Test that top-degree picks the hub first."""
        star = bidirected([(0, leaf, 1.0) for leaf in range(1, 6)] + [(1, 2, 1.0)])
        assert baseline_top_degree(star, 1).chosen == [0]
        assert baseline_top_degree(star, 3).chosen == [0, 1, 2]

    def test_random_is_deterministic(self):
        """Test that the random baseline is fixed by its seed."""
        g = random_strong_digraph(12, seed=3)
        a, b = baseline_random(g, 4, seed=11), baseline_random(g, 4, seed=11)
        assert a.chosen == b.chosen
        assert len(set(a.chosen)) == 4
        assert a.objective == pytest.approx(group_resistance(g, a.indices))

    def test_random_seeds_differ(self):
        """Test that different seeds draw different sets."""
        g = random_strong_digraph(30, seed=3)
        draws = {tuple(baseline_random(g, 5, seed=s).chosen) for s in range(5)}
        assert len(draws) > 1

    def test_min_res_k1_equals_greedy(self, random_graphs):
        """Test that min-res at k=1 matches greedy."""
        for g in random_graphs[:5]:
            assert baseline_min_res(g, 1).indices == greedy_rdm(g, 1).indices


class TestSelect:

    @pytest.mark.parametrize("method", METHODS)
    def test_dispatch(self, method):
        """Test that select dispatches every method."""
        result = select(random_strong_digraph(8, seed=4), 2, method, seed=1)
        assert isinstance(result, SelectionResult)
        assert result.method == method
        assert result.k == 2
        assert result.wall_time >= 0.0

    def test_unknown_method(self, cycle3):
        """Test that an unknown method is rejected."""
        with pytest.raises(ParameterError, match="Unknown method"):
            select(cycle3, 1, 'annealing')


def test_approximation_bound():
    """Test the approximation bound values."""
    assert approximation_bound(2) == pytest.approx(1 - 2 / math.e)
    assert approximation_bound(10) == pytest.approx(1 - (10 / 9) / math.e)
    with pytest.raises(ParameterError):
        approximation_bound(1)
