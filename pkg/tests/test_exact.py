import numpy as np
import pytest

import walkcent as wc
from walkcent import ResourceLimitError, ValidationError

from oracles import (absorption_prob_oracle, detour_identity_rhs,
                     detour_oracle, gwc_oracle, hitting_oracle,
                     kemeny_oracle, laplacian_dense, pinv_eig,
                     random_connected_graph, walk_centrality_oracle)


class TestPseudoinverse:
    def test_matches_eigendecomposition(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            g = random_connected_graph(rng, n_max=30)
            np.testing.assert_allclose(wc.pseudoinverse_dense(g),
                                       pinv_eig(g), atol=1e-9)

    def test_defining_properties(self, f2):
        lap = laplacian_dense(f2)
        pinv = wc.pseudoinverse_dense(f2)
        np.testing.assert_allclose(lap @ pinv @ lap, lap, atol=1e-9)
        np.testing.assert_allclose(pinv.sum(axis=0), 0.0, atol=1e-9)

    def test_k2_oracle(self, k2):
        np.testing.assert_allclose(wc.pseudoinverse_dense(k2),
                                   [[0.25, -0.25], [-0.25, 0.25]],
                                   atol=1e-14)


class TestWalkCentrality:
    def test_p3_oracle(self, p3):
        rep = wc.walk_centrality_exact(p3)
        np.testing.assert_allclose(rep.walk_centrality, [2.5, 0.5, 2.5],
                                   atol=1e-12)
        assert rep.kemeny == pytest.approx(1.5, abs=1e-12)

    def test_k3_and_star_oracles(self, k3, star4):
        rep = wc.walk_centrality_exact(k3)
        np.testing.assert_allclose(rep.walk_centrality, [4 / 3] * 3,
                                   atol=1e-12)
        assert rep.kemeny == pytest.approx(4 / 3, abs=1e-12)
        rep = wc.walk_centrality_exact(star4)
        np.testing.assert_allclose(rep.walk_centrality,
                                   [0.5, 4.5, 4.5, 4.5], atol=1e-12)
        assert rep.kemeny == pytest.approx(2.5, abs=1e-12)

    def test_matches_absorbing_oracle(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            g = random_connected_graph(rng, n_max=30)
            rep = wc.walk_centrality_exact(g)
            np.testing.assert_allclose(rep.walk_centrality,
                                       walk_centrality_oracle(g),
                                       rtol=1e-9, atol=1e-9)
            assert rep.kemeny == pytest.approx(kemeny_oracle(g), rel=1e-9)

    def test_spectral_agrees_with_dense(self):
        rng = np.random.default_rng(33)
        for _ in range(10):
            g = random_connected_graph(rng, n_max=30)
            dense = wc.walk_centrality_exact(g)
            spectral = wc.walk_centrality_spectral(g)
            np.testing.assert_allclose(spectral.walk_centrality,
                                       dense.walk_centrality, rtol=1e-8)
            assert spectral.kemeny == pytest.approx(dense.kemeny, rel=1e-8)
            assert spectral.method == "spectral"

    def test_spectral_rejects_disconnected(self):
        g = wc.build_graph([(0, 1), (2, 3)])
        with pytest.raises(ValidationError):
            wc.walk_centrality_spectral(g)

    def test_dense_cap(self, f2):
        with pytest.raises(ResourceLimitError):
            wc.walk_centrality_exact(f2, dense_cap=10)


class TestHittingTimes:
    def test_p3_oracle(self, p3):
        hit = wc.hitting_times(p3).hitting
        np.testing.assert_allclose(hit, [[0, 1, 4], [3, 0, 3], [4, 1, 0]],
                                   atol=1e-10)

    def test_k3_pairwise(self, k3):
        hit = wc.hitting_times(k3).hitting
        off = hit[~np.eye(3, dtype=bool)]
        np.testing.assert_allclose(off, 2.0, atol=1e-10)

    def test_matches_absorbing_oracle(self):
        rng = np.random.default_rng(34)
        for _ in range(8):
            g = random_connected_graph(rng, n_max=25)
            hit = wc.hitting_times(g).hitting
            np.testing.assert_allclose(hit, hitting_oracle(g), rtol=1e-8,
                                       atol=1e-8)
            assert np.all(np.diag(hit) == 0.0)

    def test_commute_time_is_scaled_resistance(self):
        rng = np.random.default_rng(35)
        g = random_connected_graph(rng, n=15)
        hit = wc.hitting_times(g).hitting
        for i, j in [(0, 1), (3, 7), (2, 14)]:
            commute = hit[i, j] + hit[j, i]
            assert commute == pytest.approx(
                g.total_degree * wc.resistance_distance(g, i, j), rel=1e-9)

    def test_rejects_disconnected(self):
        with pytest.raises(ValidationError):
            wc.hitting_times(wc.build_graph([(0, 1)], n=3))


class TestResistance:
    def test_p3(self, p3):
        assert wc.resistance_distance(p3, 0, 2) == pytest.approx(2.0,
                                                                 abs=1e-12)
        assert wc.resistance_distance(p3, 0, 0) == 0.0

    def test_series_parallel(self, k3):
        # triangle: 1 ohm in parallel with 2 ohms
        assert wc.resistance_distance(k3, 0, 1) == pytest.approx(2 / 3,
                                                                 rel=1e-12)

    def test_foster_identity(self):
        rng = np.random.default_rng(36)
        for _ in range(5):
            g = random_connected_graph(rng, n_max=25)
            total = sum(w * wc.resistance_distance(g, int(u), int(v))
                        for u, v, w in zip(g.edge_tail, g.edge_head,
                                           g.edge_weight))
            assert total == pytest.approx(g.n - 1, rel=1e-9)


class TestGroupWalkCentrality:
    def test_frozen_small_values(self, p3, k4):
        assert wc.gwc_exact(p3, [0]).value == pytest.approx(2.5, abs=1e-12)
        assert wc.gwc_exact(p3, [1]).value == pytest.approx(0.5, abs=1e-12)
        assert wc.gwc_exact(p3, [0, 1]).value == pytest.approx(0.25,
                                                               abs=1e-12)
        assert wc.gwc_exact(p3, [0, 2]).value == pytest.approx(0.5,
                                                               abs=1e-12)
        assert wc.gwc_exact(k4, [0, 1, 2]).value == pytest.approx(0.25,
                                                                  abs=1e-12)

    def test_singleton_equals_walk_centrality(self):
        rng = np.random.default_rng(37)
        g = random_connected_graph(rng, n=20)
        h = wc.walk_centrality_exact(g).walk_centrality
        for j in (0, 5, 19):
            assert wc.gwc_exact(g, [j]).value == pytest.approx(h[j],
                                                               rel=1e-10)

    def test_matches_fundamental_matrix_oracle(self):
        rng = np.random.default_rng(38)
        for _ in range(10):
            g = random_connected_graph(rng, n_max=30)
            size = int(rng.integers(1, g.n))
            absorbed = rng.choice(g.n, size=size, replace=False)
            assert wc.gwc_exact(g, absorbed).value == pytest.approx(
                gwc_oracle(g, absorbed), rel=1e-9, abs=1e-12)

    def test_sorted_set_recorded(self, p3):
        assert wc.gwc_exact(p3, [2, 0]).set == (0, 2)


class TestAbsorption:
    def test_rows_are_distributions(self):
        rng = np.random.default_rng(39)
        g = random_connected_graph(rng, n=18)
        probs = wc.absorption_probabilities(g, [2, 9, 13])
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(probs >= -1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(40)
        for _ in range(6):
            g = random_connected_graph(rng, n_max=22)
            absorbed = rng.choice(g.n, size=2, replace=False)
            np.testing.assert_allclose(
                wc.absorption_probabilities(g, absorbed),
                absorption_prob_oracle(g, absorbed), atol=1e-9)

    def test_absorbed_rows_are_indicators(self, p3):
        probs = wc.absorption_probabilities(p3, [0, 2])
        np.testing.assert_allclose(probs[0], [1.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(probs[2], [0.0, 1.0], atol=1e-14)


class TestDetour:
    def test_p3_frozen_value(self, p3):
        assert wc.group_detour_time(p3, [1], 0, 2) == pytest.approx(
            4.0, abs=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(8):
            g = random_connected_graph(rng, n_max=20)
            absorbed = rng.choice(g.n, size=2, replace=False)
            i, j = (int(v) for v in rng.integers(0, g.n, size=2))
            assert wc.group_detour_time(g, absorbed, i, j) == pytest.approx(
                detour_oracle(g, absorbed, i, j), rel=1e-9, abs=1e-9)

    def test_stationary_double_sum_identity(self):
        # sum_ij pi_i pi_j D_ij(S) = H(S) + K
        rng = np.random.default_rng(42)
        for _ in range(5):
            g = random_connected_graph(rng, n_max=18)
            absorbed = rng.choice(g.n, size=2, replace=False)
            lhs = detour_identity_rhs(g, absorbed)
            rhs = (wc.gwc_exact(g, absorbed).value
                   + wc.walk_centrality_exact(g).kemeny)
            assert lhs == pytest.approx(rhs, rel=1e-9)


class TestMarginalGain:
    def test_p3_frozen_values(self, p3):
        assert wc.marginal_gain_exact(p3, [0], 1) == pytest.approx(
            2.25, abs=1e-12)
        assert wc.marginal_gain_exact(p3, [0], 2) == pytest.approx(
            2.0, abs=1e-12)

    def test_equals_gwc_difference(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            g = random_connected_graph(rng, n_max=25)
            size = int(rng.integers(1, g.n - 1))
            absorbed = sorted(
                int(v) for v in rng.choice(g.n, size=size, replace=False))
            rest = [v for v in range(g.n) if v not in absorbed]
            u = int(rng.choice(rest))
            direct = (wc.gwc_exact(g, absorbed).value
                      - wc.gwc_exact(g, absorbed + [u]).value)
            assert wc.marginal_gain_exact(g, absorbed, u) == pytest.approx(
                direct, rel=1e-9, abs=1e-12)

    def test_rejects_member_vertex(self, p3):
        with pytest.raises(ValidationError):
            wc.marginal_gain_exact(p3, [0], 0)
