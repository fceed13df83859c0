import numpy as np
import pytest

from netwake.geometry import BoundaryMode, expected_degree, sample_points
from netwake.network import build_rgg, components, concat_ranges, giant_fraction

from conftest import bfs_labeling, brute_force_edges, edge_set, network_from_edges

TORUS = BoundaryMode.TORUS
PLANAR = BoundaryMode.PLANAR


def test_concat_ranges():
    out = concat_ranges(np.array([5, 0, 9]), np.array([3, 0, 2]))
    np.testing.assert_array_equal(out, [5, 6, 7, 9, 10])
    assert concat_ranges(np.array([], dtype=int), np.array([], dtype=int)).size == 0


class TestBuildRgg:
    def test_pair_inside_range(self):
        pts = np.array([[10.0, 10.0], [10.0, 15.0]])  # distance 5 = 0.5 R
        net = build_rgg(pts, 10.0, 100.0, TORUS)
        assert net.n_local_edges == 1
        assert net.has_edge(0, 1)

    def test_pair_outside_range(self):
        pts = np.array([[10.0, 10.0], [10.0, 20.1]])  # distance 10.1 = 1.01 R
        net = build_rgg(pts, 10.0, 100.0, TORUS)
        assert net.n_local_edges == 0

    def test_boundary_inclusive(self):
        pts = np.array([[0.0, 0.0], [10.0, 0.0]])
        net = build_rgg(pts, 10.0, 100.0, PLANAR)
        assert net.has_edge(0, 1)

    @pytest.mark.parametrize("boundary", [TORUS, PLANAR])
    @pytest.mark.parametrize("n,radio", [(80, 18.0), (300, 7.0), (500, 4.0), (500, 40.0)])
    def test_matches_brute_force(self, boundary, n, radio, rng):
        pts = sample_points(n, 100.0, rng)
        net = build_rgg(pts, radio, 100.0, boundary)
        assert edge_set(net) == brute_force_edges(pts, radio, 100.0, boundary)
        net.validate()

    def test_permutation_invariant(self, rng):
        pts = sample_points(200, 100.0, rng)
        perm = rng.permutation(200)
        net_a = build_rgg(pts, 9.0, 100.0, TORUS)
        net_b = build_rgg(pts[perm], 9.0, 100.0, TORUS)
        # Compare as sets of position pairs.
        def positional(net, order):
            return {tuple(sorted((int(order[u]), int(order[v])))) for u, v in edge_set(net)}
        assert positional(net_a, np.arange(200)) == positional(net_b, perm)

    def test_mean_degree_concentrates(self):
        # Smaller sibling of the acceptance check: same density, N=2500.
        degs = []
        for i in range(5):
            pts = sample_points(2500, 500.0, np.random.default_rng(100 + i))
            degs.append(build_rgg(pts, 12.5, 500.0, TORUS).mean_local_degree)
        expected = expected_degree(0.01, 12.5)
        assert abs(np.mean(degs) - expected) / expected < 0.05

    def test_zero_range_gives_empty_edge_set(self, rng):
        net = build_rgg(sample_points(50, 10.0, rng), 0.0, 10.0, TORUS)
        assert net.n_local_edges == 0

    def test_wrap_ambiguity_warns(self, rng):
        pts = sample_points(20, 10.0, rng)
        with pytest.warns(RuntimeWarning):
            build_rgg(pts, 6.0, 10.0, TORUS)

    def test_rejects_out_of_region_points(self):
        with pytest.raises(ValueError):
            build_rgg(np.array([[0.0, 11.0]]), 1.0, 10.0, TORUS)

    def test_neighbor_lists_sorted(self, rng):
        net = build_rgg(sample_points(300, 100.0, rng), 10.0, 100.0, TORUS)
        for u in range(net.n_nodes):
            nbrs = net.local_neighbors(u)
            assert np.all(np.diff(nbrs) > 0)

    def test_degree_edge_relation(self, rng):
        net = build_rgg(sample_points(400, 100.0, rng), 8.0, 100.0, TORUS)
        assert net.mean_local_degree == pytest.approx(2 * net.n_local_edges / net.n_nodes)


class TestComponents:
    def test_edgeless(self):
        lab = components(network_from_edges(5, []))
        assert lab.sizes.tolist() == [1, 1, 1, 1, 1]
        assert sorted(lab.labels.tolist()) == [0, 1, 2, 3, 4]

    def test_cycle_plus_isolate(self):
        lab = components(network_from_edges(4, [(0, 1), (1, 2), (2, 0)]))
        assert sorted(lab.sizes.tolist()) == [1, 3]
        assert lab.labels[0] == lab.labels[1] == lab.labels[2]
        assert lab.labels[3] != lab.labels[0]

    def test_labels_ordered_by_smallest_member(self):
        lab = components(network_from_edges(5, [(3, 4), (1, 2)]))
        # Component of node 0 gets label 0, of node 1 label 1, of node 3 label 2.
        assert lab.labels.tolist() == [0, 1, 1, 2, 2]
        assert lab.sizes.tolist() == [1, 2, 2]

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_bfs_oracle(self, seed):
        rng = np.random.default_rng(seed)
        pts = sample_points(250, 100.0, rng)
        net = build_rgg(pts, 6.0, 100.0, TORUS)
        lab = components(net)
        oracle = bfs_labeling(net.n_nodes, list(edge_set(net)))
        got = [set(np.flatnonzero(lab.labels == k)) for k in range(lab.sizes.size)]
        assert sorted(map(sorted, got)) == sorted(map(sorted, oracle))

    def test_giant_emerges_above_onset(self):
        # 100 fresh realizations at the reference scale; the largest
        # component should hold >= 95% of nodes in >= 95% of them.
        hits = 0
        for i in range(100):
            pts = sample_points(10_000, 1000.0, np.random.default_rng(5000 + i))
            net = build_rgg(pts, 16.0, 1000.0, TORUS)
            if giant_fraction(components(net), net.n_nodes) >= 0.95:
                hits += 1
        assert hits >= 95


class TestGiantFraction:
    def test_basic(self):
        lab = components(network_from_edges(4, [(0, 1), (1, 2)]))
        assert giant_fraction(lab, 4) == pytest.approx(0.75)

    def test_single_component(self):
        lab = components(network_from_edges(7, [(i, i + 1) for i in range(6)]))
        assert giant_fraction(lab, 7) == 1.0

    def test_half(self):
        edges = [(i, i + 1) for i in range(49)]          # 0..49 chain of 50
        edges += [(50 + i, 51 + i) for i in range(29)]   # 50..79 chain of 30
        edges += [(80 + i, 81 + i) for i in range(19)]   # 80..99 chain of 20
        lab = components(network_from_edges(100, edges))
        assert sorted(lab.sizes.tolist(), reverse=True) == [50, 30, 20]
        assert giant_fraction(lab, 100) == pytest.approx(0.5)

    def test_zero_nodes_rejected(self):
        lab = components(network_from_edges(2, []))
        with pytest.raises(ValueError):
            giant_fraction(lab, 0)
