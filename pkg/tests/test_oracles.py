#!/usr/bin/env python3
"""
独立な正解値（Z_{n+1} の閉じた式、単連結クラスタリング、格子探索、輸送多面体の頂点）のテスト

使用方法:
    pytest tests/test_oracles.py -v
"""

import itertools
import math

import numpy as np
import pytest

from thickening.errors import FaceTooLarge, InputFormatError, SupportTooLarge
from thickening.filtration import build_complex, cech_value, vr_value
from thickening.measures import PValue, from_weights, uniform
from thickening.metric_core import random_euclidean_space, z_space
from thickening.oracles import (
    edge_death_scale,
    enumerate_transport_vertices,
    grid_maximize,
    single_linkage_h0,
    zn_bottleneck_expectation,
    zn_diagram,
)
from thickening.persistence import bottleneck, compute_diagram
from thickening.transport import check_coupling, wasserstein

P1, P2, P3, PINF = PValue(1.0), PValue(2.0), PValue(3.0), PValue.inf()


class TestZnClosedForm:
    """Z_{n+1} の図の閉じた式"""

    def test_counts(self):
        cf = zn_diagram(3, P1)
        assert cf.intervals[0] == ((0.0, 0.5, 3), (0.0, math.inf, 1))
        assert cf.intervals[1][0][2] == 3
        assert cf.intervals[2][0][2] == 1
        assert 3 not in cf.intervals

    def test_inf(self):
        cf = zn_diagram(3, PINF)
        assert cf.intervals[0][0][:2] == (0.0, 1.0)
        assert set(cf.intervals) == {0}

    def test_bad_n(self):
        with pytest.raises(InputFormatError):
            zn_diagram(0, P1)

    @pytest.mark.filterwarnings("ignore::UserWarning")
    @pytest.mark.parametrize("kind", ["cech", "vr"])
    @pytest.mark.parametrize("p", [P1, P2, P3, PINF])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_computed(self, kind, p, n):
        X = z_space(n + 1)
        D = compute_diagram(build_complex(X, p, kind, max_dim=n))
        assert D.same_as(zn_diagram(n, p).to_diagram(), tol=1e-9)

    @pytest.mark.parametrize("p", [P1, P2, P3])
    def test_bottleneck_expectation(self, p):
        D3 = zn_diagram(2, p).to_diagram()
        D4 = zn_diagram(3, p).to_diagram()
        for k in (0, 1):
            assert bottleneck(D3, D4, k)[0] == pytest.approx(zn_bottleneck_expectation(2, 3, p, k))
        expected = 0.5 * ((2 / 3) ** (1 / p.value) - 0.5 ** (1 / p.value))
        assert zn_bottleneck_expectation(2, 3, p, 1) == pytest.approx(expected)
        assert zn_bottleneck_expectation(2, 3, p, 0) == pytest.approx(0.5 * 0.5 ** (1 / p.value))

    def test_same_size(self):
        assert zn_bottleneck_expectation(3, 3, P2, 1) == 0.0


class TestSingleLinkage:
    """H_0 は最小全域木の辺の長さ × s_p"""

    @pytest.mark.parametrize("p", [P1, P2, P3])
    def test_edge_death_scale(self, p):
        assert edge_death_scale(p) == pytest.approx(0.5 ** (1 / p.value))

    def test_edge_death_scale_inf(self):
        assert edge_death_scale(PINF) == 1.0

    @pytest.mark.parametrize("seed", range(4))
    @pytest.mark.parametrize("p", [P1, P2, P3, PINF])
    def test_vr_h0(self, p, seed):
        X = random_euclidean_space(7, seed=seed)
        D = compute_diagram(build_complex(X, p, "vr", max_dim=1))
        oracle = single_linkage_h0(X, edge_death_scale(p))
        assert bottleneck(D, oracle, 0)[0] <= 1e-9

    def test_bad_scale(self, z3):
        with pytest.raises(InputFormatError):
            single_linkage_h0(z3, 0.0)


class TestGridMaximize:
    """格子上の最大値は厳密な値を超えず、近い"""

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("p", [P1, P2, P3])
    def test_diam_against_vr(self, p, seed):
        X = random_euclidean_space(5, seed=seed)
        dmax = float(X.d.max())
        for S in itertools.combinations(range(5), 3):
            grid = grid_maximize(X, S, "diam_p", p)
            exact = vr_value(X, S, p)
            assert grid <= exact + 1e-9
            assert exact ** p.value - grid ** p.value <= 2 * len(S) * 1e-2 * dmax ** p.value

    @pytest.mark.parametrize("seed", range(3))
    def test_rad_against_cech(self, seed):
        """細かい格子（step = 1e-3）では LP の値と 1e-3 以内"""
        X = random_euclidean_space(5, seed=seed)
        for S in itertools.combinations(range(5), 3):
            grid = grid_maximize(X, S, "rad_p", P2, step=1e-3)
            exact = cech_value(X, S, P2)
            assert grid <= exact + 1e-9
            assert exact - grid <= 1e-3

    @pytest.mark.parametrize("seed", range(3))
    def test_rad_below_cech_p1(self, seed):
        X = random_euclidean_space(5, seed=seed)
        for S in itertools.combinations(range(5), 3):
            assert grid_maximize(X, S, "rad_p", P1) <= cech_value(X, S, P1) + 1e-9

    def test_four_vertices(self):
        X = z_space(4)
        grid = grid_maximize(X, (0, 1, 2, 3), "diam_p", P1)
        assert grid == pytest.approx(0.75)

    def test_edge_on_grid(self):
        """1/2 は格子点なので辺では一致する"""
        X = random_euclidean_space(4, seed=1)
        assert grid_maximize(X, (0, 1), "diam_p", P2) == pytest.approx(vr_value(X, (0, 1), P2))

    def test_face_too_large(self):
        with pytest.raises(FaceTooLarge):
            grid_maximize(z_space(5), (0, 1, 2, 3, 4), "diam_p", P1)

    def test_bad_step(self, z3):
        with pytest.raises(InputFormatError):
            grid_maximize(z3, (0, 1), "diam_p", P1, step=0.1)

    def test_bad_functional(self, z3):
        with pytest.raises(InputFormatError):
            grid_maximize(z3, (0, 1), "spread", P1)


class TestTransportVertices:
    """輸送多面体の頂点"""

    def test_two_by_two(self, z2):
        a = uniform(z2)
        plans = enumerate_transport_vertices(a, a)
        assert len(plans) == 2
        assert all(check_coupling(plan, a, a) for plan in plans)

    def test_dirac_has_one_vertex(self, z3):
        a = from_weights(z3, [1.0, 0.0, 0.0])
        plans = enumerate_transport_vertices(a, uniform(z3))
        assert len(plans) == 1

    @pytest.mark.parametrize("seed", range(5))
    @pytest.mark.parametrize("q", [P1, P2])
    def test_lp_attains_best_vertex(self, q, seed):
        rng = np.random.default_rng(seed)
        X = random_euclidean_space(3, seed=seed)
        a = from_weights(X, rng.dirichlet(np.ones(3)))
        b = from_weights(X, rng.dirichlet(np.ones(3)))
        best = min(plan.cost(X, q) for plan in enumerate_transport_vertices(a, b))
        assert wasserstein(a, b, q)[0] == pytest.approx(best, abs=1e-9)

    def test_support_too_large(self):
        X = z_space(4)
        with pytest.raises(SupportTooLarge):
            enumerate_transport_vertices(uniform(X), uniform(X))
