#!/usr/bin/env python3
"""
最適輸送（d_{W,q}, d_{W,∞}, net への射影）のテスト

使用方法:
    pytest tests/test_transport.py -v
"""

import math

import numpy as np
import pytest

from thickening.errors import NotANet, SpaceMismatch
from thickening.measures import PValue, dirac, from_weights, uniform
from thickening.metric_core import (
    epsilon_net,
    euclidean_metric,
    random_euclidean_space,
    sample_sphere,
)
from thickening.transport import (
    check_coupling,
    partition_of_unity,
    project_to_net,
    wasserstein,
    wasserstein_inf,
)

Q1, Q2, QINF = PValue(1.0), PValue(2.0), PValue.inf()


class TestZ2:
    """Z_2 上の (0.3, 0.7) と (0.6, 0.4)"""

    @pytest.fixture(scope="class")
    def pair(self, z2):
        return from_weights(z2, [0.3, 0.7]), from_weights(z2, [0.6, 0.4])

    def test_w1(self, pair):
        a, b = pair
        value, plan = wasserstein(a, b, Q1)
        assert value == pytest.approx(0.3)
        assert check_coupling(plan, a, b)

    def test_w2(self, pair):
        a, b = pair
        value, _ = wasserstein(a, b, Q2)
        assert value == pytest.approx(math.sqrt(0.3))

    def test_winf(self, pair):
        """質量を動かす必要があるので距離 1"""
        a, b = pair
        value, plan = wasserstein(a, b, QINF)
        assert value == 1.0
        assert check_coupling(plan, a, b)

    def test_plan_json(self, pair):
        a, b = pair
        _, plan = wasserstein(a, b, Q1)
        data = plan.to_json()
        assert data["n"] == 2
        moved = [e for e in data["entries"] if e["source"] != e["target"] and e["mass"] > 1e-9]
        assert len(moved) == 1
        assert moved[0]["source"] == 1 and moved[0]["target"] == 0
        assert moved[0]["mass"] == pytest.approx(0.3)


class TestBasicProperties:
    """Dirac 測度、同一の測度、q に関する単調性"""

    @pytest.mark.parametrize("q", [Q1, Q2, QINF])
    def test_diracs(self, q):
        X = random_euclidean_space(5, seed=4)
        value, _ = wasserstein(dirac(X, 1), dirac(X, 3), q)
        assert value == pytest.approx(float(X.d[1, 3]))

    @pytest.mark.parametrize("q", [Q1, Q2, QINF])
    def test_identical(self, z3, q):
        a = from_weights(z3, [0.2, 0.5, 0.3])
        value, _ = wasserstein(a, a, q)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_uniform_vs_dirac(self, z3):
        assert wasserstein_inf(uniform(z3), dirac(z3, 0))[0] == 1.0
        assert wasserstein(uniform(z3), dirac(z3, 0), Q1)[0] == pytest.approx(2 / 3)

    @pytest.mark.parametrize("seed", range(6))
    def test_monotone_in_q(self, seed):
        rng = np.random.default_rng(seed)
        X = random_euclidean_space(6, seed=seed)
        a = from_weights(X, rng.dirichlet(np.ones(6)))
        b = from_weights(X, rng.dirichlet(np.ones(6)))
        w1 = wasserstein(a, b, Q1)[0]
        w2 = wasserstein(a, b, Q2)[0]
        winf = wasserstein(a, b, QINF)[0]
        assert w1 <= w2 + 1e-9
        assert w2 <= winf + 1e-9

    @pytest.mark.parametrize("seed", range(4))
    def test_triangle(self, seed):
        rng = np.random.default_rng(100 + seed)
        X = random_euclidean_space(5, seed=seed)
        a, b, c = (from_weights(X, rng.dirichlet(np.ones(5))) for _ in range(3))
        for q in (Q1, Q2, QINF):
            ab = wasserstein(a, b, q)[0]
            bc = wasserstein(b, c, q)[0]
            ac = wasserstein(a, c, q)[0]
            assert ac <= ab + bc + 1e-9

    def test_space_mismatch(self, z2, z3):
        with pytest.raises(SpaceMismatch):
            wasserstein(dirac(z2, 0), dirac(z3, 0), Q1)


class TestNetProjection:
    """δ-net への射影"""

    @pytest.fixture(scope="class")
    def circle(self):
        return euclidean_metric(sample_sphere(1, 40))

    def test_partition_rows_sum_to_one(self, circle):
        U = epsilon_net(circle, 0.4)
        zeta = partition_of_unity(circle, U, 0.4)
        assert np.allclose(zeta.sum(axis=1), 1.0)
        assert np.all(zeta >= 0.0)

    @pytest.mark.parametrize("seed", range(4))
    def test_projection_moves_less_than_delta(self, circle, seed):
        rng = np.random.default_rng(seed)
        delta = 0.4
        U = epsilon_net(circle, delta)
        a = from_weights(circle, rng.dirichlet(np.ones(40)))
        b = project_to_net(a, U, delta)
        assert set(b.support.tolist()) <= set(U)
        assert wasserstein_inf(a, b)[0] < delta
        assert wasserstein(a, b, Q2)[0] < delta

    def test_net_points_keep_dirac(self, circle):
        """net 点の Dirac は自分の位置に質量を残す"""
        U = epsilon_net(circle, 0.4)
        b = project_to_net(dirac(circle, U[0]), U, 0.4)
        assert b.w[U[0]] > 0.0

    def test_not_a_net(self, circle):
        with pytest.raises(NotANet):
            project_to_net(uniform(circle), [0], 0.4)

    def test_empty_net(self, circle):
        with pytest.raises(NotANet):
            project_to_net(uniform(circle), [], 0.4)
