#!/usr/bin/env python3
"""
測度と p-直径・p-半径・Fréchet 関数のテスト

使用方法:
    pytest tests/test_measures.py -v
"""

import math

import numpy as np
import pytest

from thickening.errors import InputFormatError, InvalidMeasure, NotOnUnitSphere, SpaceMismatch
from thickening.measures import (
    PValue,
    ambient_frechet_sq,
    diam_p,
    dirac,
    euclidean_mean,
    frechet,
    from_weights,
    i_qp,
    mix,
    pushforward,
    rad_p,
    rad_p_ambient,
    sphere_diam2_closed_form,
    sphere_rad2_closed_form,
    uniform,
)
from thickening.metric_core import (
    circle_grid_hausdorff,
    distortion,
    embed,
    euclidean_metric,
    from_distance_matrix,
    point_cloud,
    random_euclidean_space,
    sample_sphere,
    with_center,
    z_space,
)

P1, P2, P3, PINF = PValue(1.0), PValue(2.0), PValue(3.0), PValue.inf()


class TestPValue:
    """指数 p"""

    def test_parse(self):
        assert PValue.parse("inf").is_inf
        assert PValue.parse("∞").is_inf
        assert PValue.parse("2").value == 2.0
        assert PValue.parse(3) == P3

    def test_below_one(self):
        with pytest.raises(InputFormatError):
            PValue(0.5)

    def test_garbage(self):
        with pytest.raises(InputFormatError):
            PValue.parse("two")

    def test_order(self):
        assert P1 < P2 < PINF
        assert str(PINF) == "inf"
        assert str(P2) == "2"


class TestMeasure:
    """重みの検証と構成"""

    def test_renormalize(self, z3):
        a = from_weights(z3, [0.2, 0.3, 0.5 + 1e-10])
        assert abs(a.w.sum() - 1.0) <= 1e-12

    def test_reject_unnormalized(self, z3):
        with pytest.raises(InvalidMeasure):
            from_weights(z3, [0.2, 0.3, 0.4])

    def test_reject_negative(self, z3):
        with pytest.raises(InvalidMeasure):
            from_weights(z3, [1.2, -0.2, 0.0])

    def test_support(self, z3):
        assert from_weights(z3, [0.5, 0.0, 0.5]).support.tolist() == [0, 2]

    def test_pushforward(self, z2, z3):
        """Z_3 → Z_2 の写像 (0, 1, 1) による押し出し"""
        b = pushforward(uniform(z3), [0, 1, 1], z2)
        assert np.allclose(b.w, [1 / 3, 2 / 3])

    def test_mix(self, z3):
        m = mix([dirac(z3, 0), dirac(z3, 1)], [0.25, 0.75])
        assert np.allclose(m.w, [0.25, 0.75, 0.0])

    def test_mix_space_mismatch(self, z2, z3):
        with pytest.raises(SpaceMismatch):
            mix([dirac(z2, 0), dirac(z3, 0)], [0.5, 0.5])


class TestFrechet:
    """Fréchet 関数"""

    @pytest.mark.parametrize("p", [P1, P2, PINF])
    def test_dirac_at_center(self, z3, p):
        assert frechet(dirac(z3, 1), p, 1) == 0.0

    def test_uniform_z3(self, z3):
        assert frechet(uniform(z3), P2, 0) == pytest.approx(math.sqrt(2 / 3))

    def test_antipodal(self):
        X = euclidean_metric(point_cloud([[1, 0], [-1, 0]]))
        assert frechet(uniform(X), P2, 0) == pytest.approx(math.sqrt(2))


class TestDiamRad:
    """p-直径と p-半径"""

    @pytest.mark.parametrize("p", [P1, P2, PINF])
    def test_dirac(self, z3, p):
        assert diam_p(dirac(z3, 2), p) == 0.0
        assert rad_p(dirac(z3, 2), p) == 0.0

    @pytest.mark.parametrize("n", [1, 2, 4])
    @pytest.mark.parametrize("p", [P1, P2, P3])
    def test_uniform_zn(self, n, p):
        """Z_{n+1} の一様測度: diam_p = rad_p = (n/(n+1))^{1/p}"""
        X = z_space(n + 1)
        expected = (n / (n + 1)) ** (1 / p.value)
        assert diam_p(uniform(X), p) == pytest.approx(expected)
        assert rad_p(uniform(X), p) == pytest.approx(expected)

    @pytest.mark.parametrize("t", [0.1, 0.3, 0.5])
    @pytest.mark.parametrize("p", [P1, P2, P3])
    def test_two_points(self, t, p):
        """(t, 1-t) を距離 d の 2 点に: diam_p = (2t(1-t))^{1/p} d"""
        d = 1.7
        X = from_distance_matrix([[0, d], [d, 0]])
        a = from_weights(X, [t, 1 - t])
        assert diam_p(a, p) == pytest.approx((2 * t * (1 - t)) ** (1 / p.value) * d)

    def test_rad_half(self, z2):
        assert rad_p(uniform(z2), P1) == pytest.approx(0.5)

    def test_inf_is_support_diameter(self):
        X = from_distance_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        a = from_weights(X, [0.5, 0.5, 0.0])
        assert diam_p(a, PINF) == 1.0
        assert rad_p(a, PINF) == 1.0

    def test_rad_uses_points_outside_support(self):
        """中心候補は台の外の点も含む"""
        X = from_distance_matrix([[0, 2, 1], [2, 0, 1], [1, 1, 0]])
        a = from_weights(X, [0.5, 0.5, 0.0])
        assert rad_p(a, P2) == pytest.approx(1.0)
        assert frechet(a, P2, 0) == pytest.approx(math.sqrt(2))
        assert rad_p(a, PINF) == pytest.approx(1.0)


class TestIqp:
    """i_{q,p}"""

    @pytest.mark.parametrize("p", [P1, P2, P3])
    def test_equals_diam_when_q_is_p(self, p):
        X = from_distance_matrix([[0, 1, 2], [1, 0, 1.5], [2, 1.5, 0]])
        a = from_weights(X, [0.2, 0.5, 0.3])
        assert i_qp(a, p, p) == pytest.approx(diam_p(a, p))

    def test_dirac(self, z3):
        assert i_qp(dirac(z3, 0), P1, P2) == 0.0

    def test_uniform_z3(self, z3):
        assert i_qp(uniform(z3), P1, P2) == pytest.approx(2 / 3)


class TestAmbient:
    """周囲空間の中心による p-半径"""

    def test_same_space(self, z3):
        """距離 1 の中心を足しても X の点のほうが良い"""
        emb = with_center(z3, 1.0)
        a = uniform(z3)
        assert rad_p_ambient(a, emb, P2) == pytest.approx(rad_p(a, P2))

    def test_square(self):
        """正方形の向かい合う 2 点: どの中心でも √2"""
        pc = sample_sphere(1, 4)
        M = euclidean_metric(pc)
        X = M.subspace([0, 2])
        a = uniform(X)
        assert rad_p_ambient(a, embed(X, M, [0, 2]), P2) == pytest.approx(math.sqrt(2))

    def test_center_wins(self, z2):
        """全点から 1/2 の中心 O を加えると 1/2"""
        emb = with_center(z2, 0.5)
        a = uniform(z2)
        assert rad_p_ambient(a, emb, P1) == pytest.approx(0.5)
        assert rad_p_ambient(a, emb, P2) == pytest.approx(0.5)
        assert rad_p(a, P2) == pytest.approx(math.sqrt(0.5))

    @pytest.mark.parametrize("seed", range(10))
    def test_never_above_rad(self, seed):
        """中心の候補が増えるので rad_p_ambient <= rad_p"""
        rng = np.random.default_rng(seed)
        M = random_euclidean_space(9, seed=seed)
        index = sorted(rng.choice(9, size=5, replace=False).tolist())
        X = M.subspace(index)
        emb = embed(X, M, index)
        for _ in range(20):
            a = from_weights(X, rng.dirichlet(np.ones(5)))
            for p in (P1, P2, P3, PINF):
                assert rad_p_ambient(a, emb, p) <= rad_p(a, p) + 1e-12


class TestEuclideanData:
    """ユークリッド平均と球面上の閉じた式"""

    def test_mean_dirac(self):
        pc = point_cloud([[1.0, 2.0], [3.0, 5.0]])
        X = euclidean_metric(pc)
        assert np.allclose(euclidean_mean(dirac(X, 1), pc), [3.0, 5.0])

    def test_mean_weighted(self):
        pc = point_cloud([[0.0, 0.0], [4.0, 0.0]])
        X = euclidean_metric(pc)
        assert np.allclose(euclidean_mean(from_weights(X, [0.25, 0.75]), pc), [3.0, 0.0])

    def test_sphere_closed_forms_antipodal(self):
        pc = point_cloud([[1.0, 0.0], [-1.0, 0.0]])
        X = euclidean_metric(pc)
        a = uniform(X)
        assert np.allclose(euclidean_mean(a, pc), [0.0, 0.0])
        assert sphere_diam2_closed_form(a, pc) == pytest.approx(math.sqrt(2))
        assert sphere_rad2_closed_form(a, pc) == pytest.approx(math.sqrt(2))
        assert sphere_diam2_closed_form(dirac(X, 0), pc) == pytest.approx(0.0, abs=1e-7)

    def test_not_on_sphere(self):
        pc = point_cloud([[2.0, 0.0], [0.0, 1.0]])
        with pytest.raises(NotOnUnitSphere):
            sphere_diam2_closed_form(uniform(euclidean_metric(pc)), pc)

    @pytest.mark.parametrize("seed", range(5))
    def test_diam2_matches_double_sum(self, seed):
        rng = np.random.default_rng(seed)
        pc = sample_sphere(2, 12, mode="seeded-uniform", seed=seed)
        X = euclidean_metric(pc)
        a = from_weights(X, rng.dirichlet(np.ones(12)))
        assert sphere_diam2_closed_form(a, pc) == pytest.approx(diam_p(a, P2), abs=1e-9)

    def test_rad2_lipschitz_slack(self):
        """密な円周のサンプル: 0 <= (サンプル上の rad_2) - (閉じた式) <= d_H"""
        pc = sample_sphere(1, 40)
        X = euclidean_metric(pc)
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = from_weights(X, rng.dirichlet(np.ones(40) * 0.3))
            gap = rad_p(a, P2) - sphere_rad2_closed_form(a, pc)
            assert -1e-9 <= gap <= circle_grid_hausdorff(40, geodesic=False) + 1e-9

    def test_frechet_decomposition(self):
        """F^2(x) = |x - m|^2 + F^2(m)"""
        rng = np.random.default_rng(0)
        pc = point_cloud(rng.normal(size=(7, 3)))
        X = euclidean_metric(pc)
        a = from_weights(X, rng.dirichlet(np.ones(7)))
        m = euclidean_mean(a, pc)
        for i in range(7):
            lhs = frechet(a, P2, i) ** 2
            rhs = float(np.sum((pc.points[i] - m) ** 2)) + ambient_frechet_sq(a, pc, m)
            assert lhs == pytest.approx(rhs, abs=1e-9)


class TestPushforwardBound:
    """1-Lipschitz でない写像でも diam_p(f#a) <= diam_p(a) + dis(f)"""

    @pytest.mark.parametrize("seed", range(5))
    def test_bound(self, seed):
        rng = np.random.default_rng(seed)
        X = euclidean_metric(point_cloud(rng.random((6, 2))))
        Y = euclidean_metric(point_cloud(rng.random((4, 2))))
        f = rng.integers(0, 4, size=6).tolist()
        a = from_weights(X, rng.dirichlet(np.ones(6)))
        b = pushforward(a, f, Y)
        dis = distortion(X, Y, f)
        for p in (P1, P2, PINF):
            assert diam_p(b, p) <= diam_p(a, p) + dis + 1e-9
            assert rad_p(b, p) <= rad_p(a, p) + dis + 1e-9

    @pytest.mark.parametrize("seed", range(5))
    def test_iqp_bound(self, seed):
        rng = np.random.default_rng(50 + seed)
        X = euclidean_metric(point_cloud(rng.random((6, 2))))
        Y = euclidean_metric(point_cloud(rng.random((4, 2))))
        f = rng.integers(0, 4, size=6).tolist()
        a = from_weights(X, rng.dirichlet(np.ones(6)))
        b = pushforward(a, f, Y)
        dis = distortion(X, Y, f)
        for q, p in [(P1, P2), (P2, P1), (P2, P3), (P1, PINF)]:
            assert i_qp(b, q, p) <= i_qp(a, q, p) + dis + 1e-9
