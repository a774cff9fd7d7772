#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/transport.py — 有限台の測度間の最適輸送

- wasserstein      : 輸送問題の LP（linprog の単体法）で d_{W,q} を厳密に求める
- wasserstein_inf  : 距離の閾値を昇順に探索し、最大流で実行可能性を判定して d_{W,∞} を求める
- project_to_net   : δ-net U への射影 Φ_U（1 の分割による重みの再配分）
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from . import config
from .errors import CertificationFailure, NotANet, SpaceMismatch
from .linprog import linprog
from .measures import Measure, PValue, from_weights
from .metric_core import FiniteMetricSpace, hausdorff_subset


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """n × n の結合測度 mu（行が alpha、列が beta）"""

    mu: np.ndarray

    @property
    def row_sums(self) -> np.ndarray:
        return self.mu.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.mu.sum(axis=0)

    def cost(self, X: FiniteMetricSpace, q: PValue) -> float:
        """Σ mu_ij d_ij^q の q 乗根（q = ∞ なら台の上の最大距離）"""
        if q.is_inf:
            used = self.mu > 0.0
            return float(X.d[used].max()) if used.any() else 0.0
        return q.root(float(np.sum(self.mu * X.d ** q.value)))

    def to_json(self, digits: int = config.SIGNIFICANT_DIGITS) -> Dict:
        """非零の成分だけを {"source": i, "target": j, "mass": m} で並べる"""
        rows, cols = np.nonzero(self.mu > 0.0)
        return {
            "n": int(self.mu.shape[0]),
            "entries": [
                {"source": int(i), "target": int(j), "mass": float(f"{self.mu[i, j]:.{digits}g}")}
                for i, j in zip(rows.tolist(), cols.tolist())
            ],
        }


def check_coupling(plan: TransportPlan, alpha: Measure, beta: Measure, tol: float = config.PLAN_TOL) -> bool:
    """周辺分布が alpha, beta に一致し、成分が非負であるか"""
    if plan.mu.shape != (alpha.space.n, beta.space.n):
        return False
    if np.any(plan.mu < -tol):
        return False
    return bool(
        np.all(np.abs(plan.row_sums - alpha.w) <= tol)
        and np.all(np.abs(plan.col_sums - beta.w) <= tol)
    )


def _check_same_space(alpha: Measure, beta: Measure) -> FiniteMetricSpace:
    if not alpha.space.same_as(beta.space):
        raise SpaceMismatch("measures live on different spaces")
    return alpha.space


def _full_plan(n: int, rows: Sequence[int], cols: Sequence[int], block: np.ndarray) -> TransportPlan:
    mu = np.zeros((n, n))
    mu[np.ix_(list(rows), list(cols))] = np.clip(block, 0.0, None)
    mu.setflags(write=False)
    return TransportPlan(mu=mu)


# =========================
# q < ∞
# =========================

def solve_transport(cost: np.ndarray, a: np.ndarray, b: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    輸送問題 min Σ C_ij x_ij（行和 a、列和 b、x >= 0）を単体法で解く

    Returns:
        (最適値, 最適な x の行列)
    """
    k, l = cost.shape
    scale = float(cost.max()) if cost.size and cost.max() > 0 else 1.0
    A_eq = np.zeros((k + l, k * l))
    for i in range(k):
        A_eq[i, i * l:(i + 1) * l] = 1.0
    for j in range(l):
        A_eq[k + j, j::l] = 1.0
    b_eq = np.concatenate([a, b])
    res = linprog(-(cost / scale).reshape(-1), A_eq=A_eq, b_eq=b_eq)
    x = np.array([float(v) for v in res.x]).reshape(k, l)
    return -float(res.value) * scale, x


def wasserstein(alpha: Measure, beta: Measure, q: PValue) -> Tuple[float, TransportPlan]:
    """d_{W,q}(alpha, beta) と最適輸送計画（q = ∞ は wasserstein_inf に委ねる）"""
    X = _check_same_space(alpha, beta)
    if q.is_inf:
        return wasserstein_inf(alpha, beta)
    rows, cols = alpha.support.tolist(), beta.support.tolist()
    cost = X.d[np.ix_(rows, cols)] ** q.value
    value, x = solve_transport(cost, alpha.w[rows], beta.w[cols])
    return q.root(value), _full_plan(X.n, rows, cols, x)


# =========================
# q = ∞
# =========================

def _flow_network(alpha: Measure, beta: Measure, rows: List[int], cols: List[int], t: float) -> nx.DiGraph:
    G = nx.DiGraph()
    for i in rows:
        G.add_edge("source", ("a", i), capacity=float(alpha.w[i]))
    for j in cols:
        G.add_edge(("b", j), "sink", capacity=float(beta.w[j]))
    d = alpha.space.d
    for i in rows:
        for j in cols:
            if d[i, j] <= t:
                G.add_edge(("a", i), ("b", j), capacity=1.0)
    return G


def _feasible_flow(
    alpha: Measure, beta: Measure, rows: List[int], cols: List[int], t: float
) -> Tuple[bool, Dict]:
    G = _flow_network(alpha, beta, rows, cols, t)
    if "source" not in G or "sink" not in G:
        return False, {}
    value, flow = nx.maximum_flow(G, "source", "sink", flow_func=nx.algorithms.flow.edmonds_karp)
    return value >= 1.0 - config.PLAN_TOL, flow


def wasserstein_inf(alpha: Measure, beta: Measure) -> Tuple[float, TransportPlan]:
    """
    d_{W,∞}(alpha, beta) = 結合測度の台に現れる距離の最大値の最小

    候補は台の間の距離の値（昇順）で、二分探索で最小の実行可能な閾値を選ぶ。
    """
    X = _check_same_space(alpha, beta)
    rows, cols = alpha.support.tolist(), beta.support.tolist()
    candidates = np.unique(X.d[np.ix_(rows, cols)])

    lo, hi = 0, len(candidates) - 1
    ok, flow = _feasible_flow(alpha, beta, rows, cols, float(candidates[hi]))
    if not ok:
        raise CertificationFailure("no coupling found at the largest distance")
    while lo < hi:
        mid = (lo + hi) // 2
        found, f = _feasible_flow(alpha, beta, rows, cols, float(candidates[mid]))
        if found:
            hi, flow = mid, f
        else:
            lo = mid + 1

    block = np.zeros((len(rows), len(cols)))
    for r, i in enumerate(rows):
        for c, j in enumerate(cols):
            block[r, c] = flow.get(("a", i), {}).get(("b", j), 0.0)
    return float(candidates[lo]), _full_plan(X.n, rows, cols, block)


# =========================
# Net projection
# =========================

def partition_of_unity(X: FiniteMetricSpace, U: Sequence[int], delta: float) -> np.ndarray:
    """ζ_u(x) ∝ max(0, δ - d(x, u)) を x ごとに正規化した n × |U| 行列"""
    raw = np.maximum(0.0, delta - X.d[:, list(U)])
    return raw / raw.sum(axis=1, keepdims=True)


def project_to_net(alpha: Measure, U: Sequence[int], delta: float) -> Measure:
    """
    Φ_U(alpha): 各点 x の質量を、x から δ 未満の net 点 u に ζ_u(x) の割合で配る

    d_{W,q}(alpha, Φ_U(alpha)) < δ をすべての q について確認する（q = 1 と q = ∞）。
    """
    X = alpha.space
    net = sorted(set(int(u) for u in U))
    if not net or hausdorff_subset(X, net) >= delta:
        raise NotANet(f"subset is not a {delta}-net of the space")

    zeta = partition_of_unity(X, net, delta)
    w = np.zeros(X.n)
    w[net] = alpha.w @ zeta
    projected = from_weights(X, w)

    w_inf, _ = wasserstein_inf(alpha, projected)
    w_one, _ = wasserstein(alpha, projected, PValue(1.0))
    if w_inf >= delta or w_one >= delta:
        raise CertificationFailure(f"projection moved mass by {w_inf} >= {delta}")
    return projected
