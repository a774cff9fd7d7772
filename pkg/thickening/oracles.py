#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/oracles.py — 独立に計算できる正解値

- zn_diagram                   : Z_{n+1} の図（閉じた式）
- single_linkage_h0            : 最小全域木による単連結クラスタリング（H_0）
- grid_maximize                : 重心座標の格子上での diam_p / rad_p の最大値
- enumerate_transport_vertices : 輸送多面体の頂点（全域木の基底）の列挙
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import networkx as nx
import numpy as np

from . import config
from .errors import CertificationFailure, FaceTooLarge, InputFormatError, SupportTooLarge
from .filtration import cech_value, vr_value
from .measures import Measure, PValue, diam_p_many, rad_p_many
from .metric_core import FiniteMetricSpace, z_space
from .persistence import PersistenceDiagram
from .transport import TransportPlan, check_coupling


# =========================
# Z_{n+1}
# =========================

@dataclass(frozen=True)
class ClosedFormDiagram:
    """次数ごとの (birth, death, 多重度)"""

    n: int
    p: PValue
    intervals: Dict[int, Tuple[Tuple[float, float, int], ...]]

    def to_diagram(self) -> PersistenceDiagram:
        degrees = {
            k: tuple(sorted((b, d) for b, d, mult in ivs for _ in range(mult)))
            for k, ivs in self.intervals.items()
        }
        return PersistenceDiagram(degrees=degrees)


def zn_diagram(n: int, p: PValue) -> ClosedFormDiagram:
    """
    Z_{n+1}（n+1 点、距離はすべて 1）の p-VR / p-Čech の図

    H_0: (0, (1/2)^{1/p}) が n 個と (0, ∞)
    H_k (1 <= k <= n-1): ((k/(k+1))^{1/p}, ((k+1)/(k+2))^{1/p}) が C(n, k+1) 個
    p = ∞ では H_0 の死が 1 になり、正の次数は空。
    """
    if n < 1:
        raise InputFormatError("n must be >= 1")
    intervals: Dict[int, Tuple[Tuple[float, float, int], ...]] = {
        0: ((0.0, 1.0 if p.is_inf else p.root(0.5), n), (0.0, math.inf, 1)),
    }
    if not p.is_inf:
        for k in range(1, n):
            birth = p.root(k / (k + 1))
            death = p.root((k + 1) / (k + 2))
            intervals[k] = ((birth, death, math.comb(n, k + 1)),)
    return ClosedFormDiagram(n=n, p=p, intervals=intervals)


def zn_bottleneck_expectation(n: int, m: int, p: PValue, degree: int) -> float:
    """
    Z_{n+1} と Z_{m+1} の図のボトルネック距離

    各次数の有限区間は 1 種類だけなので、多重度が違えば余った区間を対角に送る費用（区間長の半分）になる。
    """
    a, b = zn_diagram(n, p).intervals, zn_diagram(m, p).intervals
    first = [iv for iv in a.get(degree, ()) if not math.isinf(iv[1])]
    second = [iv for iv in b.get(degree, ()) if not math.isinf(iv[1])]
    count1 = sum(mult for _, _, mult in first)
    count2 = sum(mult for _, _, mult in second)
    if count1 == count2:
        return 0.0
    birth, death, _ = (first or second)[0]
    return (death - birth) / 2.0


# =========================
# H_0
# =========================

def single_linkage_h0(X: FiniteMetricSpace, scale: float) -> PersistenceDiagram:
    """最小全域木の辺の長さ × scale を死とする H_0 の図"""
    if scale <= 0:
        raise InputFormatError("scale must be positive")
    G = nx.Graph()
    G.add_nodes_from(range(X.n))
    for i, j in itertools.combinations(range(X.n), 2):
        G.add_edge(i, j, weight=float(X.d[i, j]))
    heights = sorted(w for _, _, w in nx.minimum_spanning_tree(G).edges(data="weight"))
    intervals = [(0.0, scale * h) for h in heights] + [(0.0, math.inf)]
    return PersistenceDiagram(degrees={0: tuple(sorted(intervals))})


def edge_death_scale(p: PValue) -> float:
    """
    距離 1 の 2 点空間で辺の値を直接最大化して得る倍率 s_p

    vr_value と cech_value の両方で求め、一致しなければ CertificationFailure。
    """
    Z2 = z_space(2)
    by_vr = vr_value(Z2, (0, 1), p)
    by_cech = cech_value(Z2, (0, 1), p)
    if abs(by_vr - by_cech) > 1e-9:
        raise CertificationFailure(f"edge values disagree: vr {by_vr}, cech {by_cech}")
    return by_vr


# =========================
# Grid search
# =========================

def _compositions(total: int, parts: int) -> Iterator[np.ndarray]:
    """和が total の非負整数 parts 個の組を、最後の 2 成分をまとめた塊で返す"""
    if parts == 1:
        yield np.array([[total]])
        return
    if parts == 2:
        c = np.arange(total + 1)
        yield np.column_stack([c, total - c])
        return
    for head in range(total + 1):
        for block in _compositions(total - head, parts - 1):
            yield np.column_stack([np.full(block.shape[0], head), block])


def grid_maximize(
    X: FiniteMetricSpace, S: Sequence[int], functional: str, p: PValue, step: float = config.GRID_MAX_STEP
) -> float:
    """
    Δ_S の格子（重心座標 c/N, N = round(1/step)）上での functional の最大値

    functional: "diam_p" または "rad_p"
    """
    s = list(S)
    if len(s) > config.GRID_MAX_FACE:
        raise FaceTooLarge(len(s), config.GRID_MAX_FACE)
    if step <= 0 or step > config.GRID_MAX_STEP:
        raise InputFormatError(f"step must be in (0, {config.GRID_MAX_STEP}]")
    if functional not in ("diam_p", "rad_p"):
        raise InputFormatError(f"unknown functional: {functional}")
    if len(s) == 1:
        return 0.0

    N = int(round(1.0 / step))
    kernel = diam_p_many if functional == "diam_p" else rad_p_many
    best = 0.0
    for block in _compositions(N, len(s)):
        A = block / N
        best = max(best, float(kernel(X, s, A, p).max()))
    return best


# =========================
# Transport polytope
# =========================

def _is_spanning_tree(cells: Sequence[Tuple[int, int]], k: int, l: int) -> bool:
    G = nx.Graph()
    G.add_nodes_from([("r", i) for i in range(k)] + [("c", j) for j in range(l)])
    G.add_edges_from((("r", i), ("c", j)) for i, j in cells)
    return nx.is_tree(G)


def enumerate_transport_vertices(alpha: Measure, beta: Measure) -> List[TransportPlan]:
    """
    台の大きさが ENUM_MAX_SUPPORT 以下の 2 つの測度について、輸送多面体の頂点をすべて返す

    基底は行・列を頂点とする二部グラフの全域木（k + l - 1 個のセル）に対応する。
    """
    rows, cols = alpha.support.tolist(), beta.support.tolist()
    cap = config.ENUM_MAX_SUPPORT
    if len(rows) > cap or len(cols) > cap:
        raise SupportTooLarge(f"supports of size {len(rows)} and {len(cols)} exceed {cap}")

    k, l = len(rows), len(cols)
    a, b = alpha.w[rows], beta.w[cols]
    all_cells = [(i, j) for i in range(k) for j in range(l)]
    rhs = np.concatenate([a, b])

    seen = set()
    plans: List[TransportPlan] = []
    for cells in itertools.combinations(all_cells, k + l - 1):
        if not _is_spanning_tree(cells, k, l):
            continue
        M = np.zeros((k + l, len(cells)))
        for c, (i, j) in enumerate(cells):
            M[i, c] = 1.0
            M[k + j, c] = 1.0
        x, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        if np.any(x < -config.PLAN_TOL) or np.abs(M @ x - rhs).max() > config.PLAN_TOL:
            continue
        mu = np.zeros((alpha.space.n, beta.space.n))
        for c, (i, j) in enumerate(cells):
            mu[rows[i], cols[j]] = max(float(x[c]), 0.0)
        key = tuple(np.round(mu, 12).reshape(-1).tolist())
        if key in seen:
            continue
        seen.add(key)
        mu.setflags(write=False)
        plan = TransportPlan(mu=mu)
        if check_coupling(plan, alpha, beta):
            plans.append(plan)
    return plans
