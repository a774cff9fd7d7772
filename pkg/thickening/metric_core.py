#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/metric_core.py — 有限距離空間と点群

距離行列の検証、点群からのユークリッド距離、球面・円周のサンプル、
ε-net、ハウスドルフ距離、グロモフ・ハウスドルフ距離の上界、metric spread を提供する。
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from . import config
from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    EmbeddingMismatch,
    EmptySubset,
    InputFormatError,
    NegativeDistance,
    NonZeroDiagonal,
    NotSquare,
    ThickeningWarning,
    TriangleViolation,
    ZeroOffDiagonal,
)


# =========================
# Types
# =========================

@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """検証済みの有限距離空間（距離行列は読み取り専用）"""

    d: np.ndarray
    label: str = ""

    @property
    def n(self) -> int:
        return int(self.d.shape[0])

    def same_as(self, other: "FiniteMetricSpace") -> bool:
        """同じ距離行列を持つか（同一オブジェクトなら即 True）"""
        if self is other:
            return True
        return self.d.shape == other.d.shape and bool(np.array_equal(self.d, other.d))

    def subspace(self, index: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(index)
        if not idx:
            raise EmptySubset("subspace needs at least one point")
        return _frozen_space(self.d[np.ix_(idx, idx)], label=f"{self.label}[sub]")


@dataclass(frozen=True, eq=False)
class PointCloud:
    """R^m の点の列（行が点）"""

    points: np.ndarray

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])


@dataclass(frozen=True)
class Correspondence:
    """X → Y の写像 phi と Y → X の写像 psi"""

    phi: Tuple[int, ...]
    psi: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Embedding:
    """X の各点を周囲空間 M の点に対応させたもの"""

    space: FiniteMetricSpace
    ambient: FiniteMetricSpace
    index: Tuple[int, ...]


@dataclass(frozen=True)
class SpreadResult:
    value: float
    exact: bool
    witness: Tuple[int, ...] = field(default_factory=tuple)


# =========================
# Construction
# =========================

def _frozen_space(d: np.ndarray, label: str = "") -> FiniteMetricSpace:
    arr = np.array(d, dtype=float, copy=True)
    arr.setflags(write=False)
    return FiniteMetricSpace(d=arr, label=label)


def check_triangle(d: np.ndarray, tau: float = config.TAU_METRIC) -> None:
    """三角不等式 d[i][j] <= d[i][k] + d[k][j] を相対許容誤差 tau で確認"""
    n = d.shape[0]
    scale = np.maximum(1.0, d)
    for k in range(n):
        excess = d - (d[:, k][:, None] + d[k, :][None, :])
        bad = excess > tau * scale
        if bad.any():
            i, j = (int(v) for v in np.argwhere(bad)[0])
            raise TriangleViolation(i, j, k, float(excess[i, j]))


def from_distance_matrix(rows: Sequence[Sequence[float]] | np.ndarray, label: str = "") -> FiniteMetricSpace:
    """
    距離行列から FiniteMetricSpace を作る。

    対角成分・対称性・非負性・異なる点の距離が正であること・三角不等式を順に検証する。
    許容誤差内の非対称は平均を取って対称化する。
    """
    try:
        d = np.array(rows, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputFormatError(f"distance matrix is not numeric: {e}") from e

    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise NotSquare(f"expected a nonempty square matrix, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise InputFormatError("distance matrix contains non-finite values")

    n = d.shape[0]
    diag = np.diag(d)
    if np.any(diag != 0.0):
        i = int(np.flatnonzero(diag != 0.0)[0])
        raise NonZeroDiagonal(f"d[{i}][{i}] = {diag[i]}")

    tol = config.TAU_METRIC * np.maximum(1.0, np.abs(d))
    asym = np.abs(d - d.T) > tol
    if asym.any():
        i, j = (int(v) for v in np.argwhere(asym)[0])
        raise AsymmetricMatrix(f"d[{i}][{j}] = {d[i, j]} but d[{j}][{i}] = {d[j, i]}")
    d = (d + d.T) / 2.0

    if np.any(d < 0.0):
        i, j = (int(v) for v in np.argwhere(d < 0.0)[0])
        raise NegativeDistance(f"d[{i}][{j}] = {d[i, j]}")

    off = ~np.eye(n, dtype=bool)
    if np.any(d[off] == 0.0):
        i, j = (int(v) for v in np.argwhere((d == 0.0) & off)[0])
        raise ZeroOffDiagonal(f"points {i} and {j} coincide")

    check_triangle(d)
    return _frozen_space(d, label=label)


def z_space(count: int) -> FiniteMetricSpace:
    """Z_count: count 点、異なる 2 点間の距離はすべて 1"""
    if count < 1:
        raise InputFormatError("Z space needs at least one point")
    d = np.ones((count, count)) - np.eye(count)
    return _frozen_space(d, label=f"Z_{count}")


def point_cloud(points: Sequence[Sequence[float]] | np.ndarray) -> PointCloud:
    arr = np.array(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] < 1:
        raise DimensionMismatch(f"point cloud must be a nonempty n x m array, got shape {arr.shape}")
    arr.setflags(write=False)
    return PointCloud(points=arr)


def euclidean_metric(pc: PointCloud) -> FiniteMetricSpace:
    """点群のユークリッド距離（l2）"""
    x = pc.points
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt(np.sum(diff * diff, axis=2))
    d = np.triu(d, 1)
    d = d + d.T
    n = d.shape[0]
    off = ~np.eye(n, dtype=bool)
    if np.any(d[off] == 0.0):
        i, j = (int(v) for v in np.argwhere((d == 0.0) & off)[0])
        raise ZeroOffDiagonal(f"points {i} and {j} coincide")
    return _frozen_space(d, label="euclidean")


def sample_sphere(n_dim: int, count: int, mode: str = "grid", seed: int = 0) -> PointCloud:
    """
    単位球面 S^{n_dim} ⊂ R^{n_dim+1} のサンプル

    mode:
        grid           : S^1 は正 count 角形、S^2 はフィボナッチ格子
        seeded-uniform : 正規分布を正規化（seed が同じなら同じ点列）
    """
    if n_dim < 1:
        raise InputFormatError("n_dim must be >= 1")
    if count < n_dim + 2:
        raise InputFormatError(f"count must be >= n_dim + 2 = {n_dim + 2}")

    if mode == "grid":
        if n_dim == 1:
            theta = 2.0 * np.pi * np.arange(count) / count
            pts = np.column_stack([np.cos(theta), np.sin(theta)])
        elif n_dim == 2:
            k = np.arange(count) + 0.5
            z = 1.0 - 2.0 * k / count
            r = np.sqrt(1.0 - z * z)
            phi = np.pi * (1.0 + math.sqrt(5.0)) * k
            pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
        else:
            raise InputFormatError("grid mode supports n_dim 1 or 2; use seeded-uniform")
    elif mode == "seeded-uniform":
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((count, n_dim + 1))
        pts = g / np.linalg.norm(g, axis=1, keepdims=True)
    else:
        raise InputFormatError(f"unknown sampling mode: {mode}")

    return point_cloud(pts)


def geodesic_circle_metric(count: int) -> FiniteMetricSpace:
    """周長 2π の円周上の正 count 角形（弧長距離）"""
    if count < 3:
        raise InputFormatError("count must be >= 3")
    idx = np.arange(count)
    steps = np.abs(idx[:, None] - idx[None, :])
    steps = np.minimum(steps, count - steps)
    return _frozen_space(steps * (2.0 * np.pi / count), label=f"geodesic_S1_{count}")


def circle_grid_hausdorff(count: int, geodesic: bool) -> float:
    """正 count 角形と S^1 のハウスドルフ距離（隣接点の中点までの距離）"""
    half_gap = math.pi / count
    return half_gap if geodesic else 2.0 * math.sin(half_gap / 2.0)


def random_euclidean_space(n: int, dim: int = 2, seed: int = 0, scale: float = 1.0) -> FiniteMetricSpace:
    """[0, scale]^dim の一様乱数点のユークリッド距離（テスト用）"""
    rng = np.random.default_rng(seed)
    return euclidean_metric(point_cloud(rng.random((n, dim)) * scale))


def perturb(X: FiniteMetricSpace, eps: float, seed: int = 0) -> FiniteMetricSpace:
    """
    非対角成分に [eps/2, eps] の一様乱数を足した距離空間。

    足す量の和が eps 以上なので三角不等式は保たれ、|Δd| <= eps となる。
    """
    rng = np.random.default_rng(seed)
    shift = rng.uniform(eps / 2.0, eps, size=(X.n, X.n))
    shift = np.triu(shift, 1)
    shift = shift + shift.T
    return from_distance_matrix(X.d + shift, label=f"{X.label}+perturbed")


def embed(X: FiniteMetricSpace, M: FiniteMetricSpace, index: Sequence[int]) -> Embedding:
    """X を M の部分集合として埋め込む（距離が一致することを確認）"""
    idx = tuple(int(i) for i in index)
    if len(idx) != X.n:
        raise EmbeddingMismatch(f"embedding has {len(idx)} entries for {X.n} points")
    if len(set(idx)) != len(idx) or any(i < 0 or i >= M.n for i in idx):
        raise EmbeddingMismatch("embedding indices must be distinct indices of the ambient space")
    sub = M.d[np.ix_(idx, idx)]
    tol = config.TAU_METRIC * np.maximum(1.0, X.d)
    if np.any(np.abs(sub - X.d) > tol):
        i, j = (int(v) for v in np.argwhere(np.abs(sub - X.d) > tol)[0])
        raise EmbeddingMismatch(f"d_X({i},{j}) = {X.d[i, j]} but ambient distance is {sub[i, j]}")
    return Embedding(space=X, ambient=M, index=idx)


def with_center(X: FiniteMetricSpace, radius: float) -> Embedding:
    """X に全点から距離 radius の点を 1 つ加えた空間への埋め込み"""
    n = X.n
    d = np.zeros((n + 1, n + 1))
    d[:n, :n] = X.d
    d[n, :n] = radius
    d[:n, n] = radius
    M = from_distance_matrix(d, label=f"{X.label}+center")
    return embed(X, M, range(n))


# =========================
# Basic invariants
# =========================

def eccentricity(X: FiniteMetricSpace, i: int) -> float:
    return float(X.d[i].max())


def radius(X: FiniteMetricSpace) -> float:
    """中心候補を X の点に限った半径"""
    return float(X.d.max(axis=1).min())


def diameter(X: FiniteMetricSpace) -> float:
    return float(X.d.max())


def hausdorff_subset(X: FiniteMetricSpace, U: Iterable[int]) -> float:
    """X と部分集合 U のハウスドルフ距離 max_x min_u d(x, u)"""
    idx = sorted(set(int(u) for u in U))
    if not idx:
        raise EmptySubset("hausdorff_subset needs a nonempty subset")
    return float(X.d[:, idx].min(axis=1).max())


def epsilon_net(X: FiniteMetricSpace, eps: float) -> List[int]:
    """
    最遠点法による ε-net（点 0 から開始、同距離なら番号の小さい点）

    すべての点が選ばれた点から eps 未満の距離にある。
    """
    if eps <= 0:
        raise InputFormatError("eps must be positive")
    chosen = [0]
    nearest = X.d[0].copy()
    while True:
        far = int(np.argmax(nearest))  # argmax は最初の最大値を返す
        if nearest[far] < eps:
            break
        chosen.append(far)
        nearest = np.minimum(nearest, X.d[far])
    return sorted(chosen)


# =========================
# Gromov-Hausdorff bounds
# =========================

def _check_map(f: Sequence[int], n_from: int, n_to: int, what: str) -> np.ndarray:
    arr = np.asarray(list(f), dtype=int)
    if arr.shape != (n_from,):
        raise DimensionMismatch(f"{what} must have {n_from} entries, got {arr.shape[0] if arr.ndim else 0}")
    if np.any(arr < 0) or np.any(arr >= n_to):
        raise DimensionMismatch(f"{what} has indices outside 0..{n_to - 1}")
    return arr


def distortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, f: Sequence[int]) -> float:
    """dis(f) = max |d_X(x, x') - d_Y(f(x), f(x'))|"""
    fa = _check_map(f, X.n, Y.n, "map")
    return float(np.abs(X.d - Y.d[np.ix_(fa, fa)]).max())


def codistortion(X: FiniteMetricSpace, Y: FiniteMetricSpace, phi: Sequence[int], psi: Sequence[int]) -> float:
    """codis(phi, psi) = max |d_X(x, psi(y)) - d_Y(phi(x), y)|"""
    pa = _check_map(phi, X.n, Y.n, "phi")
    qa = _check_map(psi, Y.n, X.n, "psi")
    return float(np.abs(X.d[:, qa] - Y.d[pa, :]).max())


def gh_upper_bound(X: FiniteMetricSpace, Y: FiniteMetricSpace, c: Correspondence) -> float:
    """½ max(dis(phi), dis(psi), codis(phi, psi)) — d_GH(X, Y) の上界"""
    return 0.5 * max(
        distortion(X, Y, c.phi),
        distortion(Y, X, c.psi),
        codistortion(X, Y, c.phi, c.psi),
    )


def identity_correspondence(n: int) -> Correspondence:
    return Correspondence(phi=tuple(range(n)), psi=tuple(range(n)))


# =========================
# Metric spread
# =========================

def _dominates(X: FiniteMetricSpace, U: Sequence[int], t: float) -> bool:
    return bool(X.d[:, list(U)].min(axis=1).max() <= t)


def _threshold_graph(X: FiniteMetricSpace, t: float) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(X.n))
    rows, cols = np.nonzero(np.triu(X.d <= t, 1))
    G.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return G


def _dominating_clique_exact(X: FiniteMetricSpace, t: float) -> Tuple[int, ...] | None:
    # 支配する clique があれば、それを含む極大 clique も支配する
    G = _threshold_graph(X, t)
    for clique in sorted(sorted(c) for c in nx.find_cliques(G)):
        if _dominates(X, clique, t):
            return tuple(clique)
    return None


def _dominating_clique_greedy(X: FiniteMetricSpace, t: float) -> Tuple[int, ...] | None:
    adj = X.d <= t
    for start in range(X.n):
        clique = [start]
        covered = adj[start].copy()
        while not covered.all():
            compatible = np.flatnonzero(adj[clique].all(axis=0))
            compatible = [v for v in compatible if v not in clique]
            if not compatible:
                break
            gains = [int((adj[v] & ~covered).sum()) for v in compatible]
            best = compatible[int(np.argmax(gains))]
            if max(gains) == 0:
                break
            clique.append(int(best))
            covered |= adj[best]
        if covered.all():
            return tuple(sorted(clique))
    return None


def metric_spread(X: FiniteMetricSpace, exact_cap: int = config.SPREAD_EXACT_CAP) -> SpreadResult:
    """
    metric spread: inf_U max(d_H(U, X), diam(U))

    値が t 以下 ⇔ 距離 t 以下の辺のグラフに「全点を支配する clique」がある。
    候補 t は 0 と距離の値なので、二分探索で最小の t を求める。
    exact_cap を超える点数では貪欲法で見つけた U による上界を返す（exact=False）。
    """
    candidates = np.unique(np.concatenate([[0.0], X.d[np.triu_indices(X.n, 1)]]))
    exact = X.n <= exact_cap

    if exact:
        lo, hi = 0, len(candidates) - 1
        best = _dominating_clique_exact(X, float(candidates[hi]))
        while lo < hi:
            mid = (lo + hi) // 2
            found = _dominating_clique_exact(X, float(candidates[mid]))
            if found is not None:
                hi, best = mid, found
            else:
                lo = mid + 1
        return SpreadResult(value=float(candidates[lo]), exact=True, witness=best or ())

    warnings.warn(
        f"metric_spread: {X.n} points exceeds the exact cap {exact_cap}; returning an upper bound",
        ThickeningWarning,
        stacklevel=2,
    )
    for t in candidates:
        found = _dominating_clique_greedy(X, float(t))
        if found is not None:
            return SpreadResult(value=float(t), exact=False, witness=found)
    center = int(np.argmin(X.d.max(axis=1)))
    return SpreadResult(value=radius(X), exact=False, witness=(center,))
