#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/measures.py — 有限台の確率測度と p-直径・p-半径

Fréchet 関数、diam_p、rad_p、i_{q,p}、ユークリッド平均、球面上の閉じた式を提供する。
p = ∞ は PValue.inf() で表し、台の上の max/min の式で計算する。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import config
from .errors import DimensionMismatch, InputFormatError, InvalidMeasure, NotOnUnitSphere, SpaceMismatch
from .metric_core import Embedding, FiniteMetricSpace, PointCloud


# =========================
# Exponent
# =========================

@dataclass(frozen=True, order=True)
class PValue:
    """指数 p ∈ [1, ∞]"""

    value: float

    def __post_init__(self):
        if math.isnan(self.value) or self.value < 1.0:
            raise InputFormatError(f"p must be >= 1, got {self.value}")

    @classmethod
    def inf(cls) -> "PValue":
        return cls(math.inf)

    @classmethod
    def parse(cls, raw: "str | float | int | PValue") -> "PValue":
        """'inf' / '∞' / 数値から PValue を作る"""
        if isinstance(raw, PValue):
            return raw
        if isinstance(raw, str):
            text = raw.strip().lower()
            if text in ("inf", "infinity", "∞"):
                return cls.inf()
            try:
                return cls(float(text))
            except ValueError as e:
                raise InputFormatError(f"invalid exponent: {raw!r}") from e
        return cls(float(raw))

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.value)

    @property
    def is_integer(self) -> bool:
        return not self.is_inf and float(self.value).is_integer()

    def root(self, x: float) -> float:
        """x^{1/p}（負の丸め誤差は 0 に切り上げ）"""
        x = max(float(x), 0.0)
        if self.is_inf:
            return x
        return x ** (1.0 / self.value)

    def __str__(self) -> str:
        if self.is_inf:
            return "inf"
        return f"{self.value:g}"


# =========================
# Measure
# =========================

@dataclass(frozen=True, eq=False)
class Measure:
    """FiniteMetricSpace 上の確率測度（重みベクトル w）"""

    space: FiniteMetricSpace
    w: np.ndarray

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.w > 0.0)


def from_weights(X: FiniteMetricSpace, w: Sequence[float] | np.ndarray) -> Measure:
    """
    重みベクトルから Measure を作る。

    |Σw - 1| <= WEIGHT_SUM_TOL なら正規化し直して受け付け、それ以外は拒否する。
    """
    arr = np.array(w, dtype=float)
    if arr.shape != (X.n,):
        raise DimensionMismatch(f"expected {X.n} weights, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise InvalidMeasure("weights must be finite and nonnegative")
    total = float(arr.sum())
    if abs(total - 1.0) > config.WEIGHT_SUM_TOL:
        raise InvalidMeasure(f"weights sum to {total}, not 1")
    arr = arr / total
    if abs(float(arr.sum()) - 1.0) > config.WEIGHT_SUM_STRICT:
        raise InvalidMeasure("weights could not be normalized")
    if not np.any(arr > 0.0):
        raise InvalidMeasure("support is empty")
    arr.setflags(write=False)
    return Measure(space=X, w=arr)


def dirac(X: FiniteMetricSpace, i: int) -> Measure:
    w = np.zeros(X.n)
    w[i] = 1.0
    return from_weights(X, w)


def uniform(X: FiniteMetricSpace, support: Sequence[int] | None = None) -> Measure:
    idx = list(range(X.n)) if support is None else sorted(set(int(i) for i in support))
    if not idx:
        raise InvalidMeasure("support is empty")
    w = np.zeros(X.n)
    w[idx] = 1.0 / len(idx)
    return from_weights(X, w)


def pushforward(alpha: Measure, f: Sequence[int], Y: FiniteMetricSpace) -> Measure:
    """添字写像 f: X → Y による押し出し f#alpha"""
    fa = np.asarray(list(f), dtype=int)
    if fa.shape != (alpha.space.n,) or np.any(fa < 0) or np.any(fa >= Y.n):
        raise DimensionMismatch("map must send every point of X to an index of Y")
    w = np.zeros(Y.n)
    np.add.at(w, fa, alpha.w)
    return from_weights(Y, w)


def mix(measures: Sequence[Measure], coefficients: Sequence[float]) -> Measure:
    """凸結合 Σ c_k alpha_k"""
    if not measures or len(measures) != len(coefficients):
        raise InvalidMeasure("need one coefficient per measure")
    X = measures[0].space
    for m in measures[1:]:
        if not m.space.same_as(X):
            raise SpaceMismatch("measures live on different spaces")
    c = np.asarray(coefficients, dtype=float)
    w = sum(ck * m.w for ck, m in zip(c, measures))
    return from_weights(X, w)


# =========================
# Batched kernels
# =========================

def _powered(d: np.ndarray, p: PValue) -> np.ndarray:
    return d ** p.value


def diam_p_many(X: FiniteMetricSpace, face: Sequence[int], A: np.ndarray, p: PValue) -> np.ndarray:
    """
    face 上の重心座標を行に持つ A（N × |face|）それぞれの diam_p

    p 有限: (a^T D^p a)^{1/p}、p = ∞: 正の重みを持つ点の間の最大距離
    """
    idx = list(face)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    D = X.d[np.ix_(idx, idx)]
    if p.is_inf:
        mask = A > 0.0
        pair = mask[:, :, None] & mask[:, None, :]
        return np.where(pair, D[None, :, :], 0.0).max(axis=(1, 2))
    q = np.einsum("ni,ij,nj->n", A, _powered(D, p), A)
    return np.maximum(q, 0.0) ** (1.0 / p.value)


def frechet_many(
    X: FiniteMetricSpace, face: Sequence[int], A: np.ndarray, p: PValue, centers: np.ndarray | None = None
) -> np.ndarray:
    """
    Fréchet 関数の値（N × 中心数）。centers は距離の列（|face| × 中心数）で、
    省略時は X のすべての点を中心候補とする。
    """
    idx = list(face)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    C = X.d[idx, :] if centers is None else centers
    if p.is_inf:
        mask = A > 0.0
        return np.where(mask[:, :, None], C[None, :, :], 0.0).max(axis=1)
    F = A @ _powered(C, p)
    return np.maximum(F, 0.0) ** (1.0 / p.value)


def rad_p_many(
    X: FiniteMetricSpace, face: Sequence[int], A: np.ndarray, p: PValue, centers: np.ndarray | None = None
) -> np.ndarray:
    """rad_p = min over centers of the Fréchet function"""
    return frechet_many(X, face, A, p, centers).min(axis=1)


# =========================
# Functionals
# =========================

def _support_rows(alpha: Measure) -> tuple[list[int], np.ndarray]:
    s = alpha.support.tolist()
    return s, alpha.w[s][None, :]


def frechet(alpha: Measure, p: PValue, center_index: int) -> float:
    """F_{alpha,p}(x_c) = (Σ w_i d(x_i, x_c)^p)^{1/p}"""
    s, a = _support_rows(alpha)
    col = alpha.space.d[s, :][:, [center_index]]
    return float(frechet_many(alpha.space, s, a, p, centers=col)[0, 0])


def diam_p(alpha: Measure, p: PValue) -> float:
    s, a = _support_rows(alpha)
    return float(diam_p_many(alpha.space, s, a, p)[0])


def rad_p(alpha: Measure, p: PValue) -> float:
    """Fréchet 関数の X 全体での最小値（台の外の点も中心候補）"""
    s, a = _support_rows(alpha)
    return float(rad_p_many(alpha.space, s, a, p)[0])


def rad_p_ambient(alpha: Measure, embedding: Embedding, p: PValue) -> float:
    """周囲空間 M のすべての点を中心候補とした p-半径"""
    if not embedding.space.same_as(alpha.space):
        raise SpaceMismatch("embedding is defined for another space")
    s, a = _support_rows(alpha)
    rows = [embedding.index[i] for i in s]
    C = embedding.ambient.d[rows, :]
    return float(rad_p_many(alpha.space, s, a, p, centers=C)[0])


def i_qp(alpha: Measure, q: PValue, p: PValue) -> float:
    """
    i_{q,p}(alpha) = (Σ_x w_x d_{W,q}(alpha, δ_x)^p)^{1/p}

    d_{W,q}(alpha, δ_x) は Fréchet 関数 F_{alpha,q}(x) に等しい。
    """
    s, a = _support_rows(alpha)
    F = frechet_many(alpha.space, s, a, q)[0, s]
    if p.is_inf:
        return float(F.max())
    return p.root(float(np.dot(a[0], F ** p.value)))


# =========================
# Euclidean data
# =========================

def _check_cloud(alpha: Measure, pc: PointCloud) -> None:
    if pc.n != alpha.space.n:
        raise DimensionMismatch(f"cloud has {pc.n} points but the measure has {alpha.space.n}")


def euclidean_mean(alpha: Measure, pc: PointCloud) -> np.ndarray:
    """m(alpha) = Σ w_i x_i"""
    _check_cloud(alpha, pc)
    return alpha.w @ pc.points


def _check_unit_sphere(pc: PointCloud) -> None:
    norms = np.linalg.norm(pc.points, axis=1)
    if np.any(np.abs(norms - 1.0) > config.UNIT_NORM_TOL):
        i = int(np.argmax(np.abs(norms - 1.0)))
        raise NotOnUnitSphere(f"point {i} has norm {norms[i]}")


def sphere_diam2_closed_form(alpha: Measure, pc: PointCloud) -> float:
    """単位球面上: diam_2(alpha) = (2 - 2|m(alpha)|^2)^{1/2}"""
    _check_unit_sphere(pc)
    m = euclidean_mean(alpha, pc)
    return math.sqrt(max(2.0 - 2.0 * float(m @ m), 0.0))


def sphere_rad2_closed_form(alpha: Measure, pc: PointCloud) -> float:
    """単位球面上（中心は球面全体）: rad_2(alpha) = (2 - 2|m(alpha)|)^{1/2}"""
    _check_unit_sphere(pc)
    m = euclidean_mean(alpha, pc)
    return math.sqrt(max(2.0 - 2.0 * float(np.linalg.norm(m)), 0.0))


def ambient_frechet_sq(alpha: Measure, pc: PointCloud, point: np.ndarray) -> float:
    """周囲のユークリッド距離で測った F^2_{alpha,2}(point)"""
    _check_cloud(alpha, pc)
    diff = pc.points - np.asarray(point, dtype=float)[None, :]
    return float(alpha.w @ np.sum(diff * diff, axis=1))
