#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/linprog.py — 小規模な密行列 LP のための単体法

    maximize    c^T x
    subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0

二段階単体法（Bland 則）。exact=True のときは fractions.Fraction で計算し、
丸め誤差なしの最適値を返す（テストでの検証用）。
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import config
from .errors import LinearProgramError


@dataclass(frozen=True)
class LPResult:
    value: float | Fraction
    x: tuple
    iterations: int


def _as_array(rows, exact: bool, shape: tuple[int, int]) -> np.ndarray:
    if rows is None:
        return np.zeros(shape, dtype=object if exact else float)
    if exact:
        arr = np.array(rows, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr.reshape(shape)
    return np.array(rows, dtype=float).reshape(shape)


def _pivot(T: np.ndarray, basis: list[int], r: int, j: int) -> None:
    T[r] = T[r] / T[r, j]
    col = T[:, j].copy()
    col[r] = 0
    T -= np.outer(col, T[r])
    basis[r] = j


def _run(T: np.ndarray, basis: list[int], allowed: int, eps, iterations: int) -> int:
    """目的行 T[-1] の被約費用が負の列がなくなるまでピボットする"""
    m = T.shape[0] - 1
    while True:
        if iterations >= config.LP_MAX_ITERATIONS:
            raise LinearProgramError("iteration limit reached")
        reduced = T[-1, :allowed]
        entering = [j for j in range(allowed) if reduced[j] < -eps]
        if not entering:
            return iterations
        j = entering[0]

        best_r, best_ratio = -1, None
        for r in range(m):
            a = T[r, j]
            if a > eps:
                ratio = T[r, -1] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio - eps
                    or (abs(ratio - best_ratio) <= eps and basis[r] < basis[best_r])
                ):
                    best_r, best_ratio = r, ratio
        if best_r < 0:
            raise LinearProgramError("objective is unbounded")
        _pivot(T, basis, best_r, j)
        iterations += 1


def linprog(
    c: Sequence[float],
    A_ub: Sequence[Sequence[float]] | np.ndarray | None = None,
    b_ub: Sequence[float] | np.ndarray | None = None,
    A_eq: Sequence[Sequence[float]] | np.ndarray | None = None,
    b_eq: Sequence[float] | np.ndarray | None = None,
    exact: bool = False,
) -> LPResult:
    """二段階単体法で LP を解く（変数はすべて非負）"""
    zero = Fraction(0) if exact else 0.0
    eps = Fraction(0) if exact else config.LP_EPS
    dtype = object if exact else float

    n = len(c)
    m_ub = 0 if b_ub is None else len(b_ub)
    m_eq = 0 if b_eq is None else len(b_eq)
    m = m_ub + m_eq
    if m == 0:
        raise LinearProgramError("no constraints")

    A = np.concatenate([_as_array(A_ub, exact, (m_ub, n)), _as_array(A_eq, exact, (m_eq, n))], axis=0)
    b = np.concatenate([_as_array(b_ub, exact, (m_ub, 1)).reshape(-1), _as_array(b_eq, exact, (m_eq, 1)).reshape(-1)])
    c_arr = _as_array([c], exact, (1, n)).reshape(-1)

    # 列: 元の変数 n 個 | スラック m_ub 個 | 人工変数 m 個 | 右辺
    n_cols = n + m_ub + m
    T = np.zeros((m + 1, n_cols + 1), dtype=dtype)
    basis: list[int] = []
    artificial_rows = []
    for r in range(m):
        sign = -1 if b[r] < 0 else 1
        T[r, :n] = A[r] * sign
        T[r, -1] = b[r] * sign
        if r < m_ub:
            T[r, n + r] = sign
        if r < m_ub and sign > 0:
            basis.append(n + r)
        else:
            T[r, n + m_ub + r] = 1
            basis.append(n + m_ub + r)
            artificial_rows.append(r)
    if exact:
        T = np.vectorize(Fraction, otypes=[object])(T)

    iterations = 0
    n_real = n + m_ub
    if artificial_rows:
        # Phase 1: 人工変数の和を最小化
        for r in artificial_rows:
            T[-1, n_real + r] = 1
        for r in artificial_rows:
            T[-1] -= T[r]
        iterations = _run(T, basis, n_cols, eps, iterations)
        scale = 1 if exact else max(1.0, float(np.abs(b.astype(float)).max()))
        if T[-1, -1] < -eps * scale * 1e3:
            raise LinearProgramError("infeasible")
        for r in range(m):
            if basis[r] >= n_real:
                for j in range(n_real):
                    if abs(T[r, j]) > eps:
                        _pivot(T, basis, r, j)
                        break

    # Phase 2
    T[-1] = zero
    T[-1, :n] = -c_arr
    for r in range(m):
        if T[-1, basis[r]] != 0:
            T[-1] -= T[-1, basis[r]] * T[r]
    iterations = _run(T, basis, n_real, eps, iterations)

    x = [zero] * n
    for r, j in enumerate(basis):
        if j < n:
            x[j] = T[r, -1]
    value = T[-1, -1]
    if not exact:
        value = float(value)
        x = [float(v) for v in x]
    return LPResult(value=value, x=tuple(x), iterations=iterations)
