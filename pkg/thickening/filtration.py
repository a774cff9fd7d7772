#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/filtration.py — 単体ごとのフィルトレーション値と FilteredComplex

単体 S の値は、S の重心座標全体（面 Δ_S）での汎関数の最大値:

- cech           : max_a min_j Σ_i a_i d(x_i, x_j)^p（j は X の全点）を LP で解き、1/p 乗する
- vr             : max_a Σ_{i,j} a_i a_j d(x_i, x_j)^p を、台の部分集合ごとの停留点の列挙で解く
- ambient_cech   : cech と同じ LP で、j を周囲空間 M の全点にわたらせる
- classical      : p = ∞（vr_inf: 直径、cech_inf: X 内の中心による半径）

値は r（1/p 乗した後）で保持するので、p が違っても図を直接比較できる。
単体はパラメータ r が値より大きいときに存在するものとして扱う。
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from pydantic import ValidationError

from shared.settings import get_thread_count

from . import config
from .errors import (
    EmbeddingMismatch,
    FaceTooLarge,
    InputFormatError,
    NonMonotoneComplex,
    ThickeningWarning,
)
from .linprog import linprog
from .measures import PValue
from .metric_core import Embedding, FiniteMetricSpace
from .models import ComplexEntry

Simplex = Tuple[int, ...]

KINDS = ("vr", "cech", "ambient_cech", "classical")
CLASSICAL_KINDS = ("vr_inf", "cech_inf")


def simplex(vertices: Iterable[int]) -> Simplex:
    """頂点番号を昇順に並べた単体（重複・空は不可）"""
    s = tuple(sorted(int(v) for v in vertices))
    if not s or len(set(s)) != len(s):
        raise InputFormatError(f"invalid simplex: {list(vertices)}")
    return s


def facets(s: Simplex) -> List[Simplex]:
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


# =========================
# Per-simplex values
# =========================

def _max_min_lp(P: np.ndarray, exact: bool = False) -> float | Fraction:
    """
    max t  s.t.  t <= Σ_i a_i P[i, j]（すべての列 j）, Σ a = 1, a >= 0

    P は (単体の頂点数) × (中心の候補数)。t も非負変数として扱う（P >= 0 なので最適値は非負）。
    """
    k, m = P.shape
    # 変数: a_0..a_{k-1}, t
    A_ub = np.zeros((m, k + 1), dtype=object if exact else float)
    A_ub[:, :k] = -P.T
    A_ub[:, k] = 1
    A_eq = [[1] * k + [0]]
    res = linprog([0] * k + [1], A_ub=A_ub, b_ub=[0] * m, A_eq=A_eq, b_eq=[1], exact=exact)
    return res.value


def _check_exact_size(n: int) -> None:
    # 有理数の LP は中心の候補（列）の数に比例して重くなる
    if n > config.EXACT_LP_MAX_POINTS:
        raise InputFormatError(
            f"exact mode supports spaces of at most {config.EXACT_LP_MAX_POINTS} points, got {n}"
        )


def _cech_from_rows(D_rows: np.ndarray, p: PValue, exact: bool) -> float:
    if p.is_inf:
        return float(D_rows.max(axis=0).min())
    if exact:
        if not p.is_integer:
            raise InputFormatError("exact certification needs an integer exponent")
        e = int(p.value)
        P = np.vectorize(lambda v: Fraction(float(v)) ** e, otypes=[object])(D_rows)
        return p.root(float(_max_min_lp(P, exact=True)))
    P = D_rows ** p.value
    scale = float(P.max())
    if scale <= 0.0:
        return 0.0
    return p.root(float(_max_min_lp(P / scale)) * scale)


def cech_value(X: FiniteMetricSpace, S: Sequence[int], p: PValue, exact: bool = False) -> float:
    """
    p-Čech の単体の値: (max_{a∈Δ_S} min_{j∈X} Σ_i a_i d(x_i, x_j)^p)^{1/p}

    exact=True なら有理数演算の単体法で解く（整数の p、点数 EXACT_LP_MAX_POINTS 以下）。
    """
    s = list(S)
    if len(s) == 1:
        return 0.0
    if exact:
        _check_exact_size(X.n)
    return _cech_from_rows(X.d[s, :], p, exact)


def ambient_cech_value(embedding: Embedding, S: Sequence[int], p: PValue, exact: bool = False) -> float:
    """中心の候補を周囲空間 M の全点にした cech_value"""
    s = list(S)
    if any(i < 0 or i >= embedding.space.n for i in s):
        raise EmbeddingMismatch("simplex has vertices outside the embedded space")
    if len(s) == 1:
        return 0.0
    if exact:
        _check_exact_size(embedding.ambient.n)
    rows = [embedding.index[i] for i in s]
    return _cech_from_rows(embedding.ambient.d[rows, :], p, exact)


def _quadratic_max(B: np.ndarray) -> float:
    """
    単体上での a^T B a の最大値（B は対称、対角 0、非負）

    台 T ごとに、Δ_T の内部での停留条件 2 B_T a = λ 1, Σ a = 1 を解いて候補にする。
    解が一意でない台では停留点の集合上で値が一定で、その集合は Δ_T の境界に届くので、
    より小さい台の候補に同じ値が現れる。
    """
    k = B.shape[0]
    best = 0.0
    for size in range(2, k + 1):
        for T in itertools.combinations(range(k), size):
            BT = B[np.ix_(T, T)]
            M = np.zeros((size + 1, size + 1))
            M[:size, :size] = 2.0 * BT
            M[:size, size] = -1.0
            M[size, :size] = 1.0
            rhs = np.zeros(size + 1)
            rhs[size] = 1.0
            sol, _, rank, _ = np.linalg.lstsq(M, rhs, rcond=None)
            if rank < size + 1:
                continue
            a = sol[:size]
            if np.any(a < -1e-12):
                continue
            a = np.clip(a, 0.0, None)
            a = a / a.sum()
            best = max(best, float(a @ BT @ a))
    return best


def vr_value(X: FiniteMetricSpace, S: Sequence[int], p: PValue) -> float:
    """p-Vietoris–Rips の単体の値: (max_{a∈Δ_S} Σ a_i a_j d(x_i, x_j)^p)^{1/p}"""
    s = list(S)
    if p.is_inf:
        return classical_value(X, s, "vr_inf")
    if len(s) > config.QP_EXACT_CAP:
        raise FaceTooLarge(len(s), config.QP_EXACT_CAP)
    if len(s) == 1:
        return 0.0
    B = X.d[np.ix_(s, s)] ** p.value
    scale = float(B.max())
    return p.root(_quadratic_max(B / scale) * scale)


def classical_value(X: FiniteMetricSpace, S: Sequence[int], kind: str) -> float:
    """p = ∞ の単体の値（vr_inf: 直径、cech_inf: min_x max_i d(x, x_i)）"""
    s = list(S)
    if kind == "vr_inf":
        return float(X.d[np.ix_(s, s)].max())
    if kind == "cech_inf":
        return 0.0 if len(s) == 1 else float(X.d[s, :].max(axis=0).min())
    raise InputFormatError(f"unknown classical kind: {kind}")


# =========================
# FilteredComplex
# =========================

@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """
    次元 max_dim 以下のすべての単体と値

    entries は (値, 次元, 頂点の辞書順) で並んでいる。
    """

    space: FiniteMetricSpace
    max_dim: int
    entries: Tuple[Tuple[Simplex, float], ...]
    kind: str = ""
    p: PValue | None = None
    conjectural: bool = False
    _index: Dict[Simplex, float] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def value(self, s: Sequence[int]) -> float:
        return self._index[simplex(s)]

    def simplices(self, dim: int | None = None) -> List[Simplex]:
        return [s for s, _ in self.entries if dim is None or len(s) == dim + 1]

    def sublevel(self, r: float) -> List[Simplex]:
        """値が r 未満の単体"""
        return [s for s, v in self.entries if v < r]

    @property
    def reliable_degree(self) -> int:
        """切り詰めの影響を受けない最大の次数"""
        if self.max_dim >= self.space.n - 1:
            return self.max_dim
        return self.max_dim - 1

    def to_jsonl(self, digits: int = config.SIGNIFICANT_DIGITS) -> str:
        lines = [
            json.dumps(ComplexEntry(simplex=list(s), value=float(f"{v:.{digits}g}")).model_dump())
            for s, v in self.entries
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str, space: FiniteMetricSpace, kind: str = "", p: PValue | None = None) -> "FilteredComplex":
        """
        to_jsonl の出力を読み込む

        各単体のすべての面が含まれていて、値が単調であることを確認する（修復はしない）。
        """
        values: Dict[Simplex, float] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                row = ComplexEntry.model_validate_json(line)
            except ValidationError as e:
                raise InputFormatError(f"line {lineno}: {e.errors()[0]['msg']}") from e
            s = simplex(row.simplex)
            if s[-1] >= space.n:
                raise InputFormatError(f"line {lineno}: vertex {s[-1]} outside the space")
            values[s] = row.value
        for s in values:
            missing = [f for f in facets(s) if f not in values]
            if missing:
                raise InputFormatError(f"simplex {list(s)} is listed without its face {list(missing[0])}")
        max_dim = max((len(s) - 1 for s in values), default=0)
        _check_monotone(values, repair=False)
        return cls(space=space, max_dim=max_dim, entries=_sorted_entries(values), kind=kind, p=p)


def _sorted_entries(values: Dict[Simplex, float]) -> Tuple[Tuple[Simplex, float], ...]:
    return tuple(sorted(values.items(), key=lambda sv: (sv[1], len(sv[0]), sv[0])))


def _check_monotone(values: Dict[Simplex, float], repair: bool) -> None:
    """
    面の値 <= 単体の値 を確認する。

    repair=True なら MONOTONE_TOL 以内の違反を面の最大値に切り上げ、それを超える違反は例外にする。
    """
    repaired = 0.0
    for s in sorted(values, key=len):
        fs = [values[f] for f in facets(s) if f in values]
        if not fs:
            continue
        top = max(fs)
        v = values[s]
        if v >= top:
            continue
        gap = top - v
        if not repair or gap > config.MONOTONE_TOL * max(1.0, abs(top)):
            raise NonMonotoneComplex(f"simplex {list(s)} has value {v} below its face value {top}")
        values[s] = top
        repaired = max(repaired, gap)
    if repaired > config.ZERO_LENGTH_TOL:
        warnings.warn(f"raised simplex values by up to {repaired:.3g} to restore monotonicity", ThickeningWarning, stacklevel=3)


def _value_function(
    X: FiniteMetricSpace,
    p: PValue,
    kind: str,
    embedding: Embedding | None,
    classical_kind: str,
    exact: bool,
) -> Callable[[Simplex], float]:
    if kind == "classical":
        return lambda s: classical_value(X, s, classical_kind)
    if kind == "vr":
        return lambda s: vr_value(X, s, p)
    if kind == "cech":
        if p.is_inf:
            return lambda s: classical_value(X, s, "cech_inf")
        return lambda s: cech_value(X, s, p, exact=exact)
    if kind == "ambient_cech":
        if embedding is None:
            raise EmbeddingMismatch("ambient_cech needs an embedding")
        if not embedding.space.same_as(X):
            raise EmbeddingMismatch("embedding is defined for another space")
        return lambda s: ambient_cech_value(embedding, s, p, exact=exact)
    raise InputFormatError(f"unknown filtration kind: {kind}")


def build_complex(
    X: FiniteMetricSpace,
    p: PValue,
    kind: str,
    max_dim: int,
    embedding: Embedding | None = None,
    classical_kind: str = "vr_inf",
    exact: bool = False,
    threads: int | None = None,
) -> FilteredComplex:
    """
    次元 max_dim 以下のすべての単体に値を付けた FilteredComplex を作る

    threads > 1 なら単体ごとの計算を joblib で並列に行う（結果の並びは実行順に依らない）。
    """
    if max_dim < 0 or max_dim > X.n - 1:
        raise InputFormatError(f"max_dim must be in 0..{X.n - 1}, got {max_dim}")
    if kind == "vr" and not p.is_inf and max_dim + 1 > config.QP_EXACT_CAP:
        raise FaceTooLarge(max_dim + 1, config.QP_EXACT_CAP)
    if classical_kind not in CLASSICAL_KINDS:
        raise InputFormatError(f"unknown classical kind: {classical_kind}")

    fn = _value_function(X, p, kind, embedding, classical_kind, exact)
    faces = [s for k in range(1, max_dim + 1) for s in itertools.combinations(range(X.n), k + 1)]

    threads = get_thread_count() if threads is None else threads
    if threads > 1 and len(faces) > 1:
        computed = Parallel(n_jobs=threads, prefer="threads")(delayed(fn)(s) for s in faces)
    else:
        computed = [fn(s) for s in faces]

    values: Dict[Simplex, float] = {(i,): 0.0 for i in range(X.n)}
    values.update(zip(faces, (float(v) for v in computed)))
    _check_monotone(values, repair=True)

    conjectural = kind == "vr" and not p.is_inf and max_dim >= 2
    if conjectural:
        warnings.warn(
            "VR skeleton filtration: degrees >= 1 are not proven to match the thickening",
            ThickeningWarning,
            stacklevel=2,
        )
    return FilteredComplex(
        space=X,
        max_dim=max_dim,
        entries=_sorted_entries(values),
        kind=kind if kind != "classical" else classical_kind,
        p=p,
        conjectural=conjectural,
    )
