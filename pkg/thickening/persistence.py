#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/persistence.py — Z/2 係数のパーシステントホモロジーとボトルネック距離
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np

from . import config
from .errors import InputFormatError, NonMonotoneComplex
from .filtration import FilteredComplex, Simplex, facets

Interval = Tuple[float, float]


# =========================
# Diagram
# =========================

def _fmt(v: float, digits: int) -> float | str:
    return "inf" if math.isinf(v) else float(f"{v:.{digits}g}")


def _parse_endpoint(v) -> float:
    if isinstance(v, str):
        if v.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        return float(v)
    return float(v)


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """次数ごとの区間 (birth, death) の多重集合（death は inf を取り得る）"""

    degrees: Dict[int, Tuple[Interval, ...]] = field(default_factory=dict)
    reliable_degree: int | None = None

    def intervals(self, degree: int) -> List[Interval]:
        return list(self.degrees.get(degree, ()))

    def finite(self, degree: int) -> List[Interval]:
        return [iv for iv in self.intervals(degree) if not math.isinf(iv[1])]

    def infinite(self, degree: int) -> List[Interval]:
        return [iv for iv in self.intervals(degree) if math.isinf(iv[1])]

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def max_finite_lifetime(self) -> float:
        lengths = [d - b for k in self.degrees for b, d in self.finite(k)]
        return max(lengths, default=0.0)

    def rounded(self, digits: int = config.SIGNIFICANT_DIGITS) -> "PersistenceDiagram":
        def r(v: float) -> float:
            return v if math.isinf(v) else float(f"{v:.{digits}g}")

        return PersistenceDiagram(
            degrees={k: tuple(sorted((r(b), r(d)) for b, d in ivs)) for k, ivs in self.degrees.items()},
            reliable_degree=self.reliable_degree,
        )

    def same_as(self, other: "PersistenceDiagram", tol: float = 0.0) -> bool:
        """多重度を含めて一致するか（端点は tol 以内）"""
        for k in set(self.degrees) | set(other.degrees):
            a, b = sorted(self.intervals(k)), sorted(other.intervals(k))
            if len(a) != len(b):
                return False
            for (b1, d1), (b2, d2) in zip(a, b):
                if abs(b1 - b2) > tol:
                    return False
                if math.isinf(d1) or math.isinf(d2):
                    if d1 != d2:
                        return False
                elif abs(d1 - d2) > tol:
                    return False
        return True

    # --- export ---

    def to_json(self, digits: int = config.SIGNIFICANT_DIGITS) -> List[Dict]:
        """[{"degree": k, "intervals": [[b, d-or-"inf"], ...]}, ...]"""
        return [
            {
                "degree": k,
                "intervals": [[_fmt(b, digits), _fmt(d, digits)] for b, d in sorted(self.degrees[k])],
            }
            for k in sorted(self.degrees)
        ]

    def to_csv(self, digits: int = config.SIGNIFICANT_DIGITS) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["degree", "birth", "death"])
        for k in sorted(self.degrees):
            for b, d in sorted(self.degrees[k]):
                writer.writerow([k, _fmt(b, digits), _fmt(d, digits)])
        return buf.getvalue()

    @classmethod
    def from_json(cls, data: List[Dict] | str) -> "PersistenceDiagram":
        if isinstance(data, str):
            data = json.loads(data)
        degrees: Dict[int, Tuple[Interval, ...]] = {}
        try:
            for block in data:
                k = int(block["degree"])
                degrees[k] = tuple(sorted((_parse_endpoint(b), _parse_endpoint(d)) for b, d in block["intervals"]))
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"invalid diagram JSON: {e}") from e
        return cls(degrees=degrees)


# =========================
# Reduction
# =========================

def _boundary_columns(fc: FilteredComplex) -> Tuple[List[Simplex], List[float], List[int]]:
    order = [s for s, _ in fc.entries]
    values = [v for _, v in fc.entries]
    position = {s: i for i, s in enumerate(order)}
    columns = []
    for i, s in enumerate(order):
        col = 0
        for f in facets(s):
            j = position[f]
            if j >= i:
                raise NonMonotoneComplex(f"face {list(f)} enters after simplex {list(s)}")
            col |= 1 << j
        columns.append(col)
    return order, values, columns


def _reduce(columns: List[int]) -> Tuple[List[int], Dict[int, int]]:
    """列の消去（ビット列の XOR）。low(j) -> j の対応も返す"""
    reduced = list(columns)
    owner: Dict[int, int] = {}
    for j, col in enumerate(reduced):
        while col:
            low = col.bit_length() - 1
            k = owner.get(low)
            if k is None:
                owner[low] = j
                break
            col ^= reduced[k]
        reduced[j] = col
    return reduced, owner


def _is_zero_length(b: float, d: float) -> bool:
    return d - b <= config.ZERO_LENGTH_TOL * max(1.0, abs(d))


def compute_diagram(fc: FilteredComplex) -> PersistenceDiagram:
    """
    境界行列の標準的な列消去で図を求める

    単体の並びは (値, 次元, 辞書順)。長さ 0 の区間は捨てる。
    次元 max_dim の単体が作るサイクルは死なないので、切り詰めた複体では
    reliable_degree より上の次数に人工的な無限区間が残る。
    """
    order, values, columns = _boundary_columns(fc)
    reduced, owner = _reduce(columns)

    degrees: Dict[int, List[Interval]] = {k: [] for k in range(fc.max_dim + 1)}
    paired = set()
    for low, j in owner.items():
        paired.add(low)
        paired.add(j)
        b, d = values[low], values[j]
        if not _is_zero_length(b, d):
            degrees[len(order[low]) - 1].append((b, d))
    for i, s in enumerate(order):
        if i not in paired and reduced[i] == 0:
            degrees[len(s) - 1].append((values[i], math.inf))

    return PersistenceDiagram(
        degrees={k: tuple(sorted(ivs)) for k, ivs in degrees.items()},
        reliable_degree=fc.reliable_degree,
    )


def _rank_z2(rows: List[int]) -> int:
    pivots: Dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            low = r.bit_length() - 1
            if low not in pivots:
                pivots[low] = r
                rank += 1
                break
            r ^= pivots[low]
    return rank


def betti_numbers(fc: FilteredComplex, r: float) -> List[int]:
    """
    部分複体 {値 < r} の Z/2 ベッチ数（次数 0..max_dim）

    β_k = dim C_k - rank ∂_k - rank ∂_{k+1}
    """
    present = fc.sublevel(r)
    by_dim: Dict[int, List[Simplex]] = {}
    for s in present:
        by_dim.setdefault(len(s) - 1, []).append(s)
    index = {k: {s: i for i, s in enumerate(ss)} for k, ss in by_dim.items()}

    ranks = {}
    for k in range(1, fc.max_dim + 1):
        cols = []
        for s in by_dim.get(k, []):
            col = 0
            for f in facets(s):
                col |= 1 << index[k - 1][f]
            cols.append(col)
        ranks[k] = _rank_z2(cols)

    return [
        len(by_dim.get(k, [])) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        for k in range(fc.max_dim + 1)
    ]


def alive_count(diagram: PersistenceDiagram, degree: int, r: float) -> int:
    """r で生きている区間の数（birth < r <= death）"""
    return sum(1 for b, d in diagram.intervals(degree) if b < r <= d)


# =========================
# Bottleneck
# =========================

@dataclass(frozen=True)
class Matching:
    pairs: Tuple[Tuple[Interval, Interval], ...]
    unmatched_first: Tuple[Interval, ...]
    unmatched_second: Tuple[Interval, ...]


def _half_length(iv: Interval) -> float:
    return (iv[1] - iv[0]) / 2.0


def _linf(a: Interval, b: Interval) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _perfect_matching(A: Sequence[Interval], B: Sequence[Interval], t: float) -> Dict | None:
    """コスト t 以下で、対角との対応も含めた完全マッチングを探す（Hopcroft–Karp）"""
    if not A and not B:
        return {}
    G = nx.Graph()
    top = [("a", i) for i in range(len(A))] + [("bd", j) for j in range(len(B))]
    bottom = [("b", j) for j in range(len(B))] + [("ad", i) for i in range(len(A))]
    G.add_nodes_from(top, bipartite=0)
    G.add_nodes_from(bottom, bipartite=1)
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            if _linf(a, b) <= t:
                G.add_edge(("a", i), ("b", j))
        if _half_length(a) <= t:
            G.add_edge(("a", i), ("ad", i))
    for j, b in enumerate(B):
        if _half_length(b) <= t:
            G.add_edge(("bd", j), ("b", j))
        for i in range(len(A)):
            G.add_edge(("bd", j), ("ad", i))
    matching = nx.bipartite.hopcroft_karp_matching(G, top_nodes=top)
    if all(node in matching for node in top):
        return matching
    return None


def _infinite_part(A: List[Interval], B: List[Interval]) -> Tuple[float, List[Tuple[Interval, Interval]]]:
    # 無限区間は birth の昇順で対応させるのが最適
    a, b = sorted(A), sorted(B)
    pairs = list(zip(a, b))
    return max((abs(x[0] - y[0]) for x, y in pairs), default=0.0), pairs


def bottleneck(D1: PersistenceDiagram, D2: PersistenceDiagram, degree: int) -> Tuple[float, Matching]:
    """
    次数 degree のボトルネック距離と、それを実現するマッチング

    候補値 {|p - q|_∞} ∪ {(d - b)/2} を昇順に二分探索し、各候補で完全マッチングの有無を判定する。
    無限区間の数が違えば inf を返す。
    """
    inf1, inf2 = D1.infinite(degree), D2.infinite(degree)
    if len(inf1) != len(inf2):
        return math.inf, Matching(pairs=(), unmatched_first=tuple(inf1), unmatched_second=tuple(inf2))
    inf_cost, inf_pairs = _infinite_part(inf1, inf2)

    A, B = D1.finite(degree), D2.finite(degree)
    candidates = {0.0}
    candidates.update(_half_length(iv) for iv in A + B)
    candidates.update(_linf(a, b) for a in A for b in B)
    cand = sorted(candidates)

    lo, hi = 0, len(cand) - 1
    best = _perfect_matching(A, B, cand[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        m = _perfect_matching(A, B, cand[mid])
        if m is not None:
            hi, best = mid, m
        else:
            lo = mid + 1
    if best is None:
        best = {}

    pairs = list(inf_pairs)
    unmatched_first, unmatched_second = [], []
    for i, a in enumerate(A):
        partner = best.get(("a", i))
        if partner is not None and partner[0] == "b":
            pairs.append((a, B[partner[1]]))
        else:
            unmatched_first.append(a)
    for j, b in enumerate(B):
        partner = best.get(("b", j))
        if partner is None or partner[0] != "a":
            unmatched_second.append(b)

    value = max(cand[lo], inf_cost)
    return value, Matching(
        pairs=tuple(pairs),
        unmatched_first=tuple(unmatched_first),
        unmatched_second=tuple(unmatched_second),
    )


def bottleneck_all(D1: PersistenceDiagram, D2: PersistenceDiagram, degrees: Sequence[int]) -> Dict[int, float]:
    return {k: bottleneck(D1, D2, k)[0] for k in degrees}


def diagram_array(diagram: PersistenceDiagram, degree: int) -> np.ndarray:
    """区間を (m, 2) の配列で返す（プロット用）"""
    ivs = diagram.intervals(degree)
    return np.array(ivs, dtype=float).reshape(-1, 2)
