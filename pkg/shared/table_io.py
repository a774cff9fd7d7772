#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
shared/table_io.py — 入力ファイル（CSV / JSON）の読み込みと出力の書き込み

- 距離行列 CSV: n 行 n 列。1 行目の先頭が数値でなければヘッダとして読み飛ばす
- 点群 CSV: 1 行 1 点
- 測度: CSV の 1 行、または JSON {"weights": [...]}
- 対応: CSV の 2 列 phi, psi（長さが違ってよい。足りない欄は空）
- 埋め込み: 周囲空間での番号の列

文字コードは UTF-8（BOM 可）、改行は LF / CRLF のどちらでもよい。
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path
from typing import List

from thickening.errors import InputFormatError, InputNotFound
from thickening.measures import Measure, from_weights
from thickening.metric_core import (
    Correspondence,
    FiniteMetricSpace,
    PointCloud,
    from_distance_matrix,
    point_cloud,
)


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _open(path: str | Path) -> Path:
    p = Path(path)
    if not p.exists():
        raise InputNotFound(str(p))
    return p


def read_rows(path: str | Path) -> List[List[str]]:
    """CSV を文字列の行のリストで返す（空行とヘッダ行を除く）"""
    p = _open(path)
    with p.open("r", encoding="utf-8-sig", newline="") as f:
        rows = [[cell.strip() for cell in row] for row in csv.reader(f)]
    rows = [row for row in rows if any(row)]
    if rows and rows[0] and not _is_number(rows[0][0]):
        rows = rows[1:]
    return rows


def read_numeric_rows(path: str | Path) -> List[List[float]]:
    rows = read_rows(path)
    try:
        return [[float(cell) for cell in row if cell != ""] for row in rows]
    except ValueError as e:
        raise InputFormatError(f"{path}: {e}") from e


def read_distance_matrix(path: str | Path) -> FiniteMetricSpace:
    rows = read_numeric_rows(path)
    if not rows:
        raise InputFormatError(f"{path}: no rows")
    return from_distance_matrix(rows, label=Path(path).stem)


def read_point_cloud(path: str | Path) -> PointCloud:
    rows = read_numeric_rows(path)
    if not rows:
        raise InputFormatError(f"{path}: no rows")
    if len({len(r) for r in rows}) != 1:
        raise InputFormatError(f"{path}: points have different dimensions")
    return point_cloud(rows)


def read_measure(path: str | Path, space: FiniteMetricSpace) -> Measure:
    """測度のファイル（.json なら {"weights": [...]}、それ以外は CSV の 1 行）"""
    p = _open(path)
    if p.suffix.lower() == ".json":
        try:
            data = json.loads(p.read_text(encoding="utf-8-sig"))
            weights = [float(w) for w in data["weights"]]
        except (ValueError, KeyError, TypeError) as e:
            raise InputFormatError(f"{path}: {e}") from e
    else:
        rows = read_numeric_rows(p)
        if len(rows) != 1:
            raise InputFormatError(f"{path}: expected a single row of weights")
        weights = rows[0]
    return from_weights(space, weights)


def read_correspondence(path: str | Path) -> Correspondence:
    """2 列（phi, psi）の CSV。長い方の列に合わせて短い列は空欄になる"""
    rows = read_rows(path)
    phi, psi = [], []
    try:
        for row in rows:
            if len(row) > 0 and row[0] != "":
                phi.append(int(row[0]))
            if len(row) > 1 and row[1] != "":
                psi.append(int(row[1]))
    except ValueError as e:
        raise InputFormatError(f"{path}: {e}") from e
    if not phi or not psi:
        raise InputFormatError(f"{path}: both phi and psi need at least one entry")
    return Correspondence(phi=tuple(phi), psi=tuple(psi))


def read_embedding(path: str | Path) -> List[int]:
    """1 列または 1 行に並んだ周囲空間での番号"""
    rows = read_rows(path)
    try:
        return [int(cell) for row in rows for cell in row if cell != ""]
    except ValueError as e:
        raise InputFormatError(f"{path}: {e}") from e


def write_atomic(path: str | Path, text: str) -> None:
    """一時ファイルに書いてから置き換える"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
