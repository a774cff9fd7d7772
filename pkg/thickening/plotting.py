#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/plotting.py — パーシステンス図の SVG

無限区間は有限値の最大値の INF_PLOT_FACTOR 倍の高さに三角の印で描く。
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Dict, List

from jinja2 import Environment, FileSystemLoader, select_autoescape

from . import config
from .persistence import PersistenceDiagram

_TEMPLATES = Path(__file__).parent / "templates"
_env = Environment(
    loader=FileSystemLoader(str(_TEMPLATES)),
    autoescape=select_autoescape(["svg", "j2"]),
    trim_blocks=True,
    lstrip_blocks=True,
)

# 次数ごとの色
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]

SIZE = 400
MARGIN = 40


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def render_svg(diagram: PersistenceDiagram, title: str = "persistence diagram") -> str:
    finite = [v for k in diagram.degrees for iv in diagram.intervals(k) for v in iv if not math.isinf(v)]
    top = max(finite, default=0.0)
    if top <= 0.0:
        top = 1.0
    inf_value = top * config.INF_PLOT_FACTOR
    span = inf_value * 1.05

    def sx(v: float) -> float:
        return round(MARGIN + (SIZE - 2 * MARGIN) * v / span, 2)

    def sy(v: float) -> float:
        return round(SIZE - MARGIN - (SIZE - 2 * MARGIN) * v / span, 2)

    points: List[Dict] = []
    legend = []
    for k in sorted(diagram.degrees):
        color = COLORS[k % len(COLORS)]
        ivs = diagram.intervals(k)
        if ivs:
            legend.append({"degree": k, "color": color})
        for b, d in ivs:
            infinite = math.isinf(d)
            points.append({
                "degree": k,
                "color": color,
                "x": sx(b),
                "y": sy(inf_value if infinite else d),
                "birth": _fmt(b),
                "death": "inf" if infinite else _fmt(d),
                "infinite": infinite,
            })

    ticks = [{"x": sx(t), "y": sy(t), "label": _fmt(t)} for t in (0.0, top / 2.0, top)]
    template = _env.get_template("diagram.svg.j2")
    return template.render(
        size=SIZE,
        margin=MARGIN,
        title=title,
        ticks=ticks,
        points=points,
        legend=legend,
        inf_y=sy(inf_value),
    )
