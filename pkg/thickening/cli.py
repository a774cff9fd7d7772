#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
thickening/cli.py — コマンドライン

使い方（リポジトリのルートで）:
    python -m thickening diagram --space data/z3.csv --kind cech --p 1 --max-dim 2
    python -m thickening compare --space data/z3.csv --space-b data/z4.csv --p 1 --max-dim 2 --degree 1
    python -m thickening oracle zn --n 3 --p 2
    python -m thickening oracle single-linkage --space data/z4.csv --scale auto --p 2
    python -m thickening audit-sphere --n-dim 1 --count 40 --p 2 --degree 1
    python -m thickening sweep --space data/z3.csv --kind cech --max-dim 2 --p-list 1,2,inf
    python -m thickening transport --space data/z3.csv --alpha a.csv --beta b.csv --q 1

終了コード: 0 成功、2 入力・検証エラー、3 数値的な保証の失敗。
エラー時は標準エラー出力の先頭にエラー名を出す。
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ValidationError

from shared import table_io

from . import config
from .errors import CertificationFailure, InputFormatError, ThickeningError
from .filtration import FilteredComplex, build_complex
from .measures import PValue
from .metric_core import (
    FiniteMetricSpace,
    circle_grid_hausdorff,
    embed,
    euclidean_metric,
    gh_upper_bound,
    sample_sphere,
)
from .models import (
    CompareReport,
    DiagramBlock,
    DiagramExport,
    JobSpec,
    PlanEntry,
    SphereAudit,
    SweepEntry,
    SweepExport,
    TransportReport,
)
from .oracles import edge_death_scale, single_linkage_h0, zn_diagram
from .persistence import PersistenceDiagram, bottleneck, compute_diagram
from .plotting import render_svg
from .transport import wasserstein

SQRT2 = math.sqrt(2.0)


# =========================
# Helpers
# =========================

def log(message: str) -> None:
    print(message, file=sys.stderr)


def emit(text: str, output: str | None) -> None:
    """--output があればそのファイルに（一時ファイル経由で）、なければ標準出力に書く"""
    if output:
        table_io.write_atomic(output, text)
        log(f"Wrote: {output}")
    else:
        sys.stdout.write(text)


def dump_model(model: BaseModel) -> str:
    return json.dumps(model.model_dump(), ensure_ascii=False, indent=2) + "\n"


def diagram_blocks(diagram: PersistenceDiagram) -> List[DiagramBlock]:
    return [DiagramBlock(**block) for block in diagram.to_json()]


def load_space(job: JobSpec) -> FiniteMetricSpace:
    if job.space is not None:
        X = table_io.read_distance_matrix(job.space)
        log(f"Loaded: {job.space} ({X.n} points)")
    else:
        X = euclidean_metric(table_io.read_point_cloud(job.cloud))
        log(f"Loaded: {job.cloud} ({X.n} points, euclidean)")
    return X


def load_embedding(job: JobSpec, X: FiniteMetricSpace):
    if job.kind != "ambient_cech":
        return None
    M = table_io.read_distance_matrix(job.ambient)
    index = table_io.read_embedding(job.embedding) if job.embedding else list(range(X.n))
    log(f"Loaded: {job.ambient} ({M.n} ambient points)")
    return embed(X, M, index)


def build(job: JobSpec, X: FiniteMetricSpace, p: PValue | None = None) -> FilteredComplex:
    p = job.p_value if p is None else p
    fc = build_complex(
        X,
        p,
        job.kind,
        job.max_dim,
        embedding=load_embedding(job, X),
        classical_kind=job.classical_kind,
        exact=job.exact,
    )
    log(f"Built: {len(fc)} simplices (kind={fc.kind}, p={p}, max_dim={job.max_dim})")
    if fc.conjectural:
        log("Warning: VR skeleton filtration; degrees >= 1 are conjectural")
    return fc


def render_diagram(diagram: PersistenceDiagram, job: JobSpec, export: DiagramExport) -> str:
    if job.out == "csv":
        return diagram.to_csv()
    if job.out == "svg":
        return render_svg(diagram, title=f"{export.label} {export.kind} p={export.p}")
    return dump_model(export)


def job_from_args(args: argparse.Namespace, suffix: str = "") -> JobSpec:
    fields = {
        "space": getattr(args, "space" + suffix),
        "cloud": getattr(args, "cloud" + suffix),
        "ambient": getattr(args, "ambient", None),
        "embedding": getattr(args, "embedding", None),
        "kind": args.kind,
        "classical_kind": args.classical_kind,
        "p": args.p,
        "max_dim": args.max_dim,
        "out": getattr(args, "out", "json"),
        "seed": args.seed,
        "exact": getattr(args, "exact", False),
    }
    return JobSpec(**fields)


# =========================
# Commands
# =========================

def cmd_diagram(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    X = load_space(job)
    fc = build(job, X)
    if args.complex_out:
        table_io.write_atomic(args.complex_out, fc.to_jsonl())
        log(f"Wrote: {args.complex_out}")
    diagram = compute_diagram(fc)
    export = DiagramExport(
        label=X.label,
        kind=fc.kind,
        p=job.p,
        max_dim=job.max_dim,
        reliable_degree=diagram.reliable_degree,
        conjectural=fc.conjectural,
        diagrams=diagram_blocks(diagram),
    )
    emit(render_diagram(diagram, job, export), args.output)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    job_a = job_from_args(args)
    job_b = job_from_args(args, suffix="_b")
    X, Y = load_space(job_a), load_space(job_b)
    da = compute_diagram(build(job_a, X))
    db = compute_diagram(build(job_b, Y))

    gh = None
    if args.corr:
        gh = gh_upper_bound(X, Y, table_io.read_correspondence(args.corr))
        log(f"gh_upper_bound: {gh:.{config.SIGNIFICANT_DIGITS}g}")

    if args.degree is not None:
        degrees = [args.degree]
    else:
        degrees = list(range(min(da.reliable_degree, db.reliable_degree) + 1))

    reports = []
    failed = []
    for k in degrees:
        value, _ = bottleneck(da, db, k)
        report = CompareReport(
            degree=k,
            bottleneck="inf" if math.isinf(value) else float(f"{value:.{config.SIGNIFICANT_DIGITS}g}"),
        )
        if gh is not None:
            bound = 2.0 * gh
            passed = value <= bound + 1e-9
            report.gh_upper_bound = float(f"{gh:.{config.SIGNIFICANT_DIGITS}g}")
            report.bound = float(f"{bound:.{config.SIGNIFICANT_DIGITS}g}")
            report.passed = passed
            if not passed:
                failed.append(k)
        reports.append(report.model_dump())

    emit(json.dumps(reports, ensure_ascii=False, indent=2) + "\n", args.output)
    if failed:
        raise CertificationFailure(f"bottleneck exceeds 2 * gh_upper_bound in degrees {failed}")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    p = PValue.parse(args.p)
    if args.name == "zn":
        if args.n is None:
            raise InputFormatError("oracle zn needs --n")
        diagram = zn_diagram(args.n, p).to_diagram()
        label = f"Z_{args.n + 1}"
    else:
        if args.space is None:
            raise InputFormatError("oracle single-linkage needs --space")
        X = table_io.read_distance_matrix(args.space)
        if args.scale == "auto":
            scale = edge_death_scale(p)
        else:
            try:
                scale = float(args.scale)
            except ValueError as e:
                raise InputFormatError(f"invalid scale: {args.scale!r}") from e
        log(f"single-linkage scale: {scale:.{config.SIGNIFICANT_DIGITS}g}")
        diagram = single_linkage_h0(X, scale)
        label = X.label
    export = DiagramExport(label=label, kind=args.name, p=str(p), diagrams=diagram_blocks(diagram))
    emit(dump_model(export), args.output)
    return 0


def _sphere_slack(n_dim: int, count: int, mode: str, seed: int) -> tuple[float, bool]:
    """2 * d_H(サンプル, 球面)。正多角形のときだけ厳密値（True）、それ以外は密な乱数点による推定"""
    if n_dim == 1 and mode == "grid":
        return 2.0 * circle_grid_hausdorff(count, geodesic=False), True
    sample = sample_sphere(n_dim, count, mode=mode, seed=seed).points
    dense = sample_sphere(n_dim, 20000, mode="seeded-uniform", seed=seed + 1).points
    gaps = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * dense @ sample.T)).min(axis=1)
    return 2.0 * float(gaps.max()), False


def cmd_audit_sphere(args: argparse.Namespace) -> int:
    p = PValue.parse(args.p)
    max_dim = args.max_dim if args.max_dim is not None else args.degree + 1
    pc = sample_sphere(args.n_dim, args.count, mode=args.mode, seed=args.seed)
    X = euclidean_metric(pc)
    log(f"Sampled: S^{args.n_dim} ({X.n} points, {args.mode})")
    fc = build_complex(X, p, "cech", max_dim)
    diagram = compute_diagram(fc)
    slack, exact_slack = _sphere_slack(args.n_dim, args.count, args.mode, args.seed)

    ivs = diagram.intervals(args.degree)
    dominant = max(ivs, key=lambda iv: iv[1] - iv[0], default=None)
    audit = SphereAudit(
        n_dim=args.n_dim, count=args.count, p=str(p), degree=args.degree,
        slack=float(f"{slack:.{config.SIGNIFICANT_DIGITS}g}"), certified=False,
    )
    if dominant is not None:
        audit.dominant = [
            float(f"{dominant[0]:.{config.SIGNIFICANT_DIGITS}g}"),
            "inf" if math.isinf(dominant[1]) else float(f"{dominant[1]:.{config.SIGNIFICANT_DIGITS}g}"),
        ]

    tol = slack + 1e-6
    if p.value != 2.0:
        audit.note = "the closed-form endpoint sqrt(2) is certified for p = 2 only"
    elif not exact_slack:
        audit.note = "Hausdorff slack is estimated; endpoints not certified"
    elif slack >= SQRT2 / 2.0:
        audit.note = "sample too coarse: slack too large to certify"
    elif args.degree == 0:
        deaths = [d for _, d in diagram.finite(0)]
        audit.certified = len(diagram.infinite(0)) == 1 and max(deaths, default=0.0) <= tol
        if not audit.certified:
            raise CertificationFailure(f"degree 0 does not reduce to one class within slack {slack}")
    elif args.degree == args.n_dim and dominant is not None and not math.isinf(dominant[1]):
        audit.birth_gap = float(f"{dominant[0]:.{config.SIGNIFICANT_DIGITS}g}")
        audit.death_gap = float(f"{abs(dominant[1] - SQRT2):.{config.SIGNIFICANT_DIGITS}g}")
        audit.certified = dominant[0] <= tol and abs(dominant[1] - SQRT2) <= tol
        if not audit.certified:
            raise CertificationFailure(f"dominant interval {dominant} is not within {slack} of (0, sqrt(2))")
    else:
        audit.note = "no finite interval in the requested degree"

    emit(dump_model(audit), args.output)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    job = job_from_args(args)
    X = load_space(job)
    slices = []
    for raw in args.p_list.split(","):
        p = PValue.parse(raw)
        diagram = compute_diagram(build(job, X, p))
        slices.append(SweepEntry(p=str(p), diagrams=diagram_blocks(diagram)))
    export = SweepExport(label=X.label, kind=job.kind, max_dim=job.max_dim, slices=slices)
    emit(dump_model(export), args.output)
    return 0


def cmd_transport(args: argparse.Namespace) -> int:
    job = JobSpec(space=args.space, q=args.q)
    X = load_space(job)
    alpha = table_io.read_measure(args.alpha, X)
    beta = table_io.read_measure(args.beta, X)
    q = job.q_value
    value, plan = wasserstein(alpha, beta, q)
    data = plan.to_json()
    report = TransportReport(
        q=str(q),
        distance=float(f"{value:.{config.SIGNIFICANT_DIGITS}g}"),
        n=data["n"],
        entries=[PlanEntry(**e) for e in data["entries"]],
    )
    emit(dump_model(report), args.output)
    return 0


# =========================
# Parser
# =========================

def _add_job_args(p: argparse.ArgumentParser, with_b: bool = False) -> None:
    p.add_argument("--space", help="距離行列 CSV")
    p.add_argument("--cloud", help="点群 CSV（ユークリッド距離）")
    if with_b:
        p.add_argument("--space-b", dest="space_b", help="比較相手の距離行列 CSV")
        p.add_argument("--cloud-b", dest="cloud_b", help="比較相手の点群 CSV")
    p.add_argument("--kind", default="cech", help="vr | cech | ambient_cech | classical")
    p.add_argument("--classical-kind", default="vr_inf", help="vr_inf | cech_inf（--kind classical のとき）")
    p.add_argument("--p", default="2", help="指数 p（1 以上、または inf）")
    p.add_argument("--max-dim", type=int, default=1, help="単体の次元の上限")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="出力ファイル（省略時は標準出力）")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thickening", description="p-Vietoris–Rips / p-Čech 距離の厚みづけのパーシステンス図")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagram", help="パーシステンス図を計算")
    _add_job_args(p)
    p.add_argument("--ambient", help="周囲空間の距離行列 CSV（--kind ambient_cech）")
    p.add_argument("--embedding", help="X の各点の周囲空間での番号 CSV")
    p.add_argument("--out", default="json", help="json | csv | svg")
    p.add_argument("--complex-out", help="FilteredComplex を JSON lines で書き出す")
    p.add_argument("--exact", action="store_true", help="Čech の LP を有理数演算で解く")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("compare", help="2 つの図のボトルネック距離と安定性の確認")
    _add_job_args(p, with_b=True)
    p.add_argument("--degree", type=int, help="次数（省略時は信頼できる次数すべて）")
    p.add_argument("--corr", help="対応の CSV（列 phi, psi）")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="閉じた式・単連結クラスタリングによる図")
    p.add_argument("name", choices=["zn", "single-linkage"])
    p.add_argument("--n", type=int, help="Z_{n+1} の n")
    p.add_argument("--p", default="2")
    p.add_argument("--space", help="距離行列 CSV（single-linkage）")
    p.add_argument("--scale", default="auto", help="倍率（auto なら辺の値から導く）")
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("audit-sphere", help="球面のサンプルで区間の端点を確認")
    p.add_argument("--n-dim", type=int, default=1)
    p.add_argument("--count", type=int, default=40)
    p.add_argument("--p", default="2")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--max-dim", type=int)
    p.add_argument("--mode", default="grid", help="grid | seeded-uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_audit_sphere)

    p = sub.add_parser("sweep", help="複数の p で図を計算")
    _add_job_args(p)
    p.add_argument("--p-list", default="1,2,inf", help="カンマ区切りの p")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("transport", help="2 つの測度の Wasserstein 距離と輸送計画")
    p.add_argument("--space", required=True)
    p.add_argument("--alpha", required=True, help="測度（CSV の 1 行、または JSON）")
    p.add_argument("--beta", required=True)
    p.add_argument("--q", default="1")
    p.add_argument("--output")
    p.set_defaults(func=cmd_transport)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        print(f"InvalidJob: {messages}", file=sys.stderr)
        return 2
    except ThickeningError as e:
        print(str(e), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
