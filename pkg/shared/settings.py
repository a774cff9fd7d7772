#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
shared/settings.py — 環境変数による設定の共通モジュール

プロジェクトルートの .env を読み込み、並列数などの実行時設定を返す。
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

from dotenv import load_dotenv

# プロジェクトルート（shared/ から見て ../）
PROJECT_ROOT = Path(__file__).parent.parent
DATA_DIR = PROJECT_ROOT / "data"

load_dotenv(PROJECT_ROOT / ".env")

# キャッシュ
_thread_count_cache: int | None = None


def get_thread_count() -> int:
    """THICKENING_THREADS から並列数を取得（未設定・不正値なら 1）"""
    global _thread_count_cache
    if _thread_count_cache is not None:
        return _thread_count_cache

    raw = os.environ.get("THICKENING_THREADS", "").strip()
    threads = 1
    if raw:
        try:
            threads = int(raw)
        except ValueError:
            print(f"Warning: THICKENING_THREADS is not an integer: {raw!r}", file=sys.stderr)
            threads = 1
        if threads < 1:
            print(f"Warning: THICKENING_THREADS must be >= 1: {raw!r}", file=sys.stderr)
            threads = 1

    _thread_count_cache = threads
    return threads


def reset_cache() -> None:
    """テスト用: 環境変数を読み直す"""
    global _thread_count_cache
    _thread_count_cache = None
