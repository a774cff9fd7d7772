"""
thickening — p-Vietoris–Rips / p-Čech 距離の厚みづけのパーシステントホモロジー

有限距離空間の上の確率測度の p-直径・p-半径によるフィルトレーションを、
単体ごとの最大化問題（LP / 二次形式）として厳密に計算する。
"""

import sys
from pathlib import Path

# プロジェクトルートを sys.path に追加（shared パッケージ参照用）
_PROJECT_ROOT = Path(__file__).parent.parent
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

__version__ = "0.1.0"
