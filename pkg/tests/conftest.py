"""
pytest の共通設定

プロジェクトルートを sys.path に追加し、よく使う空間をフィクスチャにする。
"""

import sys
from pathlib import Path

import pytest

_PROJECT_ROOT = Path(__file__).parent.parent
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

from thickening.metric_core import z_space  # noqa: E402


@pytest.fixture(scope="session")
def project_root() -> Path:
    return _PROJECT_ROOT


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return _PROJECT_ROOT / "data"


@pytest.fixture(scope="module")
def z2():
    return z_space(2)


@pytest.fixture(scope="module")
def z3():
    return z_space(3)


@pytest.fixture(scope="module")
def z4():
    return z_space(4)
