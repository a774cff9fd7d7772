"""
例外クラス

CLI は `name` を標準エラー出力の先頭に表示する（スクリプトから判定しやすいように固定文字列）。
"""

from __future__ import annotations


class ThickeningError(Exception):
    """このパッケージが送出する例外の基底クラス"""

    name = "ThickeningError"
    exit_code = 2

    def __init__(self, message: str = ""):
        super().__init__(message or self.name)
        self.message = message or self.name

    def __str__(self) -> str:
        return f"{self.name}: {self.message}"


class ThickeningWarning(UserWarning):
    """数値的な注意（近似値・予想に依存する出力など）"""


# 距離行列の検証

class NotSquare(ThickeningError):
    name = "NotSquare"


class AsymmetricMatrix(ThickeningError):
    name = "AsymmetricMatrix"


class NonZeroDiagonal(ThickeningError):
    name = "NonZeroDiagonal"


class NegativeDistance(ThickeningError):
    name = "NegativeDistance"


class ZeroOffDiagonal(ThickeningError):
    name = "ZeroOffDiagonal"


class TriangleViolation(ThickeningError):
    name = "TriangleViolation"

    def __init__(self, i: int, j: int, k: int, excess: float = 0.0):
        super().__init__(f"d[{i}][{j}] > d[{i}][{k}] + d[{k}][{j}] (excess {excess:.3g})")
        self.i, self.j, self.k = i, j, k


class EmptySubset(ThickeningError):
    name = "EmptySubset"


class EmbeddingMismatch(ThickeningError):
    name = "EmbeddingMismatch"


class DimensionMismatch(ThickeningError):
    name = "DimensionMismatch"


# 測度・輸送

class InvalidMeasure(ThickeningError):
    name = "InvalidMeasure"


class SpaceMismatch(ThickeningError):
    name = "SpaceMismatch"


class NotOnUnitSphere(ThickeningError):
    name = "NotOnUnitSphere"


class NotANet(ThickeningError):
    name = "NotANet"


class SupportTooLarge(ThickeningError):
    name = "SupportTooLarge"


# フィルトレーション・パーシステンス

class FaceTooLarge(ThickeningError):
    name = "FaceTooLarge"

    def __init__(self, size: int, cap: int):
        super().__init__(f"face has {size} vertices (cap {cap})")
        self.size = size


class NonMonotoneComplex(ThickeningError):
    name = "NonMonotoneComplex"


class LinearProgramError(ThickeningError):
    name = "LinearProgramError"


# 入出力

class InputNotFound(ThickeningError):
    name = "InputNotFound"


class InputFormatError(ThickeningError):
    name = "InputFormatError"


class CertificationFailure(ThickeningError):
    """数値的な保証（安定性の上界など）が確認できなかった"""

    name = "CertificationFailure"
    exit_code = 3
