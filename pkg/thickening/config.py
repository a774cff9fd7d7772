"""
数値計算の設定

許容誤差や厳密計算の上限などはここで調整可能。
CLI の出力形式（有効桁数など）もここにまとめている。
"""

# 距離行列の三角不等式チェック（相対許容誤差）
TAU_METRIC = 1e-9

# 重みの総和の許容誤差
WEIGHT_SUM_TOL = 1e-9       # この範囲なら正規化し直して受け付ける
WEIGHT_SUM_STRICT = 1e-12   # 正規化後に満たすべき精度

# 単位球面上の点とみなす許容誤差
UNIT_NORM_TOL = 1e-9

# metric spread を厳密に（部分集合探索で）求める点数の上限
SPREAD_EXACT_CAP = 20

# vr_value の厳密最大化で扱う面の頂点数の上限（2^|S| 個の停留点問題）
QP_EXACT_CAP = 16

# 有理数演算による LP 検証を許可する点数の上限
EXACT_LP_MAX_POINTS = 12

# 単体法の反復回数の上限（Bland 則なので通常は到達しない）
LP_MAX_ITERATIONS = 10_000

# 単体法のピボット判定に使う許容誤差（浮動小数点モード）
LP_EPS = 1e-12

# 輸送計画の周辺分布チェック
PLAN_TOL = 1e-9

# フィルトレーションの単調性チェック（これ以下の違反は浮動小数点誤差として補正）
MONOTONE_TOL = 1e-9

# 長さゼロとみなす区間（相対）
ZERO_LENGTH_TOL = 1e-12

# 出力の有効桁数
SIGNIFICANT_DIGITS = 12

# SVG で無限区間を描く位置（有限値の最大値に対する倍率）
INF_PLOT_FACTOR = 1.1

# grid_maximize の上限
GRID_MAX_FACE = 4
GRID_MAX_STEP = 1e-2

# 輸送多面体の頂点列挙で許すサポートの大きさ
ENUM_MAX_SUPPORT = 3
