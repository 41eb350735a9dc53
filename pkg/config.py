"""
設定ファイル: 計算ガード、ログ設定、CLI既定値
"""

import os

from dotenv import load_dotenv

load_dotenv()

# リソースガード
# 多面体モデルの頂点数、および頂点張り超平面候補数の上限
GUARD_MAX_VERTICES = 2 ** 16
POSET_MAX_ELEMENTS = 24        # イデアル・反鎖列挙の要素数上限
LINEAR_EXTENSION_MAX = 10      # 線形拡大の数え上げ上限
CUBE_MAX_D = 20                # cube_model の次元上限（辺数 d·2^{d-1}）
SUBPOLYTOPE_MAX_D = 6          # 辺オラクルでスケルトンを作る部分多面体の次元上限
BIRKHOFF_MAX_N = 6             # n! 頂点のスケルトン
BIRKHOFF_SEARCH_NS = (2, 3, 4) # 網羅探索が可能な n
ORACLE_COUNT_MAX_D = 4         # `cube enumerate` でオラクル分解数も出す次元上限

# ログ設定
LOG_DIR = 'logs/'
SYSTEM_LOG_FILE = os.getenv('POLYCUT_LOG_FILE', 'logs/polycut.log')
LOG_TO_FILE = bool(os.getenv('POLYCUT_LOG_FILE'))
CONSOLE_LOG_LEVEL = os.getenv('POLYCUT_LOG_LEVEL', 'WARNING').upper()

# 判定結果のCSV台帳（空なら記録しない）
VERDICT_LOG_FILE = os.getenv('POLYCUT_VERDICT_LOG', '')

# 集計表の既定値
CENSUS_DEFAULT_MAX_SIZE = 5


def guard_max_vertices() -> int:
    """
    頂点数ガードを取得（環境変数 POLYCUT_GUARD_MAX_VERTICES が優先）

    呼び出し時に環境変数を読み直すので、CLI実行中の上書きも反映される。

    Returns:
        頂点数（および候補超平面数）の上限
    """
    raw = os.getenv('POLYCUT_GUARD_MAX_VERTICES')
    if raw is None or raw.strip() == '':
        return GUARD_MAX_VERTICES
    try:
        value = int(raw)
    except ValueError:
        return GUARD_MAX_VERTICES
    return value if value > 0 else GUARD_MAX_VERTICES
