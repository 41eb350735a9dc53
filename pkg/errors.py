"""
例外定義: CLIの終了コードに対応する例外階層
"""


class PolycutError(Exception):
    """polycut 全体の基底例外"""

    exit_code = 1


class InputError(PolycutError, ValueError):
    """入力エラー（次元不一致、ファイル形式違反、不正な切断パラメータなど）"""

    exit_code = 1


class GuardExceededError(PolycutError, RuntimeError):
    """リソースガード超過（列挙が大きすぎる）"""

    exit_code = 2


class NoWitnessError(PolycutError):
    """分離超平面の構成が存在しない（例: 鎖に対する分離超平面の構成）"""

    exit_code = 1


class UnsupportedCaseError(PolycutError):
    """証明の構成が前提とする形をしていない入力"""

    exit_code = 1


def check_guard(count: int, limit: int, what: str) -> None:
    """
    件数がガードを超えていれば GuardExceededError を送出

    Args:
        count: 実際の件数
        limit: 上限
        what: エラーメッセージ用の対象名
    """
    if count > limit:
        raise GuardExceededError(f'{what} が上限を超えています: {count} > {limit}')
