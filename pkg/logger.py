"""
ログ管理モジュール: システムログと判定結果台帳（CSV）を管理
"""

import csv
import logging
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import config


LEDGER_COLUMNS = ['timestamp_utc', 'command', 'verdict', 'witness', 'details']


class PolycutLogger:
    """システムログと判定結果台帳を管理するクラス"""

    def __init__(self):
        """ロガーを初期化（ファイル出力は設定で有効な場合のみ）"""
        self._setup_system_logger()
        self.ledger_path: Optional[str] = config.VERDICT_LOG_FILE or None
        if self.ledger_path:
            self._init_ledger(self.ledger_path)

    def _setup_system_logger(self):
        """システムログ（コンソール + 任意でファイル）を設定"""
        self.logger = logging.getLogger('polycut')
        self.logger.setLevel(logging.DEBUG)
        self.logger.propagate = False

        # 既存のハンドラーをクリア
        if self.logger.handlers:
            self.logger.handlers.clear()

        # コンソールハンドラー（stdout は JSON 出力専用なので stderr）
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(_level(config.CONSOLE_LOG_LEVEL))
        console_handler.setFormatter(logging.Formatter('%(levelname)s - %(message)s'))
        self.logger.addHandler(console_handler)

        if config.LOG_TO_FILE:
            log_dir = os.path.dirname(config.SYSTEM_LOG_FILE)
            if log_dir:
                os.makedirs(log_dir, exist_ok=True)
            file_handler = logging.FileHandler(config.SYSTEM_LOG_FILE, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            ))
            self.logger.addHandler(file_handler)

    def _init_ledger(self, path: str):
        """判定台帳CSVを初期化（ヘッダー作成）"""
        ledger_dir = os.path.dirname(path)
        if ledger_dir:
            os.makedirs(ledger_dir, exist_ok=True)
        if not os.path.exists(path):
            with open(path, 'w', newline='', encoding='utf-8') as f:
                csv.writer(f).writerow(LEDGER_COLUMNS)
            self.logger.info(f'判定台帳ファイルを作成: {path}')

    def set_console_level(self, level: str):
        """コンソールハンドラーのレベルを変更"""
        for handler in self.logger.handlers:
            if not isinstance(handler, logging.FileHandler):
                handler.setLevel(_level(level))

    def log_verdict(self, record: Dict[str, Any]):
        """
        判定結果をCSV台帳に記録（台帳が無効なら何もしない）

        Args:
            record: command / verdict / witness / details を持つ辞書
        """
        if not self.ledger_path:
            return
        with open(self.ledger_path, 'a', newline='', encoding='utf-8') as f:
            csv.writer(f).writerow([
                datetime.now(timezone.utc).isoformat(),
                record.get('command', ''),
                record.get('verdict', ''),
                record.get('witness', ''),
                record.get('details', ''),
            ])
        self.logger.debug(f'判定を記録: {record.get("command", "")} -> {record.get("verdict", "")}')

    def get_logger(self) -> logging.Logger:
        """システムロガーを取得"""
        return self.logger


def _level(name: str) -> int:
    return getattr(logging, str(name).upper(), logging.WARNING)


# グローバルインスタンス
_polycut_logger = None


def get_polycut_logger() -> PolycutLogger:
    """PolycutLoggerのシングルトンインスタンスを取得"""
    global _polycut_logger
    if _polycut_logger is None:
        _polycut_logger = PolycutLogger()
    return _polycut_logger


def get_logger() -> logging.Logger:
    """システムロガーを取得（簡易アクセス用）"""
    return get_polycut_logger().get_logger()
