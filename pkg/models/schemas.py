"""
Pydanticスキーマ: CLI が1行ずつ出力する判定結果のデータモデル
"""

import json
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict


# 有理数はすべて "p/q" 文字列（整数は "3"）で表す
Witness = Optional[Union[str, List[Any], Dict[str, Any]]]


class CommandResult(BaseModel):
    """サブコマンド1回分の判定結果"""
    model_config = ConfigDict(extra='forbid')

    command: str
    verdict: str
    witness: Witness = None
    details: Dict[str, Any] = {}

    def to_line(self) -> str:
        """JSON 1行（キー順は固定）"""
        return self.model_dump_json()

    def ledger_record(self) -> Dict[str, str]:
        """判定台帳用の辞書（witness / details は JSON 文字列）"""
        data = self.model_dump(mode='json')
        return {
            'command': self.command,
            'verdict': self.verdict,
            'witness': '' if self.witness is None else CommandResult._json(data['witness']),
            'details': CommandResult._json(data['details']),
        }

    @staticmethod
    def _json(value: Any) -> str:
        return json.dumps(value, ensure_ascii=False, sort_keys=True)
