"""
集計レポートモジュール
互いに素な鎖・ジグザグの族について、極小元の符号割り当てと分離超平面の数を表にまとめる
"""

from itertools import product
from math import comb
from typing import Dict, List, Optional, Tuple

import pandas as pd
from tabulate import tabulate

import config
from errors import InputError
from logger import get_logger
from orderchain import (
    DISJOINT_CHAINS, ORDER, PosetHyperplane, checkcut, enumerate_poset_cuts, extend_from_minimal,
    extend_zigzag, order_polytope_model,
)
from polymodel import normalize_pattern
from poset import Poset, disjoint_chains, zigzag

CENSUS_COLUMNS = [
    'poset', 'size', 'minimal', 'predicted', 'separating_extensions',
    'ternary_decompositions', 'oracle_decompositions',
]


def _partitions(n: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    result = []
    for first in range(min(n, largest), 0, -1):
        result.extend((first,) + rest for rest in _partitions(n - first, first))
    return result


class CensusReport:
    """族ごとの分離超平面の集計"""

    def __init__(self, family: str, max_size: int = config.CENSUS_DEFAULT_MAX_SIZE):
        """
        Args:
            family: 'chains' または 'zigzag'
            max_size: 要素数の上限
        """
        if family not in ('chains', 'zigzag'):
            raise InputError(f"集計の族は 'chains' か 'zigzag' です: {family!r}")
        if max_size < 1:
            raise InputError(f'max_size は1以上です: {max_size}')
        self.logger = get_logger()
        self.family = family
        self.max_size = max_size

    def family_posets(self) -> List[Tuple[str, Poset]]:
        """(名前, Poset) を要素数の昇順で"""
        posets = []
        for n in range(1, self.max_size + 1):
            if self.family == 'chains':
                for lengths in _partitions(n):
                    posets.append(('+'.join(str(x) for x in lengths), disjoint_chains(lengths)))
            else:
                posets.append((f'down{n}', zigzag(n, 'down')))
                if n > 1:
                    posets.append((f'up{n}', zigzag(n, 'up')))
        return posets

    def _extend(self, p: Poset, signs) -> PosetHyperplane:
        if self.family == 'chains':
            return extend_from_minimal(p, DISJOINT_CHAINS, signs)
        return extend_zigzag(p, signs)

    def _ternary_count(self, p: Poset) -> int:
        patterns = set()
        for coeffs in product((-1, 0, 1), repeat=len(p)):
            if not any(coeffs):
                continue
            report = checkcut(p, PosetHyperplane.of(p, coeffs, 0), ORDER)
            if report.separating:
                patterns.add(normalize_pattern(report.pattern))
        return len(patterns)

    def _oracle_count(self, p: Poset) -> Optional[int]:
        if len(p) > config.ORACLE_COUNT_MAX_D:
            return None
        model = order_polytope_model(p)
        if model.dim < 2 or comb(len(model.vertices), model.dim) > config.guard_max_vertices():
            return None
        return len(enumerate_poset_cuts(p, ORDER))

    def row(self, name: str, p: Poset) -> Dict:
        m = len(p.minimal)
        separating = 0
        for signs in product((1, -1), repeat=m):
            if checkcut(p, self._extend(p, signs), ORDER).separating:
                separating += 1
        return {
            'poset': name,
            'size': len(p),
            'minimal': m,
            'predicted': 2 ** m - 2,
            'separating_extensions': separating,
            'ternary_decompositions': self._ternary_count(p),
            'oracle_decompositions': self._oracle_count(p),
        }

    def build(self) -> pd.DataFrame:
        """集計表を作成"""
        self.logger.info('=' * 60)
        self.logger.info(f'集計開始: 族 {self.family}、要素数 ≤ {self.max_size}')
        self.logger.info('=' * 60)
        rows = [self.row(name, p) for name, p in self.family_posets()]
        df = pd.DataFrame(rows, columns=CENSUS_COLUMNS)
        df['oracle_decompositions'] = df['oracle_decompositions'].astype('Int64')
        if self.family == 'chains':
            mismatched = df[df['separating_extensions'] != df['predicted']]
            if mismatched.empty:
                self.logger.info('✓ すべての半順序で 分離的な拡張の数 = 2^m − 2')
            else:
                self.logger.warning(f'⚠ 2^m − 2 と一致しない行: {list(mismatched["poset"])}')
        return df

    @staticmethod
    def render(df: pd.DataFrame) -> str:
        display_df = df.astype(object).where(df.notna(), '-')
        return tabulate(display_df, headers='keys', tablefmt='grid', showindex=False)


def census(family: str, max_size: int = config.CENSUS_DEFAULT_MAX_SIZE) -> pd.DataFrame:
    """CensusReport(family, max_size).build() の簡易呼び出し"""
    return CensusReport(family, max_size).build()
