"""
多面体スケルトンモジュール: 頂点・辺によるモデル、分離超平面判定、独立オラクル
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, List, Optional, Sequence, Set, Tuple

import config
from errors import InputError, check_guard
from exactmath import (
    RatVector, ZERO, affine_dimension, affinely_independent, clear_denominators,
    nullspace, parse_rational, sign, strict_feasibility, sub, to_vector,
)
from logger import get_logger

SignPattern = Tuple[int, ...]

# CutWitness の種類
BAD_EDGE = 'bad_edge'
NO_POSITIVE_VERTEX = 'no_positive_vertex'
NO_NEGATIVE_VERTEX = 'no_negative_vertex'
NO_FAILURE = 'none'


@dataclass(frozen=True)
class SkeletonModel:
    """頂点座標と辺（添字の組）で表した整数多面体"""

    vertices: Tuple[RatVector, ...]
    edges: Tuple[Tuple[int, int], ...]
    dim: int
    labels: Optional[Tuple[str, ...]] = None

    @classmethod
    def build(cls, vertices: Iterable[Iterable], edges: Iterable[Tuple[int, int]],
              labels: Optional[Sequence[str]] = None) -> 'SkeletonModel':
        """
        頂点・辺を検証してモデルを構築

        辺は (小さい添字, 大きい添字) に正規化し、辞書式順に並べる。

        Args:
            vertices: 頂点座標の列
            edges: 頂点添字の組の列
            labels: 頂点ラベル（任意）

        Returns:
            SkeletonModel
        """
        verts = tuple(to_vector(v) for v in vertices)
        if not verts:
            raise InputError('頂点がありません')
        width = len(verts[0])
        if any(len(v) != width for v in verts):
            raise InputError('頂点の次元が揃っていません')
        if len(set(verts)) != len(verts):
            raise InputError('重複した頂点があります')

        normalized: Set[Tuple[int, int]] = set()
        for i, j in edges:
            if not (0 <= i < len(verts) and 0 <= j < len(verts)) or i == j:
                raise InputError(f'不正な辺です: ({i}, {j})')
            pair = (min(i, j), max(i, j))
            if pair in normalized:
                raise InputError(f'重複した辺です: {pair}')
            normalized.add(pair)

        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(verts):
                raise InputError('ラベル数が頂点数と一致しません')
        return cls(verts, tuple(sorted(normalized)), affine_dimension(verts), labels)

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])


@dataclass(frozen=True)
class Hyperplane:
    """超平面 coeffs·x = rhs"""

    coeffs: RatVector
    rhs: Fraction = ZERO

    def __post_init__(self):
        coeffs = to_vector(self.coeffs)
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'rhs', parse_rational(self.rhs))
        if all(c == 0 for c in coeffs):
            raise InputError('係数がすべて0の超平面は定義できません')

    @classmethod
    def of(cls, coeffs: Iterable, rhs=0) -> 'Hyperplane':
        return cls(to_vector(coeffs), parse_rational(rhs))

    def value(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != len(self.coeffs):
            raise InputError(f'次元が一致しません: {len(point)} != {len(self.coeffs)}')
        return sum((a * x for a, x in zip(self.coeffs, point)), ZERO) - self.rhs

    def negated(self) -> 'Hyperplane':
        return Hyperplane(tuple(-c for c in self.coeffs), -self.rhs)

    def scaled(self, factor) -> 'Hyperplane':
        factor = parse_rational(factor)
        if factor <= 0:
            raise InputError('スケール係数は正である必要があります')
        return Hyperplane(tuple(factor * c for c in self.coeffs), factor * self.rhs)

    def integral(self) -> Tuple[Tuple[int, ...], int]:
        """正の定数倍で整数化した (係数, 右辺)"""
        scaled = clear_denominators(self.coeffs + (self.rhs,))
        return scaled[:-1], scaled[-1]


@dataclass(frozen=True)
class CutWitness:
    kind: str
    edge: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class CutReport:
    """分離判定の結果: separating ⟺ witness.kind == 'none'"""

    separating: bool
    pattern: SignPattern
    witness: CutWitness = field(default_factory=lambda: CutWitness(NO_FAILURE))

    @property
    def normalized_pattern(self) -> SignPattern:
        return normalize_pattern(self.pattern)


def normalize_pattern(pattern: Sequence[int]) -> SignPattern:
    """パターンとその符号反転のうち辞書式に小さい方（順序なし分解の代表）"""
    pattern = tuple(pattern)
    flipped = tuple(-s for s in pattern)
    return min(pattern, flipped)


def _check_dim(model: SkeletonModel, h: Hyperplane):
    if len(h.coeffs) != model.ambient_dim:
        raise InputError(f'次元が一致しません: 超平面 {len(h.coeffs)} / 頂点 {model.ambient_dim}')


def evaluate(model: SkeletonModel, h: Hyperplane) -> SignPattern:
    """各頂点での sign(coeffs·v − rhs)"""
    _check_dim(model, h)
    coeffs, rhs = h.integral()
    return tuple(sign(sum(a * x for a, x in zip(coeffs, v)) - rhs) for v in model.vertices)


def judge_pattern(pattern: SignPattern, edges: Sequence[Tuple[int, int]]) -> CutReport:
    """
    符号パターンと辺リストから分離判定（正頂点 → 負頂点 → 交差辺の順で最初の失敗）

    Args:
        pattern: 頂点ごとの符号
        edges: 辞書式順の辺

    Returns:
        CutReport
    """
    if 1 not in pattern:
        return CutReport(False, pattern, CutWitness(NO_POSITIVE_VERTEX))
    if -1 not in pattern:
        return CutReport(False, pattern, CutWitness(NO_NEGATIVE_VERTEX))
    for i, j in edges:
        if pattern[i] * pattern[j] < 0:
            return CutReport(False, pattern, CutWitness(BAD_EDGE, (i, j)))
    return CutReport(True, pattern)


def is_separating(model: SkeletonModel, h: Hyperplane) -> CutReport:
    """
    超平面が多面体の分離超平面かを判定

    正の頂点と負の頂点が両方あり、端点の符号が真に逆の辺が無いとき分離的。
    """
    return judge_pattern(evaluate(model, h), model.edges)


# ---------------------------------------------------------------------------
# 独立オラクル
# ---------------------------------------------------------------------------

def _shares_midpoint(vertices: Sequence[RatVector], i: int, j: int) -> bool:
    target = tuple(a + b for a, b in zip(vertices[i], vertices[j]))
    seen = {}
    for k, v in enumerate(vertices):
        if k in (i, j):
            continue
        seen[v] = k
    for k, v in enumerate(vertices):
        if k in (i, j):
            continue
        partner = tuple(t - x for t, x in zip(target, v))
        other = seen.get(partner)
        if other is not None and other != k:
            return True
    return False


def edge_oracle(vertices: Sequence[Sequence], i: int, j: int) -> bool:
    """
    頂点 i, j を結ぶ線分が辺かを線形計画で判定

    c·v_i = c·v_j かつ他のすべての頂点 w で c·w < c·v_i となる c が存在すれば辺。
    中点を他の頂点対と共有する場合は辺ではない（早期判定）。

    Args:
        vertices: 相異なる頂点座標
        i, j: 頂点添字（i ≠ j）

    Returns:
        辺なら True
    """
    if i == j:
        raise InputError('同じ頂点どうしの辺は判定できません')
    verts = [to_vector(v) for v in vertices]
    if _shares_midpoint(verts, i, j):
        return False
    base = verts[i]
    others = [sub(w, base) for k, w in enumerate(verts) if k not in (i, j)]
    witness = strict_feasibility([], others, [sub(verts[j], base)], dim=len(base))
    return witness is not None


def skeleton_from_oracle(vertices: Sequence[Sequence],
                         labels: Optional[Sequence[str]] = None) -> SkeletonModel:
    """全頂点対に edge_oracle を適用してスケルトンを構成"""
    verts = [to_vector(v) for v in vertices]
    edges = [(i, j) for i, j in combinations(range(len(verts)), 2) if edge_oracle(verts, i, j)]
    return SkeletonModel.build(verts, edges, labels)


def _spanning_hyperplane(model: SkeletonModel, points: Sequence[RatVector]) -> Optional[Hyperplane]:
    # 零空間には頂点全体で消える（アフィン包の）方程式も含まれるので、
    # 頂点上で恒等的に0でない最初の基底ベクトルを採用する
    rows = [tuple(p) + (Fraction(-1),) for p in points]
    for vec in nullspace(rows):
        coeffs, rhs = vec[:-1], vec[-1]
        if all(c == 0 for c in coeffs):
            continue
        h = Hyperplane(tuple(coeffs), rhs)
        if any(s != 0 for s in evaluate(model, h)):
            return h
    return None


def enumerate_cuts_oracle(model: SkeletonModel) -> List[SignPattern]:
    """
    頂点張り超平面の列挙による分離超平面の分解パターン（正規化済み、昇順）

    アフィン独立な d 頂点の組が張る超平面をすべて調べ、パターンで重複を除き、
    is_separating で絞り込む。

    Args:
        model: 次元 d ≥ 2 のモデル

    Returns:
        正規化パターンの昇順リスト
    """
    logger = get_logger()
    d = model.dim
    if d < 2:
        raise InputError(f'次元 {d} のモデルには分離超平面の列挙を行いません')

    candidates = comb(len(model.vertices), d)
    check_guard(candidates, config.guard_max_vertices(), '候補超平面数')

    seen: Set[SignPattern] = set()
    found: Set[SignPattern] = set()
    for subset in combinations(range(len(model.vertices)), d):
        points = [model.vertices[k] for k in subset]
        if not affinely_independent(points):
            continue
        h = _spanning_hyperplane(model, points)
        if h is None:
            continue
        pattern = evaluate(model, h)
        key = normalize_pattern(pattern)
        if key in seen:
            continue
        seen.add(key)
        if judge_pattern(pattern, model.edges).separating:
            found.add(key)

    logger.debug(f'頂点張り超平面 {len(seen)} 個中 分離的 {len(found)} 個')
    return sorted(found)
