"""
単位立方体モジュール: 分離超平面の特徴付け、標準形、形の数え上げ、二回目の切断条件

添字は 1 始まり（x_1, …, x_d）で統一する。
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

import config
from errors import InputError, check_guard
from exactmath import RatVector, parse_rational, to_vector
from logger import get_logger
from polymodel import Hyperplane, SkeletonModel, skeleton_from_oracle


@dataclass(frozen=True)
class CubeCutForm:
    """標準形 x_1 + … + x_k ≤ ℓ"""

    k: int
    ell: int

    def validate(self, d: int) -> 'CubeCutForm':
        if not (2 <= self.k <= d and 1 <= self.ell < self.k):
            raise InputError(f'不正な標準形です: k={self.k}, ℓ={self.ell}, d={d}')
        return self

    def complement(self) -> 'CubeCutForm':
        """反対側の半空間の形（ℓ ↔ k − ℓ）"""
        return CubeCutForm(self.k, self.k - self.ell)


@dataclass(frozen=True)
class SecondCutSpec:
    """二回目の超平面 Σ_I x_i − Σ_J x_j = h"""

    I: FrozenSet[int]
    J: FrozenSet[int]
    h: int

    @classmethod
    def of(cls, I: Iterable[int], J: Iterable[int], h: int) -> 'SecondCutSpec':
        return cls(frozenset(I), frozenset(J), int(h))

    def validate(self, d: int) -> 'SecondCutSpec':
        universe = set(range(1, d + 1))
        if not self.I or not self.J:
            raise InputError('I と J は空でない必要があります')
        if self.I & self.J:
            raise InputError('I と J は互いに素である必要があります')
        if not (self.I | self.J) <= universe:
            raise InputError(f'添字は 1..{d} の範囲である必要があります')
        if not 0 <= self.h < len(self.I):
            raise InputError(f'h は 0 ≤ h < #I を満たす必要があります: h={self.h}, #I={len(self.I)}')
        return self


# ---------------------------------------------------------------------------
# モデル
# ---------------------------------------------------------------------------

def cube_vertices(d: int) -> List[Tuple[int, ...]]:
    """0/1 点を辞書式順に"""
    return list(product((0, 1), repeat=d))


@lru_cache(maxsize=None)
def cube_model(d: int) -> SkeletonModel:
    """
    単位立方体 [0,1]^d のスケルトン

    Args:
        d: 次元（2 ≤ d ≤ CUBE_MAX_D）

    Returns:
        2^d 頂点、1座標だけ異なる頂点対を辺とするモデル
    """
    if not 2 <= d <= config.CUBE_MAX_D:
        raise InputError(f'立方体の次元は 2..{config.CUBE_MAX_D} の範囲です: d={d}')
    verts = cube_vertices(d)
    index = {v: i for i, v in enumerate(verts)}
    edges = []
    for i, v in enumerate(verts):
        for coord in range(d):
            if v[coord] == 0:
                w = v[:coord] + (1,) + v[coord + 1:]
                edges.append((i, index[w]))
    return SkeletonModel.build(verts, edges)


# ---------------------------------------------------------------------------
# 特徴付け
# ---------------------------------------------------------------------------

def lemma11_predicate(coeffs: Sequence) -> bool:
    """
    原点を通る超平面 coeffs·x = 0 が立方体を分離する条件

    正の係数と負の係数が共に存在し、非零係数の絶対値がすべて等しいこと。
    """
    vec = to_vector(coeffs)
    if all(c == 0 for c in vec):
        raise InputError('係数がすべて0です')
    nonzero = {abs(c) for c in vec if c != 0}
    return any(c > 0 for c in vec) and any(c < 0 for c in vec) and len(nonzero) == 1


def _unit_form(coeffs: Sequence, rhs) -> Optional[Tuple[List[int], List[int], Fraction]]:
    """正のスケールで係数を {0,±1} にそろえ (I, J, rhs) を返す（不可なら None）"""
    vec = to_vector(coeffs)
    if all(c == 0 for c in vec):
        raise InputError('係数がすべて0です')
    magnitudes = {abs(c) for c in vec if c != 0}
    if len(magnitudes) != 1:
        return None
    unit = magnitudes.pop()
    I = [i + 1 for i, c in enumerate(vec) if c > 0]
    J = [i + 1 for i, c in enumerate(vec) if c < 0]
    return I, J, parse_rational(rhs) / unit


def recognize_cut(coeffs: Sequence, rhs=0) -> Optional[Tuple[FrozenSet[int], FrozenSet[int], int]]:
    """
    立方体の分離超平面を認識（I, J の片方が空でもよい）

    正のスケール後に係数が {0,±1}、右辺が整数 h で −#J < h < #I のとき受理。

    Returns:
        (I, J, h) または None
    """
    unit = _unit_form(coeffs, rhs)
    if unit is None:
        return None
    I, J, h = unit
    if h.denominator != 1:
        return None
    h = int(h)
    if not -len(J) < h < len(I):
        return None
    return frozenset(I), frozenset(J), h


def lemma13_recognize(coeffs: Sequence, rhs=0) -> Optional[Tuple[FrozenSet[int], FrozenSet[int], int]]:
    """
    Σ_I x_i − Σ_J x_j = h（I, J 非空、0 ≤ h < #I）の形を認識

    h < 0 のときは同じ超平面を符号反転して表す（I と J を入れ替え）。

    Returns:
        (I, J, h) または None
    """
    found = recognize_cut(coeffs, rhs)
    if found is None:
        return None
    I, J, h = found
    if h < 0:
        I, J, h = J, I, -h
    if not I or not J:
        return None
    return I, J, h


def canonicalize(coeffs: Sequence, rhs=0, minimal: bool = False) -> CubeCutForm:
    """
    分離超平面を標準形 x_1 + … + x_k = ℓ に変換

    負係数の座標を x ↦ 1 − x で置き換えると Σ x = h + #J になる。

    Args:
        coeffs: 係数
        rhs: 右辺
        minimal: True なら ℓ と k − ℓ の小さい方を返す

    Returns:
        CubeCutForm(k, ℓ)
    """
    found = recognize_cut(coeffs, rhs)
    if found is None:
        raise InputError('立方体の分離超平面の形ではありません')
    I, J, h = found
    k = len(I) + len(J)
    form = CubeCutForm(k, h + len(J))
    if minimal and form.complement().ell < form.ell:
        form = form.complement()
    return form


def cut_forms(d: int) -> List[CubeCutForm]:
    """有効な (k, ℓ) の全組"""
    return [CubeCutForm(k, ell) for k in range(2, d + 1) for ell in range(1, k)]


def count_forms(d: int) -> int:
    """
    単模同値を除いた分離超平面の形の数 d(d−1)/2

    (k, ℓ) の格子を数えた値と照合する。
    """
    if d < 2:
        raise InputError(f'd ≥ 2 が必要です: d={d}')
    count = d * (d - 1) // 2
    if count != len(cut_forms(d)):
        raise ArithmeticError('標準形の数え上げが閉じた式と一致しません')
    return count


# ---------------------------------------------------------------------------
# 二回目の切断
# ---------------------------------------------------------------------------

def _second_cut_sizes(d: int, k: int, ell: int, spec: SecondCutSpec):
    CubeCutForm(k, ell).validate(d)
    spec.validate(d)
    head = set(range(1, k + 1))
    x = len(spec.I & head)
    y = len(spec.J & head)
    return x, y


def second_cut_predicate(d: int, k: int, ell: int, spec: SecondCutSpec) -> bool:
    """
    二回目の超平面 H′ が H′ ∩ [0,1]^d ⊆ {x_1+…+x_k ≤ ℓ} を満たすための必要十分条件

    X = I ∩ [k], Y = J ∩ [k] として
    #J + h + k − #X ≤ ℓ または #I − h + k − #Y ≤ ℓ。
    部分多面体を分離するかどうかは second_cut_exact で判定する。
    """
    x, y = _second_cut_sizes(d, k, ell, spec)
    return (len(spec.J) + spec.h + k - x <= ell) or (len(spec.I) - spec.h + k - y <= ell)


def second_cut_contained(d: int, k: int, ell: int, spec: SecondCutSpec) -> bool:
    """
    H′ ∩ [0,1]^d ⊆ {x_1+…+x_k ≤ ℓ} を直接確かめるオラクル

    H′ ∩ [0,1]^d の頂点は H′ 上の立方体の頂点と、H′ が立方体の辺の内部を
    横切る点なので、それらすべてで x_1+…+x_k ≤ ℓ を確かめる。

    Returns:
        含まれていれば True
    """
    CubeCutForm(k, ell).validate(d)
    spec.validate(d)
    check_guard(d, config.CUBE_MAX_D, '立方体の次元')
    coeffs = [1 if i in spec.I else -1 if i in spec.J else 0 for i in range(1, d + 1)]
    h = spec.h

    def head_sum(point) -> Fraction:
        return sum(point[:k], Fraction(0))

    for v in cube_vertices(d):
        value = sum(c * t for c, t in zip(coeffs, v))
        if value == h and head_sum(v) > ell:
            return False
        for i, c in enumerate(coeffs):
            if v[i] == 1 or c == 0:
                continue
            # v と v + e_i を結ぶ辺の内部で値 h をとる点
            upper = value + c
            if min(value, upper) < h < max(value, upper):
                point = list(map(Fraction, v))
                point[i] = Fraction(h - value, c)
                if head_sum(point) > ell:
                    return False
    return True


def second_cut_exact(d: int, k: int, ell: int, spec: SecondCutSpec) -> bool:
    """
    二回目の超平面が部分多面体を分離するための必要十分条件

    立方体の辺では値が ±1 ずつしか変わらないので、交差し得るのは
    x_1+…+x_k = ℓ 上の交換辺（X の座標 1→0, Y の座標 0→1）だけ。
    正の頂点が存在し、値 1 の頂点から値 −1 の頂点へ移る交換辺が無いとき分離的。
    負の頂点は J ≠ ∅ なので常に存在する。
    """
    x, y = _second_cut_sizes(d, k, ell, spec)
    n_i, n_j, h = len(spec.I), len(spec.J), spec.h

    positive_exists = (n_i - x) + min(x, ell) > h
    if not positive_exists:
        return False

    free = k - x - y
    # a: X の 1 の数, b: Y の 1 の数, f: その他の先頭座標, c/e: [k] 外の I/J
    for a in range(1, x + 1):
        for b in range(0, y):
            f = ell - a - b
            if not 0 <= f <= free:
                continue
            # (a + c) − (b + e) = h + 1 となる c ∈ [0, #I−X], e ∈ [0, #J−Y]
            target = h + 1 - a + b
            if -(n_j - y) <= target <= (n_i - x):
                return False
    return True


def corollary15_predicate(d: int, ell: int, spec: SecondCutSpec) -> bool:
    """k = d の場合の条件 d − ℓ ≤ s − (t + h) または d − ℓ ≤ (t + h) − s"""
    spec.validate(d)
    CubeCutForm(d, ell).validate(d)
    s, t, h = len(spec.I), len(spec.J), spec.h
    return (d - ell <= s - (t + h)) or (d - ell <= (t + h) - s)


def spec_hyperplane(d: int, spec: SecondCutSpec) -> Hyperplane:
    """SecondCutSpec の超平面 Σ_I x_i − Σ_J x_j = h"""
    spec.validate(d)
    coeffs = [1 if i in spec.I else -1 if i in spec.J else 0 for i in range(1, d + 1)]
    return Hyperplane.of(coeffs, spec.h)


def all_second_cut_specs(d: int, max_support: Optional[int] = None) -> List[SecondCutSpec]:
    """#I + #J ≤ max_support（既定 d）の全 SecondCutSpec（決定的順序）"""
    limit = d if max_support is None else max_support
    specs = []
    for labels in product((0, 1, -1), repeat=d):
        I = [i + 1 for i, s in enumerate(labels) if s == 1]
        J = [i + 1 for i, s in enumerate(labels) if s == -1]
        if not I or not J or len(I) + len(J) > limit:
            continue
        for h in range(len(I)):
            specs.append(SecondCutSpec.of(I, J, h))
    return specs


@lru_cache(maxsize=None)
def subpolytope_model(d: int, k: int, ell: int) -> SkeletonModel:
    """
    部分多面体 {x ∈ [0,1]^d : x_1+…+x_k ≤ ℓ} のスケルトン（辺は辺オラクルで計算）

    Args:
        d, k, ell: 有効な標準形（d ≤ SUBPOLYTOPE_MAX_D）

    Returns:
        SkeletonModel
    """
    CubeCutForm(k, ell).validate(d)
    check_guard(d, config.SUBPOLYTOPE_MAX_D, '部分多面体の次元')
    verts = [v for v in cube_vertices(d) if sum(v[:k]) <= ell]
    get_logger().debug(f'部分多面体 d={d}, k={k}, ℓ={ell}: 頂点 {len(verts)} 個の辺を計算')
    return skeleton_from_oracle(verts)


def parse_index_set(text: str) -> FrozenSet[int]:
    """"1,2,5" 形式の添字集合"""
    try:
        items = [int(t) for t in str(text).split(',') if t.strip()]
    except ValueError as e:
        raise InputError(f'添字集合として解釈できません: {text!r}') from e
    return frozenset(items)


def coefficient_vector(text: str) -> RatVector:
    """"1,-1,0" 形式の係数ベクトル"""
    return to_vector(t for t in str(text).split(',') if t.strip())
