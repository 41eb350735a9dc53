"""
順序多面体・鎖多面体モジュール

イデアル／反鎖を頂点とするスケルトン、悪い対による切断判定、
非鎖半順序の分離超平面の構成、三つの族（互いに素な鎖・二分木・ジグザグ）の分類器。
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import config
from errors import InputError, NoWitnessError, check_guard
from exactmath import RatVector, ZERO, clear_denominators, format_rational, parse_rational, sign
from logger import get_logger
from polymodel import (
    BAD_EDGE, CutReport, Hyperplane, SignPattern, SkeletonModel,
    enumerate_cuts_oracle, judge_pattern,
)
from poset import (
    Poset, chain_components, is_binary_tree, is_disjoint_chains, is_zigzag, maximal_chains,
)

ORDER = 'order'
CHAIN = 'chain'
TARGETS = (ORDER, CHAIN)

DISJOINT_CHAINS = 'disjoint_chains'
BINARY_TREE = 'binary_tree'
ZIGZAG = 'zigzag'
FAMILY_ALIASES = {
    'chains': DISJOINT_CHAINS, DISJOINT_CHAINS: DISJOINT_CHAINS,
    'tree': BINARY_TREE, BINARY_TREE: BINARY_TREE,
    ZIGZAG: ZIGZAG,
}

MIN_SIGNS = 'min_signs'
EQUAL_ABS = 'equal_abs'
UNIQUE_EXTENSION = 'unique_extension'

# 二分木の局所規則: (子の符号, 子の符号) → 親の符号
_LOCAL_RULES = {
    (-1, -1): 1,
    (1, 1): -1,
    (1, -1): 0,
    (0, -1): 1,
    (0, 1): -1,
    (0, 0): 0,
}


# ---------------------------------------------------------------------------
# 型
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PosetHyperplane:
    """
    半順序集合の要素を座標とする超平面 Σ c_x · x = rhs

    coeffs は elements と同じ順序。少なくとも1つは非零。
    """

    elements: Tuple[str, ...]
    coeffs: RatVector
    rhs: Fraction = ZERO
    _integral: Tuple[Tuple[int, ...], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.coeffs) != len(self.elements):
            raise InputError('係数の数が要素数と一致しません')
        coeffs = tuple(parse_rational(c) for c in self.coeffs)
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'rhs', parse_rational(self.rhs))
        if all(c == 0 for c in coeffs):
            raise InputError('係数がすべて0の超平面は定義できません')
        scaled = clear_denominators(coeffs + (self.rhs,))
        object.__setattr__(self, '_integral', (scaled[:-1], scaled[-1]))

    @classmethod
    def of(cls, p: Poset, coeffs: Union[Mapping[str, object], Sequence], rhs=0) -> 'PosetHyperplane':
        """
        Args:
            p: 半順序集合
            coeffs: 要素順の係数列、またはラベル → 係数の辞書（省略した要素は0）
            rhs: 右辺
        """
        if isinstance(coeffs, Mapping):
            unknown = set(coeffs) - set(p.elements)
            if unknown:
                raise InputError(f'未知の要素の係数です: {sorted(unknown)}')
            values = [coeffs.get(e, 0) for e in p.elements]
        else:
            values = list(coeffs)
            if len(values) != len(p):
                raise InputError(f'係数の数 {len(values)} が要素数 {len(p)} と一致しません')
        return cls(p.elements, tuple(parse_rational(v) for v in values), parse_rational(rhs))

    def coefficient(self, label: str) -> Fraction:
        return self.coeffs[self.elements.index(label)]

    def mask_value(self, mask: int) -> int:
        """正の定数倍で整数化した h(ρ(S))（符号判定用）"""
        coeffs, rhs = self._integral
        total = -rhs
        while mask:
            low = mask & -mask
            total += coeffs[low.bit_length() - 1]
            mask ^= low
        return total

    def value(self, labels: Iterable[str]) -> Fraction:
        """指示ベクトル ρ(S) での値 Σ_{x∈S} c_x − rhs"""
        members = set(labels)
        return sum((c for e, c in zip(self.elements, self.coeffs) if e in members), ZERO) - self.rhs

    def to_hyperplane(self) -> Hyperplane:
        return Hyperplane(self.coeffs, self.rhs)

    def scaled(self, factor) -> 'PosetHyperplane':
        factor = parse_rational(factor)
        return PosetHyperplane(self.elements, tuple(factor * c for c in self.coeffs), factor * self.rhs)


@dataclass(frozen=True)
class BadPair:
    """値の符号が真に逆で、対称差が P で連結な頂点の対（イデアルまたは反鎖）"""

    I: FrozenSet[str]
    J: FrozenSet[str]


@dataclass(frozen=True)
class PosetCutReport(CutReport):
    bad_pair: Optional[BadPair] = None


@dataclass(frozen=True)
class ClassifierVerdict:
    family: str
    satisfied_conditions: FrozenSet[str]
    separating: bool
    evidence: Optional[BadPair] = None
    extension: Optional[PosetHyperplane] = None
    property_agrees: Optional[bool] = None


# ---------------------------------------------------------------------------
# スケルトン
# ---------------------------------------------------------------------------

def _check_target(target: str) -> str:
    if target not in TARGETS:
        raise InputError(f"target は 'order' か 'chain' です: {target!r}")
    return target


def _check_poset(h: PosetHyperplane, p: Poset):
    if h.elements != p.elements:
        raise InputError('超平面の座標が半順序集合の要素と一致しません')


def _vertex_masks(p: Poset, target: str) -> List[int]:
    """頂点（イデアルまたは反鎖）のマスク昇順。頂点数はガードで制限"""
    limit = config.guard_max_vertices()
    masks = p.ideal_masks(limit) if target == ORDER else p.antichain_masks(limit)
    check_guard(len(masks), limit, '頂点数')
    return masks


def _adjacent(p: Poset, target: str, a: int, b: int) -> bool:
    # 順序多面体では一方が他方を含む必要がある
    if target == ORDER and a & ~b and b & ~a:
        return False
    return p.is_connected_mask(a ^ b)


@lru_cache(maxsize=128)
def _adjacent_pairs(p: Poset, target: str) -> Tuple[Tuple[int, int], ...]:
    masks = _vertex_masks(p, target)
    return tuple(
        (i, j)
        for i in range(len(masks))
        for j in range(i + 1, len(masks))
        if _adjacent(p, target, masks[i], masks[j])
    )


def subset_label(p: Poset, mask: int) -> str:
    if mask == 0:
        return '{}'
    return '{' + ','.join(e for i, e in enumerate(p.elements) if mask >> i & 1) + '}'


@lru_cache(maxsize=128)
def _polytope_model(p: Poset, target: str) -> SkeletonModel:
    masks = _vertex_masks(p, target)
    vertices = [tuple(mask >> i & 1 for i in range(len(p))) for mask in masks]
    labels = [subset_label(p, mask) for mask in masks]
    get_logger().debug(f'{target} 多面体: 頂点 {len(masks)} 個、辺 {len(_adjacent_pairs(p, target))} 本')
    return SkeletonModel.build(vertices, _adjacent_pairs(p, target), labels)


def order_polytope_model(p: Poset) -> SkeletonModel:
    """
    順序多面体 O(P) のスケルトン

    頂点はイデアルの指示ベクトル（マスク昇順）。I ⊂ J かつ J∖I が連結なとき辺。
    """
    _vertex_masks(p, ORDER)
    return _polytope_model(p, ORDER)


def chain_polytope_model(p: Poset) -> SkeletonModel:
    """
    鎖多面体 C(P) のスケルトン

    頂点は反鎖の指示ベクトル（マスク昇順）。対称差が連結なとき辺。
    """
    _vertex_masks(p, CHAIN)
    return _polytope_model(p, CHAIN)


def polytope_model(p: Poset, target: str) -> SkeletonModel:
    return order_polytope_model(p) if _check_target(target) == ORDER else chain_polytope_model(p)


def _unit(n: int, i: int, value=1) -> List[int]:
    row = [0] * n
    row[i] = value
    return row


def facets_order(p: Poset) -> List[Hyperplane]:
    """O(P) の面: 極大元 x_i = 0、極小元 x_j = 1、被覆 x_i < x_j ごとに x_i = x_j"""
    n = len(p)
    facets = [Hyperplane.of(_unit(n, i), 0) for i in p.maximal]
    facets += [Hyperplane.of(_unit(n, j), 1) for j in p.minimal]
    for lower, upper in p.covers:
        row = _unit(n, p.index[lower])
        row[p.index[upper]] = -1
        facets.append(Hyperplane.of(row, 0))
    return facets


def facets_chain(p: Poset) -> List[Hyperplane]:
    """C(P) の面: 各 x_i = 0 と、極大鎖ごとの Σ x = 1"""
    n = len(p)
    facets = [Hyperplane.of(_unit(n, i), 0) for i in range(n)]
    for chain in maximal_chains(p):
        row = [0] * n
        for label in chain:
            row[p.index[label]] = 1
        facets.append(Hyperplane.of(row, 1))
    return facets


# ---------------------------------------------------------------------------
# 切断判定
# ---------------------------------------------------------------------------

def checkcut(p: Poset, h: PosetHyperplane, target: str) -> PosetCutReport:
    """
    悪い対による分離判定

    正の頂点と負の頂点が存在し、悪い対が無いとき分離的。
    悪い対はマスク昇順の頂点対を辞書式に調べ、最初のものを報告する。

    Args:
        p: 半順序集合
        h: 超平面
        target: 'order'（イデアル）または 'chain'（反鎖）

    Returns:
        PosetCutReport（bad_pair は辺の交差が原因のときのみ）
    """
    _check_target(target)
    _check_poset(h, p)
    masks = _vertex_masks(p, target)
    pattern = tuple(sign(h.mask_value(m)) for m in masks)
    report = judge_pattern(pattern, _adjacent_pairs(p, target))
    if report.witness.kind != BAD_EDGE:
        return PosetCutReport(report.separating, pattern, report.witness)
    i, j = report.witness.edge
    pair = BadPair(p.labels_of(masks[i]), p.labels_of(masks[j]))
    return PosetCutReport(False, pattern, report.witness, pair)


def find_bad_pairs(p: Poset, h: PosetHyperplane, target: str = ORDER) -> List[BadPair]:
    """すべての悪い対（checkcut と同じ辞書式順）"""
    _check_target(target)
    _check_poset(h, p)
    masks = _vertex_masks(p, target)
    signs = [sign(h.mask_value(m)) for m in masks]
    return [
        BadPair(p.labels_of(masks[i]), p.labels_of(masks[j]))
        for i, j in _adjacent_pairs(p, target)
        if signs[i] * signs[j] < 0
    ]


def is_bad_pair(p: Poset, h: PosetHyperplane, I: Iterable[str], J: Iterable[str],
                target: str = ORDER) -> bool:
    """I, J（イデアルまたは反鎖）が h の悪い対か"""
    _check_target(target)
    _check_poset(h, p)
    a, b = p.mask_of(I), p.mask_of(J)
    valid = p.is_ideal if target == ORDER else p.is_antichain
    if not (valid(a) and valid(b)):
        kind = 'イデアル' if target == ORDER else '反鎖'
        raise InputError(f'{kind}ではない集合が渡されました')
    if a == b:
        return False
    return h.mask_value(a) * h.mask_value(b) < 0 and _adjacent(p, target, a, b)


def theorem26_witness(p: Poset) -> Tuple[PosetHyperplane, PosetHyperplane]:
    """
    鎖でない半順序集合の分離超平面を構成

    O(P) には最初の比較不能対 (x_i, x_j) による x_i − x_j = 0、
    C(P) には Σ x_i = 1 を返し、両方を checkcut で確認する。

    Raises:
        NoWitnessError: P が鎖のとき
    """
    if p.is_chain():
        raise NoWitnessError('鎖には分離超平面がありません')
    n = len(p)
    i, j = next((i, j) for i in range(n) for j in range(i + 1, n) if not p.comparable_pair(i, j))
    row = _unit(n, i)
    row[j] = -1
    for_order = PosetHyperplane.of(p, row, 0)
    for_chain = PosetHyperplane.of(p, [1] * n, 1)
    if not checkcut(p, for_order, ORDER).separating or not checkcut(p, for_chain, CHAIN).separating:
        raise ArithmeticError('構成した超平面が分離的になりませんでした')
    get_logger().info(f'✓ 分離超平面を構成: {p.elements[i]} − {p.elements[j]} = 0 / Σx = 1')
    return for_order, for_chain


def enumerate_poset_cuts(p: Poset, target: str) -> List[SignPattern]:
    """対応する多面体に enumerate_cuts_oracle を適用"""
    return enumerate_cuts_oracle(polytope_model(p, target))


# ---------------------------------------------------------------------------
# 極小元の符号からの拡張
# ---------------------------------------------------------------------------

def _minimal_signs(p: Poset, signs, allowed=(1, -1)) -> Dict[int, int]:
    labels = [p.elements[i] for i in p.minimal]
    if isinstance(signs, Mapping):
        missing = [m for m in labels if m not in signs]
        extra = set(signs) - set(labels)
        if missing or extra:
            raise InputError(f'極小元すべてに符号が必要です: 不足 {missing}、余分 {sorted(extra)}')
        values = [signs[m] for m in labels]
    else:
        values = list(signs)
        if len(values) != len(labels):
            raise InputError(f'極小元 {len(labels)} 個に対し符号が {len(values)} 個です')
    result = {}
    for i, s in zip(p.minimal, values):
        s = int(s)
        if s not in allowed:
            raise InputError(f'符号は {allowed} のいずれかです: {s}')
        result[i] = s
    return result


def _require_family(p: Poset, family: str) -> str:
    resolved = FAMILY_ALIASES.get(family)
    if resolved is None:
        raise InputError(f'未知の族です: {family!r}')
    family = resolved
    checks = {DISJOINT_CHAINS: is_disjoint_chains, BINARY_TREE: is_binary_tree, ZIGZAG: is_zigzag}
    if not checks[family](p):
        raise InputError(f'半順序集合が族 {family} に属しません')
    return family


def _alternate(n: int, chains: Sequence[Sequence[int]], bottoms: Sequence[int]) -> List[int]:
    coeffs = [0] * n
    for chain, s in zip(chains, bottoms):
        for depth, i in enumerate(chain):
            coeffs[i] = s if depth % 2 == 0 else -s
    return coeffs


def extend_from_minimal(p: Poset, family: str, signs) -> PosetHyperplane:
    """
    互いに素な鎖で、極小元の符号から各鎖を交互に ±1 で埋める

    Args:
        p: disjoint_chains の半順序集合
        family: 族名（disjoint_chains）
        signs: 極小元ラベル → ±1（または極小元順の列）

    Returns:
        rhs = 0 の超平面
    """
    if _require_family(p, family) != DISJOINT_CHAINS:
        raise InputError('extend_from_minimal は互いに素な鎖にのみ適用できます')
    by_index = _minimal_signs(p, signs)
    chains = chain_components(p)
    return PosetHyperplane.of(p, _alternate(len(p), chains, [by_index[c[0]] for c in chains]), 0)


def _tree_extension(p: Poset, leaf_signs: Dict[int, int]) -> List[int]:
    coeffs = [0] * len(p)
    subtree = [0] * len(p)
    # 要素順とは独立に、下から順に処理
    for i in _bottom_up(p):
        children = p.lower_covers[i]
        if not children:
            coeffs[i] = leaf_signs[i]
        else:
            key = tuple(sorted((sign(subtree[c]) for c in children), key=lambda s: (abs(s), -s)))
            coeffs[i] = _LOCAL_RULES[key]
        subtree[i] = coeffs[i] + sum(subtree[c] for c in p.lower_covers[i])
    return coeffs


def _bottom_up(p: Poset) -> List[int]:
    return sorted(range(len(p)), key=lambda i: bin(p.below[i]).count('1'))


def local_rules_extend(p: Poset, family: str, signs) -> PosetHyperplane:
    """
    二分木で、葉の符号から局所規則により内部節点の係数を下から決める

    子の符号はその子を根とする部分木の係数和の符号。
    (−,−)→+, (+,+)→−, (+,−)→0, (0,−)→+, (0,+)→−, (0,0)→0。

    Args:
        p: 根が極大な二分木
        family: 族名（binary_tree）
        signs: 葉ラベル → ±1（または葉の順の列）
    """
    if _require_family(p, family) != BINARY_TREE:
        raise InputError('local_rules_extend は二分木にのみ適用できます')
    return PosetHyperplane.of(p, _tree_extension(p, _minimal_signs(p, signs)), 0)


def _zigzag_extension(p: Poset, minimal_signs: Dict[int, int]) -> List[int]:
    coeffs = [0] * len(p)
    for i, s in minimal_signs.items():
        coeffs[i] = s
    for m in p.maximal:
        if m in minimal_signs:
            continue
        coeffs[m] = -sign(sum(minimal_signs[c] for c in p.lower_covers[m]))
    return coeffs


def extend_zigzag(p: Poset, signs) -> PosetHyperplane:
    """
    ジグザグで、極小元の符号から極大元の係数を決める

    二つの下被覆 (+,+)→−, (−,−)→+, (+,−)→0、下被覆が一つなら符号反転。
    """
    _require_family(p, ZIGZAG)
    return PosetHyperplane.of(p, _zigzag_extension(p, _minimal_signs(p, signs)), 0)


# ---------------------------------------------------------------------------
# 分類
# ---------------------------------------------------------------------------

def _conditions_chains(p: Poset, h: PosetHyperplane):
    # 係数0の要素を除いた部分半順序（やはり互いに素な鎖）で評価する
    chains = [[i for i in chain if h.coeffs[i] != 0] for chain in chain_components(p)]
    chains = [c for c in chains if c]
    bottoms = [h.coeffs[c[0]] for c in chains]
    satisfied = set()
    if any(c > 0 for c in bottoms) and any(c < 0 for c in bottoms):
        satisfied.add(MIN_SIGNS)
    if len({abs(c) for c in h.coeffs if c != 0}) == 1:
        satisfied.add(EQUAL_ABS)
    extension = PosetHyperplane.of(p, _alternate(len(p), chains, [sign(b) for b in bottoms]), 0)
    if h.coeffs == extension.scaled(abs(bottoms[0])).coeffs:
        satisfied.add(UNIQUE_EXTENSION)
    return satisfied, extension


def _leading_unit(h: PosetHyperplane, indices: Sequence[int]) -> Optional[Fraction]:
    return next((abs(h.coeffs[i]) for i in indices if h.coeffs[i] != 0), None)


def _common_conditions(p: Poset, h: PosetHyperplane) -> set:
    mins = [h.coeffs[i] for i in p.minimal]
    satisfied = set()
    if any(c > 0 for c in mins) and any(c < 0 for c in mins):
        satisfied.add(MIN_SIGNS)
    if len({abs(c) for c in h.coeffs if c != 0}) == 1:
        satisfied.add(EQUAL_ABS)
    return satisfied


def _conditions_tree(p: Poset, h: PosetHyperplane):
    satisfied = _common_conditions(p, h)
    extension = PosetHyperplane.of(
        p, _tree_extension(p, {i: sign(h.coeffs[i]) for i in p.minimal}), 0
    ) if any(h.coeffs[i] != 0 for i in p.minimal) else None
    unit = _leading_unit(h, p.minimal)
    if extension is not None and h.coeffs == extension.scaled(unit).coeffs:
        satisfied.add(UNIQUE_EXTENSION)
    return satisfied, extension


def _conditions_zigzag(p: Poset, h: PosetHyperplane):
    satisfied = _common_conditions(p, h)
    minimal_signs = {i: sign(h.coeffs[i]) for i in p.minimal}
    unit = _leading_unit(h, p.minimal)
    if unit is None:
        return satisfied, None
    extension = PosetHyperplane.of(p, _zigzag_extension(p, minimal_signs), 0)
    determined = all(h.coeffs[i] == unit * minimal_signs[i] for i in p.minimal)
    for m in p.maximal:
        if m in minimal_signs:
            continue
        expected = unit * extension.coeffs[m]
        # 下被覆が一つの極大元は 0 でもよい
        if h.coeffs[m] != expected and not (len(p.lower_covers[m]) == 1 and h.coeffs[m] == 0):
            determined = False
    if determined:
        satisfied.add(UNIQUE_EXTENSION)
    return satisfied, extension


def property_conditions(p: Poset, h: PosetHyperplane, family: str) -> Tuple[FrozenSet[str], Optional[PosetHyperplane]]:
    """
    族ごとに三条件（極小元の符号、係数の絶対値、拡張の一意性）を評価

    Returns:
        (満たす条件名の集合, 極小元の符号から得た拡張)
    """
    family = _require_family(p, family)
    _check_poset(h, p)
    evaluate = {
        DISJOINT_CHAINS: _conditions_chains,
        BINARY_TREE: _conditions_tree,
        ZIGZAG: _conditions_zigzag,
    }[family]
    satisfied, extension = evaluate(p, h)
    return frozenset(satisfied), extension


def classify(p: Poset, h: PosetHyperplane, family: str) -> ClassifierVerdict:
    """
    族に応じた分類器

    互いに素な鎖は三条件すべてで分離的と判定する。
    ジグザグと二分木は checkcut で判定し、ジグザグでは係数が {−1,0,1} で
    極小元が非零かつ符号条件を満たす範囲で三条件との一致も確かめる。

    Args:
        p: 族に属する半順序集合
        h: 原点を通る超平面（rhs = 0）
        family: 'disjoint_chains' / 'binary_tree' / 'zigzag'（'chains' / 'tree' も可）

    Returns:
        ClassifierVerdict
    """
    logger = get_logger()
    family = _require_family(p, family)
    _check_poset(h, p)
    if h.rhs != 0:
        raise InputError('分類器は原点を通る超平面（rhs = 0）のみ扱います')

    satisfied, extension = property_conditions(p, h, family)
    report = checkcut(p, h, ORDER)
    agrees = None

    if family == DISJOINT_CHAINS:
        separating = satisfied == {MIN_SIGNS, EQUAL_ABS, UNIQUE_EXTENSION}
        if separating != report.separating:
            logger.warning(f'⚠ 条件による判定と checkcut が一致しません: {p.elements}, {h.coeffs}')
    else:
        separating = report.separating
        if family == ZIGZAG:
            in_scope = (MIN_SIGNS in satisfied
                        and all(c in (-1, 0, 1) for c in h.coeffs)
                        and all(h.coeffs[i] != 0 for i in p.minimal))
            if in_scope:
                agrees = ({EQUAL_ABS, UNIQUE_EXTENSION} <= satisfied) == separating
                if not agrees:
                    logger.warning(f'⚠ ジグザグの条件判定が checkcut と一致しません: {h.coeffs}')

    evidence = report.bad_pair if not separating else None
    return ClassifierVerdict(family, satisfied, separating, evidence, extension, agrees)


# ---------------------------------------------------------------------------
# テキスト形式
# ---------------------------------------------------------------------------

def parse_hyperplane_text(text: str, p: Poset) -> PosetHyperplane:
    """
    `hyperplane v1` 形式のテキストを解析

    `coeff <label> <有理数>` の行（省略した要素は0）と最後の `rhs <有理数>`。
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith('#')]
    if not lines or lines[0].split() != ['hyperplane', 'v1']:
        raise InputError("1行目は 'hyperplane v1' である必要があります")
    if len(lines) < 2 or lines[-1].split()[0] != 'rhs' or len(lines[-1].split()) != 2:
        raise InputError("最終行は 'rhs <rational>' である必要があります")
    coeffs: Dict[str, Fraction] = {}
    for line in lines[1:-1]:
        parts = line.split()
        if len(parts) != 3 or parts[0] != 'coeff':
            raise InputError(f"'coeff <label> <rational>' である必要があります: {line!r}")
        if parts[1] in coeffs:
            raise InputError(f'係数が重複しています: {parts[1]}')
        coeffs[parts[1]] = parse_rational(parts[2])
    return PosetHyperplane.of(p, coeffs, parse_rational(lines[-1].split()[1]))


def format_hyperplane_text(h: PosetHyperplane) -> str:
    lines = ['hyperplane v1']
    lines.extend(f'coeff {e} {format_rational(c)}' for e, c in zip(h.elements, h.coeffs))
    lines.append(f'rhs {format_rational(h.rhs)}')
    return '\n'.join(lines) + '\n'
