"""
半順序集合モジュール: イデアル・反鎖・極大鎖・連結性、三つの族の生成器、テキスト形式

要素集合は添字のビットマスクで扱い、列挙結果はマスクの昇順で返す。
"""

import random
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

import config
from errors import InputError, check_guard
from logger import get_logger

Cover = Tuple[str, str]
TreeSpec = Union[str, Tuple]


class Poset:
    """
    有限半順序集合（要素ラベルの順序付きリストと被覆関係）

    被覆関係は非巡回かつ推移簡約でなければならない。
    """

    def __init__(self, elements: Sequence[str], covers: Iterable[Cover]):
        """
        Args:
            elements: 要素ラベル（一意）
            covers: (下, 上) の被覆対
        """
        self.elements: Tuple[str, ...] = tuple(str(e) for e in elements)
        if not self.elements:
            raise InputError('要素が1つ以上必要です')
        if len(set(self.elements)) != len(self.elements):
            raise InputError('要素ラベルが重複しています')
        self.index: Dict[str, int] = {e: i for i, e in enumerate(self.elements)}

        cover_list: List[Cover] = []
        for lower, upper in covers:
            if lower not in self.index or upper not in self.index:
                raise InputError(f'未知の要素を含む被覆です: {lower} < {upper}')
            if lower == upper:
                raise InputError(f'自己被覆は不正です: {lower}')
            if (lower, upper) in cover_list:
                raise InputError(f'重複した被覆です: {lower} < {upper}')
            cover_list.append((lower, upper))
        self.covers: Tuple[Cover, ...] = tuple(cover_list)

        graph = self.hasse_graph()
        if not nx.is_directed_acyclic_graph(graph):
            raise InputError('被覆関係に巡回があります')
        reduced = nx.transitive_reduction(graph)
        if set(reduced.edges()) != set(graph.edges()):
            extra = sorted(set(graph.edges()) - set(reduced.edges()))
            raise InputError(f'被覆関係が推移簡約ではありません: {extra}')

    # -- 基本構造 -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poset) and self.elements == other.elements
                and set(self.covers) == set(other.covers))

    def __hash__(self) -> int:
        return hash((self.elements, frozenset(self.covers)))

    def __repr__(self) -> str:
        return f'Poset({list(self.elements)}, {list(self.covers)})'

    def hasse_graph(self) -> nx.DiGraph:
        """被覆関係の有向グラフ（下 → 上）"""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(self.covers)
        return graph

    @cached_property
    def below(self) -> Tuple[int, ...]:
        """各要素の真に下にある要素のマスク"""
        closure = nx.transitive_closure_dag(self.hasse_graph())
        masks = [0] * len(self)
        for lower, upper in closure.edges():
            masks[self.index[upper]] |= 1 << self.index[lower]
        return tuple(masks)

    @cached_property
    def above(self) -> Tuple[int, ...]:
        masks = [0] * len(self)
        for i, down in enumerate(self.below):
            for j in _bits(down):
                masks[j] |= 1 << i
        return tuple(masks)

    @cached_property
    def comparable(self) -> Tuple[int, ...]:
        return tuple(b | a for b, a in zip(self.below, self.above))

    @cached_property
    def lower_covers(self) -> Tuple[Tuple[int, ...], ...]:
        result = [[] for _ in self.elements]
        for lower, upper in self.covers:
            result[self.index[upper]].append(self.index[lower])
        return tuple(tuple(sorted(r)) for r in result)

    @cached_property
    def upper_covers(self) -> Tuple[Tuple[int, ...], ...]:
        result = [[] for _ in self.elements]
        for lower, upper in self.covers:
            result[self.index[lower]].append(self.index[upper])
        return tuple(tuple(sorted(r)) for r in result)

    @cached_property
    def minimal(self) -> Tuple[int, ...]:
        return tuple(i for i, down in enumerate(self.below) if down == 0)

    @cached_property
    def maximal(self) -> Tuple[int, ...]:
        return tuple(i for i, up in enumerate(self.above) if up == 0)

    def less(self, i: int, j: int) -> bool:
        """x_i < x_j"""
        return bool(self.below[j] >> i & 1)

    def comparable_pair(self, i: int, j: int) -> bool:
        return bool(self.comparable[i] >> j & 1)

    def is_chain(self) -> bool:
        full = (1 << len(self)) - 1
        return all(c | (1 << i) == full for i, c in enumerate(self.comparable))

    # -- 部分集合 ------------------------------------------------------------

    def mask_of(self, subset: Iterable[Union[str, int]]) -> int:
        mask = 0
        for item in subset:
            if isinstance(item, str):
                if item not in self.index:
                    raise InputError(f'未知の要素です: {item}')
                item = self.index[item]
            if not 0 <= item < len(self):
                raise InputError(f'要素の添字が範囲外です: {item}')
            mask |= 1 << item
        return mask

    def labels_of(self, mask: int) -> FrozenSet[str]:
        return frozenset(self.elements[i] for i in _bits(mask))

    def down_closure(self, mask: int) -> int:
        result = mask
        for i in _bits(mask):
            result |= self.below[i]
        return result

    def is_ideal(self, mask: int) -> bool:
        return self.down_closure(mask) == mask

    def is_antichain(self, mask: int) -> bool:
        return all(self.comparable[i] & mask == 0 for i in _bits(mask))

    def maximal_of(self, mask: int) -> int:
        """部分集合の極大元のマスク"""
        return sum(1 << i for i in _bits(mask) if self.above[i] & mask == 0)

    def is_connected_mask(self, mask: int) -> bool:
        """比較可能グラフを部分集合に制限したものが連結か（空集合は非連結）"""
        if mask == 0:
            return False
        seen = mask & -mask
        frontier = seen
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = self.comparable[low.bit_length() - 1] & mask & ~seen
            seen |= new
            frontier |= new
        return seen == mask

    # -- 列挙 ---------------------------------------------------------------

    def antichain_masks(self, limit: Optional[int] = None) -> List[int]:
        """全反鎖のマスク（昇順）。limit を超えたら GuardExceededError"""
        check_guard(len(self), config.POSET_MAX_ELEMENTS, '半順序集合の要素数')
        cached = self.__dict__.get('_antichain_masks')
        if cached is None:
            masks = []
            for chain in nx.antichains(self.hasse_graph()):
                masks.append(self.mask_of(chain))
                if limit is not None:
                    check_guard(len(masks), limit, '反鎖の数')
            cached = sorted(masks)
            self.__dict__['_antichain_masks'] = cached
        if limit is not None:
            check_guard(len(cached), limit, '反鎖の数')
        return cached

    def ideal_masks(self, limit: Optional[int] = None) -> List[int]:
        """全イデアルのマスク（昇順）。反鎖の下方閉包として得る"""
        cached = self.__dict__.get('_ideal_masks')
        if cached is None:
            cached = sorted(self.down_closure(a) for a in self.antichain_masks(limit))
            self.__dict__['_ideal_masks'] = cached
        if limit is not None:
            check_guard(len(cached), limit, 'イデアルの数')
        return cached


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------------------
# 操作
# ---------------------------------------------------------------------------

def ideals(p: Poset) -> List[FrozenSet[int]]:
    """
    全イデアル（下に閉じた部分集合、添字集合、マスク昇順）

    ∅ と P 自身を含む。
    """
    result = []
    for mask in p.ideal_masks():
        if not p.is_ideal(mask):
            raise ArithmeticError('下に閉じていないイデアルが生成されました')
        result.append(frozenset(_bits(mask)))
    return result


def antichains(p: Poset) -> List[FrozenSet[int]]:
    """全反鎖（添字集合、マスク昇順）"""
    return [frozenset(_bits(mask)) for mask in p.antichain_masks()]


def maximal_chains(p: Poset) -> List[Tuple[str, ...]]:
    """
    極小元から極大元へ至る飽和鎖をすべて列挙

    Returns:
        ラベルのタプル（下から上）のリスト（添字順でソート）
    """
    check_guard(len(p), config.POSET_MAX_ELEMENTS, '半順序集合の要素数')
    graph = p.hasse_graph()
    sinks = [p.elements[i] for i in p.maximal]
    chains = []
    for i in p.minimal:
        source = p.elements[i]
        if i in p.maximal:
            chains.append((source,))
            continue
        for path in nx.all_simple_paths(graph, source, sinks):
            chains.append(tuple(path))
    return sorted(chains, key=lambda c: [p.index[e] for e in c])


def connected_subset(p: Poset, subset: Iterable[Union[str, int]]) -> bool:
    """部分集合上の比較可能グラフが連結か（∅ は非連結、単元集合は連結）"""
    return p.is_connected_mask(p.mask_of(subset))


def count_linear_extensions(p: Poset) -> int:
    """線形拡大の数 e(P)（要素数 LINEAR_EXTENSION_MAX 以下）"""
    check_guard(len(p), config.LINEAR_EXTENSION_MAX, '線形拡大を数える要素数')
    return sum(1 for _ in nx.all_topological_sorts(p.hasse_graph()))


# ---------------------------------------------------------------------------
# 族の生成器
# ---------------------------------------------------------------------------

def _chain_prefix(i: int) -> str:
    return chr(ord('a') + i) if i < 26 else f'c{i}_'


def disjoint_chains(lengths: Sequence[int]) -> Poset:
    """
    互いに素な鎖の和。鎖 i の要素は下から <文字>1, <文字>2, …

    Args:
        lengths: 各鎖の長さ（正整数、1つ以上）
    """
    lengths = list(lengths)
    if not lengths or any(int(n) < 1 for n in lengths):
        raise InputError(f'鎖の長さは正整数のリストである必要があります: {lengths}')
    elements, covers = [], []
    for i, n in enumerate(lengths):
        labels = [f'{_chain_prefix(i)}{level}' for level in range(1, int(n) + 1)]
        elements.extend(labels)
        covers.extend(zip(labels, labels[1:]))
    return Poset(elements, covers)


def binary_tree(structure: Union[int, TreeSpec]) -> Poset:
    """
    根が極大な二分木（子 < 親）

    Args:
        structure: 葉はラベル文字列、内部節点は (ラベル, 左, 右)。
            整数 L を渡すと根の下に L 段を持つ完全二分木（ラベル t1, t2, … ）。

    Returns:
        Poset（要素順は帰りがけ順: 左部分木、右部分木、節点）
    """
    if isinstance(structure, int):
        if structure < 0:
            raise InputError('段数は0以上である必要があります')
        counter = iter(range(1, 2 ** (structure + 1)))

        def build(depth):
            if depth == 0:
                return ('leaf', None)
            return ('node', build(depth - 1), build(depth - 1))

        def label(tree):
            if tree[0] == 'leaf':
                return f't{next(counter)}'
            left, right = label(tree[1]), label(tree[2])
            return (f't{next(counter)}', left, right)

        structure = label(build(structure))

    elements: List[str] = []
    covers: List[Cover] = []

    def walk(node) -> str:
        if isinstance(node, str):
            elements.append(node)
            return node
        if not isinstance(node, (tuple, list)) or len(node) != 3 or not isinstance(node[0], str):
            raise InputError(f'二分木の節点は (ラベル, 左, 右) である必要があります: {node!r}')
        name, left, right = node
        left_root, right_root = walk(left), walk(right)
        elements.append(name)
        covers.append((left_root, name))
        covers.append((right_root, name))
        return name

    walk(structure)
    return Poset(elements, covers)


def zigzag(n: int, start_direction: str = 'down') -> Poset:
    """
    ジグザグ（フェンス）x1, …, xn

    Args:
        n: 要素数（1以上）
        start_direction: 'down' なら x1 が極小（x1 < x2 > x3 < …）、
            'up' なら x1 が極大（x1 > x2 < x3 > …）
    """
    if n < 1:
        raise InputError('ジグザグの要素数は1以上です')
    if start_direction not in ('up', 'down'):
        raise InputError(f"start_direction は 'up' か 'down' です: {start_direction}")
    labels = [f'x{i}' for i in range(1, n + 1)]
    covers = []
    for i in range(n - 1):
        rising = (i % 2 == 0) == (start_direction == 'down')
        a, b = labels[i], labels[i + 1]
        covers.append((a, b) if rising else (b, a))
    return Poset(labels, covers)


def v_poset() -> Poset:
    """V 字型 c < a, c < b（要素順 a, b, c）"""
    return Poset(['a', 'b', 'c'], [('c', 'a'), ('c', 'b')])


def is_disjoint_chains(p: Poset) -> bool:
    return all(len(lo) <= 1 and len(up) <= 1 for lo, up in zip(p.lower_covers, p.upper_covers))


def is_binary_tree(p: Poset) -> bool:
    if len(p.maximal) != 1 or any(len(up) > 1 for up in p.upper_covers):
        return False
    return all(len(lo) in (0, 2) for lo in p.lower_covers)


def is_zigzag(p: Poset) -> bool:
    graph = p.hasse_graph().to_undirected()
    if not nx.is_connected(graph) or any(deg > 2 for _, deg in graph.degree()):
        return False
    if len(p) > 2 and graph.number_of_edges() != len(p) - 1:
        return False
    # 高さ 1: すべての要素が極小か極大
    return all(i in p.minimal or i in p.maximal for i in range(len(p)))


def chain_components(p: Poset) -> List[Tuple[int, ...]]:
    """互いに素な鎖の和を鎖ごと（下から上の添字）に分解"""
    if not is_disjoint_chains(p):
        raise InputError('互いに素な鎖の和ではありません')
    chains = []
    for start in p.minimal:
        chain = [start]
        while p.upper_covers[chain[-1]]:
            chain.append(p.upper_covers[chain[-1]][0])
        chains.append(tuple(chain))
    return chains


# ---------------------------------------------------------------------------
# ラベル付き半順序集合の網羅
# ---------------------------------------------------------------------------

def _posets_as_below_masks(n: int) -> List[Tuple[int, ...]]:
    if n == 0:
        return [()]
    result = []
    full_prev = (1 << (n - 1)) - 1
    for below in _posets_as_below_masks(n - 1):
        down_sets = _down_sets(below, n - 1)
        for down in down_sets:
            for kept in down_sets:
                up = full_prev & ~kept
                if down & up:
                    continue
                if any(down & ~below[u] for u in _bits(up)):
                    continue
                new = list(below)
                new_bit = 1 << (n - 1)
                for u in _bits(up):
                    new[u] |= new_bit
                new.append(down)
                result.append(tuple(new))
    return result


def _down_sets(below: Sequence[int], n: int) -> List[int]:
    return [mask for mask in range(1 << n)
            if all(below[i] & ~mask == 0 for i in _bits(mask))]


def poset_from_below_masks(below: Sequence[int], labels: Optional[Sequence[str]] = None) -> Poset:
    """真に下の要素のマスク列から Poset を構成（被覆は推移簡約）"""
    n = len(below)
    labels = list(labels) if labels is not None else [f'x{i}' for i in range(1, n + 1)]
    covers = []
    for upper in range(n):
        for lower in _bits(below[upper]):
            between = any(below[mid] >> lower & 1 for mid in _bits(below[upper]) if mid != lower)
            if not between:
                covers.append((labels[lower], labels[upper]))
    return Poset(labels, covers)


def all_labeled_posets(n: int) -> List[Poset]:
    """
    {x1..xn} 上のラベル付き半順序集合をすべて生成

    n−1 要素の各半順序に、新しい要素の下方集合 D と上方集合 U
    （D の全要素が U の全要素より小さい）を加えて構成する。
    """
    if n < 1:
        raise InputError('要素数は1以上です')
    return [poset_from_below_masks(b) for b in _posets_as_below_masks(n)]


def sample_labeled_posets(n: int, count: int, seed: int = 0) -> List[Poset]:
    """ラベル付き半順序集合から固定シードで count 個を抽出"""
    population = all_labeled_posets(n)
    if count >= len(population):
        return population
    return random.Random(seed).sample(population, count)


# ---------------------------------------------------------------------------
# テキスト形式
# ---------------------------------------------------------------------------

def _is_label(token: str) -> bool:
    return token.isascii() and token.isidentifier()


def parse_poset_text(text: str) -> Poset:
    """
    `poset v1` 形式のテキストを解析

    Args:
        text: 1行目 `poset v1`、`elements ...`、`cover <下> <上>`、`#` はコメント

    Returns:
        Poset
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith('#')]
    if not lines or lines[0].split() != ['poset', 'v1']:
        raise InputError("1行目は 'poset v1' である必要があります")
    if len(lines) < 2 or lines[1].split()[0] != 'elements':
        raise InputError("2行目は 'elements <label> ...' である必要があります")
    labels = lines[1].split()[1:]
    for label in labels:
        if not _is_label(label):
            raise InputError(f'ラベルはASCII識別子である必要があります: {label!r}')
    covers = []
    for number, line in enumerate(lines[2:], start=3):
        parts = line.split()
        if len(parts) != 3 or parts[0] != 'cover':
            raise InputError(f"{number}行目: 'cover <lower> <upper>' である必要があります: {line!r}")
        covers.append((parts[1], parts[2]))
    poset = Poset(labels, covers)
    get_logger().debug(f'半順序集合を読み込み: 要素 {len(poset)} 個、被覆 {len(poset.covers)} 個')
    return poset


def format_poset_text(p: Poset) -> str:
    lines = ['poset v1', 'elements ' + ' '.join(p.elements)]
    lines.extend(f'cover {lo} {up}' for lo, up in p.covers)
    return '\n'.join(lines) + '\n'
