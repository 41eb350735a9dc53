"""
Birkhoff 多面体モジュール: 置換行列のスケルトン、分離超平面の網羅探索、恒等式による証明書の検証

置換は1行記法のタプル（w[i-1] = w(i)）で扱う。
"""

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import chain, combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

import config
from errors import InputError, UnsupportedCaseError, check_guard
from logger import get_logger
from exactmath import strict_feasibility
from polymodel import Hyperplane, SkeletonModel, is_separating

Permutation = Tuple[int, ...]
Cycle = Tuple[int, ...]


# ---------------------------------------------------------------------------
# 置換の基本操作
# ---------------------------------------------------------------------------

def validate_permutation(w: Sequence[int]) -> Permutation:
    w = tuple(int(x) for x in w)
    if not w or sorted(w) != list(range(1, len(w) + 1)):
        raise InputError(f'{{1..n}} 上の全単射ではありません: {w}')
    return w


def _split_items(body: str) -> List[int]:
    if ',' in body:
        items = [t.strip() for t in body.split(',') if t.strip()]
    else:
        items = list(body.strip())
    try:
        return [int(t) for t in items]
    except ValueError as e:
        raise InputError(f'置換の要素を整数として解釈できません: {body!r}') from e


def from_cycles(cycles: Sequence[Sequence[int]], n: int) -> Permutation:
    """巡回の列から1行記法を構成（記載の無い点は不動点）"""
    images = list(range(1, n + 1))
    used = set()
    for cycle in cycles:
        for x in cycle:
            if not 1 <= x <= n:
                raise InputError(f'要素 {x} が 1..{n} の範囲外です')
            if x in used:
                raise InputError(f'要素 {x} が複数の巡回に現れます')
            used.add(x)
        for a, b in zip(cycle, tuple(cycle[1:]) + tuple(cycle[:1])):
            images[a - 1] = b
    return tuple(images)


def parse_permutation(text: str, n: Optional[int] = None) -> Permutation:
    """
    巡回記法 "(123)(456)" または1行記法 "2143" を解析

    n ≥ 10 では要素をカンマで区切る（"(1,2,10)"、"2,1,10,…"）。

    Args:
        text: 置換の文字列
        n: 巡回記法での全体の大きさ（省略時は最大の要素）

    Returns:
        1行記法のタプル
    """
    raw = str(text).strip()
    if not raw:
        raise InputError('置換が空です')
    if raw.startswith('('):
        if not re.fullmatch(r'(\([^()]*\))+', raw):
            raise InputError(f'巡回記法として解釈できません: {raw!r}')
        cycles = [_split_items(body) for body in re.findall(r'\(([^()]*)\)', raw)]
        largest = max((x for c in cycles for x in c), default=1)
        size = largest if n is None else int(n)
        if size < largest:
            raise InputError(f'n={size} は要素 {largest} より小さいです')
        return from_cycles([c for c in cycles if c], size)
    w = validate_permutation(_split_items(raw))
    if n is not None and len(w) != int(n):
        raise InputError(f'1行記法の長さ {len(w)} が n={n} と一致しません')
    return w


def compose(a: Permutation, b: Permutation) -> Permutation:
    """(a∘b)(x) = a(b(x))"""
    if len(a) != len(b):
        raise InputError('置換の大きさが一致しません')
    return tuple(a[b[i] - 1] for i in range(len(a)))


def inverse(w: Permutation) -> Permutation:
    result = [0] * len(w)
    for i, image in enumerate(w, start=1):
        result[image - 1] = i
    return tuple(result)


def to_cycles(w: Permutation) -> List[Cycle]:
    """長さ 2 以上の巡回（各巡回は最小元から、最小元の昇順）"""
    seen = set()
    cycles = []
    for start in range(1, len(w) + 1):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        x = w[start - 1]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = w[x - 1]
        if len(cycle) > 1:
            cycles.append(tuple(cycle))
    return cycles


def format_cycles(w: Permutation) -> str:
    cycles = to_cycles(w)
    if not cycles:
        return '()'
    sep = ',' if len(w) >= 10 else ''
    return ''.join('(' + sep.join(str(x) for x in c) + ')' for c in cycles)


def format_one_line(w: Permutation) -> str:
    return (',' if len(w) >= 10 else '').join(str(x) for x in w)


def nontrivial_cycle_count(w: Permutation) -> int:
    """不動点を除いた巡回の数"""
    return len(to_cycles(validate_permutation(w)))


def are_adjacent(w: Permutation, u: Permutation) -> bool:
    """w⁻¹u がちょうど一つの非自明な巡回を持つとき辺"""
    return nontrivial_cycle_count(compose(inverse(w), u)) == 1


def perm_vertex(w: Permutation) -> Tuple[int, ...]:
    """置換行列（(i, w(i)) 成分が 1）を行優先で n² ベクトルに"""
    w = validate_permutation(w)
    n = len(w)
    vec = [0] * (n * n)
    for i, image in enumerate(w):
        vec[i * n + image - 1] = 1
    return tuple(vec)


def vertex_sum(perms: Sequence[Permutation]) -> Tuple[int, ...]:
    vectors = [perm_vertex(w) for w in perms]
    return tuple(sum(col) for col in zip(*vectors))


def vertex_sums_equal(left: Sequence[Permutation], right: Sequence[Permutation]) -> bool:
    return vertex_sum(left) == vertex_sum(right)


# ---------------------------------------------------------------------------
# スケルトンと網羅探索
# ---------------------------------------------------------------------------

def all_permutations(n: int) -> List[Permutation]:
    """1行記法の辞書式順"""
    return list(permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def birkhoff_skeleton(n: int) -> SkeletonModel:
    """
    B_n のスケルトン

    Args:
        n: 1 ≤ n ≤ BIRKHOFF_MAX_N

    Returns:
        n! 頂点（辞書式順）、w⁻¹u が一つの巡回のとき辺
    """
    if n < 1:
        raise InputError(f'n は1以上です: n={n}')
    check_guard(n, config.BIRKHOFF_MAX_N, 'Birkhoff 多面体の n')
    perms = all_permutations(n)
    edges = [(i, j) for i, j in combinations(range(len(perms)), 2) if are_adjacent(perms[i], perms[j])]
    get_logger().debug(f'B_{n}: 頂点 {len(perms)} 個、辺 {len(edges)} 本')
    return SkeletonModel.build([perm_vertex(w) for w in perms], edges,
                               [format_one_line(w) for w in perms])


def _nonempty_subsets(items: Sequence[int]):
    return chain.from_iterable(combinations(items, r) for r in range(1, len(items) + 1))


def validate_search_n(n: int) -> int:
    """網羅探索の対象 n か確認（対象外は InputError）"""
    if n not in config.BIRKHOFF_SEARCH_NS:
        raise InputError(f'網羅探索は n ∈ {config.BIRKHOFF_SEARCH_NS} のみです: n={n}')
    return n


def search_separating(n: int) -> Optional[Hyperplane]:
    """
    B_n（n ∈ {2,3,4}）の分離超平面を網羅的に探す

    負側 S⁻ はある頂点の非隣接頂点集合の部分集合、正側 S⁺ は S⁻ 全体に非隣接な
    頂点の部分集合に限られる。各 (S⁺, S⁻) について残りの頂点を超平面上に置く
    (h, r) を strict_feasibility で探す。

    Returns:
        分離超平面（存在しなければ None）
    """
    validate_search_n(n)
    logger = get_logger()
    model = birkhoff_skeleton(n)
    count = len(model.vertices)
    adjacent = [set() for _ in range(count)]
    for i, j in model.edges:
        adjacent[i].add(j)
        adjacent[j].add(i)
    non_neighbors = [frozenset(set(range(count)) - adjacent[i] - {i}) for i in range(count)]

    lifted = [tuple(v) + (-1,) for v in model.vertices]
    negative_sides = {frozenset(s) for u in range(count) for s in _nonempty_subsets(sorted(non_neighbors[u]))}
    tried = 0
    for negative in sorted(negative_sides, key=lambda s: sorted(s)):
        common = frozenset.intersection(*(non_neighbors[v] for v in negative)) - negative
        for positive in _nonempty_subsets(sorted(common)):
            tried += 1
            rest = [lifted[k] for k in range(count) if k not in negative and k not in positive]
            witness = strict_feasibility([lifted[k] for k in positive],
                                         [lifted[k] for k in negative], rest)
            if witness is None:
                continue
            h = Hyperplane(tuple(witness[:-1]), witness[-1])
            if is_separating(model, h).separating:
                logger.info(f'✓ B_{n} の分離超平面を発見（{tried} パターン目）')
                return h
    logger.info(f'B_{n}: {tried} パターンを調べ、分離超平面なし')
    return None


# ---------------------------------------------------------------------------
# 恒等式と証明書
# ---------------------------------------------------------------------------

def lemma31_checks() -> Dict[str, bool]:
    """S_4 の二つの頂点和の恒等式"""
    def p(text):
        return parse_permutation(text, 4)

    return {
        '2143+3412=2413+3142': vertex_sums_equal([p('2143'), p('3412')], [p('2413'), p('3142')]),
        '(13)(24)+(14)(23)=(1324)+(1423)': vertex_sums_equal(
            [p('(13)(24)'), p('(14)(23)')], [p('(1324)'), p('(1423)')]),
    }


def lemma31_identities() -> bool:
    return all(lemma31_checks().values())


@dataclass
class CertificateReport:
    """置換 v に対する恒等式証明書の検証結果"""

    v: Permutation
    relabeling: Dict[str, int]
    permutations: Dict[str, Permutation]
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]


def theorem32_certificate(v: Permutation) -> CertificateReport:
    """
    長さ 3 以上の巡回を二つ持つ v について、τ と σ を構成し恒等式を検証

    C1 = (p1 p2 p5 A…), C2 = (p3 p4 p6 B…) は長さ 3 以上の最初の二つの巡回。
    τ1 = (p3 p2 p5 A)(p1 p4 p6 B), τ2 = (p1 p2 p5 A p3 p4 p6 B),
    τ3 = (p3 p2 p5 A p1 p4 p6 B), σ1 は C1∪C2 を固定, σ2 = (p3 p2 p5 A),
    σ3 = (p1 p4 p6 B)。残りの巡回はすべてに付け加える。

    Checks:
        a: x_v + x_τ1 = x_τ2 + x_τ3
        b: x_τ1 + x_σ1 = x_σ2 + x_σ3
        c: τ2, τ3 は v と隣接
        d: τ2, τ3, σ2, σ3 の非自明な巡回は v より少ない
        e: σ2, σ3 は v と隣接

    Raises:
        UnsupportedCaseError: 長さ 3 以上の巡回が二つ未満
    """
    v = validate_permutation(v)
    n = len(v)
    cycles = to_cycles(v)
    long_cycles = [c for c in cycles if len(c) >= 3]
    if len(long_cycles) < 2:
        raise UnsupportedCaseError(
            f'長さ3以上の巡回が二つ必要です: {format_cycles(v)}（互換のみの場合は扱いません）')

    c1, c2 = long_cycles[0], long_cycles[1]
    rest = [c for c in cycles if c not in (c1, c2)]
    p1, p2, p5, a = c1[0], c1[1], c1[2], c1[3:]
    p3, p4, p6, b = c2[0], c2[1], c2[2], c2[3:]

    def build(*new_cycles):
        return from_cycles(list(new_cycles) + rest, n)

    perms = {
        'tau1': build((p3, p2, p5) + a, (p1, p4, p6) + b),
        'tau2': build((p1, p2, p5) + a + (p3, p4, p6) + b),
        'tau3': build((p3, p2, p5) + a + (p1, p4, p6) + b),
        'sigma1': build(),
        'sigma2': build((p3, p2, p5) + a),
        'sigma3': build((p1, p4, p6) + b),
    }
    report = CertificateReport(
        v=v,
        relabeling={'1': p1, '2': p2, '3': p3, '4': p4, '5': p5, '6': p6},
        permutations=perms,
    )
    t1, t2, t3 = perms['tau1'], perms['tau2'], perms['tau3']
    s1, s2, s3 = perms['sigma1'], perms['sigma2'], perms['sigma3']
    count = len(cycles)
    report.checks = {
        'a': vertex_sums_equal([v, t1], [t2, t3]),
        'b': vertex_sums_equal([t1, s1], [s2, s3]),
        'c': are_adjacent(v, t2) and are_adjacent(v, t3),
        'd': all(nontrivial_cycle_count(w) < count for w in (t2, t3, s2, s3)),
        'e': are_adjacent(v, s2) and are_adjacent(v, s3),
    }
    logger = get_logger()
    if report.passed:
        logger.debug(f'✓ 証明書 {format_cycles(v)}: すべて成立')
    else:
        logger.warning(f'⚠ 証明書 {format_cycles(v)}: 不成立 {report.failed_checks()}')
    return report


def random_certificate_permutations(count: int, sizes: Sequence[int] = (6, 7, 8),
                                    seed: int = 0) -> List[Permutation]:
    """長さ 3 以上の巡回を二つ以上持つ置換を固定シードで生成"""
    rng = random.Random(seed)
    found: List[Permutation] = []
    while len(found) < count:
        n = rng.choice(list(sizes))
        images = list(range(1, n + 1))
        rng.shuffle(images)
        w = tuple(images)
        if sum(1 for c in to_cycles(w) if len(c) >= 3) >= 2:
            found.append(w)
    return found
