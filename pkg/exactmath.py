"""
厳密有理数演算モジュール: 有理ベクトル・行列、零空間、厳密な線形実行可能性判定

浮動小数点は一切使わない。整数は多倍長（Python int）、有理数は fractions.Fraction。
"""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from errors import InputError

Rational = Fraction
RatVector = Tuple[Fraction, ...]
RatMatrix = Tuple[RatVector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# 有理数とベクトル
# ---------------------------------------------------------------------------

def parse_rational(text) -> Fraction:
    """
    "p/q" または整数表記を Fraction に変換

    Args:
        text: 文字列（int / Fraction もそのまま受け付ける）

    Returns:
        既約分数
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    raw = str(text).strip()
    if not raw:
        raise InputError('有理数が空です')
    try:
        if '/' in raw:
            num, den = raw.split('/', 1)
            return Fraction(int(num), int(den))
        return Fraction(int(raw))
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f'有理数として解釈できません: {raw!r}') from e


def format_rational(x: Fraction) -> str:
    """Fraction を "p/q"（整数なら "p"）で表記"""
    return str(Fraction(x))


def to_vector(values: Iterable) -> RatVector:
    """
    値の列を RatVector に変換（dim ≥ 1）

    Args:
        values: int / Fraction / "p/q" 文字列の列

    Returns:
        Fraction のタプル
    """
    vec = tuple(parse_rational(v) for v in values)
    if not vec:
        raise InputError('ベクトルの次元は1以上である必要があります')
    return vec


def to_matrix(rows: Iterable[Iterable]) -> RatMatrix:
    """行の列を長方形の RatMatrix に変換"""
    mat = tuple(to_vector(r) for r in rows)
    if mat and any(len(r) != len(mat[0]) for r in mat):
        raise InputError('行列が長方形ではありません')
    return mat


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise InputError(f'次元が一致しません: {len(u)} != {len(v)}')
    return sum((a * b for a, b in zip(u, v)), ZERO)


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    if len(u) != len(v):
        raise InputError(f'次元が一致しません: {len(u)} != {len(v)}')
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> RatVector:
    if len(u) != len(v):
        raise InputError(f'次元が一致しません: {len(u)} != {len(v)}')
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Fraction, v: Sequence[Fraction]) -> RatVector:
    return tuple(c * a for a in v)


def sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def clear_denominators(values: Sequence[Fraction]) -> Tuple[int, ...]:
    """
    正の定数倍で整数ベクトルに変換（符号は保存される）

    Args:
        values: 有理数の列

    Returns:
        分母の最小公倍数を掛けた整数タプル
    """
    dens = [Fraction(v).denominator for v in values]
    lcm = reduce(lambda a, b: a * b // gcd(a, b), dens, 1)
    return tuple(int(Fraction(v) * lcm) for v in values)


def _shared_dim(vectors: Iterable[Sequence[Fraction]]) -> Optional[int]:
    dim = None
    for v in vectors:
        if dim is None:
            dim = len(v)
        elif len(v) != dim:
            raise InputError(f'次元が一致しません: {len(v)} != {dim}')
    return dim


# ---------------------------------------------------------------------------
# 線形代数
# ---------------------------------------------------------------------------

def rref(m: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """
    簡約階段形とピボット列を返す

    Args:
        m: 長方形行列

    Returns:
        (簡約階段形の非零行, ピボット列番号のリスト)
    """
    rows = [[Fraction(x) for x in r] for r in m]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> List[RatVector]:
    """
    {x : m·x = 0} の基底を簡約階段形から構成

    自由変数ごとに 1 を置き、ピボット変数を解いたベクトルを返す。

    Args:
        m: 長方形行列
        ncols: 列数（m が空のときは必須）

    Returns:
        基底ベクトルのリスト（個数 = 列数 − rank）
    """
    if m:
        width = len(m[0])
        if any(len(r) != width for r in m):
            raise InputError('行列が長方形ではありません')
        if ncols is not None and ncols != width:
            raise InputError(f'列数が一致しません: {width} != {ncols}')
        ncols = width
    elif ncols is None:
        raise InputError('空行列の零空間には列数の指定が必要です')

    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis: List[RatVector] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [ZERO] * ncols
        vec[free] = ONE
        for row, pcol in zip(reduced, pivots):
            vec[pcol] = -row[free]
        basis.append(tuple(vec))
    return basis


def affine_dimension(points: Sequence[Sequence[Fraction]]) -> int:
    """点集合のアフィン包の次元（空なら -1）"""
    if not points:
        return -1
    _shared_dim(points)
    base = points[0]
    return rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def affinely_independent(points: Sequence[Sequence[Fraction]]) -> bool:
    """点がアフィン独立（張る次元 = 個数 − 1）なら True"""
    if not points:
        raise InputError('点集合が空です')
    return affine_dimension(points) == len(points) - 1


# ---------------------------------------------------------------------------
# 厳密単体法（Bland の最小添字規則）
# ---------------------------------------------------------------------------

class _Tableau:
    """
    max c·x, A x ≤ b, x ≥ 0（b ≥ 0）の単体表

    スラック変数による初期基底から始め、Bland の最小添字規則で巡回を防ぐ。
    """

    def __init__(self, a: List[List[Fraction]], b: List[Fraction], c: List[Fraction]):
        self.m = len(a)
        self.n = len(c)
        width = self.n + self.m
        self.rows: List[List[Fraction]] = []
        for i, row in enumerate(a):
            slack = [ZERO] * self.m
            slack[i] = ONE
            self.rows.append(list(row) + slack)
        self.b = list(b)
        self.z = list(c) + [ZERO] * self.m   # 被約費用（max 用）
        self.value = ZERO
        self.basis = [self.n + i for i in range(self.m)]
        self.width = width
        self.pivots = 0

    def _entering(self) -> Optional[int]:
        for j in range(self.width):
            if self.z[j] > 0:
                return j
        return None

    def _leaving(self, col: int) -> Optional[int]:
        best = None
        best_ratio = None
        for i in range(self.m):
            a = self.rows[i][col]
            if a <= 0:
                continue
            ratio = self.b[i] / a
            if (best_ratio is None or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best])):
                best, best_ratio = i, ratio
        return best

    def _pivot(self, r: int, col: int):
        piv = self.rows[r][col]
        self.rows[r] = [x / piv for x in self.rows[r]]
        self.b[r] /= piv
        prow = self.rows[r]
        for i in range(self.m):
            factor = self.rows[i][col]
            if i != r and factor != 0:
                self.rows[i] = [x - factor * y for x, y in zip(self.rows[i], prow)]
                self.b[i] -= factor * self.b[r]
        factor = self.z[col]
        if factor != 0:
            self.z = [x - factor * y for x, y in zip(self.z, prow)]
            self.value += factor * self.b[r]
        self.basis[r] = col
        self.pivots += 1

    def solve(self) -> List[Fraction]:
        while True:
            col = self._entering()
            if col is None:
                break
            r = self._leaving(col)
            if r is None:
                raise ArithmeticError('有界なはずの線形計画が非有界になりました')
            self._pivot(r, col)
        x = [ZERO] * self.width
        for i, var in enumerate(self.basis):
            x[var] = self.b[i]
        return x[:self.n]


def strict_feasibility(positive: Sequence[Sequence[Fraction]],
                       negative: Sequence[Sequence[Fraction]],
                       zero: Sequence[Sequence[Fraction]],
                       dim: Optional[int] = None) -> Optional[RatVector]:
    """
    c·v > 0 (positive), c·v < 0 (negative), c·v = 0 (zero) を満たす c を厳密に探す

    等式は零空間への射影で消去し、残りはスラック t を最大化する線形計画
    (a_k·y ≥ t, t ≤ 1) を Bland 規則の単体法で解く。t* > 0 なら実行可能。

    Args:
        positive: 正側の制約ベクトル
        negative: 負側の制約ベクトル
        zero: 等式の制約ベクトル
        dim: 次元（全リストが空のときに必要）

    Returns:
        条件を満たすベクトル c、存在しなければ None
    """
    found = _shared_dim(list(positive) + list(negative) + list(zero))
    if found is None:
        if dim is None:
            raise InputError('制約が空のときは次元の指定が必要です')
    elif dim is not None and dim != found:
        raise InputError(f'次元が一致しません: {found} != {dim}')
    dim = found if found is not None else dim

    if not positive and not negative:
        return tuple([ZERO] * dim)

    basis = nullspace(zero, ncols=dim) if zero else [
        tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)
    ]
    if not basis:
        return None

    # y 空間での制約 a_k·y > 0
    rows: List[List[Fraction]] = []
    for v in positive:
        rows.append([dot(v, n) for n in basis])
    for v in negative:
        rows.append([-dot(v, n) for n in basis])
    if any(all(x == 0 for x in row) for row in rows):
        return None

    r = len(basis)
    # 変数: y+ (r), y- (r), t
    a_rows = [[-x for x in row] + list(row) + [ONE] for row in rows]
    b = [ZERO] * len(a_rows)
    a_rows.append([ZERO] * (2 * r) + [ONE])
    b.append(ONE)
    c = [ZERO] * (2 * r) + [ONE]

    tableau = _Tableau(a_rows, b, c)
    x = tableau.solve()
    if x[2 * r] <= 0:
        return None

    y = [x[j] - x[r + j] for j in range(r)]
    witness = tuple(sum((y[j] * basis[j][i] for j in range(r)), ZERO) for i in range(dim))
    if not _verify_witness(witness, positive, negative, zero):
        raise ArithmeticError('実行可能解の再検証に失敗しました')
    return witness


def _verify_witness(c: RatVector, positive, negative, zero) -> bool:
    return (all(dot(c, v) > 0 for v in positive)
            and all(dot(c, v) < 0 for v in negative)
            and all(dot(c, v) == 0 for v in zero))
