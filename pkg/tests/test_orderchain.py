"""
順序多面体・鎖多面体モジュールのユニットテスト

使用方法:
    pytest tests/test_orderchain.py -v
    pytest tests/test_orderchain.py -v -m slow
"""

import os
import sys
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# プロジェクトルートをパスに追加
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cube import cube_model
from errors import InputError, NoWitnessError
from orderchain import (
    BINARY_TREE, CHAIN, DISJOINT_CHAINS, EQUAL_ABS, MIN_SIGNS, ORDER, UNIQUE_EXTENSION, BadPair,
    PosetHyperplane, chain_polytope_model, checkcut, classify, enumerate_poset_cuts, extend_from_minimal,
    extend_zigzag, facets_chain, facets_order, find_bad_pairs, format_hyperplane_text,
    is_bad_pair, local_rules_extend, order_polytope_model, parse_hyperplane_text,
    polytope_model, theorem26_witness,
)
from polymodel import NO_POSITIVE_VERTEX, Hyperplane, is_separating, normalize_pattern, skeleton_from_oracle
from poset import (
    all_labeled_posets, binary_tree, disjoint_chains, sample_labeled_posets, v_poset, zigzag,
)

POSETS_UP_TO_3 = [p for n in range(1, 4) for p in all_labeled_posets(n)]
POSETS_4 = all_labeled_posets(4)

SEVEN_NODE_TREE = ('d', ('c', 'a', 'b'), ('e', 'f', 'g'))
DOUBLE_TREE = ('o',
               ('g', ('p', 'a', 'b'), ('q', 'c', 'd')),
               ('r', ('r1', 'e', 'f'), ('r2', 'y', 'z')))


def _edge_set(model):
    return {frozenset((model.vertices[i], model.vertices[j])) for i, j in model.edges}


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    return [(k,) + rest for k in range(min(n, largest), 0, -1) for rest in _partitions(n - k, k)]


def _chain_posets(max_size):
    return [disjoint_chains(lengths) for n in range(1, max_size + 1) for lengths in _partitions(n)]


def _zigzags(max_size):
    return [zigzag(n, d) for n in range(1, max_size + 1) for d in ('down', 'up')]


def _ternary(p):
    for coeffs in product((-1, 0, 1), repeat=len(p)):
        if any(coeffs):
            yield PosetHyperplane.of(p, coeffs, 0)


def _check_edges_against_oracle(p):
    for model in (order_polytope_model(p), chain_polytope_model(p)):
        assert skeleton_from_oracle(model.vertices).edges == model.edges


def _check_cut_equivalence(p, rhs_values=(-1, 0, 1)):
    for coeffs in product((-1, 0, 1), repeat=len(p)):
        if not any(coeffs):
            continue
        for rhs in rhs_values:
            h = PosetHyperplane.of(p, coeffs, rhs)
            for target in (ORDER, CHAIN):
                expected = is_separating(polytope_model(p, target), h.to_hyperplane()).separating
                assert checkcut(p, h, target).separating == expected, (p, coeffs, rhs, target)


def _check_pair_and_sum_cuts(p):
    n = len(p)
    for i in range(n):
        for j in range(i + 1, n):
            row = [0] * n
            row[i], row[j] = 1, -1
            h = PosetHyperplane.of(p, row, 0)
            assert checkcut(p, h, ORDER).separating == (not p.comparable_pair(i, j))
    h = PosetHyperplane.of(p, [1] * n, 1)
    assert checkcut(p, h, CHAIN).separating == (not p.is_chain())


def _check_chain_classifier(p):
    for h in _ternary(p):
        assert classify(p, h, 'chains').separating == checkcut(p, h, ORDER).separating, (p, h.coeffs)


def _check_zigzag_property(p):
    for h in _ternary(p):
        if any(h.coeffs[i] == 0 for i in p.minimal):
            continue
        verdict = classify(p, h, 'zigzag')
        if MIN_SIGNS in verdict.satisfied_conditions:
            assert verdict.property_agrees is True, (p, h.coeffs)


class TestModels:
    """スケルトンの構成"""

    def test_antichain_order_polytope_is_square(self):
        """2反鎖の順序多面体は正方形"""
        model = order_polytope_model(disjoint_chains([1, 1]))
        assert len(model.vertices) == 4
        assert _edge_set(model) == _edge_set(cube_model(2))

    def test_antichain_order_polytope_is_cube(self):
        """3反鎖の順序多面体は立方体"""
        assert _edge_set(order_polytope_model(disjoint_chains([1, 1, 1]))) == _edge_set(cube_model(3))

    def test_chain_gives_triangles(self):
        """2鎖は順序・鎖多面体とも三角形"""
        p = disjoint_chains([2])
        for model in (order_polytope_model(p), chain_polytope_model(p)):
            assert len(model.vertices) == 3
            assert len(model.edges) == 3

    def test_v_poset_vertices(self):
        """V 字型の鎖多面体は5頂点"""
        model = chain_polytope_model(v_poset())
        assert len(model.vertices) == 5
        assert model.labels == ('{}', '{a}', '{b}', '{a,b}', '{c}')

    def test_vertex_counts_agree(self):
        """イデアル数 = 反鎖数"""
        for p in POSETS_4:
            assert len(order_polytope_model(p).vertices) == len(chain_polytope_model(p).vertices)

    def test_edges_match_oracle_small(self):
        """3要素以下の全半順序で、辺の特徴付けが LP オラクルと一致"""
        for p in POSETS_UP_TO_3:
            _check_edges_against_oracle(p)

    @pytest.mark.slow
    def test_edges_match_oracle(self):
        """4要素の全半順序と5要素の抽出200個で一致"""
        for p in POSETS_4 + sample_labeled_posets(5, 200, seed=0):
            _check_edges_against_oracle(p)

    def test_target_must_be_named(self):
        """target は order / chain"""
        with pytest.raises(InputError):
            polytope_model(v_poset(), 'cube')


class TestFacets:
    """面の一覧"""

    def test_chain2_order(self):
        """極大元 x = 0、極小元 x = 1、被覆 x_i = x_j"""
        assert facets_order(disjoint_chains([2])) == [
            Hyperplane.of([0, 1], 0), Hyperplane.of([1, 0], 1), Hyperplane.of([1, -1], 0),
        ]

    def test_chain2_chain(self):
        """非負性と鎖の和"""
        assert facets_chain(disjoint_chains([2])) == [
            Hyperplane.of([1, 0], 0), Hyperplane.of([0, 1], 0), Hyperplane.of([1, 1], 1),
        ]

    def test_antichain3_chain(self):
        """3反鎖の鎖多面体は6面"""
        assert len(facets_chain(disjoint_chains([1, 1, 1]))) == 6


class TestCheckcut:
    """悪い対による判定"""

    def test_incomparable_pair(self):
        """2反鎖で x_a − x_b = 0 は分離的"""
        p = disjoint_chains([1, 1])
        assert checkcut(p, PosetHyperplane.of(p, [1, -1], 0), ORDER).separating

    def test_chain_sum_is_facet(self):
        """鎖では Σx = 1 は面（正の頂点なし）"""
        p = disjoint_chains([2])
        report = checkcut(p, PosetHyperplane.of(p, [1, 1], 1), CHAIN)
        assert not report.separating
        assert report.witness.kind == NO_POSITIVE_VERTEX
        assert report.bad_pair is None

    def test_v_poset_order_but_not_chain(self):
        """−x_a − x_b + x_c は順序多面体を分離し、鎖多面体では {a}, {c} が悪い対"""
        p = v_poset()
        h = PosetHyperplane.of(p, {'a': -1, 'b': -1, 'c': 1})
        assert checkcut(p, h, ORDER).separating
        report = checkcut(p, h, CHAIN)
        assert not report.separating
        assert report.bad_pair == BadPair(frozenset({'a'}), frozenset({'c'}))

    def test_elements_must_match(self):
        """別の半順序の超平面は不可"""
        h = PosetHyperplane.of(disjoint_chains([1, 1]), [1, -1])
        with pytest.raises(InputError):
            checkcut(v_poset(), h, ORDER)

    def test_matches_geometry_small(self):
        """3要素以下の全半順序・全 {−1,0,1} 超平面で is_separating と一致"""
        for p in POSETS_UP_TO_3:
            _check_cut_equivalence(p)

    @settings(derandomize=True, max_examples=150, deadline=None)
    @given(p=st.sampled_from(POSETS_4),
           coeffs=st.lists(st.integers(-1, 1), min_size=4, max_size=4).filter(any),
           rhs=st.integers(-1, 1))
    def test_matches_geometry_n4(self, p, coeffs, rhs):
        """4要素の半順序でも一致し、符号反転で判定は変わらない"""
        h = PosetHyperplane.of(p, coeffs, rhs)
        negated = PosetHyperplane.of(p, [-c for c in coeffs], -rhs)
        for target in (ORDER, CHAIN):
            verdict = checkcut(p, h, target).separating
            assert verdict == is_separating(polytope_model(p, target), h.to_hyperplane()).separating
            assert checkcut(p, negated, target).separating == verdict

    @pytest.mark.slow
    def test_matches_geometry_exhaustive(self):
        """4要素の全半順序と5要素の抽出で一致"""
        for p in POSETS_4 + sample_labeled_posets(5, 50, seed=0):
            _check_cut_equivalence(p)

    def test_incomparable_pairs_characterized(self):
        """x_i − x_j = 0 が O(P) を分離 ⟺ x_i, x_j が比較不能"""
        for p in POSETS_UP_TO_3 + POSETS_4:
            _check_pair_and_sum_cuts(p)

    @pytest.mark.slow
    def test_pair_and_sum_cuts_n5(self):
        """5要素の抽出200個で同様"""
        for p in sample_labeled_posets(5, 200, seed=0):
            _check_pair_and_sum_cuts(p)

    def test_sum_cut_characterized(self):
        """Σx = 1 が C(P) を分離 ⟺ P は鎖でない"""
        for p in POSETS_UP_TO_3 + POSETS_4:
            h = PosetHyperplane.of(p, [1] * len(p), 1)
            assert checkcut(p, h, CHAIN).separating == (not p.is_chain())


class TestWitness:
    """鎖でない半順序の分離超平面"""

    def test_antichain(self):
        """x_a − x_b = 0 と Σx = 1"""
        p = disjoint_chains([1, 1])
        for_order, for_chain = theorem26_witness(p)
        assert for_order.coeffs == (1, -1)
        assert for_chain.coeffs == (1, 1) and for_chain.rhs == 1

    def test_v_poset(self):
        """最初の比較不能対は (a, b)"""
        for_order, _ = theorem26_witness(v_poset())
        assert for_order.coeffs == (1, -1, 0)

    def test_chain_has_no_witness(self):
        """鎖では NoWitnessError"""
        with pytest.raises(NoWitnessError):
            theorem26_witness(disjoint_chains([3]))

    @staticmethod
    def _check(posets):
        for p in posets:
            if p.is_chain():
                with pytest.raises(NoWitnessError):
                    theorem26_witness(p)
            else:
                for_order, for_chain = theorem26_witness(p)
                assert checkcut(p, for_order, ORDER).separating
                assert checkcut(p, for_chain, CHAIN).separating

    def test_all_small_posets(self):
        """4要素以下の全半順序で、鎖だけがエラー"""
        self._check(POSETS_UP_TO_3 + POSETS_4)

    @pytest.mark.slow
    def test_sampled_n5(self):
        """5要素の抽出200個で同様"""
        self._check(sample_labeled_posets(5, 200, seed=0))


class TestExtensions:
    """極小元の符号からの拡張"""

    def test_two_singletons(self):
        """(+, −) → x_a − x_b"""
        p = disjoint_chains([1, 1])
        assert extend_from_minimal(p, DISJOINT_CHAINS, {'a1': 1, 'b1': -1}).coeffs == (1, -1)

    def test_alternation(self):
        """鎖に沿って符号が交互"""
        p = disjoint_chains([2, 1])
        assert extend_from_minimal(p, DISJOINT_CHAINS, [1, -1]).coeffs == (1, -1, -1)

    def test_family_mismatch(self):
        """互いに素な鎖でなければ InputError"""
        with pytest.raises(InputError):
            extend_from_minimal(v_poset(), DISJOINT_CHAINS, [1])

    def test_family_argument(self):
        """族は (p, family, signs) の二番目で、別名も受け付ける"""
        p = disjoint_chains([1, 1])
        assert extend_from_minimal(p, 'chains', [1, -1]).coeffs == (1, -1)
        with pytest.raises(InputError):
            extend_from_minimal(p, BINARY_TREE, [1, -1])
        with pytest.raises(InputError):
            extend_from_minimal(p, 'lattice', [1, -1])

    def test_signs_must_cover_minimals(self):
        """極小元すべてに ±1 が必要"""
        p = disjoint_chains([1, 1])
        with pytest.raises(InputError):
            extend_from_minimal(p, DISJOINT_CHAINS, {'a1': 1})
        with pytest.raises(InputError):
            extend_from_minimal(p, DISJOINT_CHAINS, [1, 0])

    @pytest.mark.parametrize('signs,root', [((1, 1), -1), ((1, -1), 0), ((-1, -1), 1)])
    def test_local_rules(self, signs, root):
        """3節点の木: (+,+)→−, (+,−)→0, (−,−)→+"""
        p = binary_tree(('r', 'a', 'b'))
        assert local_rules_extend(p, BINARY_TREE, signs).coefficient('r') == root

    def test_double_tree(self):
        """15節点の木: 左の葉が +、右の葉が −"""
        p = binary_tree(DOUBLE_TREE)
        signs = {leaf: (1 if leaf in 'abcd' else -1) for leaf in 'abcdefyz'}
        h = local_rules_extend(p, BINARY_TREE, signs)
        expected = {
            'a': 1, 'b': 1, 'c': 1, 'd': 1, 'p': -1, 'q': -1, 'g': -1,
            'e': -1, 'f': -1, 'y': -1, 'z': -1, 'r1': 1, 'r2': 1, 'r': 1, 'o': 0,
        }
        assert {e: h.coefficient(e) for e in p.elements} == expected

    def test_extend_zigzag(self):
        """下被覆 (+,+) → −、一つなら符号反転"""
        p = zigzag(4, 'down')   # x1 < x2 > x3 < x4
        h = extend_zigzag(p, [1, 1])
        assert h.coeffs == (1, -1, 1, -1)


class TestClassify:
    """族ごとの分類器"""

    def test_chains_extended(self):
        """(+,−) の拡張は三条件を満たし分離的"""
        p = disjoint_chains([2, 1])
        h = extend_from_minimal(p, DISJOINT_CHAINS, [1, -1])
        verdict = classify(p, h, 'chains')
        assert verdict.separating
        assert verdict.satisfied_conditions == {MIN_SIGNS, EQUAL_ABS, UNIQUE_EXTENSION}
        assert verdict.evidence is None

    def test_chains_same_signs_rejected(self):
        """符号がすべて + なら分離的でない"""
        p = disjoint_chains([2, 1])
        h = extend_from_minimal(p, DISJOINT_CHAINS, [1, 1])
        verdict = classify(p, h, 'chains')
        assert not verdict.separating
        assert MIN_SIGNS not in verdict.satisfied_conditions

    def test_chains_biconditional_small(self):
        """5要素以下の互いに素な鎖で 分類器 ⟺ checkcut"""
        for p in _chain_posets(5):
            _check_chain_classifier(p)

    @pytest.mark.slow
    def test_chains_biconditional(self):
        """7要素以下で同様"""
        for p in _chain_posets(7):
            _check_chain_classifier(p)

    def test_seven_node_tree_has_bad_pair(self):
        """7節点の木の係数 (1,1,−2,0,2,−1,−1) には悪い対 {a,b,f} / {a,b,c,f} がある"""
        p = binary_tree(SEVEN_NODE_TREE)
        h = PosetHyperplane.of(p, {'a': 1, 'b': 1, 'c': -2, 'd': 0, 'e': 2, 'f': -1, 'g': -1})
        assert is_bad_pair(p, h, {'a', 'b', 'f'}, {'a', 'b', 'c', 'f'})
        verdict = classify(p, h, 'tree')
        assert not verdict.separating
        assert EQUAL_ABS not in verdict.satisfied_conditions
        assert is_bad_pair(p, h, verdict.evidence.I, verdict.evidence.J)

    def test_double_tree_conditions_not_sufficient(self):
        """15節点の木は三条件を満たすが悪い対を持つ"""
        p = binary_tree(DOUBLE_TREE)
        signs = {leaf: (1 if leaf in 'abcd' else -1) for leaf in 'abcdefyz'}
        h = local_rules_extend(p, BINARY_TREE, signs)
        verdict = classify(p, h, 'tree')
        assert verdict.satisfied_conditions == {MIN_SIGNS, EQUAL_ABS, UNIQUE_EXTENSION}
        assert not verdict.separating
        assert is_bad_pair(p, h, verdict.evidence.I, verdict.evidence.J)

        small = frozenset('abcdef')
        large = frozenset(['a', 'b', 'c', 'd', 'p', 'q', 'g', 'e', 'f'])
        assert is_bad_pair(p, h, small, large)
        assert BadPair(small, large) in find_bad_pairs(p, h, ORDER)

    def test_v_poset_zigzag(self):
        """V 字型で (−1,−1,1) は分離的だが符号条件は満たさない"""
        p = v_poset()
        h = PosetHyperplane.of(p, [-1, -1, 1])
        verdict = classify(p, h, 'zigzag')
        assert verdict.separating
        assert MIN_SIGNS not in verdict.satisfied_conditions
        assert verdict.property_agrees is None

    def test_zigzag_property_small(self):
        """5要素以下のジグザグで、符号条件の下 (2)∧(3) ⟺ 分離的"""
        for p in _zigzags(5):
            _check_zigzag_property(p)

    @pytest.mark.slow
    def test_zigzag_property(self):
        """7要素以下で同様"""
        for p in _zigzags(7):
            _check_zigzag_property(p)

    def test_family_mismatch(self):
        """族に属さなければ InputError"""
        with pytest.raises(InputError):
            classify(v_poset(), PosetHyperplane.of(v_poset(), [1, -1, 0]), 'tree')
        with pytest.raises(InputError):
            classify(v_poset(), PosetHyperplane.of(v_poset(), [1, -1, 0]), 'lattice')

    def test_affine_rejected(self):
        """分類器は rhs = 0 のみ"""
        p = disjoint_chains([1, 1])
        with pytest.raises(InputError):
            classify(p, PosetHyperplane.of(p, [1, 1], 1), 'chains')


class TestEnumeration:
    """オラクルによる分解の列挙"""

    def test_square(self):
        """2反鎖は対角線の2通り"""
        assert len(enumerate_poset_cuts(disjoint_chains([1, 1]), ORDER)) == 2

    def test_chain_has_none(self):
        """3鎖には分解がない"""
        assert enumerate_poset_cuts(disjoint_chains([3]), ORDER) == []

    def test_cube_diagonals(self):
        """3反鎖では x_a = x_b の分解が現れる"""
        p = disjoint_chains([1, 1, 1])
        patterns = set(enumerate_poset_cuts(p, ORDER))
        assert len(patterns) == 14
        h = PosetHyperplane.of(p, [1, -1, 0])
        assert normalize_pattern(checkcut(p, h, ORDER).pattern) in patterns


class TestHyperplaneText:
    """hyperplane v1 テキスト形式"""

    def test_parse(self):
        """省略した係数は0"""
        text = 'hyperplane v1\ncoeff a -1\ncoeff c 1/2\nrhs 0\n'
        h = parse_hyperplane_text(text, v_poset())
        assert h.coefficient('a') == -1
        assert h.coefficient('b') == 0
        assert str(h.coefficient('c')) == '1/2'

    def test_format_then_parse(self):
        """書き出したテキストを読み直すと同じ超平面"""
        p = v_poset()
        h = PosetHyperplane.of(p, [-1, -1, 1], 0)
        assert parse_hyperplane_text(format_hyperplane_text(h), p) == h

    @pytest.mark.parametrize('text', [
        'plane v1\nrhs 0\n',
        'hyperplane v1\ncoeff a 1\n',
        'hyperplane v1\ncoeff z 1\nrhs 0\n',
        'hyperplane v1\ncoeff a 1\ncoeff a 2\nrhs 0\n',
        'hyperplane v1\ncoeff a x\nrhs 0\n',
        'hyperplane v1\ncoeff a 0\nrhs 1\n',
    ])
    def test_malformed(self, text):
        """形式違反・未知のラベル・重複・零超平面は InputError"""
        with pytest.raises(InputError):
            parse_hyperplane_text(text, v_poset())
