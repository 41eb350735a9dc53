"""
コマンドラインのテスト（run() を直接呼び出し、標準出力の JSON 1行を検証）

使用方法:
    pytest tests/test_cli.py -v
"""

import json
import os
import sys

import pytest

# プロジェクトルートをパスに追加
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import main
from main import run

V_POSET = 'poset v1\nelements a b c\ncover c a\ncover c b\n'
CHAIN3 = 'poset v1\nelements x y z\ncover x y\ncover y z\n'
V_HYPERPLANE = 'hyperplane v1\ncoeff a -1\ncoeff b -1\ncoeff c 1\nrhs 0\n'


@pytest.fixture
def invoke(capsys):
    """run() を呼び、(終了コード, 出力 JSON) を返す"""
    def _invoke(*argv):
        code = run(list(argv))
        out = capsys.readouterr().out.strip()
        return code, (json.loads(out.splitlines()[-1]) if out else None)
    return _invoke


@pytest.fixture
def files(tmp_path):
    """V 字型・3鎖・超平面のファイル"""
    paths = {}
    for name, text in [('v.poset', V_POSET), ('chain.poset', CHAIN3), ('v.hyp', V_HYPERPLANE)]:
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        paths[name] = str(path)
    return paths


class TestCube:
    """cube サブコマンド"""

    def test_check_separating(self, invoke):
        """x1 − x2 = 0 は分離的"""
        code, result = invoke('cube', 'check', '--coeffs', '1,-1,0', '--rhs', '0')
        assert code == 0
        assert result['command'] == 'cube check'
        assert result['verdict'] == 'separating'
        assert result['witness'] is None
        assert result['details']['equal_magnitude_mixed_signs'] is True
        assert result['details']['recognized'] == {'I': [1], 'J': [2], 'h': 0}

    def test_check_not_separating(self, invoke):
        """x1 + x2 = 0 は負の頂点を持たない"""
        code, result = invoke('cube', 'check', '--coeffs', '1,1')
        assert code == 0
        assert result['verdict'] == 'not_separating'
        assert result['witness'] == 'no_negative_vertex'

    def test_check_bad_edge(self, invoke):
        """x1 = 1/2 は辺を横切る"""
        code, result = invoke('cube', 'check', '--coeffs', '1,0', '--rhs', '1/2')
        assert code == 0
        assert result['verdict'] == 'not_separating'
        assert isinstance(result['witness'], list) and len(result['witness']) == 2

    def test_canonicalize(self, invoke):
        """x1 − x2 − x3 = 0 は k = 3, ℓ = 2"""
        code, result = invoke('cube', 'canonicalize', '--coeffs', '1,-1,-1,0')
        assert code == 0
        assert result['witness'] == {'k': 3, 'ell': 2}
        assert result['details']['minimal'] == {'k': 3, 'ell': 1}

    def test_second_cut(self, invoke):
        """含有条件は偽だが、閉じた式とオラクルは分離的"""
        code, result = invoke('cube', 'second', '--d', '3', '--k', '2', '--l', '1',
                              '--I', '3', '--J', '1', '--h', '0', '--verify-oracle')
        assert code == 0
        assert result['verdict'] == 'separating'
        assert result['details']['predicate'] is False
        assert result['details']['contained'] is False
        assert result['details']['exact'] is True
        assert result['details']['oracle'] is True

    def test_enumerate(self, invoke):
        """d = 3 は 3 形、オラクル分解 14"""
        code, result = invoke('cube', 'enumerate', '--d', '3')
        assert code == 0
        assert result['details']['count'] == 3
        assert result['details']['oracle_decompositions'] == 14
        assert result['witness'] == ['2,1', '3,1', '3,2']


class TestPoset:
    """poset サブコマンド"""

    def test_check_order(self, invoke, files):
        """V 字型の順序多面体は分離的"""
        code, result = invoke('poset', 'check', '--poset', files['v.poset'],
                              '--hyperplane', files['v.hyp'], '--target', 'order')
        assert code == 0
        assert result['verdict'] == 'separating'
        assert result['details']['vertices'] == 5

    def test_check_chain_bad_pair(self, invoke, files):
        """鎖多面体では {a}, {c} が悪い対"""
        code, result = invoke('poset', 'check', '--poset', files['v.poset'],
                              '--hyperplane', files['v.hyp'], '--target', 'chain')
        assert code == 0
        assert result['verdict'] == 'not_separating'
        assert result['witness'] == {'I': ['a'], 'J': ['c']}

    def test_classify(self, invoke, files):
        """ジグザグとして分類"""
        code, result = invoke('poset', 'classify', '--poset', files['v.poset'],
                              '--hyperplane', files['v.hyp'], '--family', 'zigzag')
        assert code == 0
        assert result['verdict'] == 'separating'
        assert result['details']['family'] == 'zigzag'

    def test_enumerate(self, invoke, files):
        """頂点ラベルと分解パターン"""
        code, result = invoke('poset', 'enumerate', '--poset', files['v.poset'], '--target', 'order')
        assert code == 0
        assert result['details']['vertices'][0] == '{}'
        assert result['details']['count'] == len(result['witness'])

    def test_witness(self, invoke, files):
        """V 字型では x_a − x_b = 0 と Σx = 1"""
        code, result = invoke('poset', 'witness', '--poset', files['v.poset'])
        assert code == 0
        assert result['verdict'] == 'found'
        assert result['witness']['order']['coeffs'] == {'a': '1', 'b': '-1', 'c': '0'}
        assert result['witness']['chain']['rhs'] == '1'

    def test_witness_on_chain_fails(self, invoke, files):
        """鎖では終了コード 1"""
        code, result = invoke('poset', 'witness', '--poset', files['chain.poset'])
        assert code == 1
        assert result is None

    def test_census(self, invoke):
        """互いに素な鎖の集計は JSON の行に"""
        code, result = invoke('poset', 'census', '--family', 'chains', '--max-size', '3')
        assert code == 0
        rows = result['details']['rows']
        assert len(rows) == 6
        assert all(r['separating_extensions'] == r['predicted'] for r in rows)
        assert rows[0]['oracle_decompositions'] is None


class TestBirkhoff:
    """birkhoff サブコマンド"""

    def test_verify_b3(self, invoke):
        """B_3 は分離超平面なし、スケルトンは完全グラフ"""
        code, result = invoke('birkhoff', 'verify', '--n', '3')
        assert code == 0
        assert result['verdict'] == 'none'
        assert result['details']['detail'] == 'skeleton complete'

    @pytest.mark.parametrize('n', ['5', '7'])
    def test_verify_out_of_range_is_input_error(self, invoke, monkeypatch, n):
        """網羅探索の対象外の n はスケルトンを作らずに終了コード 1"""
        def fail_if_built(n):
            raise AssertionError(f'B_{n} のスケルトンを構築しました')

        monkeypatch.setattr(main, 'birkhoff_skeleton', fail_if_built)
        code, _ = invoke('birkhoff', 'verify', '--n', n)
        assert code == 1

    def test_certificate(self, invoke):
        """(123)(456) の証明書は成立"""
        code, result = invoke('birkhoff', 'certificate', '--perm', '(123)(456)')
        assert code == 0
        assert result['verdict'] == 'pass'
        assert set(result['details']['checks']) == {'a', 'b', 'c', 'd', 'e'}

    def test_certificate_unsupported(self, invoke):
        """互換だけの置換は終了コード 1"""
        code, _ = invoke('birkhoff', 'certificate', '--perm', '(12)(34)')
        assert code == 1

    def test_identities(self, invoke):
        """二つの恒等式"""
        code, result = invoke('birkhoff', 'identities')
        assert code == 0
        assert result['verdict'] == 'pass'


class TestErrors:
    """終了コード"""

    def test_unknown_flag(self, invoke):
        """未知のフラグは 1"""
        code, result = invoke('cube', 'check', '--coeffs', '1,-1', '--bogus')
        assert code == 1
        assert result is None

    def test_missing_file(self, invoke, tmp_path, files):
        """存在しないファイルは 1"""
        code, _ = invoke('poset', 'check', '--poset', str(tmp_path / 'none.poset'),
                         '--hyperplane', files['v.hyp'], '--target', 'order')
        assert code == 1

    def test_malformed_coefficients(self, invoke):
        """解釈できない係数は 1"""
        code, _ = invoke('cube', 'check', '--coeffs', '1,x')
        assert code == 1

    def test_guard(self, invoke, monkeypatch):
        """ガード超過は 2"""
        monkeypatch.setenv('POLYCUT_GUARD_MAX_VERTICES', '4')
        code, result = invoke('cube', 'check', '--coeffs', '1,-1,0')
        assert code == 2
        assert result is None

    def test_log_level_flag(self, invoke):
        """--log-level はサブコマンドの前に置く"""
        code, result = invoke('--log-level', 'ERROR', 'birkhoff', 'identities')
        assert code == 0
        assert result['verdict'] == 'pass'
