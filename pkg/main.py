"""
polycut: 多面体の分離超平面を判定・列挙するコマンドラインツール

標準出力には1判定につき JSON 1行を書き、診断はログ（標準エラー）に出す。
終了コード: 0 判定完了 / 1 入力エラー / 2 リソースガード超過
"""

import argparse
import sys
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

import config
from birkhoff import (
    birkhoff_skeleton, format_cycles, lemma31_checks, parse_permutation,
    search_separating, theorem32_certificate, validate_search_n,
)
from cube import (
    SecondCutSpec, canonicalize, coefficient_vector, corollary15_predicate, count_forms,
    cube_model, cut_forms, lemma11_predicate, parse_index_set, recognize_cut,
    second_cut_contained, second_cut_exact, second_cut_predicate, spec_hyperplane, subpolytope_model,
)
from errors import GuardExceededError, InputError, PolycutError, check_guard
from exactmath import format_rational, parse_rational
from logger import get_logger, get_polycut_logger
from models.schemas import CommandResult
from orderchain import (
    BadPair, PosetHyperplane, checkcut, classify, enumerate_poset_cuts,
    parse_hyperplane_text, polytope_model, theorem26_witness,
)
from polymodel import BAD_EDGE, CutReport, Hyperplane, SkeletonModel, enumerate_cuts_oracle, is_separating
from poset import Poset, parse_poset_text
from report import CensusReport


class _Parser(argparse.ArgumentParser):
    """引数エラーを InputError にする（終了コード 1）"""

    def error(self, message):
        raise InputError(f'引数エラー: {message}')


# ---------------------------------------------------------------------------
# 出力の補助
# ---------------------------------------------------------------------------

def _pattern_text(pattern: Sequence[int]) -> str:
    return ''.join({1: '+', -1: '-', 0: '0'}[s] for s in pattern)


def _vertex_text(model: SkeletonModel, i: int) -> str:
    if model.labels is not None:
        return model.labels[i]
    return ','.join(format_rational(x) for x in model.vertices[i])


def _cut_witness(model: SkeletonModel, report: CutReport) -> Optional[Any]:
    if report.separating:
        return None
    if report.witness.kind == BAD_EDGE:
        i, j = report.witness.edge
        return [_vertex_text(model, i), _vertex_text(model, j)]
    return report.witness.kind


def _bad_pair(p: Poset, pair: Optional[BadPair]) -> Optional[Dict[str, List[str]]]:
    if pair is None:
        return None
    return {'I': [e for e in p.elements if e in pair.I], 'J': [e for e in p.elements if e in pair.J]}


def _hyperplane_dict(h) -> Dict[str, Any]:
    if isinstance(h, PosetHyperplane):
        coeffs = {e: format_rational(c) for e, c in zip(h.elements, h.coeffs)}
    else:
        coeffs = [format_rational(c) for c in h.coeffs]
    return {'coeffs': coeffs, 'rhs': format_rational(h.rhs)}


def _verdict(separating: bool) -> str:
    return 'separating' if separating else 'not_separating'


def _plain(value: Any) -> Any:
    """pandas / numpy の値を JSON 化できる Python の値に"""
    if value is None:
        return None
    if pd.isna(value):
        return None
    return value.item() if hasattr(value, 'item') else value


def _read(path: str) -> str:
    try:
        with open(path, encoding='utf-8') as f:
            return f.read()
    except OSError as e:
        raise InputError(f'ファイルを読めません: {path} ({e})') from e


def _load_poset(path: str) -> Poset:
    return parse_poset_text(_read(path))


# ---------------------------------------------------------------------------
# cube
# ---------------------------------------------------------------------------

def cmd_cube_check(args) -> CommandResult:
    coeffs = coefficient_vector(args.coeffs)
    rhs = parse_rational(args.rhs)
    d = len(coeffs)
    check_guard(2 ** d, config.guard_max_vertices(), '立方体の頂点数')
    model = cube_model(d)
    report = is_separating(model, Hyperplane(coeffs, rhs))
    details: Dict[str, Any] = {'d': d, 'rhs': format_rational(rhs)}
    found = recognize_cut(coeffs, rhs)
    details['recognized'] = None if found is None else {
        'I': sorted(found[0]), 'J': sorted(found[1]), 'h': found[2]}
    if rhs == 0:
        details['equal_magnitude_mixed_signs'] = lemma11_predicate(coeffs)
    return CommandResult(command='cube check', verdict=_verdict(report.separating),
                         witness=_cut_witness(model, report), details=details)


def cmd_cube_canonicalize(args) -> CommandResult:
    coeffs = coefficient_vector(args.coeffs)
    form = canonicalize(coeffs, args.rhs)
    minimal = canonicalize(coeffs, args.rhs, minimal=True)
    return CommandResult(command='cube canonicalize', verdict='form',
                         witness={'k': form.k, 'ell': form.ell},
                         details={'d': len(coeffs), 'minimal': {'k': minimal.k, 'ell': minimal.ell}})


def cmd_cube_second(args) -> CommandResult:
    logger = get_logger()
    spec = SecondCutSpec.of(parse_index_set(args.I), parse_index_set(args.J), args.h).validate(args.d)
    exact = second_cut_exact(args.d, args.k, args.l, spec)
    details: Dict[str, Any] = {
        'd': args.d, 'k': args.k, 'ell': args.l,
        'predicate': second_cut_predicate(args.d, args.k, args.l, spec),
        'contained': second_cut_contained(args.d, args.k, args.l, spec),
        'exact': exact,
    }
    if args.k == args.d:
        details['k_equals_d_predicate'] = corollary15_predicate(args.d, args.l, spec)
    if args.verify_oracle:
        oracle = is_separating(subpolytope_model(args.d, args.k, args.l), spec_hyperplane(args.d, spec))
        details['oracle'] = oracle.separating
        if oracle.separating != exact:
            logger.warning(f'⚠ 閉じた式とオラクルが一致しません: {spec}')
    return CommandResult(command='cube second', verdict=_verdict(exact), details=details)


def cmd_cube_enumerate(args) -> CommandResult:
    forms = cut_forms(args.d)
    details: Dict[str, Any] = {'d': args.d, 'count': count_forms(args.d)}
    if args.d <= config.ORACLE_COUNT_MAX_D:
        details['oracle_decompositions'] = len(enumerate_cuts_oracle(cube_model(args.d)))
    return CommandResult(command='cube enumerate', verdict='enumerated',
                         witness=[f'{f.k},{f.ell}' for f in forms], details=details)


# ---------------------------------------------------------------------------
# poset
# ---------------------------------------------------------------------------

def cmd_poset_check(args) -> CommandResult:
    p = _load_poset(args.poset)
    h = parse_hyperplane_text(_read(args.hyperplane), p)
    report = checkcut(p, h, args.target)
    witness = _bad_pair(p, report.bad_pair)
    if witness is None and not report.separating:
        witness = report.witness.kind
    return CommandResult(command='poset check', verdict=_verdict(report.separating), witness=witness,
                         details={'target': args.target, 'vertices': len(report.pattern)})


def cmd_poset_enumerate(args) -> CommandResult:
    p = _load_poset(args.poset)
    patterns = enumerate_poset_cuts(p, args.target)
    model = polytope_model(p, args.target)
    return CommandResult(command='poset enumerate', verdict='enumerated',
                         witness=[_pattern_text(s) for s in patterns],
                         details={'target': args.target, 'count': len(patterns),
                                  'vertices': list(model.labels)})


def cmd_poset_classify(args) -> CommandResult:
    p = _load_poset(args.poset)
    h = parse_hyperplane_text(_read(args.hyperplane), p)
    verdict = classify(p, h, args.family)
    details = {
        'family': verdict.family,
        'satisfied_conditions': sorted(verdict.satisfied_conditions),
        'extension': None if verdict.extension is None else _hyperplane_dict(verdict.extension),
        'property_agrees': verdict.property_agrees,
    }
    return CommandResult(command='poset classify', verdict=_verdict(verdict.separating),
                         witness=_bad_pair(p, verdict.evidence), details=details)


def cmd_poset_witness(args) -> CommandResult:
    p = _load_poset(args.poset)
    for_order, for_chain = theorem26_witness(p)
    return CommandResult(command='poset witness', verdict='found',
                         witness={'order': _hyperplane_dict(for_order), 'chain': _hyperplane_dict(for_chain)})


def cmd_poset_census(args) -> CommandResult:
    census = CensusReport(args.family, args.max_size)
    df = census.build()
    if args.table:
        print(CensusReport.render(df), file=sys.stderr)
    rows = [{k: _plain(v) for k, v in row.items()} for row in df.to_dict('records')]
    return CommandResult(command='poset census', verdict='enumerated',
                         details={'family': args.family, 'max_size': args.max_size, 'rows': rows})


# ---------------------------------------------------------------------------
# birkhoff
# ---------------------------------------------------------------------------

def cmd_birkhoff_verify(args) -> CommandResult:
    validate_search_n(args.n)
    found = search_separating(args.n)
    model = birkhoff_skeleton(args.n)
    count = len(model.vertices)
    complete = len(model.edges) == count * (count - 1) // 2
    details: Dict[str, Any] = {'n': args.n, 'vertices': count, 'edges': len(model.edges)}
    if complete:
        details['detail'] = 'skeleton complete'
    return CommandResult(command='birkhoff verify', verdict='none' if found is None else 'found',
                         witness=None if found is None else _hyperplane_dict(found), details=details)


def cmd_birkhoff_certificate(args) -> CommandResult:
    v = parse_permutation(args.perm, args.n)
    report = theorem32_certificate(v)
    return CommandResult(
        command='birkhoff certificate',
        verdict='pass' if report.passed else 'fail',
        witness={name: format_cycles(w) for name, w in report.permutations.items()},
        details={'v': format_cycles(v), 'checks': report.checks, 'relabeling': report.relabeling},
    )


def cmd_birkhoff_identities(args) -> CommandResult:
    checks = lemma31_checks()
    return CommandResult(command='birkhoff identities',
                         verdict='pass' if all(checks.values()) else 'fail', details={'checks': checks})


# ---------------------------------------------------------------------------
# 引数
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='polycut', description='多面体の分離超平面の判定・列挙')
    parser.add_argument('--log-level', default=None,
                        help='コンソールのログレベル（DEBUG / INFO / WARNING / ERROR）')
    groups = parser.add_subparsers(dest='group', required=True)

    cube = groups.add_parser('cube', help='単位立方体').add_subparsers(dest='action', required=True)
    p = cube.add_parser('check')
    p.add_argument('--coeffs', required=True)
    p.add_argument('--rhs', default='0')
    p.set_defaults(handler=cmd_cube_check)
    p = cube.add_parser('canonicalize')
    p.add_argument('--coeffs', required=True)
    p.add_argument('--rhs', default='0')
    p.set_defaults(handler=cmd_cube_canonicalize)
    p = cube.add_parser('second')
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--l', type=int, required=True)
    p.add_argument('--I', required=True)
    p.add_argument('--J', required=True)
    p.add_argument('--h', type=int, required=True)
    p.add_argument('--verify-oracle', action='store_true')
    p.set_defaults(handler=cmd_cube_second)
    p = cube.add_parser('enumerate')
    p.add_argument('--d', type=int, required=True)
    p.set_defaults(handler=cmd_cube_enumerate)

    poset = groups.add_parser('poset', help='順序多面体・鎖多面体').add_subparsers(dest='action', required=True)
    p = poset.add_parser('check')
    p.add_argument('--poset', required=True)
    p.add_argument('--hyperplane', required=True)
    p.add_argument('--target', choices=['order', 'chain'], required=True)
    p.set_defaults(handler=cmd_poset_check)
    p = poset.add_parser('enumerate')
    p.add_argument('--poset', required=True)
    p.add_argument('--target', choices=['order', 'chain'], required=True)
    p.set_defaults(handler=cmd_poset_enumerate)
    p = poset.add_parser('classify')
    p.add_argument('--poset', required=True)
    p.add_argument('--hyperplane', required=True)
    p.add_argument('--family', choices=['chains', 'tree', 'zigzag'], required=True)
    p.set_defaults(handler=cmd_poset_classify)
    p = poset.add_parser('witness')
    p.add_argument('--poset', required=True)
    p.set_defaults(handler=cmd_poset_witness)
    p = poset.add_parser('census')
    p.add_argument('--family', choices=['chains', 'zigzag'], required=True)
    p.add_argument('--max-size', type=int, default=config.CENSUS_DEFAULT_MAX_SIZE)
    p.add_argument('--table', action='store_true', help='集計表を標準エラーにも表示')
    p.set_defaults(handler=cmd_poset_census)

    birkhoff = groups.add_parser('birkhoff', help='Birkhoff 多面体').add_subparsers(dest='action', required=True)
    p = birkhoff.add_parser('verify')
    p.add_argument('--n', type=int, required=True)
    p.set_defaults(handler=cmd_birkhoff_verify)
    p = birkhoff.add_parser('certificate')
    p.add_argument('--perm', required=True)
    p.add_argument('--n', type=int, default=None)
    p.set_defaults(handler=cmd_birkhoff_certificate)
    p = birkhoff.add_parser('identities')
    p.set_defaults(handler=cmd_birkhoff_identities)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    CLI を実行

    Args:
        argv: 引数列（None なら sys.argv[1:]）

    Returns:
        終了コード
    """
    polycut_logger = get_polycut_logger()
    logger = get_logger()
    try:
        args = build_parser().parse_args(argv)
        if args.log_level:
            polycut_logger.set_console_level(args.log_level)
        result = args.handler(args)
    except GuardExceededError as e:
        logger.error(f'リソースガード: {e}')
        return e.exit_code
    except PolycutError as e:
        logger.error(f'{type(e).__name__}: {e}')
        return e.exit_code

    print(result.to_line())
    polycut_logger.log_verdict(result.ledger_record())
    logger.info(f'✓ {result.command}: {result.verdict}')
    return 0


def main() -> int:
    return run(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
