#!/usr/bin/env python3
"""
sym3 - 对称立方提升的导子、局部类型与方差数

    sym3 conductor --input f.json [--format json|table]
    sym3 classify --input f.json --prime p
    sym3 epsilon --input f.json --prime p        （或 --char c.json [--scale 1/p]）
    sym3 char --op cube-conductor --char c.json
    sym3 verify --suite NAME [--max-p P] [--max-level T] [--seed S]

退出码：0 成功，1 算术/输入错误，2 用法错误，3 验证失败
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional

sys.path.extend([
    os.path.join(os.path.dirname(__file__), 'core'),
    os.path.join(os.path.dirname(__file__), 'config'),
    os.path.join(os.path.dirname(__file__), 'utils')
])

from config.arith_config import ARITH_CONFIG
from config.suite_profiles import SUITE_PROFILES
from core.conductor_calculus import power_prediction
from core.epsilon import EpsilonInput, epsilon_factor, local_tau
from core.errors import ArithmeticDomainError, DescriptorError
from core.global_report import build_report, global_sym3_conductor, global_twist_relation, partition_primes
from core.group_characters import AdditiveCharacter
from core.report_generator import ReportGenerator, local_record_lines, verification_text
from core.verifier import SuiteVerifier
from core.wd_sym3 import analyze_local, local_sym3_conductor
from utils.helpers import (format_violations, load_json, parse_character, parse_descriptor, parse_fraction,
                           status, to_json_text)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3

CHAR_OPS = {'conductor': None, 'cube-conductor': 3, 'square-conductor': 2}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=['json', 'table'], default=None, help='输出格式')
    common.add_argument('--verbose', action='store_true', help='显示 INFO 级日志')

    parser = argparse.ArgumentParser(prog='sym3', description='对称立方提升的导子、局部类型与方差数')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('conductor', parents=[common], help='全局 sym³ 导子')
    p.add_argument('--input', required=True, help='新形式描述 JSON')
    p.add_argument('--full', action='store_true', help='附带每个素数的分类、方差数与扭转关系')
    p.add_argument('--save', action='store_true', help='把文本报告保存到 outputs/')

    p = sub.add_parser('classify', parents=[common], help='某个素数处的局部类型')
    p.add_argument('--input', required=True)
    p.add_argument('--prime', type=int, required=True)
    p.add_argument('--convention', choices=['definitional', 'lemma'], default=None)

    p = sub.add_parser('epsilon', parents=[common], help='方差数或单个特征标的 ε 因子')
    p.add_argument('--input', help='新形式描述 JSON（与 --prime 一起使用）')
    p.add_argument('--prime', type=int)
    p.add_argument('--char', help='特征标字面量 JSON 文件')
    p.add_argument('--scale', default=None, help='加法特征标的 scale，缺省为 p^{-1}')
    p.add_argument('--convention', choices=['definitional', 'lemma'], default=None)

    p = sub.add_parser('char', parents=[common], help='特征标运算')
    p.add_argument('--op', choices=sorted(CHAR_OPS), required=True)
    p.add_argument('--char', required=True, help='特征标字面量 JSON 文件')

    p = sub.add_parser('verify', parents=[common], help='运行验证套件')
    p.add_argument('--suite', choices=sorted(SUITE_PROFILES) + ['all'])
    p.add_argument('--list', action='store_true', help='列出套件及其默认范围')
    p.add_argument('--max-p', type=int, dest='max_p')
    p.add_argument('--max-level', type=int, dest='max_level')
    p.add_argument('--seed', type=int)
    p.add_argument('--workers', type=int, default=1, help='并行工作线程数')
    return parser


def emit(args, data: dict, lines: List[str]):
    fmt = args.format or ARITH_CONFIG['output']['default_format']
    if fmt == 'json':
        print(to_json_text(data))
    else:
        print("\n".join(lines))


def _descriptor_prime(args):
    d = parse_descriptor(args.input)
    if args.prime not in d.level:
        raise ArithmeticDomainError(f"{args.prime} 不整除级数 N={d.level_number}")
    return d, d.local[args.prime]


# ============================================================
# 子命令
# ============================================================

def cmd_conductor(args) -> int:
    status(f"🔍 读取描述 {args.input}")
    d = parse_descriptor(args.input)
    if args.full or args.save:
        report = build_report(d)
        reporter = ReportGenerator(report)
        if args.save:
            status(f"📄 报告已保存: {reporter.save_to_file()}")
        emit(args, report.to_json(), reporter.generate().splitlines())
        return EXIT_OK

    conductor = global_sym3_conductor(d)
    per_prime = []
    lines = [f"N = {d.level_number}，k = {d.weight}"]
    for p in d.primes:
        rec = local_sym3_conductor(d.local[p])
        per_prime.append({"p": p, "type": d.local[p].tag, "N_p": d.n_p(p), "C_p": d.c_p(p),
                          "conductor": rec.to_json()})
        lines.append(f"   p={p} ({d.local[p].tag}): a(sym³) = {rec.machinery}，闭式 {rec.closed_form} [{rec.label}]")
    lines.append(f"N(sym³) = {conductor.value}，{'✅ 与闭式一致' if conductor.agrees else '❌ 与闭式不一致'}")
    data = {"N": d.level_number, "weight": d.weight, "global_conductor": conductor.to_json(),
            "partition": partition_primes(d).to_json(), "per_prime": per_prime}
    emit(args, data, lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    d, lp = _descriptor_prime(args)
    record = analyze_local(lp, args.convention)
    emit(args, record.to_json(), local_record_lines(record))
    return EXIT_OK


def cmd_epsilon(args) -> int:
    if args.char:
        chi = parse_character(load_json(args.char))
        field = chi.field
        phi = AdditiveCharacter(field, parse_fraction(args.scale)) if args.scale else AdditiveCharacter.standard(field)
        inp = EpsilonInput(chi, phi)
        value = epsilon_factor(inp, convention=args.convention)
        data = {"character": chi.to_json(), "conductor": chi.conductor, "additive_conductor": phi.conductor,
                "tau": str(local_tau(inp)), "epsilon": str(value), "epsilon_exact": value.to_json()}
        emit(args, data, [f"a(χ) = {chi.conductor}，n(φ) = {phi.conductor}",
                          f"τ(χ, φ) = {data['tau']}", f"ε(χ, φ) = {value}"])
        return EXIT_OK

    d, _ = _descriptor_prime(args)
    relation = global_twist_relation(d, args.prime, convention=args.convention)
    emit(args, relation.to_json(), local_record_lines(relation.local) + [relation.render()])
    return EXIT_OK


def cmd_char(args) -> int:
    chi = parse_character(load_json(args.char))
    k = CHAR_OPS[args.op]
    data = {"op": args.op, "character": chi.to_json(), "conductor": chi.conductor,
            "order_on_units": chi.order_on_units}
    lines = [f"{chi}", f"a(χ) = {chi.conductor}，χ|_O^× 的阶 = {chi.order_on_units}"]
    if k is not None:
        pred = power_prediction(chi, k)
        data.update({"power": k, "predicted": pred.predicted, "brute_force": pred.brute_force,
                     "agrees": pred.agrees})
        lines.append(f"a(χ^{k}): 闭式 {pred.predicted}，穷举 {pred.brute_force} {'✅' if pred.agrees else '❌'}")
    emit(args, data, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        data = {name: {"description": prof.get('description', ''), "bounds": prof.get('bounds', {}),
                       "seed": prof.get('seed', 0)} for name, prof in sorted(SUITE_PROFILES.items())}
        lines = [f"{name}: {info['description']}\n   bounds={info['bounds']} seed={info['seed']}"
                 for name, info in data.items()]
        emit(args, data, lines)
        return EXIT_OK

    names = sorted(SUITE_PROFILES) if args.suite == 'all' else [args.suite]
    verifier = SuiteVerifier({'max_p': args.max_p, 'max_level': args.max_level}, args.seed, args.workers)
    results = []
    for name in names:
        status(f"🔍 开始 {name}")
        result = verifier.run(name)
        status(f"{'✅' if result.passed else '❌'} {name}: {result.checked} 项检查，{len(result.failures)} 项失败")
        results.append(result)
    emit(args, {"suites": [r.to_json() for r in results]}, verification_text(results).splitlines())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == 'epsilon' and not args.char and (args.input is None or args.prime is None):
        parser.error("epsilon 需要 --char，或同时给出 --input 与 --prime")
    if args.command == 'verify' and not args.list and not args.suite:
        parser.error("verify 需要 --suite 或 --list")

    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)

    commands = {
        'conductor': cmd_conductor,
        'classify': cmd_classify,
        'epsilon': cmd_epsilon,
        'char': cmd_char,
        'verify': cmd_verify,
    }
    try:
        return commands[args.command](args)
    except DescriptorError as e:
        status("❌ 描述不合法:")
        status(format_violations(e.violations))
        return EXIT_DOMAIN
    except (ArithmeticDomainError, FileNotFoundError, json.JSONDecodeError, ValueError) as e:
        status(f"❌ {e}")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
