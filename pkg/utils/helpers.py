import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

import sympy

from config.arith_config import ARITH_CONFIG
from core.cyclotomic import CyclotomicNumber, FormalScalar
from core.errors import ArithmeticDomainError, DescriptorError
from core.gauss import FiniteField
from core.global_report import NewformDescriptor, local_gate_violations
from core.group_characters import (MultiplicativeCharacter, build_unit_group, character_from_function,
                                   quadratic_character, trivial_character)
from core.local_field import BASE, RAMIFIED, UNRAMIFIED, LocalFieldSpec
from core.wd_sym3 import PrincipalSeries, Special, SupercuspidalDihedral, minimality_violations


def status(message: str):
    """进度提示写到 stderr，stdout 只留结果"""
    print(message, file=sys.stderr)


def parse_fraction(value) -> Fraction:
    if isinstance(value, (list, tuple)):
        return Fraction(int(value[0]), int(value[1]))
    return Fraction(str(value))


# ============================================================
# 特征标字面量
# ============================================================

def parse_field(obj: Optional[dict], p: Optional[int] = None) -> LocalFieldSpec:
    """{"p": 7, "kind": "unramified", "d": 3}；缺省为 Q_p"""
    obj = obj or {}
    p = int(obj.get("p", p or 0))
    kind = obj.get("kind", BASE)
    return LocalFieldSpec(p, kind, int(obj.get("d", 0)))


def parse_scalar(obj, p: int) -> FormalScalar:
    """
    整数、FormalScalar.to_json 的形式，或 {"angle": [k, n], "half_p_exp": h, "ap_exp": e}

    angle 与 coefficient 同时出现时两者相乘。
    """
    if obj is None:
        return FormalScalar(1, 0, 0, p)
    if isinstance(obj, (int, str)):
        return FormalScalar(parse_fraction(obj), 0, 0, p)
    if not isinstance(obj, dict):
        raise ValueError(f"无法识别的标量字面量: {obj!r}")
    coef = obj.get("coefficient", 1)
    if isinstance(coef, dict):
        coef = CyclotomicNumber(int(coef["order"]), [Fraction(c) for c in coef["coeffs"]])
    else:
        coef = CyclotomicNumber.rational(parse_fraction(coef))
    if "angle" in obj:
        coef = coef * CyclotomicNumber.from_angle(parse_fraction(obj["angle"]))
    return FormalScalar(coef, parse_fraction(obj.get("half_p_exp", 0)), int(obj.get("ap_exp", 0)), p)


def _residue_of(field: LocalFieldSpec, x) -> Tuple[int, int]:
    a = int(x.a) % field.p
    b = int(x.b) % field.p if field.kind == UNRAMIFIED else 0
    return a, b


def parse_character(obj: dict, field: Optional[LocalFieldSpec] = None, p: Optional[int] = None) -> MultiplicativeCharacter:
    """
    特征标字面量

    支持以下写法（可附 "at_uniformizer"）：
      {"trivial": true}
      {"quadratic": d}                          仅 Q_p
      {"residue_angle": "1/3"}                  驯顺，χ(g) = e^{2πi·angle}，g 为剩余域本原元
      {"level": t, "unit_exponents": [[1, 6]]}  SNF 坐标，与输出的 JSON 一致
    """
    if not isinstance(obj, dict):
        raise ValueError("特征标字面量必须是 JSON 对象")
    if "field" in obj or field is None:
        field = parse_field(obj.get("field"), p or (field.p if field else None))
    at = parse_scalar(obj.get("at_uniformizer"), field.p)

    if obj.get("trivial"):
        return trivial_character(field, int(obj.get("level", 1)), at)
    if "quadratic" in obj:
        if field.kind != BASE:
            raise ValueError("quadratic 只用于 Q_p 上的特征标")
        chi = quadratic_character(field.p, int(obj["quadratic"]), obj.get("level"))
        if "at_uniformizer" in obj:
            chi = MultiplicativeCharacter(chi.group, chi.unit_exponents, at)
        return chi
    if "residue_angle" in obj:
        angle = parse_fraction(obj["residue_angle"])
        ff = FiniteField(field.p, field.f)
        table = ff.dlog_table()
        group = build_unit_group(field, 1)
        return character_from_function(group, lambda x: angle * table[_residue_of(field, x)], at)
    if "unit_exponents" in obj:
        group = build_unit_group(field, int(obj["level"]))
        exps = tuple(parse_fraction(e) for e in obj["unit_exponents"])
        return MultiplicativeCharacter(group, exps, at)
    raise ValueError(f"无法识别的特征标字面量: {sorted(obj)}")


# ============================================================
# 新形式描述
# ============================================================

LOCAL_TYPES = ('special', 'principal', 'supercuspidal')


def load_json(path: str):
    if not os.path.exists(path):
        raise FileNotFoundError(f"文件不存在: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def _prime_exponents(entries, path: str, violations: List[Tuple[str, str]]) -> dict:
    out = {}
    if not isinstance(entries, list):
        violations.append((path, "必须是列表"))
        return out
    for i, entry in enumerate(entries):
        where = f"{path}[{i}]"
        try:
            p, e = int(entry["p"]), int(entry["exp"])
        except (KeyError, TypeError, ValueError):
            violations.append((where, "需要整数字段 p 与 exp"))
            continue
        if not sympy.isprime(p):
            violations.append((f"{where}.p", f"{p} 不是素数"))
        elif p in out:
            violations.append((f"{where}.p", f"素数 {p} 重复"))
        elif e < 0:
            violations.append((f"{where}.exp", f"指数为负: {e}"))
        else:
            out[p] = e
    return out


def _parse_local(entry: dict, weight: int):
    p = int(entry["p"])
    kind = entry.get("type")
    if kind == 'special':
        return Special(p, weight)
    if kind == 'principal':
        if "omega" not in entry:
            raise ValueError("主序列需要 omega")
        return PrincipalSeries(p, weight, parse_character(entry["omega"], LocalFieldSpec(p)))
    K_obj = dict(entry.get("K") or {})
    K_obj.setdefault("p", p)
    K = parse_field(K_obj)
    if K.kind not in (UNRAMIFIED, RAMIFIED):
        raise ValueError("超尖点的 K 必须是二次扩张")
    if "kappa" not in entry:
        raise ValueError("超尖点需要 kappa")
    return SupercuspidalDihedral(parse_character(entry["kappa"], K), weight)


def parse_descriptor(source) -> NewformDescriptor:
    """文件路径或已载入的 JSON；不合法时抛出带 JSON 路径的 DescriptorError"""
    data = load_json(source) if isinstance(source, str) else source
    violations: List[Tuple[str, str]] = []
    if not isinstance(data, dict):
        raise DescriptorError([("$", "描述必须是 JSON 对象")])

    weight = data.get("weight")
    if not isinstance(weight, int) or weight < 1:
        violations.append(("$.weight", f"权必须是正整数: {weight}"))
        weight = 2
    level = _prime_exponents(data.get("level", []), "$.level", violations)
    nebentypus = _prime_exponents(data.get("nebentypus", []), "$.nebentypus", violations)
    minimal = bool(data.get("minimal", True))

    for p, e in level.items():
        if e < 1:
            violations.append(("$.level", f"p={p} 的指数必须 ≥ 1"))
    for j, (p, c) in enumerate(nebentypus.items()):
        if p not in level:
            violations.append((f"$.nebentypus[{j}].p", f"{p} 不整除级数"))
        elif c > level[p]:
            violations.append((f"$.nebentypus[{j}].exp", f"p={p}: C_p={c} 超过 N_p={level[p]}"))

    local = {}
    entries = data.get("local", [])
    if not isinstance(entries, list):
        violations.append(("$.local", "必须是列表"))
        entries = []
    for k, entry in enumerate(entries):
        where = f"$.local[{k}]"
        if not isinstance(entry, dict) or "p" not in entry:
            violations.append((where, "需要字段 p"))
            continue
        if entry.get("type") not in LOCAL_TYPES:
            violations.append((f"{where}.type", f"类型须为 {list(LOCAL_TYPES)}: {entry.get('type')}"))
            continue
        try:
            lp = _parse_local(entry, weight)
        except (ValueError, KeyError, ArithmeticDomainError) as e:
            violations.append((where, str(e)))
            continue
        p = lp.p
        if p not in level:
            violations.append((f"{where}.p", f"{p} 不整除级数"))
            continue
        for message in local_gate_violations(level[p], nebentypus.get(p, 0), lp):
            violations.append((where, f"p={p}: {message}"))
        if minimal and lp.tag == 'supercuspidal':
            for message in minimality_violations(lp):
                violations.append((f"{where}.kappa", f"描述不是 p-极小的: {message}"))
        local[p] = lp

    for p in level:
        if p not in local and not any(path.startswith("$.local[") for path, _ in violations):
            violations.append(("$.local", f"p={p} 缺少局部数据"))
    if violations:
        raise DescriptorError(violations)
    return NewformDescriptor(weight, level, {p: c for p, c in nebentypus.items() if c}, local, minimal)


# ============================================================
# 输出
# ============================================================

def to_json_text(data) -> str:
    indent = ARITH_CONFIG['output']['json_indent']
    return json.dumps(data, ensure_ascii=False, indent=indent)


def format_violations(violations) -> str:
    return "\n".join(f"   {path}: {message}" for path, message in violations)
