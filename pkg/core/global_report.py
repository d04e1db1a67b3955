"""
全局报告：新形式描述、Hypothesis (H) 检查、素数划分、全局 sym³ 导子与扭转关系
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from core.conductor_calculus import e_kappa_of
from core.errors import ArithmeticDomainError, Inapplicable
from core.group_characters import all_characters, build_unit_group, local_class_character
from core.local_field import RAMIFIED, UNRAMIFIED, LocalFieldSpec
from core.wd_sym3 import (PRINCIPAL, SPECIAL, SUPERCUSPIDAL, LocalParameter, LocalSym3Record,
                          PrincipalSeries, Special, SupercuspidalDihedral, analyze_local, dihedral_data,
                          hypothesis_violations, local_sym3_conductor, minimality_violations,
                          quadratic_extensions, select_twist, unramified_twist_epsilon_q)

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class NewformDescriptor:
    """极小新形式 f ∈ S_k(N, ε) 的局部数据；相等性按 JSON 形式比较"""
    weight: int
    level: Dict[int, int]
    nebentypus: Dict[int, int] = field(default_factory=dict)
    local: Dict[int, LocalParameter] = field(default_factory=dict)
    minimal: bool = True

    @property
    def primes(self) -> List[int]:
        return sorted(self.level)

    @property
    def level_number(self) -> int:
        n = 1
        for p, e in self.level.items():
            n *= p ** e
        return n

    def n_p(self, p: int) -> int:
        return self.level.get(p, 0)

    def c_p(self, p: int) -> int:
        return self.nebentypus.get(p, 0)

    def primes_of(self, tag: str) -> List[int]:
        return [p for p in self.primes if self.local[p].tag == tag]

    def __eq__(self, other):
        if not isinstance(other, NewformDescriptor):
            return NotImplemented
        return self.to_json() == other.to_json()

    __hash__ = None

    def to_json(self) -> dict:
        local = []
        for p in self.primes:
            lp = self.local[p]
            entry = {"p": p, "type": lp.tag}
            if lp.tag == PRINCIPAL:
                entry["omega"] = lp.omega.to_json()
            elif lp.tag == SUPERCUSPIDAL:
                K = lp.field
                entry["K"] = {"kind": K.kind, "d": K.d}
                entry["kappa"] = lp.kappa.to_json()
            local.append(entry)
        return {
            "weight": self.weight,
            "level": [{"p": p, "exp": self.level[p]} for p in self.primes],
            "nebentypus": [{"p": p, "exp": e} for p, e in sorted(self.nebentypus.items()) if e],
            "minimal": self.minimal,
            "local": local,
        }


def local_gate_violations(n_p: int, c_p: int, lp: LocalParameter) -> List[str]:
    """(N_p, C_p) 与局部类型的相容性"""
    out = []
    if c_p > n_p:
        out.append(f"C_p={c_p} 超过 N_p={n_p}")
    if lp.tag == SPECIAL:
        if n_p != 1 or c_p != 0:
            out.append(f"特殊型要求 N_p=1, C_p=0（实际 N_p={n_p}, C_p={c_p}）")
    elif lp.tag == PRINCIPAL:
        if not n_p == c_p >= 1:
            out.append(f"主序列要求 N_p=C_p ≥ 1（实际 N_p={n_p}, C_p={c_p}）")
        elif lp.n_p != n_p:
            out.append(f"a(ω_p)={lp.n_p} 与 N_p={n_p} 不符")
    else:
        K = lp.field
        if n_p < 2 or c_p >= n_p:
            out.append(f"超尖点要求 N_p ≥ 2 且 C_p < N_p（实际 N_p={n_p}, C_p={c_p}）")
        if K.kind == UNRAMIFIED and n_p % 2:
            out.append(f"非分歧超尖点 N_p=2a(κ) 应为偶数: {n_p}")
        if K.kind == RAMIFIED and K.p != 2 and n_p % 2 == 0:
            out.append(f"分歧超尖点 N_p=1+a(κ) 应为奇数: {n_p}")
        if lp.n_p != n_p:
            out.append(f"由 κ 计算的 N_p={lp.n_p} 与声明的 {n_p} 不符")
        if lp.c_p != c_p:
            out.append(f"由 κ 计算的 C_p={lp.c_p} 与声明的 {c_p} 不符")
    return out


def check_hypothesis_h(d: NewformDescriptor) -> List[str]:
    """空列表表示 (H1)–(H3) 全部成立"""
    violations = []
    for p in d.primes_of(SUPERCUSPIDAL):
        violations.extend(f"p={p}: {v}" for v in hypothesis_violations(d.local[p]))
    return violations


# ============================================================
# 素数划分
# ============================================================

@dataclass
class PrimePartition:
    P1: List[int] = field(default_factory=list)
    P2: List[int] = field(default_factory=list)
    P3: List[int] = field(default_factory=list)
    SP: List[int] = field(default_factory=list)
    SC: List[int] = field(default_factory=list)
    S1: List[int] = field(default_factory=list)
    S2: List[int] = field(default_factory=list)

    @property
    def P(self) -> List[int]:
        return sorted(self.P1 + self.P2 + self.P3)

    def covers(self, primes: List[int]) -> bool:
        return sorted(self.P + self.SP + self.SC) == sorted(primes)

    def is_disjoint(self) -> bool:
        blocks = [self.P1, self.P2, self.P3, self.SP, self.SC]
        flat = [p for b in blocks for p in b]
        return len(flat) == len(set(flat)) and not set(self.S1) & set(self.S2) \
            and set(self.S1 + self.S2) <= set(self.SC)

    def to_json(self) -> dict:
        return {k: list(v) for k, v in self.__dict__.items()}


def partition_primes(d: NewformDescriptor) -> PrimePartition:
    part = PrimePartition()
    for p in d.primes:
        lp = d.local.get(p)
        if lp is None:
            raise ArithmeticDomainError(f"p={p} 缺少局部数据")
        n = d.n_p(p)
        if lp.tag == SPECIAL:
            part.SP.append(p)
        elif lp.tag == PRINCIPAL:
            order = lp.omega.order_on_units
            if p >= 5 and (n > 1 or order > 3):
                part.P1.append(p)
            elif (p == 3 and n == 2 and order == 3) or (p == 2 and n <= 3):
                part.P3.append(p)
            else:
                part.P2.append(p)
        else:
            part.SC.append(p)
            if p >= 5:
                if n == 2 and lp.kappa.order_on_units == 3:
                    part.S1.append(p)
                else:
                    part.S2.append(p)
    return part


# ============================================================
# 全局导子
# ============================================================

@dataclass
class GlobalConductor:
    per_prime: Dict[int, int]
    closed_form: Dict[int, int]

    @property
    def agrees(self) -> bool:
        return self.per_prime == self.closed_form

    @property
    def value(self) -> int:
        v = 1
        for p, e in self.per_prime.items():
            v *= p ** e
        return v

    def to_json(self) -> dict:
        return {
            "factors": [[p, e] for p, e in sorted(self.per_prime.items())],
            "value": self.value,
            "closed_form": [[p, e] for p, e in sorted(self.closed_form.items())],
            "agrees": self.agrees,
        }


def closed_conductor_exponents(d: NewformDescriptor, part: Optional[PrimePartition] = None) -> Dict[int, int]:
    """N·∏_{SP∪P₁}p^{2N_p}·∏_{P₂}p^{2N_p−1}·∏_{P₃∪S₂}p^{N_p}·2^{N_2}·3^{e_κ}，S₁ 不再贡献"""
    part = part or partition_primes(d)
    exps = dict(d.level)
    for p in part.SP + part.P1:
        exps[p] += 2 * d.n_p(p)
    for p in part.P2:
        exps[p] += 2 * d.n_p(p) - 1
    for p in part.P3 + part.S2:
        exps[p] += d.n_p(p)
    if 2 in part.SC:
        exps[2] += d.n_p(2)
    if 3 in part.SC:
        exps[3] += e_kappa_of(d.local[3].kappa, d.n_p(3))
    return exps


def global_sym3_conductor(d: NewformDescriptor) -> GlobalConductor:
    violations = check_hypothesis_h(d)
    if violations:
        raise Inapplicable("; ".join(violations))
    if not d.minimal:
        raise Inapplicable("描述未标记为极小，闭式乘积不适用")
    per_prime = {p: local_sym3_conductor(d.local[p]).machinery for p in d.primes}
    result = GlobalConductor(per_prime, closed_conductor_exponents(d))
    if not result.agrees:
        logger.warning(f"N={d.level_number}: 逐素数 {per_prime} ≠ 闭式 {result.closed_form}")
    return result


# ============================================================
# 扭转关系
# ============================================================

def prime_to_p_part(conductor: GlobalConductor, p: int) -> int:
    """M'"""
    m = 1
    for q, e in conductor.per_prime.items():
        if q != p:
            m *= q ** e
    return m


def unramified_epsilon_product(conductor: GlobalConductor, p: int) -> int:
    """∏_{q≠p} ε_q = ∏ (q/p)^{val_q}"""
    out = 1
    for q, e in conductor.per_prime.items():
        if q != p:
            out *= unramified_twist_epsilon_q(q, p, e)
    return out


def twist_sign(p: int, m: int, lp: LocalParameter) -> int:
    """χ_p(M') 取 ±1"""
    twist = select_twist(lp)
    value = twist(LocalFieldSpec(p).element(m)).value()
    return 1 if value == 1 else -1


@dataclass
class TwistRelation:
    p: int
    m_prime: int
    chi_of_m: int
    local: LocalSym3Record
    q_product: Optional[int] = None
    verdict: str = ''

    @property
    def product_matches(self) -> Optional[bool]:
        return None if self.q_product is None else self.q_product == self.chi_of_m

    def render(self) -> str:
        chi = f"χ_{self.p}"
        variance = self.local.variance
        eps = str(variance.definitional) if variance else "ε_p"
        return f"ε(sym³(π)⊗{chi}) = {chi}({self.m_prime})·({eps})·ε(sym³(π))，{chi}({self.m_prime}) = {self.chi_of_m}"

    def to_json(self) -> dict:
        return {"p": self.p, "M_prime": self.m_prime, "chi_p_of_M_prime": self.chi_of_m,
                "relation": self.render(), "q_product": self.q_product,
                "product_matches": self.product_matches, "verdict": self.verdict,
                "local": self.local.to_json()}


def _variance_sign(record: LocalSym3Record) -> Optional[int]:
    variance = record.variance
    if variance is None:
        return None
    v = variance.definitional
    if v == 1:
        return 1
    if v == -1:
        return -1
    return None


def _ramified_class_verdict(record: LocalSym3Record) -> str:
    """分歧 K 的判别式类：p=3 按 a(κ³) 分行，p=2 按 δ 分行"""
    lp = record.lp
    K = lp.field
    p = K.p
    v = _variance_sign(record)
    shown = "?" if v is None else str(v)
    if p == 2:
        text = f"K = Q_2(√{K.d})，δ={K.delta}"
        if v == -1:
            return text + "；ε_2 = −1 ⇒ δ = 3"
        return text + f"；ε_2 = {shown}：δ = 2，或 δ = 3 且 χ'_{{−1}}(s) = 1，不能区分"
    sign = local_class_character(K)(LocalFieldSpec(p).element(p)).value()
    text = f"K = Q_{p}(√{K.d})，δ={K.delta}，({p}, K/Q_{p}) = {1 if sign == 1 else -1}"
    if p != 3:
        return text
    a3 = lp.kappa.power(3).conductor
    if record.type_class.name == 'TypeIII':
        if a3 > 1:
            return text + f"；ε_3 = {shown} = ±χ_3(d)，符号随 K 的类翻转"
        return text + "；ε_3 = 1，不区分 K"
    if a3 >= 3 and a3 % 2 and v is not None:
        return text + f"；a(κ³)={a3} 奇：ε_3 = {shown} 对应此 K，另一分歧扩张对应 {-v}"
    return text + f"；a(κ³)={a3}：ε_3 = {shown}，不区分 K"


def supercuspidal_verdict(record: LocalSym3Record) -> str:
    K = record.lp.field
    text = "Type III" if record.type_class.name == 'TypeIII' else "Type I 或 II"
    if K.kind == RAMIFIED:
        text += "；" + _ramified_class_verdict(record)
    return text


def global_twist_relation(d: NewformDescriptor, p: int, conductor: Optional[GlobalConductor] = None,
                          convention: Optional[str] = None) -> TwistRelation:
    if p not in d.level:
        raise ArithmeticDomainError(f"{p} 不整除级数 N={d.level_number}")
    conductor = conductor or global_sym3_conductor(d)
    m_prime = prime_to_p_part(conductor, p)
    lp = d.local[p]
    record = analyze_local(lp, convention)
    chi = twist_sign(p, m_prime, lp)
    q_product = unramified_epsilon_product(conductor, p) if p != 2 else None
    verdict = supercuspidal_verdict(record) if lp.tag == SUPERCUSPIDAL else record.type_class.name
    return TwistRelation(p, m_prime, chi, record, q_product, verdict)


# ============================================================
# 报告
# ============================================================

@dataclass
class Sym3Report:
    descriptor: NewformDescriptor
    conductor: GlobalConductor
    partition: PrimePartition
    relations: List[TwistRelation]

    def to_json(self) -> dict:
        return {
            "N": self.descriptor.level_number,
            "weight": self.descriptor.weight,
            "global_conductor": self.conductor.to_json(),
            "partition": self.partition.to_json(),
            "per_prime": [r.local.to_json() for r in self.relations],
            "twist_relations": [{k: v for k, v in r.to_json().items() if k != 'local'} for r in self.relations],
        }


def build_report(d: NewformDescriptor, primes: Optional[List[int]] = None,
                 convention: Optional[str] = None) -> Sym3Report:
    conductor = global_sym3_conductor(d)
    relations = [global_twist_relation(d, p, conductor, convention) for p in (primes or d.primes)]
    return Sym3Report(d, conductor, partition_primes(d), relations)


# ============================================================
# 随机描述生成
# ============================================================

def _random_principal(p: int, weight: int, rng: random.Random, max_level: int) -> PrincipalSeries:
    low = 2 if p == 2 else 1
    t = rng.randint(low, max(low, max_level))
    chars = [c for c in all_characters(build_unit_group(LocalFieldSpec(p), t)) if c.conductor >= low]
    return PrincipalSeries(p, weight, rng.choice(chars))


def _random_supercuspidal(p: int, weight: int, rng: random.Random, sample: int):
    kind = rng.choice([UNRAMIFIED, RAMIFIED])
    K = rng.choice(quadratic_extensions(p, kind))
    if K.kind == UNRAMIFIED:
        choices = [2] if p == 2 else [1, 2]
    elif p == 2:
        choices = [K.delta + 1, K.delta + 2]
    else:
        choices = [2]
    a = rng.choice(choices)
    for sc in dihedral_data(K, a, limit=sample, rng=rng):
        sc = SupercuspidalDihedral(sc.kappa, weight)
        if not hypothesis_violations(sc) and not minimality_violations(sc):
            return sc
    return None


def random_descriptor(rng: random.Random, primes=(2, 3, 5, 7, 11), max_primes: int = 3,
                      max_level: int = 3, weight: int = 2, sample: int = 40) -> NewformDescriptor:
    """随机生成满足 (H) 且极小的描述"""
    chosen = sorted(rng.sample(list(primes), rng.randint(1, min(max_primes, len(primes)))))
    local = {}
    for p in chosen:
        kinds = [SPECIAL, PRINCIPAL, SUPERCUSPIDAL]
        rng.shuffle(kinds)
        for kind in kinds:
            if kind == SPECIAL:
                local[p] = Special(p, weight)
            elif kind == PRINCIPAL:
                local[p] = _random_principal(p, weight, rng, max_level)
            else:
                sc = _random_supercuspidal(p, weight, rng, sample)
                if sc is None:
                    continue
                local[p] = sc
            break
    level = {p: local[p].n_p for p in chosen}
    nebentypus = {p: local[p].c_p for p in chosen if local[p].c_p}
    return NewformDescriptor(weight, level, nebentypus, local, True)
