"""
局部 ε 因子：定义式计算、加法参数求解与 Deligne 扭转
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from config.arith_config import ARITH_CONFIG
from core.cyclotomic import CyclotomicNumber, FormalScalar
from core.errors import ArithmeticDomainError, Inapplicable
from core.group_characters import (AdditiveCharacter, MultiplicativeCharacter,
                                   build_unit_group, eval_additive)
from core.local_field import BASE, LocalElement


I = CyclotomicNumber.root(4, 1)


@dataclass(frozen=True, eq=False)
class EpsilonInput:
    """ε(χ, φ, c)；c 缺省时取 π^{a(χ)+n(φ)}"""
    chi: MultiplicativeCharacter
    phi: AdditiveCharacter
    c: Optional[LocalElement] = None

    def __post_init__(self):
        if self.chi.field != self.phi.field:
            raise ValueError(f"χ 与 φ 不在同一个域上: {self.chi.field} / {self.phi.field}")

    @property
    def field(self):
        return self.chi.field

    def resolved_c(self) -> LocalElement:
        a = self.chi.conductor
        target = a + self.phi.conductor
        if self.c is None:
            return self.field.uniformizer_power(target)
        if self.c.valuation() != target:
            raise ValueError(f"c 的赋值须为 a(χ)+n(φ) = {target}，实际为 {self.c.valuation()}")
        return self.c


def local_tau(inp: EpsilonInput) -> CyclotomicNumber:
    """τ(χ, φ) = Σ_{x∈O^×/U^a} χ^{-1}(x)·φ(x/c)"""
    chi = inp.chi
    a = chi.conductor
    c_inv = inp.resolved_c().inverse()
    if a == 0:
        return CyclotomicNumber.from_angle(eval_additive(inp.phi, c_inv))
    group = build_unit_group(inp.field, a)
    chi_a = chi.change_level(a)
    terms = Counter()
    for key in group.keys():
        x = inp.field.from_key(key)
        terms[-chi_a.unit_angle(key) + eval_additive(inp.phi, x * c_inv)] += 1
    return CyclotomicNumber.from_angles(terms)


def epsilon_factor(inp: EpsilonInput, haar_normalized: bool = False,
                   convention: Optional[str] = None) -> FormalScalar:
    """ε(χ, φ, c) = q^{−a(χ)/2}·χ(c)·τ(χ, φ)"""
    chi = inp.chi
    field = inp.field
    convention = convention or ARITH_CONFIG['conventions']['p2_epsilon']
    a = chi.conductor
    if convention == 'lemma' and _is_p2_lemma_case(chi):
        return lemma_alpha_value(chi)
    c = inp.resolved_c()
    value = FormalScalar(local_tau(inp), Fraction(-field.f * a, 2), 0, field.p) * chi(c)
    if haar_normalized:
        value = value * FormalScalar(1, field.f * inp.phi.conductor, 0, field.p)
    return value


def _is_p2_lemma_case(chi: MultiplicativeCharacter) -> bool:
    return (chi.field.kind == BASE and chi.field.p == 2 and chi.order_on_units == 2
            and chi.conductor in (2, 3))


def lemma_alpha_value(alpha: MultiplicativeCharacter) -> FormalScalar:
    """
    二次特征标 α 对导子 −1 的加法特征标的 ε 闭式值

    奇素数驯顺情形：p ≡ 1 (mod 4) 为 1，否则为 i；
    p=2：a(α)=2 为 iα(2)/2，a(α)=3 为 α(2)²/2。
    """
    p = alpha.field.p
    a = alpha.conductor
    if alpha.field.kind != BASE or alpha.order_on_units != 2:
        raise Inapplicable("只适用于 Q_p 上的二次特征标")
    if p != 2:
        if a != 1:
            raise Inapplicable(f"奇素数情形要求驯顺分歧: a(α) = {a}")
        return FormalScalar(1 if p % 4 == 1 else I, 0, 0, p)
    at2 = alpha.at_uniformizer
    if a == 2:
        return at2 * FormalScalar(I, -1, 0, 2)
    if a == 3:
        return at2 ** 2 * FormalScalar(1, -1, 0, 2)
    raise Inapplicable(f"p=2 时要求 a(α) ∈ {{2, 3}}: {a}")


def epsilon_ratio(numerators: Iterable[EpsilonInput], denominators: Iterable[EpsilonInput],
                  convention: Optional[str] = None) -> FormalScalar:
    """∏ε(分子) / ∏ε(分母)"""
    value = FormalScalar(1)
    for inp in numerators:
        value = value * epsilon_factor(inp, convention=convention)
    for inp in denominators:
        value = value / epsilon_factor(inp, convention=convention)
    return value


def solve_additive_parameter(chi: MultiplicativeCharacter, phi: AdditiveCharacter,
                             r: Optional[int] = None) -> LocalElement:
    """求 c 使 χ(1+x) = φ(cx) 对一切 x ∈ 𝔭^r 成立"""
    field = chi.field
    a = chi.conductor
    n = phi.conductor
    if a == 0:
        return field.uniformizer_power(-n)
    r = r if r is not None else (a + 1) // 2
    if not 2 * r >= a >= 1:
        raise Inapplicable(f"需要 2r ≥ a(χ) ≥ 1: r={r}, a={a}")
    chi_a = chi.change_level(max(a, chi.level))
    checks = []
    for j in range(r, a):
        pi_j = field.uniformizer_power(j)
        for basis in field.residue_basis():
            x = pi_j * basis
            checks.append((x, chi_a.on_unit(field.one() + x)))
    base = field.uniformizer_power(-(a + n))
    if a - r <= 0:
        candidates = [field.one()]
    else:
        candidates = [field.from_key(k) for k in build_unit_group(field, a - r).keys()]
    for u in candidates:
        c = base * u
        if all(eval_additive(phi, c * x) == target for x, target in checks):
            return c
    raise ArithmeticDomainError(f"在层级 {a} 上找不到加法参数 c（r={r}）")


def deligne_twist(alpha: MultiplicativeCharacter, beta: MultiplicativeCharacter,
                  phi: AdditiveCharacter) -> FormalScalar:
    """ε(αβ, φ) = β^{-1}(c)·ε(α, φ)，要求 a(α) ≥ 2a(β)"""
    if alpha.conductor < 2 * beta.conductor:
        raise Inapplicable(f"需要 a(α) ≥ 2a(β): {alpha.conductor} < 2·{beta.conductor}")
    c = solve_additive_parameter(alpha, phi)
    return beta.inverse()(c) * epsilon_factor(EpsilonInput(alpha, phi))
