"""
sym³ 提升的局部部分

局部参数（主序列 / 特殊 / 二面体超尖点）、sym³ 函子、Type I/II/III 判定、
局部 sym³ 导子（一般机制与闭式）以及方差数 ε_p = ε(sym³⊗χ_p)/ε(sym³)。
"""
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple, Union

import sympy

from config.arith_config import ARITH_CONFIG
from core.conductor_calculus import e_kappa_of
from core.cyclotomic import CyclotomicNumber, FormalScalar, p_valuation, sqrt_prime
from core.epsilon import (EpsilonInput, epsilon_factor, lemma_alpha_value,
                          solve_additive_parameter)
from core.errors import ArithmeticDomainError, Inapplicable, LevelTooLow
from core.gauss import (FiniteField, FiniteFieldCharacterPair, gauss_sum, pure_gauss_value,
                        stickelberger_value)
from core.group_characters import (AdditiveCharacter, MultiplicativeCharacter, all_characters,
                                   build_unit_group, epsilon_prime, inflate_by_norm,
                                   local_class_character, nebentypus_from_kappa, twist_character,
                                   unramified_character)
from core.local_field import RAMIFIED, UNRAMIFIED, BASE, LocalFieldSpec, smallest_nonresidue
from core.padic import gross_koblitz_defect

logger = logging.getLogger(__name__)

PRINCIPAL = 'principal'
SPECIAL = 'special'
SUPERCUSPIDAL = 'supercuspidal'

TYPE_PRINCIPAL = 'PrincipalSeriesType'
TYPE_SPECIAL = 'SpecialType'
TYPE_I = 'TypeI'
TYPE_II = 'TypeII'
TYPE_III = 'TypeIII'


# ============================================================
# 局部参数
# ============================================================

@dataclass(frozen=True, eq=False)
class PrincipalSeries:
    """μ₁ ⊕ μ₂：μ₁ 非分歧，μ₁(p) = a_p·p^{−(k−1)/2}，μ₁μ₂ = ω_p"""
    p: int
    weight: int
    omega: MultiplicativeCharacter

    tag = PRINCIPAL

    def __post_init__(self):
        if self.omega.field != LocalFieldSpec(self.p):
            raise ValueError(f"ω_p 必须是 Q_{self.p} 上的特征标: {self.omega.field}")

    @property
    def base(self) -> LocalFieldSpec:
        return LocalFieldSpec(self.p)

    @property
    def mu1(self) -> MultiplicativeCharacter:
        return unramified_character(self.base, FormalScalar(1, Fraction(-(self.weight - 1), 2), 1, self.p))

    @property
    def mu2(self) -> MultiplicativeCharacter:
        return self.omega / self.mu1

    @property
    def n_p(self) -> int:
        return self.omega.conductor

    @property
    def c_p(self) -> int:
        return self.omega.conductor

    def determinant(self) -> MultiplicativeCharacter:
        return self.omega


@dataclass(frozen=True, eq=False)
class Special:
    """St ⊗ μ；μ 缺省取 μ(p) = a_p·p^{−(k−2)/2} 的非分歧特征标"""
    p: int
    weight: int
    mu: Optional[MultiplicativeCharacter] = None

    tag = SPECIAL

    def __post_init__(self):
        if self.mu is None:
            at_p = FormalScalar(1, Fraction(-(self.weight - 2), 2), 1, self.p)
            object.__setattr__(self, 'mu', unramified_character(LocalFieldSpec(self.p), at_p))

    @property
    def base(self) -> LocalFieldSpec:
        return LocalFieldSpec(self.p)

    @property
    def n_p(self) -> int:
        return 1 if self.mu.is_unramified() else 2 * self.mu.conductor

    @property
    def c_p(self) -> int:
        return self.mu.power(2).conductor

    def determinant(self) -> MultiplicativeCharacter:
        return self.mu.power(2)


@dataclass(frozen=True, eq=False)
class SupercuspidalDihedral:
    """Ind_{W(K)}^{W(Q_p)} κ，要求 κ ≠ κ^σ"""
    kappa: MultiplicativeCharacter
    weight: int = 2

    tag = SUPERCUSPIDAL

    def __post_init__(self):
        if self.kappa.field.kind == BASE:
            raise ValueError("κ 必须定义在二次扩张上")
        if self.kappa == self.kappa.sigma_conjugate():
            raise ArithmeticDomainError(f"κ = κ^σ，Ind(κ) 可约: {self.kappa}")

    @property
    def p(self) -> int:
        return self.kappa.field.p

    @property
    def field(self) -> LocalFieldSpec:
        return self.kappa.field

    @property
    def n_p(self) -> int:
        K = self.field
        return K.f * self.kappa.conductor + K.delta

    @property
    def nebentypus(self) -> MultiplicativeCharacter:
        return nebentypus_from_kappa(self.kappa)

    @property
    def c_p(self) -> int:
        return self.nebentypus.conductor

    @property
    def epsilon_prime(self) -> MultiplicativeCharacter:
        return epsilon_prime(self.kappa)

    def determinant(self) -> MultiplicativeCharacter:
        return self.kappa.restrict_to_base() * local_class_character(self.field)


LocalParameter = Union[PrincipalSeries, Special, SupercuspidalDihedral]


# ============================================================
# sym³ 参数
# ============================================================

@dataclass(frozen=True, eq=False)
class Sym3Summand:
    """Q_p^× 的特征标，或 (K, K^× 的特征标) 的诱导；weight 为已并入的 |·|^weight"""
    character: MultiplicativeCharacter
    induced: bool = False
    weight: Fraction = Fraction(0)

    @property
    def dimension(self) -> int:
        return 2 if self.induced else 1

    @property
    def conductor(self) -> int:
        a = self.character.conductor
        if not self.induced:
            return a
        K = self.character.field
        return K.f * a + K.delta

    def determinant(self) -> MultiplicativeCharacter:
        if not self.induced:
            return self.character
        return self.character.restrict_to_base() * local_class_character(self.character.field)

    def to_json(self) -> dict:
        return {"induced": self.induced, "weight": str(self.weight),
                "conductor": self.conductor, "character": self.character.to_json()}


@dataclass(frozen=True, eq=False)
class Sym3Parameter:
    summands: Tuple[Sym3Summand, ...]
    nilpotent: Optional[sympy.ImmutableMatrix] = None

    @property
    def dimension(self) -> int:
        return sum(s.dimension for s in self.summands)

    @property
    def nilpotent_rank(self) -> int:
        return 0 if self.nilpotent is None else self.nilpotent.rank()

    def determinant(self) -> MultiplicativeCharacter:
        det = self.summands[0].determinant()
        for s in self.summands[1:]:
            det = det * s.determinant()
        return det

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "nilpotent_rank": self.nilpotent_rank,
                "summands": [s.to_json() for s in self.summands]}


STEINBERG_NILPOTENT = sympy.ImmutableMatrix([[0, 1], [0, 0]])


def sym_power_matrix(g, n: int = 3) -> sympy.Matrix:
    """g 在 Sym^n 上的矩阵，基为 x^{n−j}y^j（列向量约定 g·e_j = Σ g_ij e_i）"""
    x, y = sympy.symbols('x y')
    gx = g[0, 0] * x + g[1, 0] * y
    gy = g[0, 1] * x + g[1, 1] * y
    cols = []
    for j in range(n + 1):
        image = sympy.Poly(sympy.expand(gx ** (n - j) * gy ** j), x, y)
        cols.append([image.coeff_monomial(x ** (n - i) * y ** i) for i in range(n + 1)])
    return sympy.Matrix(cols).T


@lru_cache(maxsize=None)
def sym3_nilpotent() -> sympy.ImmutableMatrix:
    """N' = d/dt sym³(1 + tN)|_{t=0}"""
    t = sympy.Symbol('t')
    g = sympy.eye(2) + t * STEINBERG_NILPOTENT
    return sympy.ImmutableMatrix(sympy.diff(sym_power_matrix(g, 3), t).subs(t, 0))


def monomial_weights() -> List[Fraction]:
    """x^{3−j}y^j 上 |·| 的指数 (3−2j)/2"""
    return [Fraction(3 - 2 * j, 2) for j in range(4)]


def jordan_kernel_weight() -> Fraction:
    """ker N' 所在直和项的权"""
    kernel = sym3_nilpotent().nullspace()
    if len(kernel) != 1:
        raise ArithmeticDomainError(f"N' 的核维数应为 1: {len(kernel)}")
    index = next(i for i, c in enumerate(kernel[0]) if c != 0)
    return monomial_weights()[index]


def invariant_dimensions(param: Sym3Parameter) -> Tuple[int, int]:
    """(dim V^I, dim V^I_{N'})"""
    inertia = [i for i, s in enumerate(param.summands) if s.character.is_unramified()]
    if param.nilpotent is None or not inertia:
        return len(inertia), len(inertia)
    restricted = param.nilpotent[:, inertia]
    return len(inertia), len(restricted.nullspace())


def _principal_sym3(lp: PrincipalSeries) -> Sym3Parameter:
    mu1, omega = lp.mu1, lp.omega
    chars = [mu1.power(3), mu1 * omega, mu1.inverse() * omega.power(2), mu1.power(-3) * omega.power(3)]
    return Sym3Parameter(tuple(Sym3Summand(c) for c in chars))


def _special_sym3(lp: Special) -> Sym3Parameter:
    mu3 = lp.mu.power(3)
    summands = []
    for w in monomial_weights():
        shift = unramified_character(lp.base, FormalScalar(1, -w, 0, lp.p))
        summands.append(Sym3Summand(mu3 * shift, weight=w))
    return Sym3Parameter(tuple(summands), sym3_nilpotent())


def _supercuspidal_sym3(lp: SupercuspidalDihedral) -> Sym3Parameter:
    kappa = lp.kappa
    return Sym3Parameter((Sym3Summand(kappa.power(3), induced=True),
                          Sym3Summand(kappa * lp.epsilon_prime, induced=True)))


def sym3_parameter(lp: LocalParameter) -> Sym3Parameter:
    builders = {
        PRINCIPAL: _principal_sym3,
        SPECIAL: _special_sym3,
        SUPERCUSPIDAL: _supercuspidal_sym3,
    }
    builder = builders.get(lp.tag)
    if builder is None:
        raise ValueError(f"未知的局部类型: {lp.tag}")
    return builder(lp)


def determinant_sanity(lp: LocalParameter) -> bool:
    """det sym³(ρ) = (det ρ)^6"""
    return sym3_parameter(lp).determinant() == lp.determinant().power(6)


# ============================================================
# Type I / II / III
# ============================================================

@dataclass(frozen=True, eq=False)
class TypeClass:
    name: str
    phi: Optional[MultiplicativeCharacter] = None
    partner: Optional[MultiplicativeCharacter] = None

    def to_json(self) -> dict:
        out = {"name": self.name}
        if self.phi is not None:
            out["phi"] = self.phi.to_json()
            out["phi_conductors"] = [self.phi.conductor, self.partner.conductor]
        return out


def _formal_roots(x: FormalScalar, k: int) -> List[FormalScalar]:
    """x 的全部 k 次根（系数须为单位根）"""
    x = x.simplify()
    angle = x.coefficient.as_root_of_unity()
    if angle is None or x.ap_exp % k or (x.half_p_exp / k).denominator > 2:
        raise Inapplicable(f"无法对 {x} 开 {k} 次方")
    return [FormalScalar(CyclotomicNumber.from_angle((angle + j) / k), x.half_p_exp / k, x.ap_exp // k, x.p)
            for j in range(k)]


def norm_descents(target: MultiplicativeCharacter, level: Optional[int] = None) -> List[MultiplicativeCharacter]:
    """Q_p^× 上满足 φ∘N_{K/Q_p} = target 的全部 φ，按导子排序"""
    K = target.field
    p = K.p
    base = K.base_field()
    L = level or max(target.conductor + 1, 3 if p == 2 else 1)
    t = max(target.level, K.e * L)
    target_t = target.change_level(t)
    gens = [K.from_key(g) for g in build_unit_group(K, t).generators]
    norms = [base.element(g.norm()) for g in gens]
    wanted = [target_t.on_unit(g) for g in gens]

    pi = K.uniformizer()
    n_pi = pi.norm()
    v = p_valuation(n_pi, p)
    unit = base.element(n_pi / Fraction(p) ** v)
    at_pi = target(pi)

    found = []
    for chi in all_characters(build_unit_group(base, L)):
        if all(chi.on_unit(x) == w for x, w in zip(norms, wanted)):
            rest = at_pi / FormalScalar.root(chi.on_unit(unit), p)
            for root in _formal_roots(rest, v):
                found.append(MultiplicativeCharacter(chi.group, chi.unit_exponents, root))
    found.sort(key=lambda c: c.conductor)
    return found


def classify_type(sc: SupercuspidalDihedral, level: Optional[int] = None) -> TypeClass:
    kappa3 = sc.kappa.power(3)
    if kappa3 == kappa3.sigma_conjugate():
        solutions = norm_descents(kappa3, level)
        if not solutions:
            L = level or kappa3.conductor + 1
            raise LevelTooLow(L, L + 1, "φ∘N = κ³ 无解")
        if len(solutions) != 2:
            raise ArithmeticDomainError(f"φ∘N = κ³ 应恰有两个解，实际 {len(solutions)} 个")
        return TypeClass(TYPE_III, solutions[0], solutions[1])
    twisted = sc.kappa * sc.epsilon_prime
    if kappa3 == twisted or kappa3 == twisted.sigma_conjugate():
        return TypeClass(TYPE_I)
    return TypeClass(TYPE_II)


def local_type(lp: LocalParameter) -> TypeClass:
    if lp.tag == PRINCIPAL:
        return TypeClass(TYPE_PRINCIPAL)
    if lp.tag == SPECIAL:
        return TypeClass(TYPE_SPECIAL)
    return classify_type(lp)


def phi_conductor_prediction(sc: SupercuspidalDihedral) -> Tuple[int, ...]:
    """Type III 时 a(φ) 的预测值（两个解可能的导子）"""
    K = sc.field
    kappa3 = sc.kappa.power(3)
    a3 = kappa3.conductor
    if K.kind == UNRAMIFIED:
        return (a3,)
    if a3 == 0:
        return (0, 1)
    if K.p >= 5:
        raise Inapplicable("p ≥ 5 的分歧扩张不会出现 Type III")
    if K.p == 3 and a3 > 1:
        if kappa3.restrict_to_base().is_unramified():
            return (a3 + 1,)
        return ((a3 + 1) // 2,)
    raise Inapplicable(f"{K} 上 a(κ³) = {a3} 没有预测公式")


# ============================================================
# 假设与极小性
# ============================================================

def kappa_conductor_for_level(K: LocalFieldSpec, n_p: int) -> int:
    """N_p = f·a(κ) + δ 的逆"""
    a, rest = divmod(n_p - K.delta, K.f)
    if rest or a < 1:
        raise ArithmeticDomainError(f"{K} 上不存在 N_p={n_p} 的超尖点")
    return a


def nebentypus_bound(sc: SupercuspidalDihedral) -> int:
    """C_p 的上界：非分歧 N_p/2，分歧 max(⌈a(κ)/2⌉, δ)"""
    K = sc.field
    a = sc.kappa.conductor
    if K.kind == UNRAMIFIED:
        return a
    return max(-(-a // 2), K.delta)


def minimality_violations(sc: SupercuspidalDihedral) -> List[str]:
    K = sc.field
    a = sc.kappa.conductor
    if K.kind == RAMIFIED and K.p != 2 and (a < 2 or a % 2):
        return [f"p={K.p} 分歧情形要求 a(κ) 为 ≥ 2 的偶数: a(κ)={a}"]
    return []


def hypothesis_violations(sc: SupercuspidalDihedral) -> List[str]:
    K = sc.field
    out = []
    if K.kind == UNRAMIFIED and 2 * sc.c_p == sc.n_p:
        out.append(f"H3: p={K.p} 非分歧超尖点要求 C_p ≠ N_p/2（C_p={sc.c_p}, N_p={sc.n_p}）")
    if K.kind == RAMIFIED and K.p == 2 and sc.n_p < 2 * K.delta + 1:
        out.append(f"H2: p=2 分歧超尖点要求 N_2 ≥ 2δ+1（δ={K.delta}, N_2={sc.n_p}）")
    return out


# ============================================================
# 局部导子
# ============================================================

@dataclass(frozen=True)
class ConductorRecord:
    machinery: int
    closed_form: Optional[int]
    label: str
    reason: str = ''

    @property
    def agrees(self) -> bool:
        return self.closed_form is None or self.closed_form == self.machinery

    def to_json(self) -> dict:
        return {"machinery": self.machinery, "closed_form": self.closed_form,
                "label": self.label, "reason": self.reason, "agrees": self.agrees}


def machinery_conductor(lp: LocalParameter) -> int:
    """Σ a(直和项)，特殊型再加 dim V^I − dim V^I_{N'}"""
    param = sym3_parameter(lp)
    total = sum(s.conductor for s in param.summands)
    if param.nilpotent is not None:
        dim_vi, dim_vin = invariant_dimensions(param)
        total += dim_vi - dim_vin
    return total


def _principal_closed_conductor(lp: PrincipalSeries) -> Tuple[Optional[int], str, str]:
    p, n = lp.p, lp.n_p
    order = lp.omega.order_on_units
    if n == 0:
        return None, 'principal', "要求 N_p = C_p ≥ 1"
    if p >= 5:
        if n > 1 or order > 3:
            return 3 * n, 'principal p≥5: 3N_p', ''
        return 3 * n - 1, 'principal p≥5: 3N_p−1', ''
    if p == 3:
        if n == 2 and order == 3:
            return 2 * n, 'principal p=3: 2N_3', ''
        return 3 * n - 1, 'principal p=3: 3N_3−1', ''
    if n > 3:
        return 3 * n - 1, 'principal p=2: 3N_2−1', ''
    return 2 * n, 'principal p=2: 2N_2', ''


def _special_closed_conductor(lp: Special) -> Tuple[Optional[int], str, str]:
    if not lp.mu.is_unramified():
        return None, 'special', "μ 分歧时没有闭式"
    return 3, 'special: 3', ''


def _supercuspidal_closed_conductor(lp: SupercuspidalDihedral) -> Tuple[Optional[int], str, str]:
    K = lp.field
    p, n = K.p, lp.n_p
    problems = hypothesis_violations(lp) + minimality_violations(lp)
    if problems:
        return None, 'supercuspidal', "; ".join(problems)
    if p >= 5:
        if n == 2 and lp.kappa.order_on_units == 3:
            return n, 'supercuspidal p≥5: N_p', ''
        return 2 * n, 'supercuspidal p≥5: 2N_p', ''
    if p == 3:
        return n + e_kappa_of(lp.kappa, n), 'supercuspidal p=3: N_3+e_κ', ''
    if K.kind == UNRAMIFIED and n == 2:
        return None, 'supercuspidal p=2: 2N_2', "N_2=2 时 κ³ 非分歧，2N_2 不成立"
    return 2 * n, 'supercuspidal p=2: 2N_2', ''


def local_sym3_conductor(lp: LocalParameter) -> ConductorRecord:
    closed = {
        PRINCIPAL: _principal_closed_conductor,
        SPECIAL: _special_closed_conductor,
        SUPERCUSPIDAL: _supercuspidal_closed_conductor,
    }
    value, label, reason = closed[lp.tag](lp)
    record = ConductorRecord(machinery_conductor(lp), value, label, reason)
    if not record.agrees:
        logger.warning(f"p={lp.p} {label}: 机制 {record.machinery} ≠ 闭式 {record.closed_form}")
    return record


# ============================================================
# 方差数 ε_p
# ============================================================

def select_twist(lp: LocalParameter) -> MultiplicativeCharacter:
    """奇素数取 χ_p；p=2 时超尖点 N_2=2 取 χ_2，其余取 χ_{−1}"""
    if lp.p != 2:
        return twist_character(lp.p)
    if lp.tag == SUPERCUSPIDAL and lp.n_p == 2:
        return twist_character(2, 'chi_2')
    if lp.tag == PRINCIPAL and lp.n_p < 2:
        raise Inapplicable(f"p=2 主序列要求 N_2 ≥ 2: {lp.n_p}")
    return twist_character(2, 'chi_-1')


def _product_epsilon(characters, phi: AdditiveCharacter, convention: Optional[str]) -> FormalScalar:
    value = FormalScalar(1, 0, 0, phi.field.p)
    for chi in characters:
        value = value * epsilon_factor(EpsilonInput(chi, phi), convention=convention)
    return value


def weil_deligne_epsilon(param: Sym3Parameter, phi: AdditiveCharacter,
                         convention: Optional[str] = None) -> FormalScalar:
    """
    ε(ρ, N') = ε(ρ)·det(−Frob·p^{−1/2} | V^I/V^I_{N'})

    Frob 在权 w 的直和项上作用为 μ³(p)·p^{−w}；商掉的是 ker N' 所在的那一项。
    """
    characters = [s.character for s in param.summands]
    value = _product_epsilon(characters, phi, convention)
    if param.nilpotent is None:
        return value
    p = phi.field.p
    kernel_weight = jordan_kernel_weight()
    inertia = [s for s in param.summands if s.character.is_unramified()]
    if not inertia:
        return value
    for s in inertia:
        if s.weight != kernel_weight:
            value = value * (-s.character.at_uniformizer * FormalScalar(1, Fraction(-1, 2), 0, p))
    return value


def twisted_parameter(param: Sym3Parameter, twist: MultiplicativeCharacter) -> Sym3Parameter:
    """sym³ ⊗ χ：诱导项改用 χ∘N"""
    summands = []
    for s in param.summands:
        chi = inflate_by_norm(twist, s.character.field) if s.induced else twist
        summands.append(Sym3Summand(s.character * chi, s.induced, s.weight))
    return Sym3Parameter(tuple(summands), param.nilpotent)


def definitional_variance(lp: LocalParameter, twist: Optional[MultiplicativeCharacter] = None,
                          convention: Optional[str] = None) -> FormalScalar:
    """由 ε 因子的定义逐项计算 ε(sym³⊗χ)/ε(sym³)"""
    twist = twist or select_twist(lp)
    param = sym3_parameter(lp)
    twisted = twisted_parameter(param, twist)
    if lp.tag == SUPERCUSPIDAL:
        # Ind 的 λ 常数在比值中约去
        phi = AdditiveCharacter.standard(lp.field)
        value = FormalScalar(1, 0, 0, lp.p)
        for top, bottom in zip(twisted.summands, param.summands):
            value = value * epsilon_factor(EpsilonInput(top.character, phi), convention=convention)
            value = value / epsilon_factor(EpsilonInput(bottom.character, phi), convention=convention)
        return value
    phi = AdditiveCharacter.standard(lp.base)
    return weil_deligne_epsilon(twisted, phi, convention) / weil_deligne_epsilon(param, phi, convention)


@dataclass(frozen=True, eq=False)
class GaussRatio:
    """驯顺情形下方差数的 Gauss 和比值形式：prefactor·∏G(分子)/∏G(分母)"""
    p: int
    r: int
    numerators: Tuple[FiniteFieldCharacterPair, ...]
    denominators: Tuple[FiniteFieldCharacterPair, ...]
    prefactor: FormalScalar

    def value(self) -> FormalScalar:
        v = self.prefactor
        for pair in self.numerators:
            v = v * FormalScalar(gauss_sum(pair), 0, 0, self.p)
        for pair in self.denominators:
            v = v / FormalScalar(gauss_sum(pair), 0, 0, self.p)
        return v

    def gamma_exponents(self) -> List[Tuple[int, int]]:
        """(±1, a)：G(ω^{−a}) ~ −π^a Γ_p(a/(p−1))，仅 r=1"""
        if self.r != 1:
            return []
        out = []
        for sign, pairs in ((1, self.numerators), (-1, self.denominators)):
            for pair in pairs:
                a = int(-pair.angle * (self.p - 1)) % (self.p - 1)
                if a:
                    out.append((sign, a))
        return out

    def render(self) -> str:
        if self.r == 1:
            ups = [f"Γ_{self.p}({a}/{self.p - 1})" for s, a in self.gamma_exponents() if s > 0]
            downs = [f"Γ_{self.p}({a}/{self.p - 1})" for s, a in self.gamma_exponents() if s < 0]
            body = "·".join(ups) or "1"
            if downs:
                body += " / " + "·".join(downs)
            return f"{self.prefactor} · [{body}]（Gross–Koblitz）"
        ups = "·".join(f"G(χ^{{{p.angle}}})" for p in self.numerators) or "1"
        downs = "·".join(f"G(χ^{{{p.angle}}})" for p in self.denominators) or "1"
        return f"{self.prefactor} · {ups} / {downs}（F_{self.p}²）"

    def oracle_checks(self, precision: int = 20) -> List[dict]:
        """r=1 用 Gross–Koblitz 缺陷，r=2 用 Stickelberger 与纯 Gauss 和预测"""
        checks = []
        if self.r == 1:
            precision = max(precision, 2 * (self.p - 1))
            for _, a in self.gamma_exponents():
                if self.p == 2 or not 1 <= a <= self.p - 2:
                    continue
                v, s = gross_koblitz_defect(self.p, a, precision)
                checks.append({"kind": "gross-koblitz", "a": a, "valuation": v, "sign": s,
                               "ok": v >= 0.6 * precision})
            return checks
        for pair in self.numerators + self.denominators:
            predicted, kind = stickelberger_value(self.p, pair.order), "stickelberger"
            if predicted is None:
                predicted, kind = pure_gauss_value(self.p, pair.order), "pure"
            if predicted is not None:
                checks.append({"kind": kind, "order": pair.order, "predicted": predicted,
                               "ok": gauss_sum(pair) == predicted})
        return checks

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "render": self.render(),
                "numerators": [str(p.angle) for p in self.numerators],
                "denominators": [str(p.angle) for p in self.denominators]}


def _tame_piece(theta: MultiplicativeCharacter):
    """n(φ) = −1 时导子 ≤ 1 的 ε(θ)：(标量因子, Gauss 和的特征标对或 None)"""
    field = theta.field
    if field.kind == RAMIFIED:
        raise Inapplicable("Gauss 和形式只适用于 Q_p 与非分歧扩张")
    a = theta.conductor
    if a == 0:
        return theta.at_uniformizer.inverse(), None
    if a > 1:
        raise Inapplicable(f"导子 {a} > 1，不是驯顺的")
    ff = FiniteField(field.p, field.f)
    g = field.element(*ff.generator)
    pair = FiniteFieldCharacterPair(field.p, field.f, -theta.on_unit(g))
    return FormalScalar(1, Fraction(-field.f, 2), 0, field.p), pair


def gauss_ratio(lp: LocalParameter, twist: Optional[MultiplicativeCharacter] = None) -> GaussRatio:
    twist = twist or select_twist(lp)
    param = sym3_parameter(lp)
    if param.nilpotent is not None:
        raise Inapplicable("特殊型没有 Gauss 和比值形式")
    twisted = twisted_parameter(param, twist)
    prefactor = FormalScalar(1, 0, 0, lp.p)
    nums, dens = [], []
    r = 1
    for top, bottom in zip(twisted.summands, param.summands):
        r = top.character.field.f
        factor, pair = _tame_piece(top.character)
        prefactor = prefactor * factor
        if pair is not None:
            nums.append(pair)
        factor, pair = _tame_piece(bottom.character)
        prefactor = prefactor / factor
        if pair is not None:
            dens.append(pair)
    return GaussRatio(lp.p, r, tuple(nums), tuple(dens), prefactor)


@dataclass(frozen=True, eq=False)
class ClosedVariance:
    """闭式描述：value 为代数值；tabulated 为表中写法；gauss 为 Γ_p 行的比值形式"""
    label: str
    value: Optional[FormalScalar] = None
    tabulated: Optional[FormalScalar] = None
    gauss: Optional[GaussRatio] = None
    note: str = ''

    def expected(self) -> Optional[FormalScalar]:
        if self.value is not None:
            return self.value
        if self.gauss is not None:
            return self.gauss.value()
        return None

    def matches(self, definitional: FormalScalar) -> Optional[bool]:
        expected = self.expected()
        return None if expected is None else expected == definitional

    def tabulated_matches(self) -> Optional[bool]:
        if self.tabulated is None or self.value is None:
            return None
        return self.tabulated == self.value

    def to_json(self) -> dict:
        out = {"label": self.label, "note": self.note}
        if self.value is not None:
            out["value"] = str(self.value)
        if self.tabulated is not None:
            out["tabulated"] = str(self.tabulated)
            out["tabulated_matches"] = self.tabulated_matches()
        if self.gauss is not None:
            out["gauss_ratio"] = self.gauss.to_json()
        return out


def _deligne_factor(alpha: MultiplicativeCharacter, beta: MultiplicativeCharacter,
                    phi: AdditiveCharacter) -> Optional[FormalScalar]:
    """ε(αβ)/ε(α)：β 非分歧时用 β(π)^{a(α)+n(φ)}，a(α) ≥ 2a(β) 时用 β^{−1}(c_α)"""
    if beta.is_unramified():
        return beta.at_uniformizer ** (alpha.conductor + phi.conductor)
    if alpha.conductor >= 2 * beta.conductor:
        return beta.inverse()(solve_additive_parameter(alpha, phi))
    return None


def _p2_twist_epsilon(twist: MultiplicativeCharacter, convention: str) -> FormalScalar:
    lemma = lemma_alpha_value(twist)
    return lemma if convention == 'lemma' else lemma * 2


def _principal_closed(lp: PrincipalSeries, twist, convention: str) -> ClosedVariance:
    p, n, k = lp.p, lp.n_p, lp.weight
    order = lp.omega.order_on_units
    mu1 = lp.mu1.at_uniformizer
    w = lp.omega.at_uniformizer
    phi = AdditiveCharacter.standard(lp.base)

    def deligne(*powers):
        value = FormalScalar(1, 0, 0, p)
        for j in powers:
            factor = _deligne_factor(lp.omega.power(j), twist, phi)
            if factor is None:
                raise Inapplicable(f"a(ω^{j}) 不满足 Deligne 条件")
            value = value * factor
        return value

    if p == 2:
        if n == 2:
            value = mu1 ** 8 / w ** 4
            return ClosedVariance('principal p=2, N_2=2', value, value)
        if n == 3:
            lemma_value = -(mu1 ** 4) * w ** 4 * Fraction(1, 4)
            value = lemma_value if convention == 'lemma' else mu1 ** 4 * w ** 4
            return ClosedVariance('principal p=2, N_2=3', value, lemma_value)
        if n >= 5:
            lemma_value = _p2_twist_epsilon(twist, 'lemma') * mu1 ** 6 * deligne(1, 2, 3)
            value = _p2_twist_epsilon(twist, convention) * mu1 ** 6 * deligne(1, 2, 3)
            return ClosedVariance('principal p=2, N_2≥5', value, lemma_value)
        return ClosedVariance('principal p=2, N_2=4', note="a(ω²)=3 不满足 Deligne 条件，仅有定义式")

    alpha = lemma_alpha_value(twist)
    if n == 1:
        if order in (2, 4):
            value = mu1 ** 4 / w ** 2
            if p == 3:
                tabulated = FormalScalar(1, 2 - 2 * k, 4, 3)
            elif order == 4:
                tabulated = value * FormalScalar(Fraction(1, 4), 1, 0, p)
            else:
                tabulated = value
            return ClosedVariance(f'principal N_p=1, ∘(ω̃)={order}', value, tabulated)
        return ClosedVariance(f'principal N_p=1, ∘(ω̃)={order}', gauss=gauss_ratio(lp, twist),
                              note="Γ_p 行：以 Gauss 和比值验证")
    if p >= 5:
        value = alpha * mu1 ** 3 * deligne(1, 2, 3)
        return ClosedVariance('principal p≥5, N_p>1: χ_p(c)μ₁³', value, value)
    if n == 2 and order == 3:
        value = alpha ** 2 * w ** 3 * deligne(1, 2)
        return ClosedVariance('principal p=3, ∘(ω̃)=3', value, value)
    if n == 2:
        value = mu1 ** 6 / w ** 3 * deligne(1, 2)
        return ClosedVariance('principal p=3, ∘(ω̃)=6', value, value)
    value = alpha * mu1 ** 3 * deligne(1, 2, 3)
    return ClosedVariance('principal p=3, N_3≥3', value, value)


def _special_closed(lp: Special, twist, convention: str) -> ClosedVariance:
    p, k = lp.p, lp.weight
    if not lp.mu.is_unramified():
        return ClosedVariance('special, μ 分歧', note="仅有定义式")
    # p 奇时 ε(ρ⊗χ)/ε(ρ) = μ¹²，V^I/V^I_{N'} 上的 det 为 −μ⁹
    note = "表中写法商掉的是权 1/2 的一项而非 ker N'，与精确值差一个因子 p"
    mu3 = lp.mu.at_uniformizer ** 3
    if p != 2:
        return ClosedVariance('special: −μ³(p)', -mu3, FormalScalar(-1, Fraction(8 - 3 * k, 2), 3, p), note=note)
    mu15 = lp.mu.at_uniformizer ** 15
    value = -mu15 * FormalScalar(Fraction(1, 16), 0, 0, 2) if convention == 'lemma' else -mu15
    return ClosedVariance('special p=2: −μ¹⁵(2)', value,
                          FormalScalar(-1, Fraction(24 - 15 * k, 2), 15, 2), note=note)


def cube_root_exponent(kappa: MultiplicativeCharacter) -> int:
    """K = Q_2(√−3) 上 a(κ)=1 时由 κ(ω) = ω^n 定出的 n ∈ {1, 2}"""
    K = kappa.field
    if not (K.p == 2 and K.kind == UNRAMIFIED):
        raise Inapplicable("只适用于 Q_2 的非分歧二次扩张")
    # θ² = θ − 1，ω = θ − 1
    omega = K.element(-1, 1)
    n = kappa.on_unit(omega) * 3
    if n.denominator != 1 or n % 3 == 0:
        raise Inapplicable(f"κ(ω) 不是本原三次单位根: {kappa.on_unit(omega)}")
    return int(n)


def dyadic_tame_tabulated(lp: SupercuspidalDihedral, type_name: str) -> FormalScalar:
    """表中 N_2=2 的两个值 d₁（Type I/II）与 d₂（Type III）"""
    i = CyclotomicNumber.root(4, 1)
    r2 = sqrt_prime(2)
    omega_n = CyclotomicNumber.root(3, cube_root_exponent(lp.kappa))
    gauss_twisted = -2 * i + omega_n * (-2 * r2 + 2 * r2 * i)
    at_two = lp.kappa.at_uniformizer ** 11 * lp.epsilon_prime.at_uniformizer ** 2
    if type_name == TYPE_III:
        # ω_{K/Q_2}(2) = −1
        return -at_two * FormalScalar(gauss_twisted, -5, 0, 2)
    gauss_base = -2 * r2 + (2 * r2 - 2) * i
    return at_two * FormalScalar(gauss_base * gauss_twisted, -7, 0, 2)


def _dyadic_tame_closed(lp: SupercuspidalDihedral, chi_K: MultiplicativeCharacter, type_name: str,
                        convention: str) -> ClosedVariance:
    K = lp.field
    phi_K = AdditiveCharacter.standard(K)
    kappa, eps = lp.kappa, lp.epsilon_prime
    cube = kappa.power(3)

    def eps_of(chi):
        return epsilon_factor(EpsilonInput(chi, phi_K), convention=convention)

    # ε(κ³χ')/ε(κ³) = κ³(2)^{a(χ')+n(φ)}·ε(χ')/ε(κ³)
    first = _deligne_factor(chi_K, cube, phi_K) * eps_of(chi_K) / eps_of(cube)
    # ε(κε'χ')/ε(κε') = ε'(2)^{a(κχ')−a(κ)}·ε(κχ')/ε(κ)
    second = (_deligne_factor(kappa * chi_K, eps, phi_K) / _deligne_factor(kappa, eps, phi_K)
              * eps_of(kappa * chi_K) / eps_of(kappa))
    n = cube_root_exponent(kappa)
    note = (f"κ(ω)=ω^{n}；表中 τ(κχ_2') 与 ε(χ_2') 的模不等于 q^{{a/2}}，"
            "且按 dx 归一，只作对照")
    return ClosedVariance(f'supercuspidal unramified a(κ)=1 p=2, {type_name}: ω^{n}',
                          first * second, dyadic_tame_tabulated(lp, type_name), note=note)


def _supercuspidal_closed(lp: SupercuspidalDihedral, twist, convention: str) -> ClosedVariance:
    K = lp.field
    p = K.p
    phi_K = AdditiveCharacter.standard(K)
    chi_K = inflate_by_norm(twist, K)
    summands = sym3_parameter(lp).summands
    factors = [_deligne_factor(s.character, chi_K, phi_K) for s in summands]
    typ = classify_type(lp)
    a = lp.kappa.conductor

    if any(f is None for f in factors):
        if K.kind == UNRAMIFIED and p != 2 and a == 1:
            note = "Γ_p 行：以 Gauss 和比值验证"
            if p == 3 and lp.kappa.order_on_units == 8:
                note = "∘(κ̃)=8：Stickelberger 不适用，仅有定义式与比值形式"
            return ClosedVariance(f'supercuspidal unramified a(κ)=1, {typ.name}',
                                  gauss=gauss_ratio(lp, twist), note=note)
        if K.kind == UNRAMIFIED and p == 2 and a == 1 and lp.epsilon_prime.is_unramified():
            return _dyadic_tame_closed(lp, chi_K, typ.name, convention)
        return ClosedVariance(f'supercuspidal {K.kind}, {typ.name}', note="仅有定义式")

    value = factors[0] * factors[1]
    tabulated = None
    if K.kind == UNRAMIFIED:
        label = "χ_p'(s)"
        if typ.name == TYPE_III and p != 2:
            label = "χ_p(d)·χ_p'(s₂)"
            base_phi = AdditiveCharacter.standard(K.base_field())
            f1 = _deligne_factor(typ.phi, twist, base_phi)
            f2 = _deligne_factor(typ.partner, twist, base_phi)
            if f1 is not None and f2 is not None:
                tabulated = f1 * f2 * factors[1]
        else:
            tabulated = value
    elif p != 2:
        label = "χ_p(N(π))^{a(κ³)+a(κε')}"
        if typ.name != TYPE_III:
            n_pi = K.base_field().element(K.uniformizer().norm())
            tabulated = twist(n_pi) ** (summands[0].character.conductor + summands[1].character.conductor)
    else:
        label = "1" if K.delta == 2 else "χ'_{−1}(s)"
        tabulated = FormalScalar(1, 0, 0, 2) if K.delta == 2 else value
    return ClosedVariance(f'supercuspidal {K.kind}, {typ.name}: {label}', value, tabulated)


def closed_form_variance(lp: LocalParameter, twist: Optional[MultiplicativeCharacter] = None,
                         convention: Optional[str] = None) -> ClosedVariance:
    twist = twist or select_twist(lp)
    convention = convention or ARITH_CONFIG['conventions']['p2_epsilon']
    handlers = {
        PRINCIPAL: _principal_closed,
        SPECIAL: _special_closed,
        SUPERCUSPIDAL: _supercuspidal_closed,
    }
    try:
        return handlers[lp.tag](lp, twist, convention)
    except Inapplicable as exc:
        return ClosedVariance(f'{lp.tag} p={lp.p}', note=str(exc))


@dataclass(frozen=True, eq=False)
class VarianceRecord:
    twist: MultiplicativeCharacter
    definitional: FormalScalar
    closed: ClosedVariance

    @property
    def agrees(self) -> Optional[bool]:
        return self.closed.matches(self.definitional)

    def to_json(self) -> dict:
        return {"definitional": str(self.definitional), "definitional_exact": self.definitional.to_json(),
                "closed_form": self.closed.to_json(), "agrees": self.agrees}


def variance_epsilon(lp: LocalParameter, twist: Optional[MultiplicativeCharacter] = None,
                     convention: Optional[str] = None) -> VarianceRecord:
    twist = twist or select_twist(lp)
    value = definitional_variance(lp, twist, convention)
    closed = closed_form_variance(lp, twist, convention)
    record = VarianceRecord(twist, value, closed)
    if record.agrees is False:
        logger.warning(f"p={lp.p} {closed.label}: 定义式 {value} ≠ 闭式 {closed.expected()}")
    return record


def unramified_twist_epsilon_q(q: int, p: int, conductor_valuation: int) -> int:
    """(q/p)^{val_q}"""
    if q == p or p == 2:
        raise ValueError(f"要求 q ≠ p 且 p 为奇素数: q={q}, p={p}")
    return int(sympy.legendre_symbol(q % p, p)) ** conductor_valuation


# ============================================================
# 类型可能性表
# ============================================================

# C、N 为闭区间，None 表示无上界
TYPE_TABLE = [
    {'type': TYPE_I, 'kind': UNRAMIFIED, 'C': (0, 1), 'N': (2, 2), 'primes': None, 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_I, 'kind': UNRAMIFIED, 'C': (0, 1), 'N': (4, None), 'primes': None, 'kappa_sq_trivial': None, 'possible': False},
    {'type': TYPE_I, 'kind': UNRAMIFIED, 'C': (2, None), 'N': (4, None), 'primes': None, 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_I, 'kind': RAMIFIED, 'C': (0, 1), 'N': (3, None), 'primes': None, 'kappa_sq_trivial': None, 'possible': False},
    {'type': TYPE_I, 'kind': RAMIFIED, 'C': (2, 2), 'N': (3, 3), 'primes': None, 'kappa_sq_trivial': None, 'possible': False},
    {'type': TYPE_I, 'kind': RAMIFIED, 'C': (2, None), 'N': (5, None), 'primes': None, 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_II, 'kind': None, 'C': (0, None), 'N': (2, None), 'primes': None, 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_III, 'kind': UNRAMIFIED, 'C': (0, 1), 'N': (2, 2), 'primes': 'ge5', 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_III, 'kind': UNRAMIFIED, 'C': (0, 1), 'N': (4, None), 'primes': 'ge5', 'kappa_sq_trivial': None, 'possible': False},
    {'type': TYPE_III, 'kind': UNRAMIFIED, 'C': (2, None), 'N': (4, None), 'primes': 'ge5', 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_III, 'kind': UNRAMIFIED, 'C': (0, 1), 'N': (2, 2), 'primes': 3, 'kappa_sq_trivial': True, 'possible': True},
    {'type': TYPE_III, 'kind': UNRAMIFIED, 'C': (0, 1), 'N': (2, 2), 'primes': 3, 'kappa_sq_trivial': False, 'possible': False},
    {'type': TYPE_III, 'kind': UNRAMIFIED, 'C': (0, None), 'N': (4, None), 'primes': 3, 'kappa_sq_trivial': None, 'possible': True},
    {'type': TYPE_III, 'kind': RAMIFIED, 'C': (0, None), 'N': (3, None), 'primes': 'ge5', 'kappa_sq_trivial': None, 'possible': False},
    {'type': TYPE_III, 'kind': RAMIFIED, 'C': (0, None), 'N': (3, None), 'primes': 3, 'kappa_sq_trivial': None, 'possible': True},
]


def _in_range(x: int, bounds) -> bool:
    lo, hi = bounds
    return x >= lo and (hi is None or x <= hi)


def describe_row(row: dict) -> str:
    def fmt(name, bounds):
        lo, hi = bounds
        if hi is None:
            return f"{name}≥{lo}"
        return f"{name}={lo}" if lo == hi else f"{lo}≤{name}≤{hi}"
    parts = [row['type'], row['kind'] or 'any', fmt('C_p', row['C']), fmt('N_p', row['N'])]
    if row['primes'] == 'ge5':
        parts.append('p≥5')
    elif row['primes'] == 3:
        parts.append('p=3')
    if row['kappa_sq_trivial'] is not None:
        parts.append('κ²|_O=1' if row['kappa_sq_trivial'] else 'κ²|_O≠1')
    return ", ".join(parts)


def type_table_row(type_name: str, p: int, kind: str, n_p: int, c_p: int,
                   kappa_sq_trivial: Optional[bool] = None) -> Optional[int]:
    """返回匹配的表行下标；没有匹配时返回 None"""
    if p == 2:
        raise Inapplicable("类型可能性表只覆盖奇素数")
    if not (n_p >= 2 and c_p < n_p):
        raise ArithmeticDomainError(f"不在超尖点范围: N_p={n_p}, C_p={c_p}")
    if (kind == UNRAMIFIED) != (n_p % 2 == 0):
        raise ArithmeticDomainError(f"N_p={n_p} 的奇偶性与 {kind} 不符")
    for i, row in enumerate(TYPE_TABLE):
        if row['type'] != type_name or (row['kind'] and row['kind'] != kind):
            continue
        if row['primes'] == 'ge5' and p < 5 or row['primes'] == 3 and p != 3:
            continue
        if not (_in_range(c_p, row['C']) and _in_range(n_p, row['N'])):
            continue
        if row['kappa_sq_trivial'] is not None:
            if kappa_sq_trivial is None:
                raise ArithmeticDomainError("该行需要给出 κ²|_{O_K^×} 是否平凡")
            if row['kappa_sq_trivial'] != kappa_sq_trivial:
                continue
        return i
    return None


def type_possibility(type_name: str, p: int, kind: str, n_p: int, c_p: int,
                     kappa_sq_trivial: Optional[bool] = None) -> Optional[bool]:
    """True 可能，False 不可能，None 表中未列出"""
    row = type_table_row(type_name, p, kind, n_p, c_p, kappa_sq_trivial)
    return None if row is None else TYPE_TABLE[row]['possible']


# ============================================================
# 穷举用的二面体数据
# ============================================================

def quadratic_extensions(p: int, kind: str) -> List[LocalFieldSpec]:
    if kind == UNRAMIFIED:
        return [LocalFieldSpec(p, UNRAMIFIED)]
    if p == 2:
        return [LocalFieldSpec(2, RAMIFIED, d) for d in (-1, 3, 2, -2, 6, -6)]
    u = smallest_nonresidue(p)
    return [LocalFieldSpec(p, RAMIFIED, -p), LocalFieldSpec(p, RAMIFIED, -p * u)]


def dihedral_data(K: LocalFieldSpec, conductor: int, limit: Optional[int] = None,
                  rng: Optional[random.Random] = None) -> Iterator[SupercuspidalDihedral]:
    """导子恰为 conductor 且 κ ≠ κ^σ 的 κ；limit 给定且群更大时按 rng 抽样"""
    group = build_unit_group(K, conductor)
    if limit is None or group.size <= limit:
        candidates = all_characters(group)
    else:
        rng = rng or random.Random(0)
        candidates = (
            MultiplicativeCharacter(group, tuple(Fraction(rng.randrange(d), d) for d in group.orders),
                                    FormalScalar(1, 0, 0, K.p))
            for _ in range(limit)
        )
    for kappa in candidates:
        if kappa.conductor != conductor or kappa == kappa.sigma_conjugate():
            continue
        yield SupercuspidalDihedral(kappa)


# ============================================================
# 汇总
# ============================================================

@dataclass(frozen=True, eq=False)
class LocalSym3Record:
    lp: LocalParameter
    type_class: TypeClass
    conductor: ConductorRecord
    variance: Optional[VarianceRecord]
    variance_error: str = ''

    def to_json(self) -> dict:
        return {
            "p": self.lp.p,
            "type": self.lp.tag,
            "N_p": self.lp.n_p,
            "C_p": self.lp.c_p,
            "classification": self.type_class.to_json(),
            "conductor": self.conductor.to_json(),
            "variance": self.variance.to_json() if self.variance else None,
            "variance_error": self.variance_error,
        }


def analyze_local(lp: LocalParameter, convention: Optional[str] = None) -> LocalSym3Record:
    typ = local_type(lp)
    conductor = local_sym3_conductor(lp)
    try:
        variance = variance_epsilon(lp, convention=convention)
        error = ''
    except Inapplicable as exc:
        variance, error = None, str(exc)
    return LocalSym3Record(lp, typ, conductor, variance, error)
