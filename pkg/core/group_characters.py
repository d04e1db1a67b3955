"""
单位群 O^×/U^t 的有限阿贝尔群模型与乘法/加法特征标
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product as iproduct
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import sympy

from config.arith_config import ARITH_CONFIG
from core.cyclotomic import FormalScalar, lcm, normalize_angle, p_valuation
from core.errors import EnumerationTooLarge, LevelTooLow
from core.local_field import BASE, LocalElement, LocalFieldSpec, additive_angle


Key = Tuple[int, int]


# ============================================================
# Smith 标准形
# ============================================================

def smith_normal_form(matrix: Sequence[Sequence[int]]):
    """
    整数矩阵 Smith 标准形

    返回 (D, P, Q, Q_inv)，满足 P·A·Q = D，D 对角且 d_1 | d_2 | ...
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    P = [[int(i == j) for j in range(m)] for i in range(m)]
    Q = [[int(i == j) for j in range(n)] for i in range(n)]
    Qi = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        P[i], P[k] = P[k], P[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in Q:
            row[j], row[k] = row[k], row[j]
        Qi[j], Qi[k] = Qi[k], Qi[j]

    def add_row(target, src, c):
        # row_target += c·row_src
        A[target] = [x + c * y for x, y in zip(A[target], A[src])]
        P[target] = [x + c * y for x, y in zip(P[target], P[src])]

    def add_col(target, src, c):
        # col_target += c·col_src
        for row in A:
            row[target] += c * row[src]
        for row in Q:
            row[target] += c * row[src]
        Qi[src] = [x - c * y for x, y in zip(Qi[src], Qi[target])]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            a = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // a))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // a))
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % a), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            P[t] = [-x for x in P[t]]
    return A, P, Q, Qi


# ============================================================
# 单位群模型
# ============================================================

class UnitGroupModel:
    """O^×/U^t，SNF 分解后的生成元与离散对数表"""

    def __init__(self, field: LocalFieldSpec, level: int, generators: List[Key],
                 orders: List[int], table: Dict[Key, Tuple[int, ...]]):
        self.field = field
        self.level = level
        self.generators = generators
        self.orders = orders
        self._table = table

    @property
    def size(self) -> int:
        size = 1
        for d in self.orders:
            size *= d
        return size

    @property
    def exponent(self) -> int:
        e = 1
        for d in self.orders:
            e = lcm(e, d)
        return e

    def __eq__(self, other):
        return isinstance(other, UnitGroupModel) and (self.field, self.level) == (other.field, other.level)

    def __hash__(self):
        return hash((self.field, self.level))

    def __repr__(self):
        return f"UnitGroupModel({self.field}, t={self.level}, {self.orders})"

    def keys(self):
        return self._table.keys()

    def key_of(self, x: LocalElement) -> Key:
        return self.field.reduce(x, self.level)

    def dlog(self, key: Key) -> Tuple[int, ...]:
        return self._table[key]

    def dlog_element(self, x: LocalElement) -> Tuple[int, ...]:
        return self._table[self.key_of(x)]

    def mul(self, x: Key, y: Key) -> Key:
        return self.field.key_mul(x, y, self.level)

    def power(self, x: Key, k: int) -> Key:
        k %= self.size
        result = self.field.reduce(self.field.one(), self.level)
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def filtration_generators(self, j: int) -> List[Key]:
        """U^j/U^t 的生成元 1 + π^j·r（j ≥ 1）；j = 0 时返回整个群的生成元"""
        if j == 0:
            return list(self.generators)
        if j >= self.level:
            return []
        pi_j = self.field.uniformizer_power(j)
        return [self.key_of(self.field.one() + pi_j * r) for r in self.field.residue_basis()]


@lru_cache(maxsize=64)
def build_unit_group(field: LocalFieldSpec, level: int, cap: Optional[int] = None) -> UnitGroupModel:
    """枚举 O^×/U^t 并做 Smith 分解"""
    if level < 1:
        raise ValueError(f"层级必须 ≥ 1: {level}")
    cap = cap or ARITH_CONFIG['enumeration_cap']
    order = field.unit_group_order(level)
    if order > cap:
        raise EnumerationTooLarge(order, cap)

    one = field.reduce(field.one(), level)
    span: Dict[Key, Tuple[int, ...]] = {one: ()}
    greedy: List[Key] = []
    relations: List[Tuple[int, Tuple[int, ...]]] = []

    for cand in field.unit_keys(level):
        if cand in span:
            continue
        power, m = cand, 1
        while power not in span:
            power = field.key_mul(power, cand, level)
            m += 1
        relations.append((m, span[power]))
        greedy.append(cand)
        grown: Dict[Key, Tuple[int, ...]] = {}
        step = one
        for j in range(m):
            for h, vec in span.items():
                grown[field.key_mul(h, step, level)] = vec + (j,)
            step = field.key_mul(step, cand, level)
        span = grown

    r = len(greedy)
    R = []
    for k, (m, vec) in enumerate(relations):
        row = [-v for v in vec] + [0] * (r - len(vec))
        row[k] = m
        R.append(row)
    if len(span) != order:
        raise ArithmeticError(f"{field} 层级 {level}: 枚举得到 {len(span)} 个元素，应为 {order}")

    if r == 0:
        return UnitGroupModel(field, level, [], [], {one: ()})

    D, _, Q, Qi = smith_normal_form(R)
    # 不变因子从大到小排列，首个生成元携带剩余域乘法群
    kept = [j for j in reversed(range(r)) if D[j][j] > 1]
    orders = [D[j][j] for j in kept]

    generators = []
    for j in kept:
        key = one
        for i in range(r):
            e = Qi[j][i] % order
            if e:
                key = field.key_mul(key, _key_power(field, greedy[i], e, level), level)
        generators.append(key)

    table = {}
    for key, x in span.items():
        table[key] = tuple(sum(x[i] * Q[i][j] for i in range(r)) % D[j][j] for j in kept)
    return UnitGroupModel(field, level, generators, orders, table)


def _key_power(field: LocalFieldSpec, key: Key, k: int, level: int) -> Key:
    result = field.reduce(field.one(), level)
    while k:
        if k & 1:
            result = field.key_mul(result, key, level)
        key = field.key_mul(key, key, level)
        k >>= 1
    return result


# ============================================================
# 乘法特征标
# ============================================================

@dataclass(frozen=True, eq=False)
class MultiplicativeCharacter:
    """K^× 的特征标：单位部分由 SNF 指数给出，外加在 π_K 处的形式值"""
    group: UnitGroupModel
    unit_exponents: Tuple[Fraction, ...]
    at_uniformizer: FormalScalar

    def __post_init__(self):
        exps = tuple(normalize_angle(e) for e in self.unit_exponents)
        if len(exps) != len(self.group.orders):
            raise ValueError(f"指数个数 {len(exps)} 与生成元个数 {len(self.group.orders)} 不符")
        for e, d in zip(exps, self.group.orders):
            if d % e.denominator:
                raise ValueError(f"指数 {e} 的分母不整除循环阶 {d}")
        object.__setattr__(self, 'unit_exponents', exps)
        object.__setattr__(self, 'at_uniformizer', FormalScalar.coerce(self.at_uniformizer, self.field.p))

    @property
    def field(self) -> LocalFieldSpec:
        return self.group.field

    @property
    def level(self) -> int:
        return self.group.level

    # ---------- 求值 ----------
    def unit_angle(self, key: Key) -> Fraction:
        y = self.group.dlog(key)
        return normalize_angle(sum((c * e for c, e in zip(y, self.unit_exponents)), Fraction(0)))

    def on_unit(self, x: LocalElement) -> Fraction:
        return self.unit_angle(self.group.key_of(x))

    def __call__(self, x) -> FormalScalar:
        if not isinstance(x, LocalElement):
            x = self.field.element(x)
        v = x.valuation()
        angle = self.on_unit(x / self.field.uniformizer_power(v)) if self.group.orders else Fraction(0)
        return (self.at_uniformizer ** v) * FormalScalar.root(angle, self.field.p)

    # ---------- 不变量 ----------
    def is_unramified(self) -> bool:
        return not any(self.unit_exponents)

    @cached_property
    def conductor(self) -> int:
        """使 χ 在 U^s 上平凡的最小 s"""
        if self.is_unramified():
            return 0
        top = 0
        for j in range(1, self.level):
            if any(self.unit_angle(g) for g in self.group.filtration_generators(j)):
                top = j
        return top + 1

    @property
    def order_on_units(self) -> int:
        o = 1
        for e in self.unit_exponents:
            o = lcm(o, e.denominator)
        return o

    # ---------- 运算 ----------
    def power(self, k: int) -> 'MultiplicativeCharacter':
        return MultiplicativeCharacter(self.group, tuple(k * e for e in self.unit_exponents),
                                       self.at_uniformizer ** k)

    def inverse(self) -> 'MultiplicativeCharacter':
        return self.power(-1)

    def product(self, other: 'MultiplicativeCharacter') -> 'MultiplicativeCharacter':
        a, b = _common_level(self, other)
        return MultiplicativeCharacter(a.group, tuple(x + y for x, y in zip(a.unit_exponents, b.unit_exponents)),
                                       a.at_uniformizer * b.at_uniformizer)

    __mul__ = product

    def __truediv__(self, other):
        return self.product(other.inverse())

    def change_level(self, level: int) -> 'MultiplicativeCharacter':
        """在另一层级的单位群上重建（要求层级 ≥ 导子）"""
        if level == self.level:
            return self
        if level < self.conductor:
            raise LevelTooLow(level, self.conductor, "低于导子")
        group = build_unit_group(self.field, level)
        exps = tuple(self.on_unit(self.field.from_key(g)) for g in group.generators)
        return MultiplicativeCharacter(group, exps, self.at_uniformizer)

    inflate = change_level

    def __eq__(self, other):
        if not isinstance(other, MultiplicativeCharacter) or other.field != self.field:
            return NotImplemented
        a, b = _common_level(self, other)
        return a.unit_exponents == b.unit_exponents and a.at_uniformizer == b.at_uniformizer

    __hash__ = None

    def equal_on_units(self, other: 'MultiplicativeCharacter') -> bool:
        a, b = _common_level(self, other)
        return a.unit_exponents == b.unit_exponents

    def sigma_conjugate(self) -> 'MultiplicativeCharacter':
        """κ^σ = κ∘σ"""
        if self.field.kind == BASE:
            return self
        exps = tuple(self.on_unit(self.field.from_key(g).conjugate()) for g in self.group.generators)
        pi = self.field.uniformizer()
        at_pi = self.at_uniformizer * FormalScalar.root(self.on_unit(pi.conjugate() / pi), self.field.p)
        return MultiplicativeCharacter(self.group, exps, at_pi)

    def restrict_to_base(self) -> 'MultiplicativeCharacter':
        """κ|_{Q_p^×}"""
        if self.field.kind == BASE:
            return self
        base = self.field.base_field()
        group = build_unit_group(base, max(1, -(-self.level // self.field.e)))
        exps = tuple(self.on_unit(self.field.element(g[0])) for g in group.generators)
        return MultiplicativeCharacter(group, exps, self(self.field.element(self.field.p)))

    def to_json(self) -> dict:
        f = self.field
        field_json = {"p": f.p, "kind": f.kind}
        if f.kind != BASE:
            field_json["d"] = f.d
        return {
            "field": field_json,
            "level": self.level,
            "unit_exponents": [[e.numerator, e.denominator] for e in self.unit_exponents],
            "at_uniformizer": self.at_uniformizer.to_json(),
        }

    def __repr__(self):
        exps = ", ".join(str(e) for e in self.unit_exponents)
        return f"χ[{self.field}, t={self.level}, ({exps}), π↦{self.at_uniformizer}]"


def _common_level(a: MultiplicativeCharacter, b: MultiplicativeCharacter):
    if a.field != b.field:
        raise ValueError(f"特征标定义在不同的域上: {a.field} 与 {b.field}")
    t = max(a.level, b.level)
    return a.change_level(t), b.change_level(t)


def character_from_function(group: UnitGroupModel, angle_of, at_uniformizer=1) -> MultiplicativeCharacter:
    """由生成元上的角度函数构造特征标"""
    exps = tuple(angle_of(group.field.from_key(g)) for g in group.generators)
    return MultiplicativeCharacter(group, exps, FormalScalar.coerce(at_uniformizer, group.field.p))


def trivial_character(field: LocalFieldSpec, level: int = 1, at_uniformizer=1) -> MultiplicativeCharacter:
    group = build_unit_group(field, level)
    return MultiplicativeCharacter(group, tuple(Fraction(0) for _ in group.orders),
                                   FormalScalar.coerce(at_uniformizer, field.p))


def unramified_character(field: LocalFieldSpec, at_uniformizer, level: int = 1) -> MultiplicativeCharacter:
    return trivial_character(field, level, at_uniformizer)


def all_characters(group: UnitGroupModel, at_uniformizer=1) -> Iterator[MultiplicativeCharacter]:
    """群上全部特征标（单位部分），π 处取给定值"""
    at = FormalScalar.coerce(at_uniformizer, group.field.p)
    for ks in iproduct(*(range(d) for d in group.orders)):
        yield MultiplicativeCharacter(group, tuple(Fraction(k, d) for k, d in zip(ks, group.orders)), at)


# ============================================================
# 二次特征标（Hilbert 符号）
# ============================================================

def hilbert_symbol(x, y, p: int) -> int:
    """Q_p 上的 Hilbert 符号 (x, y)_p"""
    x, y = Fraction(x), Fraction(y)
    a, b = p_valuation(x, p), p_valuation(y, p)
    u = x / Fraction(p) ** a
    v = y / Fraction(p) ** b
    if p != 2:
        ui = u.numerator * pow(u.denominator, -1, p) % p
        vi = v.numerator * pow(v.denominator, -1, p) % p
        sign = -1 if (a * b * ((p - 1) // 2)) % 2 else 1
        lu = int(sympy.legendre_symbol(ui, p)) if b % 2 else 1
        lv = int(sympy.legendre_symbol(vi, p)) if a % 2 else 1
        return sign * lu * lv
    ui = u.numerator * pow(u.denominator, -1, 8) % 8
    vi = v.numerator * pow(v.denominator, -1, 8) % 8
    e = ((ui - 1) // 2) * ((vi - 1) // 2) + a * ((vi * vi - 1) // 8) + b * ((ui * ui - 1) // 8)
    return -1 if e % 2 else 1


def quadratic_character(p: int, d: int, level: Optional[int] = None) -> MultiplicativeCharacter:
    """x ↦ (x, d)_p，Q_p(√d)/Q_p 对应的二次特征标"""
    field = LocalFieldSpec(p)
    level = level or (3 if p == 2 else 1)
    group = build_unit_group(field, level)
    return character_from_function(
        group,
        lambda x: Fraction(0) if hilbert_symbol(x.a, d, p) == 1 else Fraction(1, 2),
        hilbert_symbol(p, d, p),
    )


def local_class_character(field: LocalFieldSpec, level: Optional[int] = None) -> MultiplicativeCharacter:
    """ω_{K/Q_p}"""
    return quadratic_character(field.p, field.d, level)


# p=2 的二次扭转族
TWIST_DISCRIMINANTS = {'chi_-1': -1, 'chi_2': 2, 'chi_-2': -2}


def twist_character(p: int, name: Optional[str] = None, level: Optional[int] = None) -> MultiplicativeCharacter:
    """χ_p（奇素数）或 χ_{-1}, χ_2, χ_{-2}（p=2），均满足在 p 处取值 1"""
    if p != 2:
        return quadratic_character(p, -p, level)
    if name not in TWIST_DISCRIMINANTS:
        raise ValueError(f"p=2 的扭转特征标须为 {sorted(TWIST_DISCRIMINANTS)}: {name}")
    return quadratic_character(2, TWIST_DISCRIMINANTS[name], level)


def inflate_by_norm(chi: MultiplicativeCharacter, K: LocalFieldSpec,
                    level: Optional[int] = None) -> MultiplicativeCharacter:
    """χ∘N_{K/Q_p}，导子由 Tunnel 公式 f·a(χ∘N) = a(χ) + a(χω) − a(ω) 决定"""
    if chi.field.kind != BASE or chi.field.p != K.p:
        raise ValueError(f"{chi.field} 上的特征标不能沿 {K} 的范数拉回")
    omega = local_class_character(K)
    total = chi.conductor + chi.product(omega).conductor - omega.conductor
    predicted = total // K.f
    if level is None:
        level = max(1, predicted)
    elif level < predicted:
        raise LevelTooLow(level, predicted, "χ∘N 的导子")
    group = build_unit_group(K, level)
    base = chi.field
    exps = tuple(chi.on_unit(base.element(K.from_key(g).norm())) for g in group.generators)
    at_pi = chi(base.element(K.uniformizer().norm()))
    return MultiplicativeCharacter(group, exps, at_pi)


def tunnel_prediction(chi: MultiplicativeCharacter, K: LocalFieldSpec) -> int:
    omega = local_class_character(K)
    return (chi.conductor + chi.product(omega).conductor - omega.conductor) // K.f


def nebentypus_from_kappa(kappa: MultiplicativeCharacter) -> MultiplicativeCharacter:
    """ε_p = (κ|_{Q_p^×}·ω_{K/Q_p})^{-1}"""
    return kappa.restrict_to_base().product(local_class_character(kappa.field)).inverse()


def epsilon_prime(kappa: MultiplicativeCharacter) -> MultiplicativeCharacter:
    """ε_p' := κ·κ^σ，使 κ^σ = κ^{-1}ε_p' 成立"""
    return kappa.product(kappa.sigma_conjugate())


# ============================================================
# 加法特征标
# ============================================================

@dataclass(frozen=True)
class AdditiveCharacter:
    """x ↦ e^{2πi{scale·Tr(x)}_p}"""
    field: LocalFieldSpec
    scale: Fraction

    @classmethod
    def standard(cls, field: LocalFieldSpec, base_conductor: Optional[int] = None) -> 'AdditiveCharacter':
        n = ARITH_CONFIG['conventions']['additive_conductor'] if base_conductor is None else base_conductor
        return cls(field, Fraction(field.p) ** n)

    @property
    def conductor(self) -> int:
        """n(φ_K) = e·val_p(scale) + δ"""
        return self.field.e * p_valuation(self.scale, self.field.p) + self.field.delta

    def twisted(self, a: LocalElement) -> 'AdditiveCharacter':
        """φ_a(x) = φ(ax)，仅支持 a ∈ Q_p^×"""
        if a.b:
            raise ValueError("只支持基域中的缩放元")
        return AdditiveCharacter(self.field, self.scale * a.a)

    def __call__(self, x: LocalElement) -> Fraction:
        return eval_additive(self, x)


def eval_additive(phi: AdditiveCharacter, x) -> Fraction:
    if not isinstance(x, LocalElement):
        x = phi.field.element(x)
    return additive_angle(phi.scale, phi.field, x)
