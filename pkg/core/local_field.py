"""
局部域模型：Q_p 及其二次扩张 K = Q_p(θ)，θ² = sθ − n

整数环 O_K = Z_p[θ]，元素以有理系数对 (a, b) 表示 a + bθ。
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import sympy

from core.cyclotomic import p_valuation

BASE = 'base'
UNRAMIFIED = 'unramified'
RAMIFIED = 'ramified'

# p=2 时的七种二次扩张 Q_2(√t)
P2_DISCRIMINANTS = {
    -3: UNRAMIFIED,
    -1: RAMIFIED, 3: RAMIFIED,
    2: RAMIFIED, -2: RAMIFIED, 6: RAMIFIED, -6: RAMIFIED,
}


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    for u in range(2, p):
        if sympy.legendre_symbol(u, p) == -1:
            return u
    raise ValueError(f"{p} 没有二次非剩余")


def modinv(x: int, m: int) -> int:
    return pow(x, -1, m)


def fraction_mod(x: Fraction, p: int, mod: int) -> int:
    """p-整有理数在 Z/mod 中的像，mod 为 p 的幂"""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} 不是 {p}-整的")
    return x.numerator * modinv(x.denominator % mod, mod) % mod if mod > 1 else 0


@dataclass(frozen=True)
class LocalFieldSpec:
    """Q_p（kind='base'）或二次扩张 Q_p(√d)"""
    p: int
    kind: str = BASE
    d: int = 0

    def __post_init__(self):
        if not sympy.isprime(self.p):
            raise ValueError(f"{self.p} 不是素数")
        if self.kind not in (BASE, UNRAMIFIED, RAMIFIED):
            raise ValueError(f"未知的域类型: {self.kind}")
        if self.kind == BASE:
            object.__setattr__(self, 'd', 0)
            return
        if self.p == 2:
            d = self.d if self.d else (-3 if self.kind == UNRAMIFIED else -1)
            if P2_DISCRIMINANTS.get(d) != self.kind:
                raise ValueError(f"Q_2(√{d}) 不是 {self.kind} 扩张")
            object.__setattr__(self, 'd', d)
            return
        u = smallest_nonresidue(self.p)
        if self.kind == UNRAMIFIED:
            object.__setattr__(self, 'd', u)
        else:
            d = self.d if self.d else -self.p
            if d not in (-self.p, -self.p * u):
                raise ValueError(f"奇素数分歧扩张的 d 须为 {-self.p} 或 {-self.p * u}: {d}")
            object.__setattr__(self, 'd', d)

    # ---------- 基本不变量 ----------
    @property
    def e(self) -> int:
        return 2 if self.kind == RAMIFIED else 1

    @property
    def f(self) -> int:
        return 2 if self.kind == UNRAMIFIED else 1

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def degree(self) -> int:
        return 1 if self.kind == BASE else 2

    @property
    def delta(self) -> int:
        """判别式赋值"""
        if self.kind != RAMIFIED:
            return 0
        if self.p != 2:
            return 1
        return 2 if self.d in (-1, 3) else 3

    @property
    def min_poly(self) -> Tuple[int, int]:
        """(s, n)：θ² = sθ − n"""
        if self.kind == BASE:
            return 0, 0
        if self.p == 2:
            if self.kind == UNRAMIFIED:
                return 1, 1
            if self.d in (-1, 3):
                return 2, 1 - self.d
        return 0, -self.d

    def residue_basis(self) -> list:
        if self.kind == UNRAMIFIED:
            return [self.one(), self.theta()]
        return [self.one()]

    def base_field(self) -> 'LocalFieldSpec':
        return LocalFieldSpec(self.p)

    # ---------- 元素 ----------
    def element(self, a, b=0) -> 'LocalElement':
        return LocalElement(self, Fraction(a), Fraction(b))

    def one(self) -> 'LocalElement':
        return self.element(1)

    def theta(self) -> 'LocalElement':
        if self.kind == BASE:
            raise ValueError("Q_p 没有 θ")
        return self.element(0, 1)

    def uniformizer(self) -> 'LocalElement':
        return self.theta() if self.kind == RAMIFIED else self.element(self.p)

    def uniformizer_power(self, j: int) -> 'LocalElement':
        return self.uniformizer() ** j

    # ---------- 剩余类键 ----------
    def key_moduli(self, t: int) -> Tuple[int, int]:
        """O/𝔭^t 的坐标模数"""
        p = self.p
        if self.kind == BASE:
            return p ** t, 1
        if self.kind == UNRAMIFIED:
            return p ** t, p ** t
        return p ** ((t + 1) // 2), p ** (t // 2)

    def reduce(self, x: 'LocalElement', t: int) -> Tuple[int, int]:
        """整元 x 在 O/𝔭^t 中的键"""
        ma, mb = self.key_moduli(t)
        return fraction_mod(x.a, self.p, ma), fraction_mod(x.b, self.p, mb)

    def from_key(self, key: Tuple[int, int]) -> 'LocalElement':
        return self.element(key[0], key[1])

    def key_is_unit(self, key: Tuple[int, int]) -> bool:
        if self.kind == UNRAMIFIED:
            return key[0] % self.p != 0 or key[1] % self.p != 0
        return key[0] % self.p != 0

    def key_mul(self, x: Tuple[int, int], y: Tuple[int, int], t: int) -> Tuple[int, int]:
        s, n = self.min_poly
        a, b = x
        c, e = y
        ma, mb = self.key_moduli(t)
        return (a * c - n * b * e) % ma, (a * e + b * c + s * b * e) % mb

    def unit_keys(self, t: int):
        """O^×/U^t 的全部代表元（按字典序）"""
        ma, mb = self.key_moduli(t)
        for a in range(ma):
            for b in range(mb):
                if self.key_is_unit((a, b)):
                    yield a, b

    def unit_group_order(self, t: int) -> int:
        p = self.p
        if t < 1:
            return 1
        if self.kind == UNRAMIFIED:
            return (p * p - 1) * p ** (2 * (t - 1))
        return (p - 1) * p ** (t - 1)

    def __str__(self):
        if self.kind == BASE:
            return f"Q_{self.p}"
        return f"Q_{self.p}(√{self.d})[{self.kind}]"


@dataclass(frozen=True)
class LocalElement:
    """K 中元素 a + bθ"""
    field: LocalFieldSpec
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def _coerce(self, other) -> 'LocalElement':
        if isinstance(other, LocalElement):
            if other.field != self.field:
                raise ValueError(f"域不一致: {self.field} 与 {other.field}")
            return other
        return self.field.element(other)

    def __add__(self, other):
        other = self._coerce(other)
        return LocalElement(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return LocalElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        s, n = self.field.min_poly
        a, b, c, e = self.a, self.b, other.a, other.b
        return LocalElement(self.field, a * c - n * b * e, a * e + b * c + s * b * e)

    __rmul__ = __mul__

    def conjugate(self) -> 'LocalElement':
        """σ(a + bθ) = (a + sb) − bθ"""
        s, _ = self.field.min_poly
        return LocalElement(self.field, self.a + s * self.b, -self.b)

    def norm(self) -> Fraction:
        if self.field.kind == BASE:
            return self.a
        s, n = self.field.min_poly
        return self.a * self.a + s * self.a * self.b + n * self.b * self.b

    def trace(self) -> Fraction:
        if self.field.kind == BASE:
            return self.a
        s, _ = self.field.min_poly
        return 2 * self.a + s * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def inverse(self) -> 'LocalElement':
        if self.is_zero():
            raise ZeroDivisionError("局部域零元不可逆")
        if self.field.kind == BASE:
            return LocalElement(self.field, 1 / self.a, Fraction(0))
        n = self.norm()
        c = self.conjugate()
        return LocalElement(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def valuation(self) -> int:
        """v_K，以 π_K 为单位"""
        v = p_valuation(self.norm(), self.field.p)
        return v // self.field.f if self.field.kind != RAMIFIED else v

    def unit_part(self) -> 'LocalElement':
        return self / self.field.uniformizer_power(self.valuation())

    def __str__(self):
        if self.field.kind == BASE or self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}θ"


def additive_angle(scale: Fraction, field: LocalFieldSpec, x: LocalElement) -> Fraction:
    """{scale · Tr(x)}_p，分母为 p 的幂"""
    y = Fraction(scale) * x.trace()
    p = field.p
    if y == 0:
        return Fraction(0)
    den = y.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if k == 0:
        return Fraction(0)
    mod = p ** k
    r = y.numerator * modinv(den % mod, mod) % mod
    return Fraction(r, mod)
