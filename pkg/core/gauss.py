"""
有限域上的经典 Gauss 和：精确分圆值、Davenport–Hasse 与 Stickelberger 检验
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import sympy

from config.arith_config import ARITH_CONFIG
from core.cyclotomic import CyclotomicNumber
from core.errors import Inapplicable
from core.local_field import smallest_nonresidue

Elem = Tuple[int, int]


class FiniteField:
    """F_p（r=1）或 F_{p²} = F_p[x]/(x² − sx + n)（r=2）"""

    def __init__(self, p: int, r: int = 1):
        if r not in (1, 2):
            raise ValueError(f"只支持 r ∈ {{1, 2}}: {r}")
        self.p = p
        self.r = r
        self.q = p ** r
        if r == 2:
            # 奇素数取 x² − u，p=2 取 x² + x + 1
            self.s, self.n = (-1, 1) if p == 2 else (0, -smallest_nonresidue(p))
        else:
            self.s, self.n = 0, 0

    def mul(self, x: Elem, y: Elem) -> Elem:
        p = self.p
        a, b = x
        c, d = y
        return (a * c - self.n * b * d) % p, (a * d + b * c + self.s * b * d) % p

    def pow(self, x: Elem, k: int) -> Elem:
        result = (1, 0)
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def trace(self, x: Elem) -> int:
        if self.r == 1:
            return x[0] % self.p
        return (2 * x[0] + self.s * x[1]) % self.p

    def norm(self, x: Elem) -> int:
        if self.r == 1:
            return x[0] % self.p
        a, b = x
        return (a * a + self.s * a * b + self.n * b * b) % self.p

    def units(self):
        for a in range(self.p):
            for b in range(self.p if self.r == 2 else 1):
                if (a, b) != (0, 0):
                    yield a, b

    @property
    def generator(self) -> Elem:
        return _generator(self.p, self.r)

    def powers(self) -> list:
        """[g^0, g^1, ..., g^{q−2}]"""
        return list(_powers(self.p, self.r))

    def dlog_table(self) -> Dict[Elem, int]:
        return {x: k for k, x in enumerate(self.powers())}


@lru_cache(maxsize=None)
def _generator(p: int, r: int) -> Elem:
    if r == 1:
        return int(sympy.primitive_root(p)), 0
    field = FiniteField(p, r)
    order = field.q - 1
    primes = list(sympy.factorint(order))
    for x in field.units():
        if all(field.pow(x, order // ell) != (1, 0) for ell in primes):
            return x
    raise ArithmeticError(f"F_{field.q} 没有本原元")


@lru_cache(maxsize=None)
def _powers(p: int, r: int) -> Tuple[Elem, ...]:
    field = FiniteField(p, r)
    g = field.generator
    out, x = [], (1, 0)
    for _ in range(field.q - 1):
        out.append(x)
        x = field.mul(x, g)
    return tuple(out)


@dataclass(frozen=True)
class FiniteFieldCharacterPair:
    """χ(g^k) = e^{2πi·angle·k}，ψ(x) = ζ_p^{Tr(βx)}"""
    p: int
    r: int
    angle: Fraction
    beta: Elem = (1, 0)

    def __post_init__(self):
        object.__setattr__(self, 'angle', Fraction(self.angle) % 1)
        q = self.p ** self.r
        if (q - 1) % self.angle.denominator:
            raise ValueError(f"χ 的阶 {self.angle.denominator} 不整除 q−1 = {q - 1}")

    @property
    def field(self) -> FiniteField:
        return FiniteField(self.p, self.r)

    @property
    def order(self) -> int:
        return self.angle.denominator

    def is_trivial(self) -> bool:
        return self.angle == 0

    def psi_trivial(self) -> bool:
        return tuple(c % self.p for c in self.beta) == (0, 0)

    def conjugate(self) -> 'FiniteFieldCharacterPair':
        return FiniteFieldCharacterPair(self.p, self.r, -self.angle, self.beta)

    def chi_at(self, x: Elem) -> Fraction:
        return self.angle * self.field.dlog_table()[x] % 1


def gauss_sum(pair: FiniteFieldCharacterPair) -> CyclotomicNumber:
    """G(χ, ψ) = Σ_{x∈F_q^×} χ(x)ψ(x)"""
    field = pair.field
    if field.q > ARITH_CONFIG['max_gauss_field']:
        raise Inapplicable(f"q = {field.q} 超出 Gauss 和上限")
    terms = Counter()
    for k, x in enumerate(field.powers()):
        tr = field.trace(field.mul(pair.beta, x))
        terms[pair.angle * k + Fraction(tr, field.p)] += 1
    return CyclotomicNumber.from_angles(terms)


def canonical_pair(p: int, r: int, order: int, k: int = 1) -> FiniteFieldCharacterPair:
    """阶为 order 的特征标 χ(g) = e^{2πik/order}，配规范加法特征标"""
    return FiniteFieldCharacterPair(p, r, Fraction(k, order))


def lift_pair(pair: FiniteFieldCharacterPair) -> FiniteFieldCharacterPair:
    """(χ∘N, ψ∘Tr) 从 F_p 提升到 F_{p²}"""
    if pair.r != 1:
        raise ValueError("只能从 F_p 提升")
    big = FiniteField(pair.p, 2)
    norm_g = big.norm(big.generator)
    j = pair.field.dlog_table()[(norm_g, 0)]
    return FiniteFieldCharacterPair(pair.p, 2, pair.angle * j, (pair.beta[0] % pair.p, 0))


def davenport_hasse_defect(pair: FiniteFieldCharacterPair) -> CyclotomicNumber:
    """G(χ', ψ') − (−1)^{r−1} G(χ, ψ)^r，r = 2"""
    if pair.is_trivial():
        raise Inapplicable("平凡特征标不适用 Davenport–Hasse")
    return gauss_sum(lift_pair(pair)) + gauss_sum(pair) ** 2


def stickelberger_value(p: int, m: int) -> Optional[int]:
    """
    F_{p²} 上阶为 m | p+1 的特征标 Gauss 和的预测值

    m 奇且 p ≡ 1 (mod 4) → +p；m 偶且 (p+1)/m 奇 → −p；其余返回 None
    """
    if m <= 1 or (p + 1) % m:
        return None
    if m % 2 and p % 4 == 1:
        return p
    if m % 2 == 0 and ((p + 1) // m) % 2:
        return -p
    return None


def pure_gauss_value(p: int, m: int) -> Optional[int]:
    """
    F_{p²} 上阶为 m | p+1 (m > 1) 的特征标配规范 ψ 的 Gauss 和

    p 奇为 (−1)^{(p+1)/m}·p，p=2 为 2；m 不满足条件时返回 None
    """
    if m <= 1 or (p + 1) % m:
        return None
    if p == 2:
        return p
    return (-1) ** ((p + 1) // m) * p
