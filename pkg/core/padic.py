"""
截断 p 进整数、Teichmüller 提升、Morita p 进 Γ 函数，
以及 Gross–Koblitz 验证所用的全分歧环 Z_p[π]/(π^{p−1} + p)
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Tuple

from core.errors import Inapplicable, PrecisionError
from core.local_field import fraction_mod


@dataclass(frozen=True)
class PAdicInt:
    """Z_p / p^m 中的元素"""
    p: int
    precision: int
    residue: int

    def __post_init__(self):
        object.__setattr__(self, 'residue', self.residue % self.modulus)

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    @classmethod
    def from_rational(cls, x, p: int, precision: int) -> 'PAdicInt':
        return cls(p, precision, fraction_mod(Fraction(x), p, p ** precision))

    def _coerce(self, other) -> 'PAdicInt':
        if isinstance(other, PAdicInt):
            if other.p != self.p:
                raise ValueError(f"素数不一致: {self.p} 与 {other.p}")
            return other
        return PAdicInt.from_rational(other, self.p, self.precision)

    def _prec(self, other: 'PAdicInt') -> int:
        return min(self.precision, other.precision)

    def __add__(self, other):
        other = self._coerce(other)
        return PAdicInt(self.p, self._prec(other), self.residue + other.residue)

    __radd__ = __add__

    def __neg__(self):
        return PAdicInt(self.p, self.precision, -self.residue)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return PAdicInt(self.p, self._prec(other), self.residue * other.residue)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def inverse(self) -> 'PAdicInt':
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} 不是单位")
        return PAdicInt(self.p, self.precision, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PAdicInt(self.p, self.precision, pow(self.residue, k, self.modulus))

    def valuation(self) -> int:
        """精度内的赋值；为零时返回 precision"""
        r, v = self.residue, 0
        if r == 0:
            return self.precision
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, PAdicInt):
            return NotImplemented
        m = self._prec(other)
        return self.p == other.p and (self.residue - other.residue) % (self.p ** m) == 0

    def __hash__(self):
        return hash((self.p, self.precision, self.residue))

    def __repr__(self):
        return f"{self.residue} (mod {self.p}^{self.precision})"


def teichmuller(x: int, p: int, precision: int) -> PAdicInt:
    """≡ x (mod p) 的 (p−1) 次单位根，迭代 x ↦ x^p"""
    if not 1 <= x <= p - 1:
        raise ValueError(f"Teichmüller 提升要求 1 ≤ x ≤ p−1: {x}")
    mod = p ** precision
    y = x % mod
    for _ in range(precision + 1):
        nxt = pow(y, p, mod)
        if nxt == y:
            break
        y = nxt
    return PAdicInt(p, precision, y)


@lru_cache(maxsize=32)
def _gamma_table(p: int, precision: int) -> Tuple[int, ...]:
    """table[n] = Γ_p(n) mod p^m，n = 0..p^m"""
    mod = p ** precision
    table = [1, (-1) % mod]
    prod = 1
    for n in range(1, mod):
        if n % p:
            prod = prod * n % mod
        table.append((-1) ** (n + 1) * prod % mod)
    return tuple(table)


def gamma_p(x: PAdicInt) -> PAdicInt:
    """Morita Γ_p：Γ_p(n) = (−1)^n ∏_{0<j<n, p∤j} j，按连续性延拓"""
    if x.precision < 1:
        raise ValueError("精度至少为 1")
    table = _gamma_table(x.p, x.precision)
    n = x.residue or x.modulus
    return PAdicInt(x.p, x.precision, table[n])


def gamma_p_rational(x, p: int, precision: int) -> PAdicInt:
    """Γ_p(a/k)，k 与 p 互素"""
    return gamma_p(PAdicInt.from_rational(x, p, precision))


class RamifiedPAdicElement:
    """Z_p[π]/(π^{p−1} + p) 中的元素 Σ c_j π^j，以 π 进精度 M 截断"""

    __slots__ = ('p', 'precision', 'coeffs')

    def __init__(self, p: int, precision: int, coeffs=None):
        self.p = p
        self.precision = precision
        mod = self.modulus
        raw = list(coeffs or [])
        raw += [0] * (p - 1 - len(raw))
        self.coeffs: List[int] = [int(c) % mod for c in raw[:p - 1]]

    @property
    def digits(self) -> int:
        """系数所需的 p 进位数"""
        return self.precision // (self.p - 1) + 2

    @property
    def modulus(self) -> int:
        return self.p ** self.digits

    @classmethod
    def constant(cls, p: int, precision: int, value) -> 'RamifiedPAdicElement':
        if isinstance(value, PAdicInt):
            value = value.residue
        return cls(p, precision, [value])

    @classmethod
    def pi_power(cls, p: int, precision: int, k: int) -> 'RamifiedPAdicElement':
        q, r = divmod(k, p - 1)
        coeffs = [0] * (p - 1)
        coeffs[r] = (-p) ** q
        return cls(p, precision, coeffs)

    def _coerce(self, other) -> 'RamifiedPAdicElement':
        if isinstance(other, RamifiedPAdicElement):
            return other
        return RamifiedPAdicElement.constant(self.p, self.precision, other)

    def __add__(self, other):
        other = self._coerce(other)
        return RamifiedPAdicElement(self.p, self.precision, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return RamifiedPAdicElement(self.p, self.precision, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        n = self.p - 1
        raw = [0] * (2 * n)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    raw[i + j] += a * b
        for k in range(2 * n - 1, n - 1, -1):
            # π^{p−1} = −p
            raw[k - n] -= self.p * raw[k]
        return RamifiedPAdicElement(self.p, self.precision, raw[:n])

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RamifiedPAdicElement.constant(self.p, self.precision, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def valuation(self) -> int:
        """π 进赋值，上限为精度 M"""
        best = self.precision
        for j, c in enumerate(self.coeffs):
            if c:
                v = 0
                while c % self.p == 0:
                    c //= self.p
                    v += 1
                best = min(best, (self.p - 1) * v + j)
        return best

    def is_zero(self) -> bool:
        return self.valuation() >= self.precision

    def __repr__(self):
        terms = [f"{c}·π^{j}" for j, c in enumerate(self.coeffs) if c]
        return f"RamifiedPAdicElement(p={self.p}, M={self.precision}: {' + '.join(terms) or '0'})"


def _zeta_defect(w: RamifiedPAdicElement) -> RamifiedPAdicElement:
    """g(w) = ((1+w)^p − 1)/w = Σ_{k=1}^{p} C(p,k) w^{k−1}"""
    p = w.p
    acc = RamifiedPAdicElement.constant(p, w.precision, 1)
    for k in range(p - 1, 0, -1):
        acc = acc * w + comb(p, k)
    return acc


@lru_cache(maxsize=16)
def zeta_p(p: int, precision: int) -> RamifiedPAdicElement:
    """Z_p[π] 中满足 ζ ≡ 1 + π (mod π²) 的 p 次单位根，逐位提升"""
    work = precision + 2 * p
    w = RamifiedPAdicElement.pi_power(p, work, 1)
    k = 2
    while p - 2 + k < work:
        target = p - 2 + k + 1
        if _zeta_defect(w).valuation() >= target:
            k += 1
            continue
        step = RamifiedPAdicElement.pi_power(p, work, k)
        for d in range(1, p):
            trial = w + step * d
            if _zeta_defect(trial).valuation() >= target:
                w = trial
                break
        else:
            raise PrecisionError(f"p={p} 第 {k} 位没有满足条件的数字")
        k += 1
    return RamifiedPAdicElement(p, precision, (w + 1).coeffs)


def gross_koblitz_defect(p: int, a: int, precision: int) -> Tuple[int, int]:
    """
    Gauss 和 Σ ω(x)^{-a} ζ^x 与 s·π^a·Γ_p(a/(p−1)) 的差的 π 进赋值

    返回 (最小赋值, 达到它的符号 s)
    """
    if p == 2:
        raise Inapplicable("Gross–Koblitz 预言机只处理奇素数")
    if not 1 <= a <= p - 2:
        raise Inapplicable(f"a 须在 1..{p - 2} 之间: {a}")
    if precision < 2 * (p - 1):
        raise PrecisionError(f"π 进精度至少为 {2 * (p - 1)}: {precision}")
    zeta = zeta_p(p, precision)
    digits = RamifiedPAdicElement(p, precision).digits
    total = RamifiedPAdicElement(p, precision)
    zx = RamifiedPAdicElement.constant(p, precision, 1)
    for x in range(1, p):
        zx = zx * zeta
        weight = teichmuller(x, p, digits) ** (p - 1 - a)
        total = total + zx * weight.residue
    gamma = gamma_p_rational(Fraction(a, p - 1), p, digits)
    main = RamifiedPAdicElement.pi_power(p, precision, a) * gamma.residue
    best = None
    for s in (1, -1):
        v = (total - main * s).valuation()
        if best is None or v > best[0]:
            best = (v, s)
    return best
