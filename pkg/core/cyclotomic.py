"""
分圆数与形式标量的精确算术

CyclotomicNumber 以 Q(ζ_n) 中幂基 1, ζ_n, ..., ζ_n^{φ(n)-1} 的有理系数存储，
FormalScalar 额外携带 p 的半整数次幂和形式符号 a_p 的整数次幂。
"""
import numbers
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Union

import numpy as np
import sympy

_X = sympy.Symbol('x')

Number = Union[int, Fraction, 'CyclotomicNumber']


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def normalize_angle(angle) -> Fraction:
    """将角度（ζ 的指数/阶）规约到 [0, 1)"""
    return Fraction(angle) % 1


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple:
    """Φ_n 的整数系数（升幂）"""
    poly = sympy.Poly(sympy.cyclotomic_poly(n, _X), _X)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


def _reduce(n: int, raw) -> tuple:
    """把任意长度的 ζ_n 指数向量折叠并模 Φ_n 约化"""
    vec = [Fraction(0)] * n
    for k, c in enumerate(raw):
        if c:
            vec[k % n] += c
    phi = cyclotomic_coeffs(n)
    deg = len(phi) - 1
    for k in range(n - 1, deg - 1, -1):
        c = vec[k]
        if c:
            shift = k - deg
            for j in range(deg + 1):
                vec[shift + j] -= c * phi[j]
    return tuple(vec[:deg])


class CyclotomicNumber:
    """Q(ζ_n) 中的元素"""

    __slots__ = ('order', 'coeffs')

    def __init__(self, order: int, coeffs: Iterable = (), reduced: bool = False):
        if order < 1:
            raise ValueError(f"分圆阶必须为正: {order}")
        self.order = order
        if reduced:
            self.coeffs = tuple(Fraction(c) for c in coeffs)
        else:
            self.coeffs = _reduce(order, [Fraction(c) for c in coeffs])

    # ---------- 构造 ----------
    @classmethod
    def rational(cls, value, order: int = 1) -> 'CyclotomicNumber':
        return cls(order, [Fraction(value)])

    @classmethod
    def zero(cls, order: int = 1) -> 'CyclotomicNumber':
        return cls(order, [])

    @classmethod
    def root(cls, n: int, k: int = 1) -> 'CyclotomicNumber':
        """ζ_n^k"""
        raw = [0] * n
        raw[k % n] = 1
        return cls(n, raw)

    @classmethod
    def from_angle(cls, angle) -> 'CyclotomicNumber':
        angle = normalize_angle(angle)
        return cls.root(angle.denominator, angle.numerator)

    @classmethod
    def from_angles(cls, weighted: Union[Counter, dict]) -> 'CyclotomicNumber':
        """Σ w·e^{2πi·angle}，一次性约化"""
        terms = [(normalize_angle(a), Fraction(w)) for a, w in weighted.items() if w]
        n = 1
        for a, _ in terms:
            n = lcm(n, a.denominator)
        raw = [Fraction(0)] * n
        for a, w in terms:
            raw[(a.numerator * (n // a.denominator)) % n] += w
        return cls(n, raw)

    @classmethod
    def coerce(cls, value) -> 'CyclotomicNumber':
        if isinstance(value, CyclotomicNumber):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        if isinstance(value, numbers.Integral):
            return cls.rational(int(value))
        raise TypeError(f"无法转换为分圆数: {type(value).__name__}")

    # ---------- 阶的提升 ----------
    def lift(self, m: int) -> 'CyclotomicNumber':
        """嵌入到 Q(ζ_m)，要求 order | m"""
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"{self.order} 不整除 {m}")
        step = m // self.order
        raw = [Fraction(0)] * m
        for k, c in enumerate(self.coeffs):
            raw[k * step] = c
        return CyclotomicNumber(m, raw)

    def _aligned(self, other):
        other = CyclotomicNumber.coerce(other)
        m = lcm(self.order, other.order)
        return self.lift(m), other.lift(m), m

    # ---------- 环运算 ----------
    def __add__(self, other):
        if not isinstance(other, (CyclotomicNumber, int, Fraction)):
            return NotImplemented
        a, b, m = self._aligned(other)
        return CyclotomicNumber(m, [x + y for x, y in zip(a.coeffs, b.coeffs)], reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.order, [-c for c in self.coeffs], reduced=True)

    def __sub__(self, other):
        if not isinstance(other, (CyclotomicNumber, int, Fraction)):
            return NotImplemented
        return self + (-CyclotomicNumber.coerce(other))

    def __rsub__(self, other):
        return CyclotomicNumber.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.order, [c * other for c in self.coeffs], reduced=True)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b, m = self._aligned(other)
        raw = [Fraction(0)] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        raw[i + j] += x * y
        return CyclotomicNumber(m, raw)

    __rmul__ = __mul__

    def inverse(self) -> 'CyclotomicNumber':
        if self.is_zero():
            raise ZeroDivisionError("分圆数零元不可逆")
        nonzero = [k for k, c in enumerate(self.coeffs) if c]
        if nonzero == [0]:
            return CyclotomicNumber(self.order, [1 / self.coeffs[0]], reduced=True)
        domain = sympy.QQ
        f = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)],
                       _X, domain=domain)
        g = sympy.Poly(list(reversed(cyclotomic_coeffs(self.order))), _X, domain=domain)
        inv = f.invert(g)
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(inv.all_coeffs())]
        return CyclotomicNumber(self.order, coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("除数为零")
            return self * (1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CyclotomicNumber.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ---------- 比较 ----------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a.coeffs == b.coeffs

    __hash__ = None

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} 不是有理数")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    # ---------- 共轭与嵌入 ----------
    def conjugate(self) -> 'CyclotomicNumber':
        """复共轭 ζ^k ↦ ζ^{-k}"""
        raw = [Fraction(0)] * self.order
        for k, c in enumerate(self.coeffs):
            raw[(-k) % self.order] += c
        return CyclotomicNumber(self.order, raw)

    def abs_square(self) -> 'CyclotomicNumber':
        return self * self.conjugate()

    def embed_complex(self) -> complex:
        if not self.coeffs:
            return 0j
        powers = np.exp(2j * np.pi * np.arange(len(self.coeffs)) / self.order)
        weights = np.array([float(c) for c in self.coeffs])
        return complex(powers @ weights)

    def as_root_of_unity(self) -> Optional[Fraction]:
        """若为单位根 ζ 则返回其角度，否则 None"""
        if not self.coeffs:
            return None
        n = self.order if self.order % 2 == 0 else 2 * self.order
        for k in range(n):
            if self == CyclotomicNumber.root(n, k):
                return Fraction(k, n)
        return None

    # ---------- 输出 ----------
    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    def __str__(self):
        if self.is_rational():
            return str(self.rational_value())
        angle = self.as_root_of_unity()
        if angle is not None:
            return _render_root(angle)
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                base = _render_root(Fraction(k, self.order))
                terms.append(base if c == 1 else f"-{base}" if c == -1 else f"{c}·{base}")
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, {[str(c) for c in self.coeffs]})"


def _render_root(angle: Fraction) -> str:
    if angle == 0:
        return "1"
    if angle == Fraction(1, 2):
        return "-1"
    k, n = angle.numerator, angle.denominator
    return f"ζ_{n}" if k == 1 else f"ζ_{n}^{k}"


@lru_cache(maxsize=None)
def sqrt_prime(p: int) -> CyclotomicNumber:
    """√p 作为分圆数：p=2 取 ζ_8+ζ_8^7，奇素数由二次 Gauss 和给出"""
    if p == 2:
        return CyclotomicNumber.root(8, 1) + CyclotomicNumber.root(8, 7)
    raw = [0] * p
    for a in range(1, p):
        raw[a] = int(sympy.legendre_symbol(a, p))
    g = CyclotomicNumber(p, raw)
    if p % 4 == 1:
        return g
    return -CyclotomicNumber.root(4, 1) * g


def p_power(p: int, exponent) -> CyclotomicNumber:
    """p^e 的精确值，e 为半整数"""
    exponent = Fraction(exponent)
    if exponent.denominator not in (1, 2):
        raise ValueError(f"只支持半整数指数: {exponent}")
    whole = exponent - Fraction(1, 2) if exponent.denominator == 2 else exponent
    value = CyclotomicNumber.rational(Fraction(p) ** int(whole))
    if exponent.denominator == 2:
        value = value * sqrt_prime(p)
    return value


def p_valuation(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 没有赋值")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class FormalScalar:
    """coefficient · p^{half_p_exp} · a_p^{ap_exp}"""

    __slots__ = ('coefficient', 'half_p_exp', 'ap_exp', 'p')

    def __init__(self, coefficient: Number = 1, half_p_exp=0, ap_exp: int = 0, p: Optional[int] = None):
        self.coefficient = CyclotomicNumber.coerce(coefficient)
        self.half_p_exp = Fraction(half_p_exp)
        if self.half_p_exp.denominator not in (1, 2):
            raise ValueError(f"p 的指数必须为半整数: {half_p_exp}")
        self.ap_exp = int(ap_exp)
        self.p = p
        if (self.half_p_exp or self.ap_exp) and p is None:
            raise ValueError("带 p 的幂次时必须指定 p")

    @classmethod
    def coerce(cls, value, p: Optional[int] = None) -> 'FormalScalar':
        if isinstance(value, FormalScalar):
            return value
        return cls(CyclotomicNumber.coerce(value), 0, 0, p)

    @classmethod
    def root(cls, angle, p: Optional[int] = None) -> 'FormalScalar':
        return cls(CyclotomicNumber.from_angle(angle), 0, 0, p)

    def _prime_with(self, other: 'FormalScalar') -> Optional[int]:
        if self.p is None:
            return other.p
        if other.p is None or other.p == self.p:
            return self.p
        raise ValueError(f"素数不一致: {self.p} 与 {other.p}")

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = FormalScalar.coerce(other)
        if not isinstance(other, FormalScalar):
            return NotImplemented
        return FormalScalar(self.coefficient * other.coefficient,
                            self.half_p_exp + other.half_p_exp,
                            self.ap_exp + other.ap_exp,
                            self._prime_with(other))

    __rmul__ = __mul__

    def __neg__(self):
        return FormalScalar(-self.coefficient, self.half_p_exp, self.ap_exp, self.p)

    def inverse(self) -> 'FormalScalar':
        return FormalScalar(self.coefficient.inverse(), -self.half_p_exp, -self.ap_exp, self.p)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = FormalScalar.coerce(other)
        if not isinstance(other, FormalScalar):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FormalScalar.coerce(other, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FormalScalar(self.coefficient ** k, self.half_p_exp * k, self.ap_exp * k, self.p)

    def __add__(self, other):
        other = FormalScalar.coerce(other, self.p)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.ap_exp != other.ap_exp:
            raise ValueError("a_p 次数不同的形式标量不能相加")
        p = self._prime_with(other)
        low = min(self.half_p_exp, other.half_p_exp)
        a = self.coefficient * (p_power(p, self.half_p_exp - low) if p else 1)
        b = other.coefficient * (p_power(p, other.half_p_exp - low) if p else 1)
        return FormalScalar(a + b, low, self.ap_exp, p)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-FormalScalar.coerce(other, self.p))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            other = FormalScalar.coerce(other, self.p)
        if not isinstance(other, FormalScalar):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        if self.ap_exp != other.ap_exp:
            return False
        p = self._prime_with(other)
        d = self.half_p_exp - other.half_p_exp
        if d == 0:
            return self.coefficient == other.coefficient
        if d > 0:
            return self.coefficient * p_power(p, d) == other.coefficient
        return self.coefficient == other.coefficient * p_power(p, -d)

    __hash__ = None

    def value(self) -> CyclotomicNumber:
        """不含 a_p 时的精确数值"""
        if self.ap_exp:
            raise ValueError("含形式符号 a_p，无法求值")
        if not self.half_p_exp:
            return self.coefficient
        return self.coefficient * p_power(self.p, self.half_p_exp)

    def simplify(self) -> 'FormalScalar':
        """把有理系数中的 p 因子并入指数"""
        if self.p is None or self.is_zero() or not self.coefficient.is_rational():
            return self
        r = self.coefficient.rational_value()
        v = p_valuation(r, self.p)
        return FormalScalar(r / Fraction(self.p) ** v, self.half_p_exp + v, self.ap_exp, self.p)

    def to_json(self) -> dict:
        return {"coefficient": self.coefficient.to_json(), "half_p_exp": str(self.half_p_exp),
                "ap_exp": self.ap_exp, "p": self.p, "text": str(self)}

    def __str__(self):
        s = self.simplify()
        coef = s.coefficient
        parts = []
        sign = ""
        if coef.is_rational():
            r = coef.rational_value()
            if r == -1:
                sign = "-"
            elif r != 1:
                parts.append(str(r))
        else:
            parts.append(f"({coef})")
        powers = []
        if s.half_p_exp:
            powers.append(f"{s.p}^{{{s.half_p_exp}}}" if s.half_p_exp != 1 else f"{s.p}")
        if s.ap_exp:
            powers.append(f"a_{s.p}^{s.ap_exp}" if s.ap_exp != 1 else f"a_{s.p}")
        body = "·".join(powers + parts) or "1"
        return sign + body

    def __repr__(self):
        return f"FormalScalar({self})"
