"""
特征标幂的导子公式及 f_χ、e_κ 组合量
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

from core.errors import Inapplicable
from core.group_characters import MultiplicativeCharacter
from core.local_field import BASE, RAMIFIED, UNRAMIFIED, LocalFieldSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerConductorPrediction:
    p: int
    kind: str
    conductor: int
    order: int
    k: int
    predicted: int
    brute_force: Optional[int] = None

    @property
    def agrees(self) -> bool:
        return self.brute_force is None or self.brute_force == self.predicted


def predict_cube_conductor_qp(p: int, conductor: int, order: int) -> int:
    """Q_p 上 a(χ³)，order 为 χ 在 Z_p^× 上的阶"""
    if p == 2:
        raise Inapplicable("p=2 请使用平方公式")
    a = conductor
    if p >= 5:
        if a == 0:
            return 0
        if a == 1:
            return 0 if 3 % order == 0 else 1
        return a
    if a <= 1:
        return a
    if a == 2:
        return 0 if order == 3 else 1
    return a - 1


def predict_square_conductor_q2(conductor: int) -> int:
    """Q_2 上 a(χ²)"""
    if conductor == 1:
        raise Inapplicable("Z_2^× = 1+2Z_2，不存在导子为 1 的特征标")
    if conductor in (0, 2, 3):
        return 0
    return conductor - 1


def canonical_representatives(field: LocalFieldSpec, j: int) -> List:
    """
    U^{j−1}/U^j 的规范代表元

    j = 1：剩余域非零元的最小字典序提升；j ≥ 2：1 + π^{j−1}·r，r 取非零剩余代表
    """
    p = field.p
    if field.kind == UNRAMIFIED:
        residues = [field.element(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    else:
        residues = [field.element(a) for a in range(1, p)]
    if j == 1:
        return residues
    pi = field.uniformizer_power(j - 1)
    return [field.one() + pi * r for r in residues]


def f_chi(chi: MultiplicativeCharacter, literal: bool = False) -> int:
    """
    1..t 中最大的 j，使 U^{j−1}/U^j 的某个规范代表元上 χ 的取值阶不整除 3

    literal=True 时按“阶 ≠ 3”判定（平凡取值也计入）；没有满足条件的 j 时返回 0。
    """
    best = 0
    for j in range(1, chi.level + 1):
        for x in canonical_representatives(chi.field, j):
            order = chi.on_unit(x).denominator
            hit = order != 3 if literal else 3 % order != 0
            if hit:
                best = j
                break
    return best


def predict_cube_conductor_k(chi: MultiplicativeCharacter) -> int:
    """二次扩张 K/Q_p 上 a(χ³)"""
    field = chi.field
    if field.kind == BASE or field.p == 2:
        raise Inapplicable("只适用于奇素数上的二次扩张")
    a = chi.conductor
    order = chi.order_on_units
    if field.p >= 5:
        return 0 if a == 1 and order == 3 else a
    if a <= 1:
        return a
    if order == 3:
        return 0
    return f_chi(chi)


def e_kappa(kind: str, n3: int, kappa_order: int, f_kappa: int) -> int:
    """p=3 超尖点情形 sym³ 导子中的附加指数"""
    if kind == UNRAMIFIED:
        if n3 == 2:
            return 2
        if kappa_order == 3:
            return 0
        return 2 * f_kappa
    if kind == RAMIFIED:
        return 1 if kappa_order == 3 else f_kappa + 1
    raise Inapplicable(f"e_κ 只对二次扩张定义: {kind}")


def e_kappa_of(kappa: MultiplicativeCharacter, n3: int) -> int:
    return e_kappa(kappa.field.kind, n3, kappa.order_on_units, f_chi(kappa))


def cube_sandwich_holds(chi: MultiplicativeCharacter) -> bool:
    """a(χ³) ≤ a(χ) ≤ a(χ³) + 1"""
    a3 = chi.power(3).conductor
    return a3 <= chi.conductor <= a3 + 1


def power_prediction(chi: MultiplicativeCharacter, k: int) -> PowerConductorPrediction:
    """对 χ 计算闭式预测与穷举导子"""
    field = chi.field
    if field.kind == BASE:
        if k == 2 and field.p == 2:
            predicted = predict_square_conductor_q2(chi.conductor)
        elif k == 3 and field.p != 2:
            predicted = predict_cube_conductor_qp(field.p, chi.conductor, chi.order_on_units)
        else:
            raise Inapplicable(f"Q_{field.p} 上没有 k={k} 的闭式")
    elif k == 3:
        predicted = predict_cube_conductor_k(chi)
    else:
        raise Inapplicable(f"{field} 上没有 k={k} 的闭式")
    brute = chi.power(k).conductor
    if brute != predicted:
        logger.warning(f"{chi}: a(χ^{k}) 预测 {predicted}，穷举 {brute}")
    return PowerConductorPrediction(field.p, field.kind, chi.conductor, chi.order_on_units, k, predicted, brute)
