"""
验证套件：把各模块的不变量整理成可重复运行的检查

套件从不因不一致而抛出异常，失败收集在 SuiteResult.failures 中。
"""
import logging
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Dict, List, Optional

import sympy

from config.arith_config import ARITH_CONFIG
from config.suite_profiles import SUITE_PROFILES
from core.conductor_calculus import cube_sandwich_holds, f_chi, power_prediction
from core.cyclotomic import FormalScalar, sqrt_prime
from core.epsilon import (I, EpsilonInput, deligne_twist, epsilon_factor, lemma_alpha_value,
                          local_tau)
from core.errors import ArithmeticDomainError
from core.gauss import (FiniteField, FiniteFieldCharacterPair, davenport_hasse_defect, gauss_sum,
                        pure_gauss_value, stickelberger_value)
from core.global_report import (NewformDescriptor, check_hypothesis_h, global_sym3_conductor,
                                partition_primes, prime_to_p_part, random_descriptor, twist_sign,
                                unramified_epsilon_product)
from core.group_characters import (AdditiveCharacter, MultiplicativeCharacter, all_characters,
                                   build_unit_group, local_class_character, quadratic_character,
                                   twist_character, unramified_character)
from core.local_field import BASE, RAMIFIED, UNRAMIFIED, LocalFieldSpec, smallest_nonresidue
from core.padic import PAdicInt, gamma_p, gross_koblitz_defect
from core.wd_sym3 import (TYPE_III, TYPE_TABLE, PrincipalSeries, Special, classify_type,
                          describe_row, determinant_sanity, dihedral_data, invariant_dimensions,
                          local_sym3_conductor, minimality_violations, quadratic_extensions,
                          sym3_parameter, type_table_row, variance_epsilon)

logger = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    name: str
    seed: int
    bounds: dict
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    rows: List[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str):
        self.checked += 1
        if not ok:
            self.failures.append(message)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "bounds": self.bounds,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "notes": self.notes,
            "rows": self.rows,
        }


def _primes(bounds: dict, odd_only: bool = False) -> List[int]:
    max_p = bounds.get('max_p', 7)
    primes = bounds.get('primes') or list(sympy.primerange(2, max_p + 1))
    return [p for p in primes if p <= max_p and not (odd_only and p == 2)]


def _characters_of_conductor(field: LocalFieldSpec, t: int) -> List[MultiplicativeCharacter]:
    return [chi for chi in all_characters(build_unit_group(field, t)) if chi.conductor == t]


def _sample(items: list, k: int, rng: random.Random) -> list:
    return items if len(items) <= k else rng.sample(items, k)


def _with_random_uniformizer(chi: MultiplicativeCharacter, rng: random.Random) -> MultiplicativeCharacter:
    at = FormalScalar.root(Fraction(rng.randrange(12), 12), chi.field.p)
    return MultiplicativeCharacter(chi.group, chi.unit_exponents, at)


class SuiteVerifier:
    """按套件名调度验证；bounds 与 seed 可被命令行覆盖"""

    def __init__(self, overrides: Optional[Dict] = None, seed: Optional[int] = None, workers: int = 1):
        self.overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        self.seed = seed
        self.workers = workers

    @staticmethod
    def available() -> Dict[str, dict]:
        return dict(SUITE_PROFILES)

    def run(self, name: str) -> SuiteResult:
        suites = {
            'conductor-powers': self._conductor_powers,
            'gauss': self._gauss,
            'gross-koblitz': self._gross_koblitz,
            'epsilon-props': self._epsilon_props,
            'deligne-twist': self._deligne_twist,
            'sym3-conductors': self._sym3_conductors,
            'table6': self._table6,
            'variance-closed-forms': self._variance_closed_forms,
            'global-agreement': self._global_agreement,
        }
        suite = suites.get(name)
        if suite is None:
            raise ValueError(f"未知的验证套件: {name}（可选 {sorted(suites)}）")
        profile = SUITE_PROFILES.get(name, {})
        bounds = dict(profile.get('bounds', {}))
        bounds.update(self.overrides)
        seed = self.seed if self.seed is not None else profile.get('seed', 0)
        result = SuiteResult(name, seed, bounds)
        logger.info(f"运行套件 {name}，seed={seed}，bounds={bounds}")
        suite(result, bounds, random.Random(seed))
        return result

    def _map(self, fn, items) -> list:
        """并行执行互相独立的工作项，结果按输入顺序返回"""
        if self.workers <= 1:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(fn, items))

    # ============================================================
    # conductor-powers
    # ============================================================
    def _conductor_powers(self, result: SuiteResult, b: dict, rng: random.Random):
        def sweep(task):
            field, t, k = task
            out = []
            for chi in _characters_of_conductor(field, t):
                pred = power_prediction(chi, k)
                out.append((pred.agrees, f"{field} t={t}: {chi} 的 a(χ^{k}) 预测 {pred.predicted}，穷举 {pred.brute_force}"))
            return task, out

        tasks = [(LocalFieldSpec(p), t, 3) for p in _primes(b, odd_only=True)
                 for t in range(1, b['max_level'] + 1)]
        tasks += [(LocalFieldSpec(2), t, 2) for t in range(2, b.get('p2_max_level', 0) + 1)]
        p = b.get('extension_p')
        if p:
            fields = quadratic_extensions(p, UNRAMIFIED) + quadratic_extensions(p, RAMIFIED)
            tasks += [(K, t, 3) for K in fields for t in range(1, b.get('extension_level', 2) + 1)]

        for (field, t, k), out in self._map(sweep, tasks):
            for ok, message in out:
                result.check(ok, message)
            result.rows.append({"field": str(field), "level": t, "power": k, "characters": len(out),
                                "mismatches": sum(1 for ok, _ in out if not ok)})

        sensitive = 0
        ramified_breaks = 0
        for field, t, k in tasks:
            if field.p != 3 or k != 3:
                continue
            characters = _characters_of_conductor(field, t)
            if t >= 3:
                for chi in characters:
                    if field.kind == RAMIFIED:
                        ramified_breaks += not cube_sandwich_holds(chi)
                    else:
                        result.check(cube_sandwich_holds(chi), f"{field}: {chi} 不满足 a(χ³) ≤ a(χ) ≤ a(χ³)+1")
            if field.kind != BASE:
                sensitive += sum(1 for chi in characters if f_chi(chi, literal=True) != f_chi(chi))
        if sensitive:
            result.notes.append(f"f_χ 按“阶 ≠ 3”逐字理解时有 {sensitive} 个特征标结果不同，以穷举为准")
        if ramified_breaks:
            result.notes.append(f"Q_3 的分歧二次扩张上有 {ramified_breaks} 个特征标不满足 a(χ) ≤ a(χ³)+1"
                                "（Q_3(√−3) 中 (U^1)³ ⊂ U^4）")

    # ============================================================
    # gauss
    # ============================================================
    def _gauss(self, result: SuiteResult, b: dict, rng: random.Random):
        tol = ARITH_CONFIG['embed_tolerance']
        for p in sympy.primerange(2, b['max_p'] + 1):
            for r in range(1, min(2, b.get('max_level', 2)) + 1):
                ff = FiniteField(p, r)
                q = ff.q
                if q > ARITH_CONFIG['max_gauss_field']:
                    result.notes.append(f"q={q} 超出 Gauss 和上限，跳过")
                    continue
                count = 0
                for k in range(1, q - 1):
                    g = gauss_sum(FiniteFieldCharacterPair(p, r, Fraction(k, q - 1)))
                    result.check(g * g.conjugate() == q, f"F_{q}: |G(χ^{k})|² ≠ {q}")
                    count += 1
                row = {"p": p, "r": r, "characters": count, "stickelberger": 0, "pure": 0}
                if r == 1 and p > 2:
                    z = gauss_sum(FiniteFieldCharacterPair(p, 1, Fraction(1, 2))).embed_complex()
                    expected = sqrt(p) if p % 4 == 1 else 1j * sqrt(p)
                    result.check(abs(z - expected) < tol, f"p={p}: 二次 Gauss 和 {z} ≠ {expected}")
                    for k in range(1, p - 1):
                        defect = davenport_hasse_defect(FiniteFieldCharacterPair(p, 1, Fraction(k, p - 1)))
                        result.check(defect.is_zero(), f"p={p}, k={k}: Davenport–Hasse 缺陷 {defect} ≠ 0")
                if r == 2:
                    for m in sympy.divisors(p + 1):
                        predicted = stickelberger_value(p, m)
                        column = "stickelberger"
                        if predicted is None:
                            predicted, column = pure_gauss_value(p, m), "pure"
                        if predicted is None:
                            continue
                        for k in range(1, m):
                            if sympy.gcd(k, m) != 1:
                                continue
                            g = gauss_sum(FiniteFieldCharacterPair(p, 2, Fraction(k, m)))
                            result.check(g == predicted, f"p={p}, m={m}, k={k}: G = {g}，预测 {predicted}")
                            row[column] += 1
                result.rows.append(row)

    # ============================================================
    # gross-koblitz
    # ============================================================
    def _gross_koblitz(self, result: SuiteResult, b: dict, rng: random.Random):
        digits = b.get('pi_digits', ARITH_CONFIG['padic']['gk_pi_digits'])
        ratio = b.get('defect_ratio', 0.6)
        for p in _primes(b, odd_only=True):
            signs = set()
            for a in range(1, p - 1):
                v, s = gross_koblitz_defect(p, a, digits)
                result.check(v >= ratio * digits, f"p={p}, a={a}: 缺陷赋值 {v} < {ratio}·{digits}")
                signs.add(s)
                result.rows.append({"p": p, "a": a, "valuation": v, "sign": s})
            result.check(len(signs) == 1, f"p={p}: 符号不一致 {sorted(signs)}")

        t = b.get('max_level', 3)
        for p in b.get('gamma_primes', [3, 5, 7]):
            for x in range(1, p ** t):
                if x % p == 0:
                    continue
                X = PAdicInt(p, t, x)
                result.check(gamma_p(X + 1) == -X * gamma_p(X), f"p={p}, x={x}: Γ_p(1+x) ≠ −x·Γ_p(x)")

    # ============================================================
    # epsilon-props
    # ============================================================
    def _epsilon_props(self, result: SuiteResult, b: dict, rng: random.Random):
        for p in _primes(b, odd_only=True):
            Qp = LocalFieldSpec(p)
            phi = AdditiveCharacter.standard(Qp)
            for t in range(1, b['max_level'] + 1):
                units = [Qp.from_key(k) for k in build_unit_group(Qp, t).keys()]
                for chi in _characters_of_conductor(Qp, t):
                    chi = _with_random_uniformizer(chi, rng)
                    base = epsilon_factor(EpsilonInput(chi, phi))
                    c0 = Qp.uniformizer_power(chi.conductor + phi.conductor)
                    for _ in range(b.get('random_units', 3)):
                        c = c0 * rng.choice(units)
                        result.check(epsilon_factor(EpsilonInput(chi, phi, c)) == base,
                                     f"p={p}: ε({chi}) 依赖于 c 的单位部分")
                    # (ε1)
                    a = Qp.element(rng.choice(units).a * Fraction(p) ** rng.randint(-1, 2))
                    lhs = epsilon_factor(EpsilonInput(chi, phi.twisted(a)), haar_normalized=True)
                    rhs = chi(a) * FormalScalar(1, a.valuation(), 0, p) \
                        * epsilon_factor(EpsilonInput(chi, phi), haar_normalized=True)
                    result.check(lhs == rhs, f"p={p}: (ε1) 在 a={a} 处不成立")
                    # (ε2)
                    theta = unramified_character(Qp, FormalScalar.root(Fraction(rng.randrange(12), 12), p))
                    lhs = epsilon_factor(EpsilonInput(chi * theta, phi))
                    rhs = theta.at_uniformizer ** (chi.conductor + phi.conductor) * base
                    result.check(lhs == rhs, f"p={p}: (ε2) 对 θ(p)={theta.at_uniformizer} 不成立")

            u = smallest_nonresidue(p)
            tame = [quadratic_character(p, d) for d in (p, -p, p * u)]
            for alpha in tame:
                value = epsilon_factor(EpsilonInput(alpha, phi))
                result.check(value == lemma_alpha_value(alpha), f"p={p}: 二次特征标的 ε = {value}")
            for alpha in tame:
                for beta in tame:
                    ab = alpha * beta
                    result.check(epsilon_factor(EpsilonInput(ab, phi)) == ab.at_uniformizer.inverse(),
                                 f"p={p}: ε(αβ) ≠ 1/(αβ)(p)")

        Q2 = LocalFieldSpec(2)
        phi2 = AdditiveCharacter.standard(Q2)
        tau = local_tau(EpsilonInput(twist_character(2, 'chi_-1'), phi2))
        result.check(tau == I * 2, f"τ(χ_-1) = {tau}，应为 2i")
        tau = local_tau(EpsilonInput(twist_character(2, 'chi_2'), phi2))
        result.check(tau == sqrt_prime(2) * 2, f"τ(χ_2) = {tau}，应为 2√2")
        tau_m2 = local_tau(EpsilonInput(twist_character(2, 'chi_-2'), phi2))
        result.notes.append(f"τ(χ_-2) = {tau_m2}（导子 3 的另一个二次特征标给出 2√2·i）")
        K = LocalFieldSpec(2, UNRAMIFIED)
        kappa = next(c for c in _characters_of_conductor(K, 1) if c.order_on_units == 3)
        tau = local_tau(EpsilonInput(kappa, AdditiveCharacter.standard(K)))
        result.check(tau == 2, f"τ(κ, φ_2∘Tr) = {tau}，应为 2")

    # ============================================================
    # deligne-twist
    # ============================================================
    def _deligne_twist(self, result: SuiteResult, b: dict, rng: random.Random):
        def sweep(task):
            p, t, alphas = task
            Qp = LocalFieldSpec(p)
            phi = AdditiveCharacter.standard(Qp)
            level = max(1, t // 2)
            betas = [beta for beta in all_characters(build_unit_group(Qp, level)) if 2 * beta.conductor <= t]
            betas.append(unramified_character(Qp, FormalScalar.root(Fraction(1, 4), p)))
            out = []
            for alpha in alphas:
                for beta in betas:
                    lhs = deligne_twist(alpha, beta, phi)
                    rhs = epsilon_factor(EpsilonInput(alpha * beta, phi))
                    out.append((lhs == rhs, f"p={p}: α={alpha}, β={beta}: {lhs} ≠ {rhs}"))
            return task, out

        # 抽样只在主线程进行
        tasks = [(p, t, _sample(_characters_of_conductor(LocalFieldSpec(p), t), b.get('alpha_sample', 12), rng))
                 for p in _primes(b, odd_only=True) for t in range(1, b['max_level'] + 1)]
        for (p, t, _), out in self._map(sweep, tasks):
            for ok, message in out:
                result.check(ok, message)
            result.rows.append({"p": p, "a_alpha": t, "pairs": len(out)})

    # ============================================================
    # sym3-conductors
    # ============================================================
    def _sym3_conductors(self, result: SuiteResult, b: dict, rng: random.Random):
        tally = Counter()
        sample = b.get('kappa_sample', 30)

        def record(label, lp):
            rec = local_sym3_conductor(lp)
            if rec.closed_form is None:
                tally[(label, 'skipped')] += 1
                return
            tally[(label, 'checked')] += 1
            result.check(rec.agrees, f"{label} p={lp.p}: 机制 {rec.machinery} ≠ {rec.label} {rec.closed_form}")

        for p in _primes(b, odd_only=True) + [2]:
            Qp = LocalFieldSpec(p)
            for k in range(2, b.get('max_weight', 12) + 1):
                sp = Special(p, k)
                record('special', sp)
                result.check(local_sym3_conductor(sp).machinery == 3, f"p={p}, k={k}: 特殊型导子不为 3")
                result.check(invariant_dimensions(sym3_parameter(sp)) == (4, 1), f"p={p}: V^I 记账应为 (4, 1)")
            if p != 2:
                twisted = Special(p, 2, _characters_of_conductor(Qp, 1)[0])
                result.check(invariant_dimensions(sym3_parameter(twisted)) == (0, 0), f"p={p}: μ 分歧时 V^I 应为 0")

            low = 2 if p == 2 else 1
            for t in range(low, b.get('principal_level', 4) + 1):
                for omega in _sample(_characters_of_conductor(Qp, t), 2 * sample, rng):
                    lp = PrincipalSeries(p, rng.randint(2, b.get('max_weight', 12)), _with_random_uniformizer(omega, rng))
                    record('principal', lp)
                    result.check(sym3_parameter(lp).dimension == 4, "sym³ 的维数应为 4")
                    result.check(determinant_sanity(lp), f"p={p}: det sym³ ≠ ω⁶")

            top = b.get('p2_kappa_level', 4) if p == 2 else b['max_level']
            for kind in (UNRAMIFIED, RAMIFIED):
                for K in quadratic_extensions(p, kind):
                    for a in range(1, top + 1):
                        for sc in dihedral_data(K, a, limit=sample, rng=rng):
                            record(f'supercuspidal/{kind}', sc)
                            result.check(determinant_sanity(sc), f"{K}: det sym³ ≠ det⁶")

        labels = sorted({label for label, _ in tally})
        for label in labels:
            result.rows.append({"type": label, "checked": tally[(label, 'checked')],
                                "closed_form_inapplicable": tally[(label, 'skipped')]})

    # ============================================================
    # table6
    # ============================================================
    def _table6(self, result: SuiteResult, b: dict, rng: random.Random):
        witnesses = Counter()
        unlisted = 0
        for p in _primes(b, odd_only=True):
            for kind in (UNRAMIFIED, RAMIFIED):
                levels = range(1, b['max_level'] + 1) if kind == UNRAMIFIED else range(2, b['max_level'] + 1, 2)
                for K in quadratic_extensions(p, kind):
                    omega_K = local_class_character(K)
                    for a in levels:
                        for sc in dihedral_data(K, a, limit=b.get('kappa_sample', 60), rng=rng):
                            if minimality_violations(sc):
                                continue
                            try:
                                typ = classify_type(sc)
                            except ArithmeticDomainError as exc:
                                result.check(False, f"{K}: {sc.kappa} 分类失败: {exc}")
                                continue
                            if typ.name == TYPE_III:
                                result.check(typ.partner / typ.phi == omega_K,
                                             f"{K}: φ 的两个解不相差 ω_K")
                            kappa_sq = sc.kappa.power(2).is_unramified()
                            try:
                                row = type_table_row(typ.name, p, K.kind, sc.n_p, sc.c_p, kappa_sq)
                            except ArithmeticDomainError as exc:
                                result.notes.append(f"{K}: {exc}")
                                continue
                            if row is None:
                                unlisted += 1
                                continue
                            witnesses[row] += 1
                            result.check(TYPE_TABLE[row]['possible'],
                                         f"不可能的格子 [{describe_row(TYPE_TABLE[row])}] 被 {sc.kappa} 实现")

        for i, row in enumerate(TYPE_TABLE):
            result.rows.append({"cell": describe_row(row), "possible": row['possible'], "witnesses": witnesses[i]})
            if row['possible'] and not witnesses[i]:
                result.notes.append(f"[{describe_row(row)}] 在当前范围内不可达")
        if unlisted:
            result.notes.append(f"{unlisted} 个数据不在表中任何一行")

    # ============================================================
    # variance-closed-forms
    # ============================================================
    def _variance_closed_forms(self, result: SuiteResult, b: dict, rng: random.Random):
        digits = b.get('pi_digits', 20)
        tally = Counter()

        def compare(label, lp, convention=None):
            rec = variance_epsilon(lp, convention=convention)
            closed = rec.closed
            if closed.expected() is None:
                tally[(label, 'definitional-only')] += 1
                return
            tally[(label, closed.label)] += 1
            result.check(rec.agrees, f"{label} p={lp.p} [{closed.label}]: 定义式 {rec.definitional} ≠ 闭式 {closed.expected()}")
            if closed.gauss is not None:
                for c in closed.gauss.oracle_checks(digits):
                    result.check(c['ok'], f"{label} p={lp.p}: {c}")
            if closed.tabulated_matches() is False:
                tally[(label, f'{closed.label} 表值不同')] += 1

        for p in _primes(b):
            Qp = LocalFieldSpec(p)
            for k in range(2, b.get('max_weight', 12) + 1):
                compare('special', Special(p, k))
                if p == 2:
                    compare('special/lemma', Special(p, k), 'lemma')

            levels = range(2, b.get('p2_level', 5) + 1) if p == 2 else range(1, b['max_level'] + 1)
            for t in levels:
                for omega in _sample(_characters_of_conductor(Qp, t), 2 * b.get('kappa_sample', 12), rng):
                    lp = PrincipalSeries(p, rng.randint(2, b.get('max_weight', 12)), _with_random_uniformizer(omega, rng))
                    compare('principal', lp)
                    if p == 2:
                        compare('principal/lemma', lp, 'lemma')

            for kind in ((UNRAMIFIED,) if p == 2 else (UNRAMIFIED, RAMIFIED)):
                levels = range(1, b['max_level'] + 1) if kind == UNRAMIFIED else range(2, b['max_level'] + 1, 2)
                if p == 2:
                    # N_2 = 2 的驯顺行
                    levels = [1]
                for K in quadratic_extensions(p, kind):
                    for a in levels:
                        for sc in dihedral_data(K, a, limit=b.get('kappa_sample', 12), rng=rng):
                            if not minimality_violations(sc):
                                compare(f'supercuspidal/{kind}', sc)

        for (label, row_label), n in sorted(tally.items()):
            result.rows.append({"type": label, "row": row_label, "count": n})

    # ============================================================
    # global-agreement
    # ============================================================
    def _global_agreement(self, result: SuiteResult, b: dict, rng: random.Random):
        primes = _primes(b)
        twist_checks = b.get('twist_checks', 50)
        for i in range(b.get('descriptors', 200)):
            d = random_descriptor(rng, primes, max_level=b.get('max_level', 3))
            result.check(not check_hypothesis_h(d), f"生成的描述违反 (H): {d.to_json()}")
            conductor = global_sym3_conductor(d)
            result.check(conductor.agrees, f"N={d.level_number}: 逐素数 {conductor.per_prime} ≠ 闭式 {conductor.closed_form}")
            part = partition_primes(d)
            result.check(part.covers(d.primes) and part.is_disjoint(), f"N={d.level_number}: 划分不完整或有交")
            if i < twist_checks:
                for p in d.primes:
                    if p == 2:
                        continue
                    m = prime_to_p_part(conductor, p)
                    result.check(unramified_epsilon_product(conductor, p) == twist_sign(p, m, d.local[p]),
                                 f"N={d.level_number}, p={p}: ∏ε_q ≠ χ_p(M'={m})")
            result.rows.append({"N": d.level_number, "conductor": conductor.value, "agrees": conductor.agrees})

        for _ in range(b.get('squarefree', 30)):
            chosen = sorted(rng.sample(primes, rng.randint(1, min(3, len(primes)))))
            d = NewformDescriptor(2, {p: 1 for p in chosen}, {}, {p: Special(p, 2) for p in chosen})
            conductor = global_sym3_conductor(d)
            result.check(conductor.value == d.level_number ** 3, f"N={d.level_number}: 导子 {conductor.value} ≠ N³")
