from fractions import Fraction

import pytest
import sympy

from core.cyclotomic import FormalScalar
from core.epsilon import EpsilonInput, epsilon_factor, local_tau
from core.errors import ArithmeticDomainError, Inapplicable
from core.group_characters import (AdditiveCharacter, MultiplicativeCharacter, all_characters, build_unit_group,
                                   quadratic_character, trivial_character, twist_character)
from core.local_field import RAMIFIED, UNRAMIFIED, LocalFieldSpec
from core.wd_sym3 import (SPECIAL, TYPE_I, TYPE_II, TYPE_III, TYPE_TABLE, PrincipalSeries, Special, Sym3Parameter,
                          SupercuspidalDihedral, analyze_local, classify_type, cube_root_exponent, describe_row,
                          determinant_sanity, dihedral_data, gauss_ratio, hypothesis_violations, invariant_dimensions,
                          jordan_kernel_weight, kappa_conductor_for_level, local_sym3_conductor,
                          machinery_conductor, phi_conductor_prediction, quadratic_extensions, select_twist,
                          sym3_nilpotent, sym3_parameter, sym_power_matrix, type_possibility, type_table_row,
                          unramified_twist_epsilon_q, variance_epsilon, weil_deligne_epsilon)


def _of_conductor(field, t):
    return [chi for chi in all_characters(build_unit_group(field, t)) if chi.conductor == t]


def _omega(p, t, order=None, at=Fraction(0)):
    for chi in _of_conductor(LocalFieldSpec(p), t):
        if order is None or chi.order_on_units == order:
            return MultiplicativeCharacter(chi.group, chi.unit_exponents, FormalScalar.root(at, p))
    raise LookupError((p, t, order))


# ============================================================
# sym³ 函子
# ============================================================

def test_sym_power_of_diagonal_matrix():
    a, b = sympy.symbols('a b')
    m = sym_power_matrix(sympy.Matrix([[a, 0], [0, b]]), 3)
    assert m == sympy.diag(a ** 3, a ** 2 * b, a * b ** 2, b ** 3)


def test_sym3_nilpotent_is_a_single_jordan_block():
    n = sym3_nilpotent()
    assert n.rank() == 3
    assert n ** 4 == sympy.zeros(4, 4)
    assert [n[j - 1, j] for j in range(1, 4)] == [1, 2, 3]


def test_jordan_kernel_weight():
    assert jordan_kernel_weight() == Fraction(3, 2)


@pytest.mark.parametrize("p", [2, 3, 11])
def test_special_conductor_is_three(p):
    lp = Special(p, 2)
    param = sym3_parameter(lp)
    assert param.dimension == 4
    assert invariant_dimensions(param) == (4, 1)
    record = local_sym3_conductor(lp)
    assert record.machinery == 3 and record.closed_form == 3 and record.agrees


def test_special_with_ramified_twist():
    lp = Special(5, 2, quadratic_character(5, 5))
    assert (lp.n_p, lp.c_p) == (2, 0)
    assert invariant_dimensions(sym3_parameter(lp)) == (0, 0)
    record = local_sym3_conductor(lp)
    assert record.machinery == 4
    assert record.closed_form is None and record.agrees


@pytest.mark.parametrize("p,t,order,expected", [
    (7, 1, 2, 2), (7, 1, 3, 2), (7, 1, 6, 3), (7, 2, None, 6),
    (3, 1, 2, 2), (3, 2, 3, 4), (3, 2, 6, 5), (3, 3, None, 8),
    (2, 2, None, 4), (2, 3, None, 6), (2, 4, None, 11), (2, 5, None, 14),
])
def test_principal_series_conductor(p, t, order, expected):
    lp = PrincipalSeries(p, 2, _omega(p, t, order))
    record = local_sym3_conductor(lp)
    assert record.machinery == expected
    assert record.agrees
    assert determinant_sanity(lp)


def test_principal_series_needs_a_base_character():
    K = LocalFieldSpec(5, UNRAMIFIED)
    with pytest.raises(ValueError):
        PrincipalSeries(5, 2, _of_conductor(K, 1)[0])


# ============================================================
# 二面体超尖点
# ============================================================

def test_dihedral_rejects_galois_invariant_kappa():
    K = LocalFieldSpec(5, UNRAMIFIED)
    invariant = next(k for k in _of_conductor(K, 1) if k.order_on_units == 2)
    with pytest.raises(ArithmeticDomainError):
        SupercuspidalDihedral(invariant)
    with pytest.raises(ValueError):
        SupercuspidalDihedral(_omega(5, 1))


def test_unramified_p5_level_two():
    records = [local_sym3_conductor(sc) for sc in dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1)]
    assert records and all(r.agrees for r in records)
    assert {r.machinery for r in records} == {2, 4}


def test_h3_violation_blocks_the_closed_form():
    sc = next(sc for sc in dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1) if sc.kappa.order_on_units == 24)
    assert (sc.n_p, sc.c_p) == (2, 1)
    assert hypothesis_violations(sc)
    record = local_sym3_conductor(sc)
    assert record.closed_form is None and "H3" in record.reason


@pytest.mark.parametrize("K", quadratic_extensions(7, RAMIFIED))
def test_ramified_p7_level_three(K):
    for sc in dihedral_data(K, 2):
        assert sc.n_p == 3
        record = local_sym3_conductor(sc)
        assert record.machinery == record.closed_form == 6
        assert determinant_sanity(sc)


@pytest.mark.parametrize("order,expected", [(3, TYPE_III), (12, TYPE_III), (8, TYPE_I), (24, TYPE_II)])
def test_classification_over_unramified_q5(order, expected):
    sc = next(sc for sc in dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1) if sc.kappa.order_on_units == order)
    assert classify_type(sc).name == expected


def test_type_three_partners():
    sc = next(sc for sc in dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1) if sc.kappa.order_on_units == 3)
    typ = classify_type(sc)
    K = sc.field
    for phi in (typ.phi, typ.partner):
        assert phi.is_unramified()
        assert phi.at_uniformizer ** 2 == sc.kappa.power(3)(K.element(5))
    assert typ.phi != typ.partner
    assert phi_conductor_prediction(sc) == (0,)
    assert typ.to_json()["phi_conductors"] == [0, 0]


@pytest.mark.parametrize("K,n_p,a", [
    (LocalFieldSpec(5, UNRAMIFIED), 4, 2), (LocalFieldSpec(5, RAMIFIED), 3, 2), (LocalFieldSpec(3, RAMIFIED), 5, 4),
])
def test_kappa_conductor_for_level(K, n_p, a):
    assert kappa_conductor_for_level(K, n_p) == a


def test_kappa_conductor_parity():
    with pytest.raises(ArithmeticDomainError):
        kappa_conductor_for_level(LocalFieldSpec(5, UNRAMIFIED), 3)


@pytest.mark.parametrize("p,kind,count", [(2, RAMIFIED, 6), (5, RAMIFIED, 2), (5, UNRAMIFIED, 1)])
def test_quadratic_extensions(p, kind, count):
    fields = quadratic_extensions(p, kind)
    assert len(fields) == count
    assert len({f.d for f in fields}) == count


# ============================================================
# 类型可能性表
# ============================================================

@pytest.mark.parametrize("args,row", [
    ((TYPE_I, 5, UNRAMIFIED, 2, 0), 0),
    ((TYPE_I, 7, UNRAMIFIED, 6, 3), 2),
    ((TYPE_III, 3, UNRAMIFIED, 2, 1, True), 10),
    ((TYPE_III, 3, UNRAMIFIED, 2, 0, False), 11),
    ((TYPE_III, 3, RAMIFIED, 5, 2), 14),
    ((TYPE_II, 11, RAMIFIED, 5, 4), 6),
])
def test_type_table_row(args, row):
    assert type_table_row(*args) == row


@pytest.mark.parametrize("args,possible", [
    ((TYPE_I, 5, RAMIFIED, 3, 1), False),
    ((TYPE_III, 5, RAMIFIED, 3, 1), False),
    ((TYPE_II, 7, RAMIFIED, 5, 2), True),
    ((TYPE_III, 7, UNRAMIFIED, 4, 0), False),
    (('TypeIV', 7, UNRAMIFIED, 4, 0), None),
])
def test_type_possibility(args, possible):
    assert type_possibility(*args) is possible


def test_type_table_domain():
    with pytest.raises(Inapplicable):
        type_table_row(TYPE_I, 2, UNRAMIFIED, 2, 0)
    with pytest.raises(ArithmeticDomainError):
        type_table_row(TYPE_I, 5, UNRAMIFIED, 2, 2)
    with pytest.raises(ArithmeticDomainError):
        type_table_row(TYPE_I, 5, UNRAMIFIED, 3, 0)
    with pytest.raises(ArithmeticDomainError):
        type_table_row(TYPE_III, 3, UNRAMIFIED, 2, 0)


def test_describe_row():
    assert describe_row(TYPE_TABLE[0]) == "TypeI, unramified, 0≤C_p≤1, N_p=2"
    assert describe_row(TYPE_TABLE[10]).endswith("p=3, κ²|_O=1")


# ============================================================
# 方差数
# ============================================================

@pytest.mark.parametrize("p,k", [(5, 2), (7, 4), (3, 2), (11, 6)])
def test_special_variance(p, k):
    lp = Special(p, k)
    record = variance_epsilon(lp)
    assert record.agrees
    assert record.definitional == -lp.mu.at_uniformizer ** 3
    # 表中写法 −p^{(8−3k)/2}a_p³ 恰为精确值的 p 倍
    assert record.closed.tabulated == record.definitional * p
    assert record.closed.tabulated_matches() is False


def test_special_determinant_factor_drops_the_jordan_kernel_line():
    lp = Special(7, 2)
    param = sym3_parameter(lp)
    phi = AdditiveCharacter.standard(LocalFieldSpec(7))
    plain = weil_deligne_epsilon(Sym3Parameter(param.summands), phi)
    mu = lp.mu.at_uniformizer
    # 商掉 ker N'（权 3/2）后 det = −μ⁹
    assert weil_deligne_epsilon(param, phi) / plain == -mu ** 9


def test_special_root_number_has_no_p_power():
    lp = Special(11, 2)
    phi = AdditiveCharacter.standard(LocalFieldSpec(11))
    # k=2 时 μ(p) = a_p，ε(sym³) = −a_p^{−3}
    assert weil_deligne_epsilon(sym3_parameter(lp), phi) == -lp.mu.at_uniformizer ** -3


def test_special_variance_at_two_depends_on_convention():
    lp = Special(2, 2)
    definitional = variance_epsilon(lp)
    lemma = variance_epsilon(lp, convention='lemma')
    assert definitional.agrees and lemma.agrees
    assert definitional.definitional == -lp.mu.at_uniformizer ** 15
    assert definitional.definitional == lemma.definitional * 16
    assert lemma.closed.tabulated == lemma.definitional * 2


def test_principal_tame_quadratic_variance():
    lp = PrincipalSeries(5, 2, _omega(5, 1, 2, Fraction(1, 3)))
    record = variance_epsilon(lp)
    w = lp.omega.at_uniformizer
    assert record.definitional == lp.mu1.at_uniformizer ** 4 / w ** 2
    assert record.agrees and record.closed.tabulated_matches()


def test_principal_gamma_row_uses_gauss_ratio():
    lp = PrincipalSeries(7, 2, _omega(7, 1, 3))
    record = variance_epsilon(lp)
    assert record.closed.gauss is not None
    assert record.agrees
    checks = record.closed.gauss.oracle_checks()
    assert checks and all(c["ok"] for c in checks)
    assert "Γ_7" in record.closed.gauss.render()


def test_gauss_ratio_is_not_defined_for_special():
    with pytest.raises(Inapplicable):
        gauss_ratio(Special(5, 2))


def test_tame_unramified_supercuspidal_variance():
    for sc in dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1):
        assert variance_epsilon(sc).agrees is not False


def test_dyadic_tame_supercuspidal_covers_both_cube_roots():
    K = LocalFieldSpec(2, UNRAMIFIED)
    seen = set()
    for sc in dihedral_data(K, 1):
        assert sc.n_p == 2
        assert select_twist(sc) == twist_character(2, 'chi_2')
        n = cube_root_exponent(sc.kappa)
        seen.add(n)
        record = variance_epsilon(sc)
        assert record.agrees is True
        assert f"ω^{n}" in record.closed.label
        # 表中 τ 的模不对，与精确值不符
        assert record.closed.tabulated_matches() is False
    assert seen == {1, 2}


def test_dyadic_tame_gauss_sum_of_kappa():
    K = LocalFieldSpec(2, UNRAMIFIED)
    phi = AdditiveCharacter.standard(K)
    for sc in dihedral_data(K, 1):
        assert local_tau(EpsilonInput(sc.kappa, phi)) == 2
        assert epsilon_factor(EpsilonInput(sc.kappa, phi)) == 1
        assert sc.epsilon_prime.is_unramified()


def test_cube_root_exponent_needs_dyadic_unramified_field():
    kappa = next(iter(dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1))).kappa
    with pytest.raises(Inapplicable):
        cube_root_exponent(kappa)


def test_select_twist():
    assert select_twist(Special(5, 2)) == twist_character(5)
    assert select_twist(Special(2, 2)) == twist_character(2, 'chi_-1')
    with pytest.raises(Inapplicable):
        select_twist(PrincipalSeries(2, 2, trivial_character(LocalFieldSpec(2))))


@pytest.mark.parametrize("q,p,v,expected", [(3, 5, 1, -1), (3, 5, 2, 1), (11, 5, 1, 1), (2, 7, 3, 1)])
def test_unramified_twist_epsilon_q(q, p, v, expected):
    assert unramified_twist_epsilon_q(q, p, v) == expected


def test_unramified_twist_epsilon_q_domain():
    with pytest.raises(ValueError):
        unramified_twist_epsilon_q(5, 5, 1)


def test_analyze_local_record():
    record = analyze_local(Special(11, 2))
    data = record.to_json()
    assert data["type"] == SPECIAL
    assert data["N_p"] == 1 and data["C_p"] == 0
    assert data["conductor"]["machinery"] == 3
    assert data["variance"]["agrees"] is True
    assert machinery_conductor(record.lp) == 3
