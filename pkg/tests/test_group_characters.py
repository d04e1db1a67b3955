from fractions import Fraction

import hypothesis.strategies as st
import pytest
import sympy
from hypothesis import given
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from core.cyclotomic import FormalScalar
from core.errors import EnumerationTooLarge, LevelTooLow
from core.group_characters import (AdditiveCharacter, MultiplicativeCharacter, all_characters,
                                   build_unit_group, epsilon_prime, eval_additive, hilbert_symbol, inflate_by_norm,
                                   local_class_character, nebentypus_from_kappa, quadratic_character,
                                   smith_normal_form, trivial_character, tunnel_prediction, twist_character,
                                   unramified_character)
from core.local_field import RAMIFIED, UNRAMIFIED, LocalFieldSpec
from core.wd_sym3 import quadratic_extensions


def _conductor_histogram(field, t):
    counts = {}
    for chi in all_characters(build_unit_group(field, t)):
        counts[chi.conductor] = counts.get(chi.conductor, 0) + 1
    return counts


# ============================================================
# Smith 标准形与单位群
# ============================================================

def test_smith_normal_form_textbook_example():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    D, P, Q, Qi = smith_normal_form(A)
    assert [D[i][i] for i in range(3)] == [2, 6, 12]
    expected = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    assert [abs(expected[i, i]) for i in range(3)] == [2, 6, 12]
    assert sympy.Matrix(P) * sympy.Matrix(A) * sympy.Matrix(Q) == sympy.Matrix(D)
    assert sympy.Matrix(Q) * sympy.Matrix(Qi) == sympy.eye(3)


@given(st.lists(st.lists(st.integers(-12, 12), min_size=3, max_size=3), min_size=3, max_size=3))
def test_smith_normal_form_matches_sympy(rows):
    D, P, Q, _ = smith_normal_form(rows)
    assert sympy.Matrix(P) * sympy.Matrix(rows) * sympy.Matrix(Q) == sympy.Matrix(D)
    diag = [D[i][i] for i in range(3)]
    expected = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    assert sorted(abs(d) for d in diag) == sorted(abs(expected[i, i]) for i in range(3))
    for a, b in zip(diag, diag[1:]):
        if a:
            assert b % a == 0


@pytest.mark.parametrize("field,t,orders", [
    (LocalFieldSpec(5), 1, [4]),
    (LocalFieldSpec(5), 3, [100]),
    (LocalFieldSpec(3), 2, [6]),
    (LocalFieldSpec(2), 2, [2]),
    (LocalFieldSpec(2), 3, [2, 2]),
    (LocalFieldSpec(2), 5, [8, 2]),
    (LocalFieldSpec(3, UNRAMIFIED), 2, [24, 3]),
    (LocalFieldSpec(3, UNRAMIFIED), 1, [8]),
])
def test_unit_group_structure(field, t, orders):
    group = build_unit_group(field, t)
    assert group.orders == orders
    assert group.size == field.unit_group_order(t)
    assert len(group.keys()) == group.size


@pytest.mark.parametrize("field,t", [(LocalFieldSpec(7), 2), (LocalFieldSpec(2), 4),
                                     (LocalFieldSpec(3, UNRAMIFIED), 2), (LocalFieldSpec(3, RAMIFIED), 3),
                                     (LocalFieldSpec(2, RAMIFIED, -2), 4)])
def test_dlog_is_a_homomorphism(field, t):
    group = build_unit_group(field, t)
    keys = sorted(group.keys())
    for x in keys[::3]:
        for y in keys[::5]:
            lhs = group.dlog(group.mul(x, y))
            rhs = tuple((a + b) % d for a, b, d in zip(group.dlog(x), group.dlog(y), group.orders))
            assert lhs == rhs


def test_enumeration_cap():
    with pytest.raises(EnumerationTooLarge):
        build_unit_group(LocalFieldSpec(7), 4, cap=100)


def test_level_must_be_positive():
    with pytest.raises(ValueError):
        build_unit_group(LocalFieldSpec(7), 0)


# ============================================================
# 乘法特征标
# ============================================================

@pytest.mark.parametrize("p,t", [(3, 3), (5, 2), (7, 2)])
def test_conductor_counts_over_qp(p, t):
    counts = _conductor_histogram(LocalFieldSpec(p), t)
    assert counts[0] == 1
    assert counts[1] == p - 2
    for s in range(2, t + 1):
        assert counts[s] == (p - 1) * p ** (s - 1) - (p - 1) * p ** (s - 2)


def test_conductor_counts_over_q2():
    assert _conductor_histogram(LocalFieldSpec(2), 4) == {0: 1, 2: 1, 3: 2, 4: 4}


@given(st.integers(1, 200), st.integers(1, 200), st.integers(-2, 2))
def test_character_is_multiplicative(x, y, v):
    Q5 = LocalFieldSpec(5)
    if x % 5 == 0 or y % 5 == 0:
        return
    for chi in list(all_characters(build_unit_group(Q5, 2), FormalScalar.root(Fraction(1, 3), 5)))[::7]:
        a, b = Q5.element(Fraction(x) * Fraction(5) ** v), Q5.element(y)
        assert chi(a * b) == chi(a) * chi(b)


def test_power_inverse_and_product():
    group = build_unit_group(LocalFieldSpec(7), 2)
    chi = MultiplicativeCharacter(group, (Fraction(1, 6),), FormalScalar.root(Fraction(1, 4), 7))
    assert chi.order_on_units == 6
    assert (chi * chi.inverse()).is_unramified()
    assert (chi * chi.inverse()).at_uniformizer == 1
    assert chi.power(6).is_unramified()
    assert chi / chi == trivial_character(LocalFieldSpec(7), 2)


def test_invalid_exponents():
    group = build_unit_group(LocalFieldSpec(5), 1)
    with pytest.raises(ValueError):
        MultiplicativeCharacter(group, (Fraction(1, 3),), 1)
    with pytest.raises(ValueError):
        MultiplicativeCharacter(group, (), 1)


def test_change_level():
    chi = quadratic_character(5, 5)
    lifted = chi.change_level(3)
    assert lifted.level == 3 and lifted == chi
    assert lifted.conductor == 1
    deep = [c for c in all_characters(build_unit_group(LocalFieldSpec(5), 3)) if c.conductor == 3][0]
    with pytest.raises(LevelTooLow):
        deep.change_level(2)


def test_unramified_character_value():
    theta = unramified_character(LocalFieldSpec(3), FormalScalar.root(Fraction(1, 4), 3))
    assert theta.is_unramified() and theta.conductor == 0
    assert theta(LocalFieldSpec(3).element(9)) == -1


# ============================================================
# 二次特征标
# ============================================================

@pytest.mark.parametrize("x,y,p,value", [(-1, -1, 2, -1), (2, 3, 3, -1), (3, 3, 3, -1), (5, 3, 3, -1), (7, 3, 3, 1),
                                         (2, 5, 2, -1), (-1, 5, 2, 1), (7, 7, 7, -1)])
def test_hilbert_symbol(x, y, p, value):
    result = hilbert_symbol(x, y, p)
    assert type(result) is int
    assert result == value


@given(st.integers(1, 500), st.integers(1, 500), st.integers(1, 500), st.sampled_from([2, 3, 5, 7]),
       st.booleans(), st.booleans())
def test_hilbert_symbol_is_symmetric_and_bilinear(x, y, z, p, sx, sy):
    x, y = (-x if sx else x), (-y if sy else y)
    assert hilbert_symbol(x, y, p) == hilbert_symbol(y, x, p)
    assert hilbert_symbol(x * y, z, p) == hilbert_symbol(x, z, p) * hilbert_symbol(y, z, p)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_odd_quadratic_conductors(p):
    assert quadratic_character(p, -p).conductor == 1
    assert quadratic_character(p, p).order_on_units == 2
    assert quadratic_character(p, LocalFieldSpec(p, UNRAMIFIED).d).conductor == 0


@pytest.mark.parametrize("name,conductor", [('chi_-1', 2), ('chi_2', 3), ('chi_-2', 3)])
def test_p2_twist_characters(name, conductor):
    chi = twist_character(2, name)
    assert chi.conductor == conductor
    assert chi(LocalFieldSpec(2).element(2)) == 1


def test_twist_character_name_is_required_at_2():
    with pytest.raises(ValueError):
        twist_character(2)


@pytest.mark.parametrize("kind", [UNRAMIFIED, RAMIFIED])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_local_class_character_conductor_is_delta(p, kind):
    for K in quadratic_extensions(p, kind):
        omega = local_class_character(K)
        assert omega.conductor == K.delta
        assert omega.power(2).is_unramified()


def test_twist_value_at_p_is_one():
    for p in (3, 5, 7):
        assert twist_character(p)(LocalFieldSpec(p).element(p)) == 1


# ============================================================
# 扩张上的特征标
# ============================================================

def test_sigma_is_frobenius_on_residue_field():
    K = LocalFieldSpec(3, UNRAMIFIED)
    for kappa in all_characters(build_unit_group(K, 1)):
        assert kappa.sigma_conjugate().equal_on_units(kappa.power(3))


def test_sigma_is_an_involution():
    K = LocalFieldSpec(5, RAMIFIED)
    for kappa in list(all_characters(build_unit_group(K, 3)))[::11]:
        assert kappa.sigma_conjugate().sigma_conjugate() == kappa


def test_epsilon_prime_factors_through_the_norm():
    K = LocalFieldSpec(3, UNRAMIFIED)
    group = build_unit_group(K, 2)
    for kappa in list(all_characters(group))[::5]:
        eps = epsilon_prime(kappa)
        for key in list(group.keys())[::7]:
            x = K.from_key(key)
            assert eps.on_unit(x) == kappa.on_unit(K.element(x.norm()))


@pytest.mark.parametrize("kind", [UNRAMIFIED, RAMIFIED])
def test_inflate_by_norm_matches_tunnel(kind):
    K = quadratic_extensions(3, kind)[0]
    for chi in all_characters(build_unit_group(LocalFieldSpec(3), 2)):
        assert inflate_by_norm(chi, K).conductor == tunnel_prediction(chi, K)


def test_nebentypus_of_order_three_kappa_is_unramified():
    K = LocalFieldSpec(5, UNRAMIFIED)
    kappa = [k for k in all_characters(build_unit_group(K, 1)) if k.order_on_units == 3][0]
    assert nebentypus_from_kappa(kappa).conductor == 0


def test_to_json_shape():
    K = LocalFieldSpec(3, RAMIFIED)
    kappa = list(all_characters(build_unit_group(K, 2)))[1]
    data = kappa.to_json()
    assert data["field"] == {"p": 3, "kind": "ramified", "d": -3}
    assert data["level"] == 2
    assert all(len(e) == 2 for e in data["unit_exponents"])


# ============================================================
# 加法特征标
# ============================================================

@pytest.mark.parametrize("field,conductor", [
    (LocalFieldSpec(5), -1),
    (LocalFieldSpec(5, UNRAMIFIED), -1),
    (LocalFieldSpec(5, RAMIFIED), -1),
    (LocalFieldSpec(2, RAMIFIED, -1), 0),
    (LocalFieldSpec(2, RAMIFIED, 2), 1),
])
def test_additive_conductor(field, conductor):
    assert AdditiveCharacter.standard(field).conductor == conductor


def test_additive_twist():
    Q7 = LocalFieldSpec(7)
    phi = AdditiveCharacter.standard(Q7)
    assert phi.twisted(Q7.element(7)).conductor == 0
    assert phi(Q7.element(3)) == Fraction(3, 7)
    K = LocalFieldSpec(7, UNRAMIFIED)
    with pytest.raises(ValueError):
        AdditiveCharacter.standard(K).twisted(K.theta())


@given(st.integers(-500, 500), st.integers(-500, 500))
def test_additive_character_is_additive(x, y):
    K = LocalFieldSpec(5, UNRAMIFIED)
    phi = AdditiveCharacter.standard(K)
    total = eval_additive(phi, K.element(x) + K.element(y))
    assert total == (eval_additive(phi, x) + eval_additive(phi, y)) % 1
    assert eval_additive(phi, 5 * x) == 0
