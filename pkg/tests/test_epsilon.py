from fractions import Fraction

import pytest

from core.cyclotomic import FormalScalar, sqrt_prime
from core.epsilon import (I, EpsilonInput, deligne_twist, epsilon_factor, epsilon_ratio, lemma_alpha_value,
                          local_tau, solve_additive_parameter)
from core.errors import Inapplicable
from core.group_characters import (AdditiveCharacter, MultiplicativeCharacter, all_characters, build_unit_group,
                                   quadratic_character, twist_character, unramified_character)
from core.local_field import UNRAMIFIED, LocalFieldSpec, smallest_nonresidue


def _of_conductor(field, t):
    return [chi for chi in all_characters(build_unit_group(field, t)) if chi.conductor == t]


def _with_uniformizer(chi, angle):
    return MultiplicativeCharacter(chi.group, chi.unit_exponents, FormalScalar.root(angle, chi.field.p))


@pytest.mark.parametrize("p,t", [(3, 2), (5, 1), (5, 2), (7, 1)])
def test_independent_of_unit_part_of_c(p, t):
    Qp = LocalFieldSpec(p)
    phi = AdditiveCharacter.standard(Qp)
    units = [Qp.from_key(k) for k in build_unit_group(Qp, t).keys()]
    for chi in _of_conductor(Qp, t)[::3]:
        chi = _with_uniformizer(chi, Fraction(1, 6))
        base = epsilon_factor(EpsilonInput(chi, phi))
        c0 = Qp.uniformizer_power(chi.conductor + phi.conductor)
        for u in units[::5]:
            assert epsilon_factor(EpsilonInput(chi, phi, c0 * u)) == base


@pytest.mark.parametrize("p,t", [(3, 1), (3, 2), (5, 2), (2, 3)])
def test_epsilon_times_inverse_is_chi_of_minus_one(p, t):
    Qp = LocalFieldSpec(p)
    phi = AdditiveCharacter.standard(Qp)
    for chi in _of_conductor(Qp, t):
        product = epsilon_factor(EpsilonInput(chi, phi)) * epsilon_factor(EpsilonInput(chi.inverse(), phi))
        assert product == chi(-1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_unramified_epsilon(p):
    Qp = LocalFieldSpec(p)
    theta = unramified_character(Qp, FormalScalar.root(Fraction(1, 3), p))
    assert epsilon_factor(EpsilonInput(theta, AdditiveCharacter.standard(Qp))) == theta.at_uniformizer.inverse()


def test_additive_twist_with_haar_normalization():
    Q5 = LocalFieldSpec(5)
    phi = AdditiveCharacter.standard(Q5)
    a = Q5.element(15)
    for chi in _of_conductor(Q5, 2)[::4]:
        chi = _with_uniformizer(chi, Fraction(1, 4))
        lhs = epsilon_factor(EpsilonInput(chi, phi.twisted(a)), haar_normalized=True)
        rhs = chi(a) * FormalScalar(1, 1, 0, 5) * epsilon_factor(EpsilonInput(chi, phi), haar_normalized=True)
        assert lhs == rhs


def test_unramified_twist_shifts_by_theta_of_c():
    Q7 = LocalFieldSpec(7)
    phi = AdditiveCharacter.standard(Q7)
    theta = unramified_character(Q7, FormalScalar.root(Fraction(5, 12), 7))
    for chi in _of_conductor(Q7, 2)[::6]:
        lhs = epsilon_factor(EpsilonInput(chi * theta, phi))
        rhs = theta.at_uniformizer ** (chi.conductor + phi.conductor) * epsilon_factor(EpsilonInput(chi, phi))
        assert lhs == rhs


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_tame_quadratic_epsilon(p):
    phi = AdditiveCharacter.standard(LocalFieldSpec(p))
    expected = 1 if p % 4 == 1 else I
    for d in (p, -p, p * smallest_nonresidue(p)):
        alpha = quadratic_character(p, d)
        assert lemma_alpha_value(alpha) == expected
        assert epsilon_factor(EpsilonInput(alpha, phi)) == expected


def test_product_of_tame_quadratics_is_unramified():
    p = 7
    phi = AdditiveCharacter.standard(LocalFieldSpec(p))
    alpha, beta = quadratic_character(p, p), quadratic_character(p, p * smallest_nonresidue(p))
    ab = alpha * beta
    assert ab.is_unramified()
    assert epsilon_factor(EpsilonInput(ab, phi)) == ab.at_uniformizer.inverse()


def test_tau_over_q2():
    phi = AdditiveCharacter.standard(LocalFieldSpec(2))
    assert local_tau(EpsilonInput(twist_character(2, 'chi_-1'), phi)) == I * 2
    assert local_tau(EpsilonInput(twist_character(2, 'chi_2'), phi)) == sqrt_prime(2) * 2
    assert local_tau(EpsilonInput(twist_character(2, 'chi_-2'), phi)) == sqrt_prime(2) * I * 2


def test_tau_of_cubic_character_over_unramified_q2():
    K = LocalFieldSpec(2, UNRAMIFIED)
    kappa = next(c for c in _of_conductor(K, 1) if c.order_on_units == 3)
    assert local_tau(EpsilonInput(kappa, AdditiveCharacter.standard(K))) == 2


def test_p2_conventions():
    chi = twist_character(2, 'chi_-1')
    inp = EpsilonInput(chi, AdditiveCharacter.standard(LocalFieldSpec(2)))
    assert epsilon_factor(inp) == I
    assert epsilon_factor(inp, convention='lemma') == lemma_alpha_value(chi)
    assert lemma_alpha_value(chi) == FormalScalar(I, -1, 0, 2)


def test_lemma_alpha_preconditions():
    quartic = next(c for c in _of_conductor(LocalFieldSpec(5), 1) if c.order_on_units == 4)
    with pytest.raises(Inapplicable):
        lemma_alpha_value(quartic)
    K = LocalFieldSpec(5, UNRAMIFIED)
    with pytest.raises(Inapplicable):
        lemma_alpha_value(_of_conductor(K, 1)[0])


def test_epsilon_ratio():
    Q5 = LocalFieldSpec(5)
    phi = AdditiveCharacter.standard(Q5)
    chi = _of_conductor(Q5, 2)[0]
    inp = EpsilonInput(chi, phi)
    assert epsilon_ratio([inp, inp], [inp]) == epsilon_factor(inp)


def test_input_validation():
    Q5 = LocalFieldSpec(5)
    chi = _of_conductor(Q5, 2)[0]
    with pytest.raises(ValueError):
        EpsilonInput(chi, AdditiveCharacter.standard(LocalFieldSpec(7)))
    with pytest.raises(ValueError):
        epsilon_factor(EpsilonInput(chi, AdditiveCharacter.standard(Q5), Q5.element(1)))


@pytest.mark.parametrize("p", [3, 5])
def test_solved_parameter_has_expected_valuation(p):
    Qp = LocalFieldSpec(p)
    phi = AdditiveCharacter.standard(Qp)
    for alpha in _of_conductor(Qp, 3)[::7]:
        c = solve_additive_parameter(alpha, phi)
        assert c.valuation() == -(alpha.conductor + phi.conductor)


@pytest.mark.parametrize("p,t", [(3, 2), (5, 2), (3, 3)])
def test_deligne_twist_matches_direct_sum(p, t):
    Qp = LocalFieldSpec(p)
    phi = AdditiveCharacter.standard(Qp)
    betas = [b for b in all_characters(build_unit_group(Qp, max(1, t // 2))) if 2 * b.conductor <= t]
    betas.append(unramified_character(Qp, FormalScalar.root(Fraction(1, 4), p)))
    for alpha in _of_conductor(Qp, t)[::5]:
        for beta in betas:
            assert deligne_twist(alpha, beta, phi) == epsilon_factor(EpsilonInput(alpha * beta, phi))


def test_deligne_twist_needs_deep_alpha():
    Q5 = LocalFieldSpec(5)
    alpha = beta = _of_conductor(Q5, 1)[0]
    with pytest.raises(Inapplicable):
        deligne_twist(alpha, beta, AdditiveCharacter.standard(Q5))
