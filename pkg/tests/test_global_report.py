import os
import random

import pytest

from core.errors import ArithmeticDomainError, Inapplicable
from core.global_report import (NewformDescriptor, PrimePartition, build_report, check_hypothesis_h,
                                closed_conductor_exponents, global_sym3_conductor, global_twist_relation,
                                local_gate_violations, partition_primes, prime_to_p_part, random_descriptor,
                                supercuspidal_verdict, unramified_epsilon_product)
from core.group_characters import all_characters, build_unit_group
from core.local_field import RAMIFIED, UNRAMIFIED, LocalFieldSpec
from core.wd_sym3 import (PrincipalSeries, Special, analyze_local, dihedral_data, minimality_violations,
                          quadratic_extensions)
from utils.helpers import parse_character, parse_descriptor

DATA = os.path.join(os.path.dirname(__file__), '..', 'data', 'descriptors')


def _load(name):
    return parse_descriptor(os.path.join(DATA, name))


def _characters(field, t):
    return [chi for chi in all_characters(build_unit_group(field, t)) if chi.conductor == t]


@pytest.mark.parametrize("name,factors", [
    ('n11_special.json', {11: 3}),
    ('n15_squarefree.json', {3: 3, 5: 3}),
    ('n175_supercuspidal.json', {5: 2, 7: 3}),
])
def test_sample_descriptors(name, factors):
    result = global_sym3_conductor(_load(name))
    assert result.per_prime == factors
    assert result.agrees


def test_squarefree_special_level_gives_cube():
    d = _load('n15_squarefree.json')
    assert global_sym3_conductor(d).value == d.level_number ** 3 == 3375


def test_partition_of_supercuspidal_example():
    part = partition_primes(_load('n175_supercuspidal.json'))
    assert part.SP == [7]
    assert part.SC == [5] and part.S1 == [5] and part.S2 == []
    assert part.covers([5, 7]) and part.is_disjoint()


@pytest.mark.parametrize("p,t,order,block", [
    (7, 2, None, 'P1'), (7, 1, 6, 'P1'), (7, 1, 3, 'P2'), (5, 1, 2, 'P2'),
    (3, 2, 3, 'P3'), (3, 2, 6, 'P2'), (3, 1, 2, 'P2'), (2, 3, None, 'P3'), (2, 4, None, 'P2'),
])
def test_principal_partition(p, t, order, block):
    Qp = LocalFieldSpec(p)
    omega = next(c for c in _characters(Qp, t) if order is None or c.order_on_units == order)
    lp = PrincipalSeries(p, 2, omega)
    d = NewformDescriptor(2, {p: t}, {p: t}, {p: lp})
    assert getattr(partition_primes(d), block) == [p]
    assert global_sym3_conductor(d).agrees


def test_closed_exponents_skip_s1():
    d = _load('n175_supercuspidal.json')
    assert closed_conductor_exponents(d)[5] == d.n_p(5)


def test_h3_violation_rejects_global_conductor():
    sc = next(sc for sc in dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1) if sc.kappa.order_on_units == 8)
    d = NewformDescriptor(2, {5: 2}, {5: 1}, {5: sc})
    assert check_hypothesis_h(d)
    with pytest.raises(Inapplicable):
        global_sym3_conductor(d)


def test_non_minimal_descriptor_is_rejected():
    d = NewformDescriptor(2, {11: 1}, {}, {11: Special(11, 2)}, minimal=False)
    with pytest.raises(Inapplicable):
        global_sym3_conductor(d)


def test_missing_local_data():
    with pytest.raises(ArithmeticDomainError):
        partition_primes(NewformDescriptor(2, {11: 1}, {}, {}))


def test_local_gates():
    assert local_gate_violations(1, 0, Special(7, 2)) == []
    assert local_gate_violations(2, 0, Special(7, 2))
    omega = parse_character({"residue_angle": "1/2"}, LocalFieldSpec(7))
    assert local_gate_violations(1, 1, PrincipalSeries(7, 2, omega)) == []
    assert local_gate_violations(2, 2, PrincipalSeries(7, 2, omega))
    sc = next(dihedral_data(LocalFieldSpec(5, UNRAMIFIED), 1))
    assert local_gate_violations(3, 0, sc)


@pytest.mark.parametrize("p,m_prime,chi", [(3, 125, -1), (5, 27, -1)])
def test_twist_relation_for_squarefree_level(p, m_prime, chi):
    d = _load('n15_squarefree.json')
    rel = global_twist_relation(d, p)
    assert rel.m_prime == m_prime
    assert rel.chi_of_m == chi
    assert rel.product_matches
    assert f"χ_{p}({m_prime})" in rel.render()


def test_twist_relation_needs_a_prime_of_the_level():
    with pytest.raises(ArithmeticDomainError):
        global_twist_relation(_load('n11_special.json'), 5)


def test_unramified_epsilon_product():
    conductor = global_sym3_conductor(_load('n175_supercuspidal.json'))
    assert prime_to_p_part(conductor, 5) == 343
    assert unramified_epsilon_product(conductor, 5) == -1
    assert unramified_epsilon_product(conductor, 7) == 1


def test_supercuspidal_verdict():
    rel = global_twist_relation(_load('n175_supercuspidal.json'), 5)
    assert rel.verdict == "Type III"


def test_ramified_verdict_at_three_names_the_extension():
    signs = {}
    for K in quadratic_extensions(3, RAMIFIED):
        for a in (2, 4):
            for sc in dihedral_data(K, a, limit=8, rng=random.Random(a)):
                if minimality_violations(sc):
                    continue
                record = analyze_local(sc)
                verdict = supercuspidal_verdict(record)
                assert f"K = Q_3(√{K.d})" in verdict and "(3, K/Q_3) = " in verdict
                if "对应此 K" in verdict:
                    signs.setdefault(K.d, set()).add(record.variance.definitional == 1)
    # 同一 K 的符号唯一，两个分歧扩张的符号相反
    assert all(len(s) == 1 for s in signs.values())
    if len(signs) == 2:
        assert signs[-3] != signs[-6]


@pytest.mark.parametrize("d", [-1, 3, 2, -6])
def test_ramified_verdict_at_two_reports_delta(d):
    K = LocalFieldSpec(2, RAMIFIED, d)
    for sc in dihedral_data(K, K.delta + 1, limit=4, rng=random.Random(d)):
        if minimality_violations(sc):
            continue
        verdict = supercuspidal_verdict(analyze_local(sc))
        assert f"K = Q_2(√{d})，δ={K.delta}" in verdict
        if K.delta == 2:
            assert "⇒ δ = 3" not in verdict


def test_build_report():
    report = build_report(_load('n175_supercuspidal.json'))
    data = report.to_json()
    assert data["N"] == 175
    assert data["global_conductor"]["value"] == 25 * 343
    assert [r["p"] for r in data["twist_relations"]] == [5, 7]
    assert all("local" not in r for r in data["twist_relations"])


def test_descriptor_equality_and_round_trip():
    d = _load('n175_supercuspidal.json')
    assert d == _load('n175_supercuspidal.json')
    assert parse_descriptor(d.to_json()) == d
    assert d != _load('n11_special.json')


@pytest.mark.parametrize("seed", range(8))
def test_random_descriptors(seed):
    d = random_descriptor(random.Random(seed), primes=(3, 5, 7), max_level=2, sample=20)
    assert not check_hypothesis_h(d)
    part = partition_primes(d)
    assert part.covers(d.primes) and part.is_disjoint()
    assert global_sym3_conductor(d).agrees


def test_partition_helpers():
    part = PrimePartition(P1=[7], P3=[2], SC=[5], S1=[5])
    assert part.P == [2, 7]
    assert part.covers([2, 5, 7])
    assert not PrimePartition(P1=[7], SP=[7]).is_disjoint()
