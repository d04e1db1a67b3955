import pytest

from config.suite_profiles import SUITE_PROFILES
from core.verifier import SuiteResult, SuiteVerifier

SMALL = {
    'gauss': {'max_p': 5, 'max_level': 2},
    'gross-koblitz': {'max_p': 5, 'max_level': 2, 'gamma_primes': [3]},
    'conductor-powers': {'max_p': 5, 'max_level': 3, 'p2_max_level': 4, 'extension_level': 2},
    'epsilon-props': {'max_p': 3, 'max_level': 1, 'random_units': 2},
    'deligne-twist': {'max_p': 5, 'max_level': 2, 'alpha_sample': 3},
    'global-agreement': {'primes': [3, 5], 'max_p': 5, 'max_level': 2, 'descriptors': 4,
                         'squarefree': 3, 'twist_checks': 4},
}


def test_nine_suites_are_registered():
    assert sorted(SuiteVerifier.available()) == sorted([
        'conductor-powers', 'deligne-twist', 'epsilon-props', 'gauss', 'global-agreement',
        'gross-koblitz', 'sym3-conductors', 'table6', 'variance-closed-forms',
    ])
    for name, profile in SUITE_PROFILES.items():
        assert profile['name'] == name
        assert 'max_p' in profile['bounds']


def test_unknown_suite():
    with pytest.raises(ValueError):
        SuiteVerifier().run('no-such-suite')


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_suites_pass(name):
    result = SuiteVerifier(SMALL[name]).run(name)
    assert result.checked > 0
    assert result.passed, result.failures[:5]


def test_overrides_and_seed():
    result = SuiteVerifier({'max_p': 5, 'max_level': None}, seed=7).run('gauss')
    assert result.seed == 7
    assert result.bounds['max_p'] == 5
    assert result.bounds['max_level'] == SUITE_PROFILES['gauss']['bounds']['max_level']


def test_same_seed_same_result():
    bounds = {'primes': [3, 5], 'max_p': 5, 'max_level': 2, 'kappa_sample': 3, 'principal_level': 2,
              'max_weight': 3, 'p2_kappa_level': 2}
    first = SuiteVerifier(bounds, seed=11).run('sym3-conductors').to_json()
    second = SuiteVerifier(bounds, seed=11).run('sym3-conductors').to_json()
    assert first == second


def test_parallel_matches_serial():
    bounds = SMALL['deligne-twist']
    serial = SuiteVerifier(bounds, seed=3).run('deligne-twist').to_json()
    parallel = SuiteVerifier(bounds, seed=3, workers=3).run('deligne-twist').to_json()
    assert serial == parallel


def test_suite_result():
    result = SuiteResult('gauss', 0, {'max_p': 3})
    result.check(True, "ok")
    assert result.passed
    result.check(False, "bad")
    data = result.to_json()
    assert not data["passed"]
    assert data["checked"] == 2 and data["failures"] == ["bad"]
    assert set(data) == {"suite", "seed", "bounds", "passed", "checked", "failures", "notes", "rows"}


def test_variance_suite_covers_dyadic_tame_supercuspidal():
    bounds = {'primes': [2], 'max_p': 2, 'max_level': 1, 'max_weight': 2, 'p2_level': 2, 'kappa_sample': 2}
    result = SuiteVerifier(bounds, seed=5).run('variance-closed-forms')
    assert result.passed, result.failures[:5]
    rows = [r for r in result.rows if r['type'] == 'supercuspidal/unramified']
    assert rows and all('definitional-only' != r['row'] for r in rows)
    assert any('表值不同' in r['row'] for r in rows)
