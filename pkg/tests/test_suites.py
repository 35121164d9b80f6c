import pytest

from hyperbethe import fixtures
from hyperbethe.suites import Config, bad_corpus, family_checks, run_suite


def test_config_rejects_nonpositive_tolerances():
    with pytest.raises(ValueError):
        Config(tol_newton=0)


def test_good_family_checks_pass():
    fam, z = fixtures.four_generic_lines()
    results = family_checks("generic", fam, z, Config())
    assert results and all(r.passed for r in results)


def test_bad_corpus_passes():
    results = bad_corpus(Config())
    assert all(r.passed for r in results), [r.message for r in results if not r.passed]


def test_mixed_sign_bad_fiber_reports_evidence():
    fam, z0 = fixtures.four_lines(weights=(1, -2, 3, 1))
    results = family_checks("mixed", fam, z0, Config(), "bad")
    reg = next(r for r in results if "regularized" in r.name)
    assert reg.passed
    assert not any("eigenvectors" in r.name for r in results)


def test_want_mismatch_raises():
    fam, z = fixtures.triangle()
    with pytest.raises(ValueError):
        family_checks("t", fam, z, Config(), "bad")


def test_run_suite_validation():
    with pytest.raises(ValueError):
        run_suite("nope", Config())
    fam, _ = fixtures.triangle()
    with pytest.raises(ValueError):
        run_suite("good", Config(), family=fam)


def test_failed_check_carries_tag():
    from hyperbethe.hamiltonians import VerificationError
    from hyperbethe.suites import run_check

    def boom():
        raise VerificationError("some statement", "broken")
    res = run_check("x", boom)
    assert not res.passed and res.tag == "some statement"
    assert res.to_json()["status"] == "fail"
