"""Multiple zeta values: the three evaluation routes and their agreement."""

import math

import pytest

from moditer import forms, iterint, mzv
from moditer.config import NumericsConfig
from moditer.errors import DivergenceError, DomainError

CFG = NumericsConfig()
ZETA3 = 1.2020569031595942854
ZETA2 = math.pi**2 / 6
ZETA4 = math.pi**4 / 90


def test_index_validation():
    idx = mzv.MzvIndex((2, 1))
    assert idx.weight == 3 and idx.depth == 2
    assert idx.ascending == (1, 2)
    with pytest.raises(DomainError, match="outer exponent"):
        mzv.MzvIndex((1, 2))
    with pytest.raises(DomainError):
        mzv.MzvIndex(())
    with pytest.raises(DomainError):
        mzv.MzvIndex((2, 0))


def test_series_classical_values():
    assert mzv.mzv_series(mzv.MzvIndex((2,))) == pytest.approx(ZETA2, abs=1e-12)
    assert mzv.mzv_series(mzv.MzvIndex((3,))) == pytest.approx(ZETA3, abs=1e-12)
    assert mzv.mzv_series(mzv.MzvIndex((4,))) == pytest.approx(ZETA4, abs=1e-12)


def test_series_euler_identity():
    # zeta(2,1) = zeta(3); the evaluator knows nothing of the identity
    got = mzv.mzv_series(mzv.MzvIndex((2, 1)))
    assert abs(got - mzv.mzv_series(mzv.MzvIndex((3,)))) < 1e-8
    assert abs(got - ZETA3) < 1e-10


def test_series_shuffle_stuffle_checks():
    z = lambda *ks: mzv.mzv_series(mzv.MzvIndex(ks))
    # stuffle: zeta(2) zeta(3) = zeta(2,3) + zeta(3,2) + zeta(5)
    assert z(2, 3) + z(3, 2) + z(5) == pytest.approx(ZETA2 * ZETA3, abs=1e-10)
    assert z(2, 2) == pytest.approx((ZETA2**2 - ZETA4) / 2, abs=1e-10)
    assert z(3, 1) == pytest.approx(ZETA4 / 4, abs=1e-10)
    assert z(2, 1, 1) == pytest.approx(ZETA4, abs=1e-10)


def test_series_cutoff_tail_replacement():
    # the Euler-Maclaurin tail makes small cutoffs already accurate
    assert mzv.mzv_series(mzv.MzvIndex((2,)), cutoff=100) == pytest.approx(
        ZETA2, abs=1e-11
    )
    with pytest.raises(DomainError):
        mzv.mzv_series(mzv.MzvIndex((2,)), cutoff=8)


def test_p1_against_series():
    for ks, tol in [((2,), 1e-8), ((3,), 1e-8), ((4,), 1e-7), ((2, 1), 1e-8), ((2, 2), 1e-8)]:
        idx = mzv.MzvIndex(ks)
        assert abs(mzv.mzv_p1_integral(idx, CFG) - mzv.mzv_series(idx)) < tol


def test_p1_word_guards():
    assert mzv.p1_word_integral([]) == 1.0
    with pytest.raises(DivergenceError, match="divergent at 0"):
        mzv.p1_word_integral([0, 1])
    with pytest.raises(DivergenceError, match="divergent at 1"):
        mzv.p1_word_integral([1, 0, 1])


def test_modular_unit_integral_is_log2():
    # one F-layer from i-infinity to the reflection fixed point is the
    # half-interval integral of dt/(1-t), i.e. log 2
    f = forms.builtin("F", 256)
    got = 32j * math.pi * iterint.nested_quadrature(
        iterint.make_spec([(f, 1.0)]), iterint.IINF, 0.5j, CFG
    )
    assert abs(got - math.log(2)) < 1e-12


def test_lambda_on_imaginary_axis():
    assert mzv.lambda_modular(0.5j) == pytest.approx(0.5, abs=1e-12)
    for y in (0.3, 0.5, 1.0, 2.0, 5.0):
        val = mzv.lambda_modular(1j * y)
        assert 0.0 < val.real < 1.0
        assert abs(val.imag) < 1e-12


def test_lambda_reflection_identity():
    for z in (0.4 + 0.7j, 1j, -0.2 + 1.3j):
        lhs = mzv.lambda_modular(-1 / (4 * z))
        assert abs(lhs - (1 - mzv.lambda_modular(z))) < 1e-12


@pytest.mark.parametrize(
    "ks,want,tol",
    [
        ((2,), ZETA2, 1e-6),
        ((3,), ZETA3, 1e-6),
        ((2, 1), ZETA3, 1e-5),
    ],
)
def test_modular_route(ks, want, tol):
    assert abs(mzv.mzv_modular_integral(mzv.MzvIndex(ks), CFG) - want) < tol


def test_modular_prefactor_restatement():
    idx = mzv.MzvIndex((2, 1))
    raw = mzv.modular_raw_integral(idx, CFG)
    pref = (2j * math.pi) ** idx.weight * 16**idx.depth
    assert mzv.mzv_modular_integral(idx, CFG) == pytest.approx((pref * raw).real)
    # the raw integral really is zeta over the prefactor
    assert abs(pref * raw - mzv.mzv_series(idx)) < 1e-10


def test_three_way_agreement():
    for ks in [(2,), (3,), (4,), (2, 1)]:
        idx = mzv.MzvIndex(ks)
        a = mzv.mzv_series(idx)
        b = mzv.mzv_p1_integral(idx, CFG)
        c = mzv.mzv_modular_integral(idx, CFG)
        assert abs(a - b) < 1e-6
        assert abs(a - c) < 1e-6
        assert abs(b - c) < 1e-6
