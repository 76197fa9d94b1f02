"""Isometry classification and translation length tests.

Frozen expectations were derived by hand: eigenvalues from the quadratic
formula on the characteristic polynomial, finite orders from rotation
angles (trace = 2*cos(theta)), and power identities checked symbolically
before being asserted here.
"""

import random
from fractions import Fraction

import pytest

from hnnlab.exact import Mat2, ProjMat, QuadExt
from hnnlab.isom import (
    Dependent,
    EllipticFinite,
    EllipticInfinite,
    Hyperbolic,
    Identity,
    IndependentCertified,
    IndependentUpTo,
    NotHyperbolic,
    Parabolic,
    TransLength,
    classify,
    length_ratio_independent,
    translation_length,
)
from hnnlab.quat import phi, standard_generators


def proj(name: str) -> ProjMat:
    return ProjMat(phi(standard_generators()[name]))


def test_identity_and_parabolic():
    assert classify(ProjMat.identity(2)) == Identity()
    shear = ProjMat(Mat2(2, 1, 1, 0, 1))
    assert classify(shear) == Parabolic()
    neg_shear = ProjMat(Mat2(2, -1, 1, 0, -1))
    assert classify(neg_shear) == Parabolic()
    with pytest.raises(NotHyperbolic):
        translation_length(shear)


def test_elliptic_finite_orders():
    # trace 0, 1, sqrt(2), golden ratio: rotations by pi/2, pi/3, pi/4, pi/5
    assert classify(ProjMat(Mat2(2, 0, 1, -1, 0))) == EllipticFinite(2)
    assert classify(ProjMat(Mat2(2, 1, 1, -1, 0))) == EllipticFinite(3)
    r2 = QuadExt.sqrt_d(2)
    assert classify(ProjMat(Mat2(2, 0, 1, -1, r2))) == EllipticFinite(4)
    golden = QuadExt(5, Fraction(1, 2), Fraction(1, 2))
    assert classify(ProjMat(Mat2(5, 0, 1, -1, golden))) == EllipticFinite(5)


def test_builtin_t_is_elliptic_of_infinite_order():
    t = proj("t")
    assert classify(t) == EllipticInfinite()
    # spot-check a few powers directly
    power = t
    for _ in range(30):
        power = power * t
        assert not power.is_identity()


def test_hyperbolic_multipliers_of_builtin_generators():
    # traces 3, 3, 5, 7
    res_a = classify(proj("a"))
    assert res_a == Hyperbolic(TransLength(Fraction(3, 2), Fraction(1, 2), 5))
    res_b = classify(proj("b"))
    assert res_b.length == res_a.length
    res_c = classify(proj("c"))
    assert res_c == Hyperbolic(TransLength(Fraction(5, 2), Fraction(1, 2), 21))
    res_d = classify(proj("d"))
    assert res_d == Hyperbolic(TransLength(Fraction(7, 2), Fraction(3, 2), 5))


def test_multiplier_identities():
    for name in ("a", "c", "d"):
        lam = translation_length(proj(name)).multiplier()
        tr = proj(name).trace()
        abs_tr = tr if tr.sign() >= 0 else -tr
        assert lam * lam.conj() == 1
        assert lam + lam.inv() == abs_tr
        assert lam.sign() > 0 and (lam - 1).sign() > 0


def test_multiplier_is_multiplicative_in_powers():
    for name in ("a", "c", "d"):
        m = proj(name)
        lam = translation_length(m).multiplier()
        for n in range(2, 7):
            assert translation_length(m**n).multiplier() == lam**n


def test_classification_is_conjugation_invariant():
    rng = random.Random(7)
    gens = [proj(n) for n in "abcdt"]
    samples = [proj("a"), proj("t"), ProjMat(Mat2(2, 1, 1, 0, 1))]
    for m in samples:
        expected = classify(m)
        for _ in range(10):
            g = ProjMat.identity(2)
            for _ in range(rng.randrange(1, 6)):
                step = rng.choice(gens)
                g = g * (step if rng.random() < 0.5 else step.inverse())
            assert classify(g * m * g.inverse()) == expected


def test_rational_multiplier_decomposition():
    m = ProjMat(Mat2(2, 2, 0, 0, Fraction(1, 2)))
    l = translation_length(m)
    assert l == TransLength(Fraction(2), Fraction(0), 1)
    assert l.multiplier() == 2


def test_irrational_trace_is_out_of_scope():
    lam = QuadExt(2, 1, 1)  # 1 + sqrt(2)
    m = ProjMat(Mat2._raw(2, lam, QuadExt(2, 0), QuadExt(2, 0), lam.inv()))
    res = classify(m)
    assert res == Hyperbolic(None)
    with pytest.raises(ValueError):
        translation_length(m)


def test_dependence_verdicts():
    tau_a = translation_length(proj("a"))
    tau_c = translation_length(proj("c"))
    tau_d = translation_length(proj("d"))

    assert length_ratio_independent(tau_a, tau_a, 10) == Dependent(1, 1)
    # lambda(d) = ((3+sqrt(5))/2)^2, so tau(d) = 2*tau(a)
    assert length_ratio_independent(tau_a, tau_d, 10) == Dependent(2, 1)
    assert length_ratio_independent(tau_d, tau_a, 10) == Dependent(1, 2)
    tau_a3 = translation_length(proj("a") ** 3)
    assert length_ratio_independent(tau_a, tau_a3, 10) == Dependent(3, 1)
    # distinct fields Q(sqrt(5)) and Q(sqrt(21)): certified for all powers
    assert length_ratio_independent(tau_a, tau_c, 100) == IndependentCertified(100)

    # same field, no relation in range: only the scanned range is claimed
    two = TransLength(Fraction(2), Fraction(0), 1)
    three = TransLength(Fraction(3), Fraction(0), 1)
    assert length_ratio_independent(two, three, 12) == IndependentUpTo(12)
    four = TransLength(Fraction(4), Fraction(0), 1)
    assert length_ratio_independent(two, four, 12) == Dependent(2, 1)
    # rational versus irrational multiplier: certified
    assert length_ratio_independent(two, tau_a, 50) == IndependentCertified(50)


def test_dependence_rejects_bad_input():
    with pytest.raises(ValueError):
        length_ratio_independent(
            TransLength(Fraction(2), Fraction(0), 1),
            TransLength(Fraction(2), Fraction(0), 1),
            0,
        )
    shrinking = TransLength(Fraction(1, 2), Fraction(-1, 2), 5)
    with pytest.raises(ValueError):
        length_ratio_independent(
            shrinking, TransLength(Fraction(2), Fraction(0), 1), 5
        )
