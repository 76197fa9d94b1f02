"""Classification of PSL2 isometries of the hyperbolic plane, with exact
translation length data for the hyperbolic ones.

The trichotomy (elliptic / parabolic / hyperbolic) is decided by comparing
trace squared against 4 using exact signs.  Finite order of an elliptic
element is decided by a bounded power search backed by the degree-two
rational-angle catalogue: if 2*cos(pi*p/q) has degree at most 2 over Q it
is one of 0, +-1, +-2, +-sqrt(2), +-sqrt(3), (+-1+-sqrt(5))/2, so an
elliptic trace outside the catalogue certifies infinite order.

Translation lengths tau = 2*log(lambda) are never converted to floats;
they are carried multiplicatively by the eigenvalue

    lambda = (|tr| + sqrt(tr^2 - 4)) / 2,

an exact element of a real quadratic field.  Rational dependence of two
lengths (p*tau_1 = q*tau_2) is equivalent to lambda_1^p = lambda_2^q,
which is decidable exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import ProjMat, QuadExt, rational_sqrt_decompose


class NotHyperbolic(ValueError):
    """Translation length requested for a non-hyperbolic element."""


@dataclass(frozen=True)
class TransLength:
    """Translation length 2*log(lambda) with lambda = rational_part +
    surd_coeff*sqrt(field_param).

    field_param is squarefree; field_param == 1 means lambda is rational
    (then surd_coeff is folded into rational_part and kept at zero).
    """

    rational_part: Fraction
    surd_coeff: Fraction
    field_param: int

    def multiplier(self) -> QuadExt | Fraction:
        """The eigenvalue lambda as an exact number."""
        if self.field_param == 1:
            return self.rational_part
        return QuadExt(self.field_param, self.rational_part, self.surd_coeff)

    def multiplier_str(self) -> str:
        if self.field_param == 1:
            return str(self.rational_part)
        from .exact import render_quadext

        return render_quadext(
            QuadExt(self.field_param, self.rational_part, self.surd_coeff)
        )


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class EllipticFinite:
    order: int


@dataclass(frozen=True)
class EllipticInfinite:
    pass


@dataclass(frozen=True)
class Parabolic:
    pass


@dataclass(frozen=True)
class Hyperbolic:
    # None when the trace is irrational: the multiplier then lives in a
    # degree-four field, outside the scope of this toolkit.
    length: TransLength | None


IsometryClass = Identity | EllipticFinite | EllipticInfinite | Parabolic | Hyperbolic

FINITE_ORDER_POWER_BOUND = 120


def _degree_two_cosine_catalogue() -> list:
    """All values 2*cos(pi*p/q) of degree <= 2 over Q, up to sign."""
    half = Fraction(1, 2)
    return [
        Fraction(0),
        Fraction(1),
        QuadExt.sqrt_d(2),
        QuadExt.sqrt_d(3),
        QuadExt(5, half, half),
        QuadExt(5, -half, half),
    ]


def classify(m: ProjMat, power_bound: int = FINITE_ORDER_POWER_BOUND) -> IsometryClass:
    """Classify a PSL2 element as an isometry of the hyperbolic plane."""
    tr = m.trace()
    disc = tr * tr - 4
    s = disc.sign()
    if s == 0:
        return Identity() if m.is_identity() else Parabolic()
    if s > 0:
        if not tr.is_rational:
            return Hyperbolic(None)
        return Hyperbolic(_length_from_rational_trace(abs(tr.a)))
    # elliptic: bounded power search for finite order (order 1 is impossible,
    # the identity has trace squared exactly 4)
    power = m
    for n in range(2, power_bound + 1):
        power = power * m
        if power.is_identity():
            return EllipticFinite(n)
    abs_tr = tr if tr.sign() >= 0 else -tr
    for value in _degree_two_cosine_catalogue():
        if abs_tr == value:
            raise RuntimeError(
                "elliptic trace matches a rational angle but no power "
                f"up to {power_bound} reached the identity"
            )
    return EllipticInfinite()


def _length_from_rational_trace(abs_trace: Fraction) -> TransLength:
    disc = abs_trace * abs_trace - 4
    coeff, d = rational_sqrt_decompose(disc)
    if d == 1:
        return TransLength((abs_trace + coeff) / 2, Fraction(0), 1)
    return TransLength(abs_trace / 2, coeff / 2, d)


def translation_length(m: ProjMat) -> TransLength:
    """Exact multiplicative translation length of a hyperbolic element.

    Raises NotHyperbolic for non-hyperbolic input and ValueError when the
    trace is irrational (multiplier of degree four, out of scope).
    """
    result = classify(m)
    if not isinstance(result, Hyperbolic):
        raise NotHyperbolic(f"element is {type(result).__name__}, not hyperbolic")
    if result.length is None:
        raise ValueError("irrational trace: multiplier leaves the quadratic scope")
    return result.length


@dataclass(frozen=True)
class Dependent:
    """p * tau_1 = q * tau_2 established exactly."""

    p: int
    q: int


@dataclass(frozen=True)
class IndependentUpTo:
    """No relation p*tau_1 = q*tau_2 with p, q <= bound; nothing is claimed
    beyond the scanned range."""

    bound: int


@dataclass(frozen=True)
class IndependentCertified:
    """No relation for any p, q >= 1.

    The certificate: the two multipliers lie in distinct quadratic fields
    (or one is rational and the other irrational).  For an irrational
    multiplier r + s*sqrt(D) of a hyperbolic element, r > 1 and s > 0, so
    by the product recurrence every power has a strictly positive and
    strictly increasing sqrt(D)-coefficient; no power is ever rational,
    and Q(sqrt(D1)) meets Q(sqrt(D2)) in Q only.
    """

    bound: int


DependenceVerdict = Dependent | IndependentUpTo | IndependentCertified


def _power_table(l: TransLength, bound: int) -> list[tuple[Fraction, Fraction]]:
    r, s, d = l.rational_part, l.surd_coeff, l.field_param
    out = [(r, s)]
    rp, sp = r, s
    for _ in range(bound - 1):
        rp, sp = r * rp + d * s * sp, r * sp + s * rp
        out.append((rp, sp))
    return out


def length_ratio_independent(
    l1: TransLength, l2: TransLength, bound: int
) -> DependenceVerdict:
    """Decide whether p*tau_1 = q*tau_2 for some 1 <= p, q <= bound.

    Returns the minimal Dependent(p, q) (ordered by p+q, then p) when a
    relation exists in range.  When the field parameters differ the
    independence is certified for all powers, not just the scanned range;
    when they agree and no relation is found, only the scanned range is
    vouched for.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if l1.field_param == l2.field_param:
        pows1 = _power_table(l1, bound)
        pows2 = _power_table(l2, bound)
        for total in range(2, 2 * bound + 1):
            for p in range(max(1, total - bound), min(bound, total - 1) + 1):
                q = total - p
                if pows1[p - 1] == pows2[q - 1]:
                    return Dependent(p, q)
        return IndependentUpTo(bound)
    for l in (l1, l2):
        if l.field_param != 1:
            if not (l.rational_part > 1 and l.surd_coeff > 0):
                raise ValueError("multiplier is not a hyperbolic eigenvalue")
            # re-verify the certificate's induction over the scanned range
            prev = Fraction(0)
            for _, sp in _power_table(l, bound):
                if not sp > prev:
                    raise RuntimeError("surd coefficients failed to increase")
                prev = sp
    return IndependentCertified(bound)
