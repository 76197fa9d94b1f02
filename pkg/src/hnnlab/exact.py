"""Exact arithmetic over real quadratic fields and 2x2 matrices over them.

Everything in this module is computed over Q or Q(sqrt(d)) with d a
squarefree integer >= 2.  There are no floats anywhere: coefficients are
``fractions.Fraction`` and every comparison (including the sign of an
irrational number) is decided by exact rational case analysis.

Values from different fields never mix silently.  Binary operations on
``QuadExt`` elements with different ``d`` raise ``MismatchedField``;
plain integers and ``Fraction`` values embed into any field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import total_ordering
from math import isqrt


class MismatchedField(ValueError):
    """Arithmetic attempted between elements of Q(sqrt(d)) for different d."""


class NotUnimodular(ValueError):
    """Matrix does not have determinant one."""


class SingularMatrix(ArithmeticError):
    """Matrix has determinant zero and cannot be inverted."""


RationalLike = (int, Fraction)


def sign_of_rational(q) -> int:
    """Sign of an int or Fraction as -1, 0 or +1."""
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s**2 * D with D squarefree; return (s, D).

    For n = 0 returns (0, 0).  The sign of n is carried by D.
    """
    if n == 0:
        return 0, 0
    sgn = 1 if n > 0 else -1
    n = abs(n)
    s, d = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= n
    return s, sgn * d


def rational_sqrt_decompose(q: Fraction) -> tuple[Fraction, int]:
    """Write sqrt(q) = s * sqrt(D) with s a positive Fraction and D squarefree.

    Requires q > 0.  D == 1 exactly when q is a square in Q.
    """
    if q <= 0:
        raise ValueError("expected a positive rational")
    num, den = q.numerator, q.denominator
    s, d = squarefree_part(num * den)
    return Fraction(s, den), d


_SQUAREFREE_OK: set[int] = set()


def _check_field_param(d: int) -> int:
    if d in _SQUAREFREE_OK:
        return d
    if not isinstance(d, int) or d < 2:
        raise ValueError(f"field parameter must be an integer >= 2, got {d!r}")
    r = isqrt(d)
    if r * r == d:
        raise ValueError(f"field parameter must be squarefree, got {d}")
    _, sf = squarefree_part(d)
    if sf != d:
        raise ValueError(f"field parameter must be squarefree, got {d}")
    _SQUAREFREE_OK.add(d)
    return d


@total_ordering
class QuadExt:
    """An element a + b*sqrt(d) of the real quadratic field Q(sqrt(d)).

    Instances are immutable by convention.  ``a`` and ``b`` are Fractions,
    ``d`` is a fixed squarefree integer >= 2 shared by both operands of any
    binary operation.  The order relation is the order inherited from R,
    decided exactly.
    """

    __slots__ = ("d", "a", "b")

    def __init__(self, d: int, a=0, b=0):
        self.d = _check_field_param(d)
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)

    @classmethod
    def _raw(cls, d: int, a: Fraction, b: Fraction) -> "QuadExt":
        new = object.__new__(cls)
        new.d = d
        new.a = a
        new.b = b
        return new

    @classmethod
    def rational(cls, d: int, value) -> "QuadExt":
        """Embed a rational value into Q(sqrt(d))."""
        return cls(d, value, 0)

    @classmethod
    def sqrt_d(cls, d: int) -> "QuadExt":
        """The element sqrt(d) itself."""
        return cls(d, 0, 1)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise MismatchedField(
                    f"cannot combine Q(sqrt({self.d})) with Q(sqrt({other.d}))"
                )
            return other
        if isinstance(other, RationalLike):
            return QuadExt._raw(self.d, Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.d, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.d, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.d, o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(
            self.d,
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __neg__(self):
        return QuadExt._raw(self.d, -self.a, -self.b)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = QuadExt._raw(self.d, Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "QuadExt":
        """Galois conjugate a - b*sqrt(d)."""
        return QuadExt._raw(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a**2 - d*b**2 (a rational number)."""
        return self.a * self.a - self.d * self.b * self.b

    def inv(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadExt._raw(self.d, self.a / n, -self.b / n)

    def sign(self) -> int:
        """Sign of the real number a + b*sqrt(d), decided exactly.

        When a and b disagree in sign the comparison reduces to a**2
        versus d*b**2, which is a rational comparison.
        """
        sa, sb = sign_of_rational(self.a), sign_of_rational(self.b)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # a and b have opposite signs: |a| vs |b|*sqrt(d)
        cmp = sign_of_rational(self.a * self.a - self.d * self.b * self.b)
        return sa if cmp > 0 else (sb if cmp < 0 else 0)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if other.d == self.d:
                return self.a == other.a and self.b == other.b
            # distinct fields intersect in Q
            return self.b == 0 and other.b == 0 and self.a == other.a
        if isinstance(other, RationalLike):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        # d deliberately excluded: equal rationals in different fields
        # must hash alike.
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadExt({self.d}, {self.a!r}, {self.b!r})"

    def __str__(self):
        return render_quadext(self)


def quad_sign(x) -> int:
    """Exact sign of a QuadExt, int or Fraction."""
    if isinstance(x, QuadExt):
        return x.sign()
    return sign_of_rational(x)


def render_quadext(x: QuadExt) -> str:
    """Render as ``a + b*sqrt(d)`` with rationals printed as ``p/q``."""
    if x.b == 0:
        return str(x.a)
    if x.b > 0:
        bpart = f"{x.b}*sqrt({x.d})" if x.b != 1 else f"sqrt({x.d})"
        return f"{x.a} + {bpart}" if x.a != 0 else bpart
    babs = -x.b
    bpart = f"{babs}*sqrt({x.d})" if babs != 1 else f"sqrt({x.d})"
    return f"{x.a} - {bpart}" if x.a != 0 else f"-{bpart}"


_QUAD_RE = re.compile(
    r"""^\s*
    (?:(?P<a>[+-]?\d+(?:/\d+)?)\s*)?                 # rational part
    (?:(?P<op>[+-])?\s*
       (?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?             # surd coefficient
       sqrt\(\s*(?P<d>\d+)\s*\)\s*)?$""",
    re.VERBOSE,
)


def parse_quadext(text: str, d: int | None = None) -> QuadExt:
    """Parse the grammar produced by :func:`render_quadext`.

    If the string has no sqrt term, ``d`` must be supplied to fix the
    ambient field.
    """
    m = _QUAD_RE.match(text)
    if not m or (m.group("a") is None and m.group("d") is None):
        raise ValueError(f"cannot parse quadratic field element: {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if m.group("d") is None:
        if d is None:
            raise ValueError("rational literal needs an explicit field parameter")
        return QuadExt(d, a, 0)
    dd = int(m.group("d"))
    if d is not None and d != dd:
        raise MismatchedField(f"expected sqrt({d}), found sqrt({dd})")
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("op") == "-":
        b = -b
    if m.group("a") is None and m.group("op") == "+":
        raise ValueError(f"cannot parse quadratic field element: {text!r}")
    return QuadExt(dd, a, b)


class Mat2:
    """A 2x2 matrix with entries in a single field Q(sqrt(d)).

    Immutable by convention.  Entries are QuadExt instances sharing the
    same field parameter; ints and Fractions in the constructor embed.
    """

    __slots__ = ("d", "m11", "m12", "m21", "m22")

    def __init__(self, d: int, m11, m12, m21, m22):
        self.d = _check_field_param(d)
        entries = []
        for v in (m11, m12, m21, m22):
            if isinstance(v, QuadExt):
                if v.d != d:
                    raise MismatchedField(
                        f"entry in Q(sqrt({v.d})) inside a matrix over Q(sqrt({d}))"
                    )
                entries.append(v)
            elif isinstance(v, RationalLike):
                entries.append(QuadExt._raw(d, Fraction(v), Fraction(0)))
            else:
                raise TypeError(f"bad matrix entry: {v!r}")
        self.m11, self.m12, self.m21, self.m22 = entries

    @classmethod
    def _raw(cls, d, m11, m12, m21, m22) -> "Mat2":
        new = object.__new__(cls)
        new.d = d
        new.m11, new.m12, new.m21, new.m22 = m11, m12, m21, m22
        return new

    @classmethod
    def identity(cls, d: int) -> "Mat2":
        one = QuadExt(d, 1)
        zero = QuadExt(d, 0)
        return cls._raw(d, one, zero, zero, one)

    def entries(self) -> tuple[QuadExt, QuadExt, QuadExt, QuadExt]:
        return (self.m11, self.m12, self.m21, self.m22)

    def __mul__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        if other.d != self.d:
            raise MismatchedField("matrix product across different fields")
        return Mat2._raw(
            self.d,
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __neg__(self):
        return Mat2._raw(self.d, -self.m11, -self.m12, -self.m21, -self.m22)

    def det(self) -> QuadExt:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> QuadExt:
        return self.m11 + self.m22

    def inverse(self) -> "Mat2":
        dt = self.det()
        if not dt:
            raise SingularMatrix("determinant is zero")
        inv_dt = dt.inv()
        return Mat2._raw(
            self.d,
            self.m22 * inv_dt,
            -self.m12 * inv_dt,
            -self.m21 * inv_dt,
            self.m11 * inv_dt,
        )

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat2.identity(self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scalar_mul(self, c) -> "Mat2":
        cc = c if isinstance(c, QuadExt) else QuadExt(self.d, c)
        return Mat2._raw(
            self.d, self.m11 * cc, self.m12 * cc, self.m21 * cc, self.m22 * cc
        )

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return (
            self.m11 == other.m11
            and self.m12 == other.m12
            and self.m21 == other.m21
            and self.m22 == other.m22
        )

    def __hash__(self):
        return hash((self.m11, self.m12, self.m21, self.m22))

    def is_identity(self) -> bool:
        return self == Mat2.identity(self.d)

    def is_plus_minus_identity(self) -> bool:
        return self.is_identity() or (-self).is_identity()

    def __repr__(self):
        return (
            f"Mat2({self.d}, [{render_quadext(self.m11)}, {render_quadext(self.m12)}; "
            f"{render_quadext(self.m21)}, {render_quadext(self.m22)}])"
        )


class ProjMat:
    """An element of PSL2 over Q(sqrt(d)): a determinant-one matrix up to sign.

    The stored representative is canonical: the sign is flipped, if needed,
    so that the first nonzero entry in row-major order is positive.  Two
    ProjMat instances are equal exactly when they name the same PSL2
    element, so they can be used as dict keys.
    """

    __slots__ = ("rep",)

    def __init__(self, m: Mat2):
        dt = m.det()
        if not (dt.is_rational and dt.a == 1):
            raise NotUnimodular(f"determinant {render_quadext(dt)} != 1")
        self.rep = _sign_normalize(m)

    @classmethod
    def _from_normalized(cls, m: Mat2) -> "ProjMat":
        new = object.__new__(cls)
        new.rep = m
        return new

    @property
    def d(self) -> int:
        return self.rep.d

    def __mul__(self, other):
        if not isinstance(other, ProjMat):
            return NotImplemented
        return ProjMat._from_normalized(_sign_normalize(self.rep * other.rep))

    def inverse(self) -> "ProjMat":
        m = self.rep
        # adjugate; det == 1 so no division is needed
        inv = Mat2._raw(m.d, m.m22, -m.m12, -m.m21, m.m11)
        return ProjMat._from_normalized(_sign_normalize(inv))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ProjMat.identity(self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    @classmethod
    def identity(cls, d: int) -> "ProjMat":
        return cls._from_normalized(Mat2.identity(d))

    def is_identity(self) -> bool:
        return self.rep.is_identity()

    def trace(self) -> QuadExt:
        """Trace of the canonical representative (defined up to sign in PSL2)."""
        return self.rep.trace()

    def __eq__(self, other):
        if not isinstance(other, ProjMat):
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"ProjMat({self.rep!r})"


def _sign_normalize(m: Mat2) -> Mat2:
    for entry in (m.m11, m.m12, m.m21, m.m22):
        s = entry.sign()
        if s < 0:
            return -m
        if s > 0:
            return m
    return m


def proj_eq(x: Mat2, y: Mat2) -> bool:
    """Projective equality of two unimodular matrices (x == +/- y)."""
    return ProjMat(x) == ProjMat(y)


def power_rationality(lam: QuadExt, pmax: int) -> list[tuple[int, bool]]:
    """For p = 1..pmax report whether lam**p is rational.

    Powers are carried exactly by the multiplication recurrence, so the
    report is a certificate, not a numerical observation.
    """
    if pmax < 1:
        raise ValueError("pmax must be >= 1")
    out = []
    power = lam
    for p in range(1, pmax + 1):
        out.append((p, power.is_rational))
        if p < pmax:
            power = power * lam
    return out
