"""Exact and floating-point scalar arithmetic for flat-surface geometry.

The scalar tower has three levels:

* ``Fraction`` (arbitrary-precision rationals, always exact),
* ``CubicNumber`` -- elements c0 + c1*alpha + c2*alpha**2 of the cubic field
  Q(alpha), where alpha ~ 0.543689 is the real root of x**3 + x**2 + x - 1,
* ``float`` for inexact data.

Mixed arithmetic promotes upward (rational -> cubic -> float); exact values
never degrade to float unless a float operand is involved.  All geometric
predicates (orientation, incircle) are generic over the tower and decide
signs exactly on exact inputs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Tuple, Union

Rational = Fraction

# Coefficients of the reduction alpha**3 = 1 - alpha - alpha**2.
_RED0 = Fraction(1)
_RED1 = Fraction(-1)
_RED2 = Fraction(-1)


class _AlphaInterval:
    """Shared isolating interval for alpha, refined by bisection on demand.

    Starts at [0.54, 0.55]; each refinement halves the width.  The minimal
    polynomial x**3 + x**2 + x - 1 is negative at the left endpoint and
    positive at the right, so the interval always isolates the real root.
    """

    def __init__(self) -> None:
        self.lo = Fraction(27, 50)
        self.hi = Fraction(11, 20)

    @staticmethod
    def _minpoly(x: Fraction) -> Fraction:
        return x * x * x + x * x + x - 1

    def refine(self) -> None:
        mid = (self.lo + self.hi) / 2
        if self._minpoly(mid) < 0:
            self.lo = mid
        else:
            self.hi = mid

    def refine_to(self, width: Fraction) -> None:
        while self.hi - self.lo > width:
            self.refine()


_ALPHA = _AlphaInterval()


class CubicNumber:
    """Exact element c0 + c1*alpha + c2*alpha**2 of Q(alpha).

    Equality is coefficient-wise; products reduce by the minimal polynomial
    of alpha.  Signs and comparisons are exact (coefficient test for zero,
    interval refinement otherwise).
    """

    __slots__ = ("c0", "c1", "c2")

    def __init__(self, c0=0, c1=0, c2=0):
        self.c0 = Fraction(c0)
        self.c1 = Fraction(c1)
        self.c2 = Fraction(c2)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def alpha() -> "CubicNumber":
        return CubicNumber(0, 1, 0)

    @staticmethod
    def coerce(x) -> "CubicNumber":
        if isinstance(x, CubicNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CubicNumber(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CubicNumber")

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, float):
            return float(self) + other
        other = CubicNumber.coerce(other)
        return CubicNumber(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    __radd__ = __add__

    def __neg__(self):
        return CubicNumber(-self.c0, -self.c1, -self.c2)

    def __sub__(self, other):
        if isinstance(other, float):
            return float(self) - other
        return self + (-CubicNumber.coerce(other))

    def __rsub__(self, other):
        if isinstance(other, float):
            return other - float(self)
        return CubicNumber.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, float):
            return float(self) * other
        other = CubicNumber.coerce(other)
        a0, a1, a2 = self.c0, self.c1, self.c2
        b0, b1, b2 = other.c0, other.c1, other.c2
        # Convolution up to alpha**4, then reduce alpha**3 and alpha**4.
        p0 = a0 * b0
        p1 = a0 * b1 + a1 * b0
        p2 = a0 * b2 + a1 * b1 + a2 * b0
        p3 = a1 * b2 + a2 * b1
        p4 = a2 * b2
        # alpha**3 = 1 - alpha - alpha**2 ; alpha**4 = 2*alpha - 1.
        return CubicNumber(
            p0 + p3 * _RED0 - p4,
            p1 + p3 * _RED1 + 2 * p4,
            p2 + p3 * _RED2,
        )

    __rmul__ = __mul__

    def inverse(self) -> "CubicNumber":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(alpha)")
        # Columns of the multiplication-by-self matrix in basis 1, alpha, alpha**2.
        c0 = self
        c1 = self * CubicNumber.alpha()
        c2 = c1 * CubicNumber.alpha()
        m = ((c0.c0, c1.c0, c2.c0), (c0.c1, c1.c1, c2.c1), (c0.c2, c1.c2, c2.c2))
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        # Cramer's rule for m * y = (1, 0, 0).
        y0 = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det
        y1 = -(m[1][0] * m[2][2] - m[1][2] * m[2][0]) / det
        y2 = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det
        return CubicNumber(y0, y1, y2)

    def __truediv__(self, other):
        if isinstance(other, float):
            return float(self) / other
        return self * CubicNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        if isinstance(other, float):
            return other / float(self)
        return CubicNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = CubicNumber(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- order, sign, embedding ----------------------------------------------

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0 and self.c2 == 0

    def is_rational(self) -> bool:
        return self.c1 == 0 and self.c2 == 0

    def _value_interval(self) -> Tuple[Fraction, Fraction]:
        lo, hi = _ALPHA.lo, _ALPHA.hi
        lo2, hi2 = lo * lo, hi * hi
        v_lo = self.c0
        v_hi = self.c0
        if self.c1 >= 0:
            v_lo += self.c1 * lo
            v_hi += self.c1 * hi
        else:
            v_lo += self.c1 * hi
            v_hi += self.c1 * lo
        if self.c2 >= 0:
            v_lo += self.c2 * lo2
            v_hi += self.c2 * hi2
        else:
            v_lo += self.c2 * hi2
            v_hi += self.c2 * lo2
        return v_lo, v_hi

    def sign(self) -> int:
        """Exact sign of the real embedding (-1, 0, or +1)."""
        if self.is_zero():
            return 0
        if self.c1 == 0 and self.c2 == 0:
            return -1 if self.c0 < 0 else 1
        while True:
            v_lo, v_hi = self._value_interval()
            if v_lo > 0:
                return 1
            if v_hi < 0:
                return -1
            # 1, alpha, alpha**2 are Q-independent, so the value is nonzero
            # and refinement must eventually separate it from 0.
            _ALPHA.refine()

    def embed_real(self, eps: float) -> float:
        """Real embedding to within eps (alpha -> 0.543689...)."""
        if eps <= 0:
            raise ValueError("eps must be positive")
        if self.is_zero():
            return 0.0
        target = Fraction(eps)
        while True:
            v_lo, v_hi = self._value_interval()
            if v_hi - v_lo < target:
                return float((v_lo + v_hi) / 2)
            _ALPHA.refine()

    def __float__(self) -> float:
        return self.embed_real(2.0 ** -60)

    # -- comparisons / hashing -----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, float):
            return float(self) == other
        if isinstance(other, (int, Fraction, CubicNumber)):
            other = CubicNumber.coerce(other)
            return (self.c0, self.c1, self.c2) == (other.c0, other.c1, other.c2)
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c0)
        return hash(("cubic", self.c0, self.c1, self.c2))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        if isinstance(other, float):
            return float(self) < other
        return self._cmp(other) < 0

    def __le__(self, other):
        if isinstance(other, float):
            return float(self) <= other
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if isinstance(other, float):
            return float(self) > other
        return self._cmp(other) > 0

    def __ge__(self, other):
        if isinstance(other, float):
            return float(self) >= other
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        return f"CubicNumber({self.c0}, {self.c1}, {self.c2})"


ALPHA = CubicNumber.alpha()

Scalar = Union[int, Fraction, CubicNumber, float]
Point = Tuple[Scalar, Scalar]


def cubic_mul(x: CubicNumber, y: CubicNumber) -> CubicNumber:
    return CubicNumber.coerce(x) * CubicNumber.coerce(y)


def cubic_inv(x: CubicNumber) -> CubicNumber:
    return CubicNumber.coerce(x).inverse()


def embed_real(x: CubicNumber, eps: float) -> float:
    return CubicNumber.coerce(x).embed_real(eps)


def is_exact(x: Scalar) -> bool:
    return not isinstance(x, float)


def sign(x: Scalar) -> int:
    """Sign of a scalar: exact for exact scalars, literal for floats."""
    if isinstance(x, CubicNumber):
        return x.sign()
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def to_float(x: Scalar) -> float:
    return float(x)


# -- serialization ------------------------------------------------------------


def scalar_to_str(x: Scalar) -> str:
    if isinstance(x, CubicNumber):
        return f"[{x.c0},{x.c1},{x.c2}]"
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return repr(float(x))


def scalar_from_str(s: str) -> Scalar:
    s = s.strip()
    if s.startswith("["):
        parts = s[1:-1].split(",")
        if len(parts) != 3:
            raise ValueError(f"bad cubic literal: {s!r}")
        return CubicNumber(*(Fraction(p) for p in parts))
    if any(ch in s for ch in ".eE") and "/" not in s:
        return float(s)
    return Fraction(s)


# -- small linear algebra over the tower ---------------------------------------

Vec2 = Tuple[Scalar, Scalar]
Mat2 = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]


def vec_add(a: Vec2, b: Vec2) -> Vec2:
    return (a[0] + b[0], a[1] + b[1])

def vec_sub(a: Vec2, b: Vec2) -> Vec2:
    return (a[0] - b[0], a[1] - b[1])

def vec_neg(a: Vec2) -> Vec2:
    return (-a[0], -a[1])

def vec_scale(c: Scalar, a: Vec2) -> Vec2:
    return (c * a[0], c * a[1])

def dot(a: Vec2, b: Vec2) -> Scalar:
    return a[0] * b[0] + a[1] * b[1]

def cross(a: Vec2, b: Vec2) -> Scalar:
    return a[0] * b[1] - a[1] * b[0]

def mat_vec(m: Mat2, v: Vec2) -> Vec2:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])

def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return (
        (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
        (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
    )

def mat_det(m: Mat2) -> Scalar:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]

def mat_inv(m: Mat2) -> Mat2:
    d = mat_det(m)
    if sign(d) == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    if isinstance(d, CubicNumber):
        inv = d.inverse()
        return (
            (m[1][1] * inv, -m[0][1] * inv),
            (-m[1][0] * inv, m[0][0] * inv),
        )
    return (
        (m[1][1] / d, -m[0][1] / d),
        (-m[1][0] / d, m[0][0] / d),
    )

def mat_transpose(m: Mat2) -> Mat2:
    return ((m[0][0], m[1][0]), (m[0][1], m[1][1]))

IDENTITY: Mat2 = ((1, 0), (0, 1))


# -- geometric predicates -------------------------------------------------------


def orient(p1: Point, p2: Point, p3: Point) -> int:
    """Orientation of the triple: +1 counterclockwise, -1 clockwise, 0 collinear."""
    return sign(cross(vec_sub(p2, p1), vec_sub(p3, p1)))


def incircle(p1: Point, p2: Point, p3: Point, p4: Point) -> int:
    """Incircle test against the circumcircle of counterclockwise (p1, p2, p3).

    Returns +1 if p4 is strictly inside, 0 if cocircular, -1 if strictly
    outside; the sign of the lifted 4x4 determinant with rows
    (x, y, x**2 + y**2, 1).  Raises ValueError when p1, p2, p3 are collinear.
    """
    if orient(p1, p2, p3) == 0:
        raise ValueError("incircle: first three points are collinear")
    return sign(incircle_det(p1, p2, p3, p4))


def incircle_det(p1: Point, p2: Point, p3: Point, p4: Point) -> Scalar:
    """The lifted incircle determinant itself (not just its sign)."""
    adx = p1[0] - p4[0]
    ady = p1[1] - p4[1]
    bdx = p2[0] - p4[0]
    bdy = p2[1] - p4[1]
    cdx = p3[0] - p4[0]
    cdy = p3[1] - p4[1]
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    return (
        alift * (bdx * cdy - cdx * bdy)
        - blift * (adx * cdy - cdx * ady)
        + clift * (adx * bdy - bdx * ady)
    )
