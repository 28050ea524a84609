"""Exact arithmetic in the Gaussian integers Z[i].

Components are Python ints, so nothing here can overflow.  Associates are
normalized into the first quadrant (re > 0, im >= 0) wherever a single
representative is needed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from sympy import factorint, isprime

from .errors import DomainError

IntLike = Union[int, "GaussInt"]


@dataclass(frozen=True, slots=True)
class GaussInt:
    re: int
    im: int = 0

    @classmethod
    def coerce(cls, z: IntLike) -> GaussInt:
        if isinstance(z, GaussInt):
            return z
        if isinstance(z, int) and not isinstance(z, bool):
            return cls(z, 0)
        raise TypeError(f"cannot interpret {z!r} as a Gaussian integer")

    def __add__(self, other: IntLike) -> GaussInt:
        try:
            o = GaussInt.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> GaussInt:
        try:
            o = GaussInt.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: IntLike) -> GaussInt:
        try:
            o = GaussInt.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other: IntLike) -> GaussInt:
        try:
            o = GaussInt.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> GaussInt:
        return GaussInt(-self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __str__(self) -> str:
        return format_gauss(self)

    def __repr__(self) -> str:
        return f"GaussInt({self.re}, {self.im})"

    def conj(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_rational(self) -> bool:
        return self.im == 0


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))


def norm(z: IntLike) -> int:
    return GaussInt.coerce(z).norm()


def nu(z: IntLike) -> int:
    """Smallest positive rational integer divisible by ``z``: N(z) / gcd(re, im)."""
    z = GaussInt.coerce(z)
    if not z:
        raise DomainError("nu is undefined at 0")
    return z.norm() // math.gcd(z.re, z.im)


def canonical_associate(z: IntLike) -> GaussInt:
    z = GaussInt.coerce(z)
    if not z:
        raise DomainError("zero has no canonical associate")
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unreachable")


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b for b > 0, ties upward
    return (2 * a + b) // (2 * b)


def divmod_round(z: IntLike, d: IntLike) -> tuple[GaussInt, GaussInt]:
    """Euclidean division with N(remainder) <= N(d)/2."""
    z, d = GaussInt.coerce(z), GaussInt.coerce(d)
    if not d:
        raise DomainError("division by zero")
    num = z * d.conj()
    n = d.norm()
    q = GaussInt(_round_div(num.re, n), _round_div(num.im, n))
    return q, z - q * d


def reduce_mod(z: IntLike, m: IntLike) -> GaussInt:
    """Representative of z mod m in the half-open parallelogram spanned by m and i*m.

    The result depends only on the ideal (m) once m is canonicalized, so the
    modulus is normalized to its canonical associate first.
    """
    z = GaussInt.coerce(z)
    m = canonical_associate(m)
    num = z * m.conj()
    n = m.norm()
    q = GaussInt(num.re // n, num.im // n)
    return z - q * m


def exact_div(z: IntLike, d: IntLike) -> GaussInt:
    z, d = GaussInt.coerce(z), GaussInt.coerce(d)
    if not d:
        raise DomainError("division by zero")
    num = z * d.conj()
    n = d.norm()
    if num.re % n or num.im % n:
        raise DomainError(f"{d} does not divide {z}")
    return GaussInt(num.re // n, num.im // n)


def divides(d: IntLike, z: IntLike) -> bool:
    d, z = GaussInt.coerce(d), GaussInt.coerce(z)
    if not d:
        raise DomainError("divisibility by zero is undefined")
    num = z * d.conj()
    n = d.norm()
    return num.re % n == 0 and num.im % n == 0


def gcd(z: IntLike, w: IntLike) -> GaussInt:
    z, w = GaussInt.coerce(z), GaussInt.coerce(w)
    if not z and not w:
        raise DomainError("gcd(0, 0) is undefined")
    while w:
        _, r = divmod_round(z, w)
        z, w = w, r
    return canonical_associate(z)


def xgcd(z: IntLike, w: IntLike) -> tuple[GaussInt, GaussInt, GaussInt]:
    """Return (g, x, y) with x*z + y*w = g, g a (not normalized) gcd."""
    a, b = GaussInt.coerce(z), GaussInt.coerce(w)
    x0, y0, x1, y1 = ONE, ZERO, ZERO, ONE
    while b:
        q, r = divmod_round(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def inverse_mod(z: IntLike, m: IntLike) -> GaussInt:
    g, x, _ = xgcd(z, m)
    if not g.is_unit():
        raise DomainError(f"{z} is not invertible modulo {m}")
    # g is a unit, so its inverse is its conjugate
    return reduce_mod(x * g.conj(), m)


def coprime(z: IntLike, w: IntLike) -> bool:
    return gcd(z, w) == ONE


def is_gaussian_prime(z: IntLike) -> bool:
    z = GaussInt.coerce(z)
    if not z:
        return False
    if isprime(z.norm()):
        return True
    if z.re == 0 or z.im == 0:
        m = abs(z.re + z.im)
        return m % 4 == 3 and isprime(m)
    return False


@lru_cache(maxsize=4096)
def primes_over(p: int) -> tuple[GaussInt, ...]:
    """Canonical Gaussian primes dividing the rational prime ``p``, smaller imaginary part first."""
    if p < 2 or not isprime(p):
        raise DomainError(f"{p} is not a rational prime")
    if p == 2:
        return (GaussInt(1, 1),)
    if p % 4 == 3:
        return (GaussInt(p, 0),)
    # any x with x^2 = -1 (mod p) gives gcd(p, x + i) = a prime over p
    for c in range(2, p):
        x = pow(c, (p - 1) // 4, p)
        if x * x % p == p - 1:
            break
    pi = gcd(p, GaussInt(x, 1))
    pair = {pi, canonical_associate(pi.conj())}
    return tuple(sorted(pair, key=lambda g: (g.im, g.re)))


def rational_part(z: GaussInt) -> int | None:
    """If z is an associate of a rational integer, that integer's absolute value."""
    if z.re == 0 or z.im == 0:
        return abs(z.re + z.im)
    return None


def factor(z: IntLike) -> dict[GaussInt, int]:
    """Factor into canonical Gaussian primes (unit dropped)."""
    z = GaussInt.coerce(z)
    if not z:
        raise DomainError("cannot factor 0")
    out: dict[GaussInt, int] = {}
    for p in sorted(factorint(z.norm())):
        for pi in primes_over(p):
            e = 0
            while divides(pi, z):
                z = exact_div(z, pi)
                e += 1
            if e:
                out[pi] = e
    assert z.is_unit()
    return out


_REAL = re.compile(r"[+-]?\d+")
_IMAG = re.compile(r"([+-]?)(\d*)i")
_FULL = re.compile(r"([+-]?\d+)([+-])(\d*)i")


def parse_gauss(text: str) -> GaussInt:
    """Parse ``a+bi``, ``a-bi``, ``a``, ``bi``, ``i``, ``-i`` (no inner spaces)."""
    s = text.strip()
    if _REAL.fullmatch(s):
        return GaussInt(int(s), 0)
    m = _IMAG.fullmatch(s)
    if m:
        mag = int(m.group(2)) if m.group(2) else 1
        return GaussInt(0, -mag if m.group(1) == "-" else mag)
    m = _FULL.fullmatch(s)
    if m:
        mag = int(m.group(3)) if m.group(3) else 1
        return GaussInt(int(m.group(1)), -mag if m.group(2) == "-" else mag)
    raise ValueError(f"not a Gaussian integer: {text!r}")


def format_gauss(z: GaussInt) -> str:
    if z.im == 0:
        return str(z.re)
    mag = abs(z.im)
    imag = "i" if mag == 1 else f"{mag}i"
    if z.re == 0:
        return ("-" if z.im < 0 else "") + imag
    return f"{z.re}{'-' if z.im < 0 else '+'}{imag}"
