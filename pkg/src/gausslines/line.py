"""Gaussian lines in canonical form (alpha0, delta) and divisibility along them."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapExceeded, DomainError
from .zi import (
    ONE,
    GaussInt,
    IntLike,
    divides,
    format_gauss,
    gcd,
    is_gaussian_prime,
    nu,
    parse_gauss,
    rational_part,
)

DEFAULT_SCAN_CAP = 10**7


@dataclass(frozen=True)
class NormPoly:
    """Coefficients of N(alpha_x) = a2*x^2 + a1*x + a0."""

    a2: int
    a1: int
    a0: int

    def __call__(self, x: int) -> int:
        return (self.a2 * x + self.a1) * x + self.a0

    @property
    def discriminant(self) -> int:
        return self.a1 * self.a1 - 4 * self.a2 * self.a0

    def to_dict(self) -> dict:
        return {"a2": self.a2, "a1": self.a1, "a0": self.a0}

    @classmethod
    def from_dict(cls, d: dict) -> NormPoly:
        return cls(int(d["a2"]), int(d["a1"]), int(d["a0"]))


@dataclass(frozen=True)
class Line:
    """A Gaussian line alpha_k = alpha0 + k*delta.

    Build with :meth:`from_points` or :meth:`from_canon`; the raw constructor
    does not check canonical form.
    """

    alpha0: GaussInt
    delta: GaussInt
    big_delta: int
    primitive: bool

    @classmethod
    def from_points(cls, z: IntLike, w: IntLike) -> Line:
        z, w = GaussInt.coerce(z), GaussInt.coerce(w)
        if z == w:
            raise DomainError("a line needs two distinct points")
        step = _primitive_direction(w - z)
        return cls._build(_min_norm_point(z, step), step)

    @classmethod
    def from_canon(cls, alpha0: IntLike, delta: IntLike) -> Line:
        """Accept (alpha0, delta) only if it is already the canonical pair of its line."""
        alpha0, delta = GaussInt.coerce(alpha0), GaussInt.coerce(delta)
        if not delta:
            raise DomainError("delta must be nonzero")
        line = cls.from_points(alpha0, alpha0 + delta)
        if (line.alpha0, line.delta) != (alpha0, delta):
            raise DomainError(
                f"canon pair ({alpha0}; {delta}) is not canonical; expected ({line.alpha0}; {line.delta})"
            )
        return line

    @classmethod
    def _build(cls, alpha0: GaussInt, delta: GaussInt) -> Line:
        big_delta = alpha0.re * delta.im - alpha0.im * delta.re
        return cls(alpha0, delta, big_delta, gcd(alpha0, delta) == ONE)

    def alpha(self, k: int) -> GaussInt:
        return self.alpha0 + self.delta * k

    def index_of(self, z: IntLike) -> int | None:
        diff = GaussInt.coerce(z) - self.alpha0
        c, d = self.delta.re, self.delta.im
        if c:
            if diff.re % c:
                return None
            k = diff.re // c
        else:
            k = diff.im // d
        return k if self.alpha(k) == diff + self.alpha0 else None

    def norm_poly(self) -> NormPoly:
        a, b = self.alpha0.re, self.alpha0.im
        c, d = self.delta.re, self.delta.im
        return NormPoly(c * c + d * d, 2 * (a * c + b * d), a * a + b * b)

    def spec(self) -> str:
        return f"canon: {format_gauss(self.alpha0)} ; {format_gauss(self.delta)}"

    def __str__(self) -> str:
        return f"Line(alpha0={self.alpha0}, delta={self.delta}, Delta={self.big_delta})"

    def to_dict(self) -> dict:
        return {
            "alpha0": format_gauss(self.alpha0),
            "delta": format_gauss(self.delta),
            "big_delta": self.big_delta,
            "primitive": self.primitive,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Line:
        line = cls.from_canon(parse_gauss(d["alpha0"]), parse_gauss(d["delta"]))
        if "big_delta" in d and int(d["big_delta"]) != line.big_delta:
            raise DomainError("big_delta does not match the canonical line")
        if "primitive" in d and bool(d["primitive"]) != line.primitive:
            raise DomainError("primitive flag does not match the canonical line")
        return line


def _primitive_direction(raw: GaussInt) -> GaussInt:
    g = math.gcd(raw.re, raw.im)
    c, d = raw.re // g, raw.im // g
    if c < 0 or (c == 0 and d < 0):
        c, d = -c, -d
    return GaussInt(c, d)


def _min_norm_point(z: GaussInt, step: GaussInt) -> GaussInt:
    # N(z + k*step) is a convex quadratic in k with vertex at -Tr(z*conj(step)) / (2 N(step))
    tr = 2 * (z.re * step.re + z.im * step.im)
    n = step.norm()
    lo = (-tr) // (2 * n)
    cands = [z + step * k for k in (lo - 1, lo, lo + 1, lo + 2)]
    return min(cands, key=lambda p: (p.norm(), -p.re))


def parse_line(text: str) -> Line:
    """Parse ``points: z1 ; z2`` or ``canon: alpha0 ; delta``; a bare ``z1;z2`` means points."""
    s = text.strip()
    kind = "points"
    if ":" in s:
        kind, s = (part.strip() for part in s.split(":", 1))
    parts = [p.strip() for p in s.split(";")]
    if len(parts) != 2:
        raise ValueError(f"line spec needs exactly two ';'-separated values: {text!r}")
    z, w = parse_gauss(parts[0]), parse_gauss(parts[1])
    if kind == "points":
        return Line.from_points(z, w)
    if kind == "canon":
        return Line.from_canon(z, w)
    raise ValueError(f"unknown line spec kind {kind!r}")


def _require_primitive(line: Line) -> None:
    if not line.primitive:
        raise DomainError("line is not primitive")


def prime_in_divisor_set(line: Line, pi: IntLike) -> bool:
    """Does the Gaussian prime ``pi`` divide some point of the line (closed-form test, no scan)."""
    pi = GaussInt.coerce(pi)
    _require_primitive(line)
    if not is_gaussian_prime(pi):
        raise DomainError(f"{pi} is not a Gaussian prime")
    p = rational_part(pi)
    if p is not None:
        return line.big_delta % p == 0
    return not divides(pi, line.delta)


def member_index(line: Line, beta: IntLike, scan_cap: int = DEFAULT_SCAN_CAP) -> int | None:
    """The residue t in [0, nu(beta)) with beta | alpha_t, or None if beta divides no point."""
    beta = GaussInt.coerce(beta)
    _require_primitive(line)
    if not beta or beta.is_unit():
        raise DomainError(f"{beta} must be nonzero and not a unit")
    period = nu(beta)
    if period > scan_cap:
        raise CapExceeded(f"nu({beta}) = {period} exceeds scan cap {scan_cap}")
    # beta | x  <=>  x*conj(beta) = 0 componentwise mod N(beta); track that product incrementally
    n = beta.norm()
    x = line.alpha0 * beta.conj()
    step = line.delta * beta.conj()
    xr, xi, sr, si = x.re % n, x.im % n, step.re % n, step.im % n
    for t in range(period):
        if xr == 0 and xi == 0:
            return t
        xr = (xr + sr) % n
        xi = (xi + si) % n
    return None


def divides_alpha(line: Line, beta: IntLike, k: int, scan_cap: int = DEFAULT_SCAN_CAP) -> bool:
    t = member_index(line, beta, scan_cap)
    return t is not None and k % nu(beta) == t


def alpha(line: Line, k: int) -> GaussInt:
    return line.alpha(k)


def index_of(line: Line, z: IntLike) -> int | None:
    return line.index_of(z)


def norm_poly(line: Line) -> NormPoly:
    return line.norm_poly()


def from_points(z: IntLike, w: IntLike) -> Line:
    return Line.from_points(z, w)
