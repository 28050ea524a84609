"""Chinese remaindering over Z, Z[i], and along a Gaussian line."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError
from .line import DEFAULT_SCAN_CAP, Line, divides_alpha, member_index
from .zi import ONE, ZERO, GaussInt, IntLike, canonical_associate, coprime, format_gauss, inverse_mod, nu, parse_gauss, reduce_mod


def crt_int(pairs: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Solve x = r (mod m) for pairwise coprime positive moduli; returns (x, M) with 0 <= x < M."""
    x, mod = 0, 1
    for r, m in pairs:
        if m <= 0:
            raise DomainError(f"modulus must be positive, got {m}")
        if math.gcd(mod, m) != 1:
            raise DomainError("moduli not pairwise coprime")
        x += mod * ((r - x) * pow(mod, -1, m) % m)
        mod *= m
        x %= mod
    return x, mod


def crt_zi(pairs: Sequence[tuple[IntLike, IntLike]]) -> tuple[GaussInt, GaussInt]:
    """Solve x = r_i (mod m_i) in Z[i].

    Returns (x, M) with M the canonical associate of the product of the moduli
    and x reduced into the fundamental parallelogram of M.
    """
    x, mod = ZERO, ONE
    for r, m in pairs:
        r, m = GaussInt.coerce(r), GaussInt.coerce(m)
        if not m:
            raise DomainError("modulus must be nonzero")
        if not coprime(mod, m):
            raise DomainError("Gaussian moduli not pairwise coprime")
        if m.is_unit():
            continue
        s = reduce_mod((r - x) * inverse_mod(mod, m), m)
        x = x + mod * s
        mod = canonical_associate(mod * m)
    return reduce_mod(x, mod), mod


@dataclass
class LineCongruenceSystem:
    """Constraints "mu divides alpha_{t+b}" for an unknown index t."""

    constraints: list[tuple[GaussInt, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.constraints = [(GaussInt.coerce(mu), int(b)) for mu, b in self.constraints]
        for mu, _ in self.constraints:
            if not mu or mu.is_unit():
                raise DomainError(f"{mu} must be nonzero and not a unit")
        periods = [nu(mu) for mu, _ in self.constraints]
        for i in range(len(periods)):
            for j in range(i + 1, len(periods)):
                if math.gcd(periods[i], periods[j]) != 1:
                    raise DomainError("nu moduli not pairwise coprime")

    def to_dict(self) -> dict:
        return {"constraints": [[format_gauss(mu), b] for mu, b in self.constraints]}

    @classmethod
    def from_dict(cls, d: dict) -> LineCongruenceSystem:
        return cls([(parse_gauss(mu), int(b)) for mu, b in d["constraints"]])


def crt_line(line: Line, system: LineCongruenceSystem, scan_cap: int = DEFAULT_SCAN_CAP) -> tuple[int, int]:
    """The unique t modulo prod nu(mu_i) with mu_i | alpha_{t + b_i} for every constraint."""
    pairs = []
    for mu, b in system.constraints:
        t = member_index(line, mu, scan_cap)
        if t is None:
            raise DomainError(f"{mu} is not in the divisor set of the line")
        pairs.append((t - b, nu(mu)))
    t, mod = crt_int(pairs)
    for mu, b in system.constraints:
        if not divides_alpha(line, mu, t + b, scan_cap):
            raise AssertionError(f"line CRT postcondition failed for ({mu}, {b})")
    return t, mod
