"""Synthesis of primitive lines with prescribed divisors and excluded primes.

Given constraints "mu_j divides alpha_{b_j}", inert primes p_n and split
primes pi_m that must stay out of the divisor set, the line is built as
alpha0 = lam * prod(gamma_j) with gamma_j = gcd(mu_j, b_j), and delta is
lifted from a single CRT solution tau (mod M) until the (alpha0, delta)
pair is canonical.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .crt import crt_zi
from .errors import CapExceeded, DomainError
from .line import DEFAULT_SCAN_CAP, Line, divides_alpha, member_index, prime_in_divisor_set
from .zi import (
    ONE,
    GaussInt,
    canonical_associate,
    coprime,
    divides,
    exact_div,
    factor,
    format_gauss,
    gcd,
    inverse_mod,
    is_gaussian_prime,
    parse_gauss,
    rational_part,
)

from sympy import isprime

DELTA_SEARCH_CAP = 10**6
NORM_DOMINANCE = 16


@dataclass
class ConstructionRequest:
    div_constraints: list[tuple[GaussInt, int]] = field(default_factory=list)
    excluded_inert: list[int] = field(default_factory=list)
    excluded_split: list[GaussInt] = field(default_factory=list)
    seed: int = 0

    def __post_init__(self) -> None:
        self.div_constraints = [(GaussInt.coerce(mu), int(b)) for mu, b in self.div_constraints]
        self.excluded_inert = [int(p) for p in self.excluded_inert]
        self.excluded_split = [GaussInt.coerce(pi) for pi in self.excluded_split]

    def validate(self) -> None:
        if self.seed < 0:
            raise DomainError("seed must be nonnegative")
        for mu, _ in self.div_constraints:
            if not mu:
                raise DomainError("divisor constraint with mu = 0")
        for p in self.excluded_inert:
            if not (isprime(p) and p % 4 == 3):
                raise DomainError(f"excluded inert prime {p} is not a rational prime = 3 (mod 4)")
        for pi in self.excluded_split:
            if not is_gaussian_prime(pi) or rational_part(pi) is not None:
                raise DomainError(f"excluded split prime {pi} is not a non-rational Gaussian prime")
        items = [mu for mu, _ in self.div_constraints] + [GaussInt(p) for p in self.excluded_inert] + self.excluded_split
        for a, b in itertools.combinations(items, 2):
            if not coprime(a, b):
                raise DomainError(f"request data not pairwise coprime: {a} and {b}")
        # every line keeps at least one prime over each p = 1 (mod 4), and 1+i cannot be excluded twice
        seen: dict[int, GaussInt] = {}
        for pi in self.excluded_split:
            p = pi.norm()
            if p in seen:
                raise DomainError(f"cannot exclude every Gaussian prime over {p}")
            seen[p] = pi

    def to_dict(self) -> dict:
        return {
            "div_constraints": [[format_gauss(mu), b] for mu, b in self.div_constraints],
            "excluded_inert": list(self.excluded_inert),
            "excluded_split": [format_gauss(pi) for pi in self.excluded_split],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ConstructionRequest:
        return cls(
            [(parse_gauss(mu), int(b)) for mu, b in d.get("div_constraints", [])],
            [int(p) for p in d.get("excluded_inert", [])],
            [parse_gauss(pi) for pi in d.get("excluded_split", [])],
            int(d.get("seed", 0)),
        )


@dataclass(frozen=True)
class ConstructionTrace:
    gamma: tuple[GaussInt, ...]
    lam: GaussInt
    alpha0: GaussInt
    eta: tuple[GaussInt | None, ...]
    beta: GaussInt
    p_product: int
    modulus: GaussInt
    tau: GaussInt
    delta: GaussInt
    line: Line

    def to_dict(self) -> dict:
        return {
            "gamma": [format_gauss(g) for g in self.gamma],
            "lambda": format_gauss(self.lam),
            "alpha0": format_gauss(self.alpha0),
            "eta": [None if e is None else format_gauss(e) for e in self.eta],
            "beta": format_gauss(self.beta),
            "p_product": self.p_product,
            "modulus": format_gauss(self.modulus),
            "tau": format_gauss(self.tau),
            "delta": format_gauss(self.delta),
            "line": self.line.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ConstructionTrace:
        return cls(
            tuple(parse_gauss(g) for g in d["gamma"]),
            parse_gauss(d["lambda"]),
            parse_gauss(d["alpha0"]),
            tuple(None if e is None else parse_gauss(e) for e in d["eta"]),
            parse_gauss(d["beta"]),
            int(d["p_product"]),
            parse_gauss(d["modulus"]),
            parse_gauss(d["tau"]),
            parse_gauss(d["delta"]),
            Line.from_dict(d["line"]),
        )


def _choose_lambda(req: ConstructionRequest) -> int:
    avoid = [mu for mu, _ in req.div_constraints]
    avoid += [GaussInt(b) for _, b in req.div_constraints if b != 0]
    avoid += [GaussInt(p) for p in req.excluded_inert]
    found = -1
    q = 3
    while True:
        if isprime(q) and all(not divides(q, x) for x in avoid):
            found += 1
            if found == req.seed:
                return q
        q += 4


def construct_line(req: ConstructionRequest, scan_cap: int = DEFAULT_SCAN_CAP) -> ConstructionTrace:
    req.validate()
    cons = req.div_constraints

    gamma = tuple(canonical_associate(mu) if b == 0 else gcd(mu, b) for mu, b in cons)
    lam = GaussInt(_choose_lambda(req))
    alpha0 = lam
    for g in gamma:
        alpha0 = alpha0 * g

    congruences: list[tuple[GaussInt, GaussInt]] = []
    eta: list[GaussInt | None] = []
    reduced_moduli = []
    for (mu, b), g in zip(cons, gamma):
        m = exact_div(mu, g)
        reduced_moduli.append(m)
        if m.is_unit():
            # b = 0 or gamma already carries all of mu: mu | alpha0 + b*delta holds for any delta
            eta.append(None)
            continue
        e = inverse_mod(exact_div(GaussInt(b), g), m)
        eta.append(e)
        congruences.append((-(e * exact_div(alpha0, g)), m))

    beta = ONE
    for pi in factor(alpha0):
        if all(coprime(pi, m) for m in reduced_moduli):
            beta = beta * pi
    if not beta.is_unit():
        congruences.append((ONE, beta))

    p_product = math.prod(req.excluded_inert)
    if p_product > 1:
        congruences.append((GaussInt(0, 1) * alpha0, GaussInt(p_product)))

    pi_product = ONE
    for pi in req.excluded_split:
        pi_product = pi_product * pi
    if not pi_product.is_unit():
        congruences.append((GaussInt(0), pi_product))

    tau, modulus = crt_zi(congruences)
    delta = _lift_delta(tau, modulus, alpha0)
    line = Line._build(alpha0, delta)
    trace = ConstructionTrace(gamma, lam, alpha0, tuple(eta), beta, p_product, modulus, tau, delta, line)
    verify_trace(req, trace, scan_cap)
    return trace


def _lift_delta(tau: GaussInt, modulus: GaussInt, alpha0: GaussInt) -> GaussInt:
    """First admissible delta = tau + (j + v*i) * modulus, by j = 1, 2, ... then v = 0, 1, -1, 2, -2, ...

    Moving along j alone is not enough: when modulus and tau are both rational
    every tau + j*modulus is rational and only j with |c| = 1 has coprime parts.
    """
    bound = NORM_DOMINANCE * alpha0.norm()
    tried = 0
    for j in itertools.count(1):
        for v in itertools.chain((0,), itertools.chain.from_iterable((w, -w) for w in range(1, j + 1))):
            tried += 1
            if tried > DELTA_SEARCH_CAP:
                raise CapExceeded(f"no admissible delta within {DELTA_SEARCH_CAP} lifts of tau")
            cand = tau + GaussInt(j, v) * modulus
            if cand.re > 0 and math.gcd(cand.re, cand.im) == 1 and cand.norm() > bound:
                return cand


def check_properties(req: ConstructionRequest, trace: ConstructionTrace) -> dict[int, bool]:
    """Evaluate the six defining properties of the (alpha0, delta) pair individually."""
    a0, dl = trace.alpha0, trace.delta
    big_delta = a0.re * dl.im - a0.im * dl.re
    # N(a0 + n*dl) > N(a0) for all n != 0 follows from N(dl) > 4 N(a0); also spot-check a window
    reach = 4 * (1 + a0.norm() // max(dl.norm(), 1))
    prop1 = dl.norm() > 4 * a0.norm() and all(
        (a0 + dl * n).norm() > a0.norm() for n in range(-reach, reach + 1) if n
    )
    return {
        1: prop1,
        2: math.gcd(dl.re, dl.im) == 1 and dl.re >= 0,
        3: coprime(a0, dl),
        4: all(divides(mu, a0 + dl * b) for mu, b in req.div_constraints),
        5: all(big_delta % p != 0 for p in req.excluded_inert),
        6: all(divides(pi, dl) for pi in req.excluded_split),
    }


def verify_trace(req: ConstructionRequest, trace: ConstructionTrace, scan_cap: int = DEFAULT_SCAN_CAP) -> None:
    """Raise AssertionError unless every property and postcondition holds."""
    props = check_properties(req, trace)
    bad = [k for k, ok in props.items() if not ok]
    if bad:
        raise AssertionError(f"construction property check failed: {bad}")
    line = trace.line
    if not line.primitive:
        raise AssertionError("constructed line is not primitive")
    if Line.from_points(trace.alpha0, trace.alpha0 + trace.delta) != line:
        raise AssertionError("constructed line is not canonical")
    for mu, b in req.div_constraints:
        if mu.is_unit():
            continue
        if member_index(line, mu, scan_cap) is None or not divides_alpha(line, mu, b, scan_cap):
            raise AssertionError(f"{mu} does not divide alpha_{b}")
    for p in req.excluded_inert:
        if prime_in_divisor_set(line, p):
            raise AssertionError(f"{p} is in the divisor set")
    for pi in req.excluded_split:
        if prime_in_divisor_set(line, pi):
            raise AssertionError(f"{pi} is in the divisor set")


def construct_stream(req: ConstructionRequest, count: int, scan_cap: int = DEFAULT_SCAN_CAP) -> list[ConstructionTrace]:
    """Lines for seeds req.seed, req.seed+1, ..., one per seed."""
    out = []
    for s in range(req.seed, req.seed + count):
        r = ConstructionRequest(req.div_constraints, req.excluded_inert, req.excluded_split, s)
        out.append(construct_line(r, scan_cap))
    return out
