"""Acceptance gate: one check per criterion, each printed as a PASS/FAIL line.

Run under pytest (the lines are printed in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.

Oracles here avoid the package's own divisibility code: Gaussian divisibility
is tested with raw integer arithmetic, gcds with sympy's ZZ_I, and coprimality
along the real line with math.gcd.
"""

from __future__ import annotations

import math
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import pytest
from sympy import primerange
from sympy.polys.domains import ZZ_I

sys.path.insert(0, str(Path(__file__).parent))

from conftest import build, random_primitive_line  # noqa: E402

from gausslines.construct import ConstructionRequest, construct_line  # noqa: E402
from gausslines.crt import LineCongruenceSystem, crt_line  # noqa: E402
from gausslines.line import Line, member_index, prime_in_divisor_set  # noqa: E402
from gausslines.pillai import (  # noqa: E402
    bound_B,
    bound_table,
    certify_no_bad_window,
    explore_G,
    find_bad_window,
    g_of_line,
    window_report,
)
from gausslines.zi import GaussInt, nu, primes_over  # noqa: E402

G = GaussInt
RESULTS: list[str] = []


@dataclass
class Check:
    label: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.label}: {self.detail}"


def record(checks: list[Check]) -> list[Check]:
    for c in checks:
        RESULTS.append(c.line())
    return checks


def assert_all(checks: list[Check]) -> None:
    bad = [c.line() for c in checks if not c.ok]
    assert not bad, "\n".join(bad)


# ---- independent oracles ----

def o_divides(b: GaussInt, z: GaussInt) -> bool:
    # b | z  iff  z * conj(b) / N(b) is a Gaussian integer
    n = b.re * b.re + b.im * b.im
    re = z.re * b.re + z.im * b.im
    im = z.im * b.re - z.re * b.im
    return re % n == 0 and im % n == 0


def o_coprime(z: GaussInt, w: GaussInt) -> bool:
    g = ZZ_I.gcd(ZZ_I(z.re, z.im), ZZ_I(w.re, w.im))
    return g.x * g.x + g.y * g.y == 1


def o_lonely_positions(values: list[GaussInt]) -> list[int]:
    return [
        s for s, z in enumerate(values)
        if all(o_coprime(z, w) for t, w in enumerate(values) if t != s)
    ]


def o_scan_member(line: Line, beta: GaussInt) -> list[int]:
    return [k for k in range(nu(beta)) if o_divides(beta, line.alpha(k))]


def window_values(line: Line, k: int, n: int) -> list[GaussInt]:
    return [line.alpha(k + j) for j in range(1, n + 1)]


G7_CONS = [(G(1, 1), 1), (G(3), 1), (G(1, 2), 1), (G(2, 1), 2)]
G9_CONS = [(G(1, 1), 0), (G(3), 0), (G(1, 2), 0), (G(2, 1), 2)]
G15_CONS = [(G(1, 1), 0), (G(3), 0), (G(11), 0), (G(2, 3), 0), (G(3, 2), 1), (G(1, 2), 2), (G(7), 5)]


# ---- criteria ----

def criterion_1() -> list[Check]:
    t0 = time.perf_counter()
    line = Line.from_points(0, 1)
    res = g_of_line(line, 20, threads=1)
    certs_ok = True
    periods = {}
    for n in range(2, 17):
        c = certify_no_bad_window(line, n, threads=1)
        periods[n] = c.period
        certs_ok &= c.kind == "none-in-period" and c.period == math.prod(primerange(2, n))
    window = list(range(2184, 2201))
    oracle_bad = all(any(math.gcd(x, y) > 1 for y in window if y != x) for x in window)
    w = res.witness
    elapsed = time.perf_counter() - t0
    return [
        Check("C1a real line g", res.g == 17 and res.status == "exact", f"g={res.g} status={res.status}"),
        Check("C1b none-in-period n=2..16", certs_ok and periods[16] == 30030, f"period(16)={periods[16]}"),
        Check(
            "C1c witness 2184..2200",
            w is not None and w.first_index == 2184 and oracle_bad
            and window_values(line, w.witness_k, 17) == [G(x) for x in window],
            f"first_index={None if w is None else w.first_index} gcd-oracle bad={oracle_bad}",
        ),
        Check("C1d runtime", elapsed < 60, f"{elapsed:.1f}s < 60s"),
    ]


def criterion_2() -> list[Check]:
    t0 = time.perf_counter()
    b100 = bound_B(100)
    table = bound_table(260186)
    elapsed = time.perf_counter() - t0
    ties = [t for t in range(2, 260187) if table.B(t) == t]
    return [
        Check("C2a B_100", b100 == 54, f"B_100={b100}"),
        Check(
            "C2b threshold(260186) == 260185",
            table.threshold == 260185,
            f"threshold={table.threshold}; B_t == t at t={ties}",
        ),
        Check("C2c B_260186 > 260186", table.B(260186) > 260186, f"B_260186={table.B(260186)}"),
        Check("C2d runtime", elapsed < 60, f"{elapsed:.1f}s < 60s"),
    ]


def g7_failing_family() -> list[Line]:
    """20 constructed lines that break the g = 7 criterion in different ways."""
    four = [G(1, 1), G(3), G(1, 2), G(2, 1)]
    lines = []
    rng = random.Random(2024)
    seed = 0
    while len(lines) < 20:
        mode = len(lines) % 5
        b = rng.randint(0, 12)
        if mode < 4:
            # one of the four primes kept out of the divisor set
            drop = four[mode]
            cons = [(mu, b) for mu in four if mu != drop]
            inert = [3] if drop == G(3) else []
            split = [] if drop == G(3) else [drop]
        else:
            # all four present, conjugates two apart
            cons = [(G(1, 1), b), (G(3), b), (G(1, 2), b), (G(2, 1), b + 2)]
            inert, split = [], []
        lines.append(build(cons, inert, split, seed=seed).line)
        seed += 1
    return lines


def criterion_3() -> list[Check]:
    t0 = time.perf_counter()
    line = build(G7_CONS).line
    res = g_of_line(line, 10, threads=1)
    w = res.witness
    structure = False
    if w is not None:
        vals = window_values(line, w.witness_k, 7)
        # positions 2 and 7 (1-based) share the prime 2+i, an associate of 1-2i
        structure = (
            o_divides(G(2, 1), vals[1]) and o_divides(G(2, 1), vals[6])
            and o_lonely_positions(vals) == []
        )
    family = g7_failing_family()
    kinds = [certify_no_bad_window(L, 7).kind for L in family]
    elapsed = time.perf_counter() - t0
    return [
        Check("C3a g=7 line", res.g == 7 and res.status == "exact", f"g={res.g}"),
        Check("C3b witness structure", structure, f"witness_k={None if w is None else w.witness_k}"),
        Check(
            "C3c 20 failing lines none-in-period at n=7",
            len(set(family)) == 20 and all(k == "none-in-period" for k in kinds),
            f"{kinds.count('none-in-period')}/20",
        ),
        Check("C3d runtime", elapsed < 120, f"{elapsed:.1f}s < 120s"),
    ]


def criterion_4() -> list[Check]:
    t0 = time.perf_counter()
    g9 = g_of_line(build(G9_CONS).line, 12, threads=1)
    line15 = build(G15_CONS, split=[G(2, 1)]).line
    membership = all(
        prime_in_divisor_set(line15, pi)
        for pi in (G(1, 1), G(3), G(1, 2), G(7), G(11), G(2, 3), G(3, 2))
    ) and not prime_in_divisor_set(line15, G(2, 1))
    # the primes over 13 sit at consecutive indices
    i13 = sorted(member_index(line15, pi) for pi in primes_over(13))
    certs = [certify_no_bad_window(line15, n) for n in range(2, 15)]
    w = find_bad_window(line15, 15)
    w_ok = w.kind == "witness" and o_lonely_positions(window_values(line15, w.witness_k, 15)) == []
    elapsed = time.perf_counter() - t0
    return [
        Check("C4a conjugate-non-consecutive line g=9", g9.g == 9 and g9.status == "exact", f"g={g9.g}"),
        Check("C4b g=15 line hypotheses", membership and i13[1] - i13[0] in (1, 12), f"13-indices={i13}"),
        Check(
            "C4c none-in-period n=2..14",
            all(c.kind == "none-in-period" for c in certs) and certs[-1].period == 30030,
            f"period(14)={certs[-1].period}",
        ),
        Check("C4d witness at n=15", w_ok, f"kind={w.kind} first_index={w.first_index}"),
        Check("C4e runtime", elapsed < 300, f"{elapsed:.1f}s < 300s"),
    ]


def criterion_5() -> list[Check]:
    t0 = time.perf_counter()
    line = build(G7_CONS, inert=[7]).line
    w7 = find_bad_window(line, 7)
    c8 = certify_no_bad_window(line, 8)
    flipped = build(G7_CONS + [(G(7), 1)]).line
    w8 = find_bad_window(flipped, 8)
    elapsed = time.perf_counter() - t0
    return [
        Check("C5a 7 not in D(L)", not prime_in_divisor_set(line, 7), f"Delta={line.big_delta}"),
        Check(
            "C5b witness at n=7",
            w7.kind == "witness" and o_lonely_positions(window_values(line, w7.witness_k, 7)) == [],
            f"first_index={w7.first_index}",
        ),
        Check("C5c none-in-period at n=8", c8.kind == "none-in-period", f"period={c8.period}"),
        Check(
            "C5d flipped 7 in D(L): witness at n=8",
            w8.kind == "witness" and o_lonely_positions(window_values(flipped, w8.witness_k, 8)) == [],
            f"first_index={w8.first_index}",
        ),
        Check("C5e runtime", elapsed < 60, f"{elapsed:.1f}s < 60s"),
    ]


def example2_line(bound: int = 50) -> Line:
    cons = [(G(2, 1), 0), (G(1, 2), 1)]
    cons += [(primes_over(p)[0], 0) for p in primerange(2, bound) if p != 5]
    return build(cons).line


def criterion_6() -> list[Check]:
    t0 = time.perf_counter()
    line = example2_line(50)
    certs = explore_G(line, 7, 50)
    all_witness = all(c.kind == "witness" for c in certs)
    at_alpha0 = all(c.first_index == 0 for c in certs)
    oracle = all(o_lonely_positions(window_values(line, -1, n)) == [] for n in (7, 8, 20, 50))
    elapsed = time.perf_counter() - t0
    return [
        Check("C6a witness for every n in [7,50]", all_witness and len(certs) == 44, f"{len(certs)} certificates"),
        Check("C6b window starts at alpha0", at_alpha0 and oracle, f"first indices={sorted({c.first_index for c in certs})}"),
        Check("C6c runtime", elapsed < 60, f"{elapsed:.1f}s < 60s"),
    ]


def random_beta(rng: random.Random, line: Line) -> GaussInt:
    while True:
        if rng.random() < 0.6:
            # a divisor of a random point, so it lies in the divisor set
            z = line.alpha(rng.randint(-50, 50))
            w = G(rng.randint(-9, 9), rng.randint(-9, 9))
            g = ZZ_I.gcd(ZZ_I(z.re, z.im), ZZ_I(w.re, w.im))
            beta = G(int(g.x), int(g.y))
        else:
            beta = G(rng.randint(-12, 12), rng.randint(-12, 12))
        if beta.norm() > 1:
            return beta


def _periodicity(rng: random.Random) -> tuple[bool, str]:
    members = 0
    for _ in range(100):
        line = random_primitive_line(rng)
        beta = random_beta(rng, line)
        period = nu(beta)
        hits = [k for k in range(3 * period) if o_divides(beta, line.alpha(k))]
        t = member_index(line, beta)
        expected = [] if t is None else [t, t + period, t + 2 * period]
        if hits != expected:
            return False, f"line={line.spec()} beta={beta} hits={hits[:6]}"
        members += t is not None
    return True, f"100 pairs, {members} in D(L)"


def _crt_uniqueness(rng: random.Random) -> tuple[bool, str]:
    pool = [pi for p in primerange(2, 60) for pi in primes_over(p)]
    checked = 0
    while checked < 30:
        line = random_primitive_line(rng)
        used: set[int] = set()
        cons = []
        for pi in rng.sample(pool, len(pool)):
            p = nu(pi)
            beta = pi * pi if rng.random() < 0.2 else pi
            if p in used or member_index(line, beta) is None:
                continue
            if math.prod(nu(b) for b, _ in cons) * nu(beta) > 10**5:
                continue
            cons.append((beta, rng.randint(-20, 20)))
            used.add(p)
            if len(cons) == 3:
                break
        if not cons:
            continue
        mod = math.prod(nu(b) for b, _ in cons)
        sols = [t for t in range(mod) if all(o_divides(b, line.alpha(t + off)) for b, off in cons)]
        t, m = crt_line(line, LineCongruenceSystem(cons))
        if m != mod or sols != [t]:
            return False, f"line={line.spec()} system={cons} crt={t} scan={sols}"
        checked += 1
    return True, f"{checked} systems"


def _divisor_set_rule(rng: random.Random) -> tuple[bool, str]:
    primes = [pi for p in primerange(2, 201) for pi in primes_over(p) if nu(pi) <= 200]
    for _ in range(50):
        line = random_primitive_line(rng)
        for pi in primes:
            if prime_in_divisor_set(line, pi) != bool(o_scan_member(line, pi)):
                return False, f"line={line.spec()} pi={pi}"
    return True, f"50 lines x {len(primes)} primes"


def _ip_table(rng: random.Random) -> tuple[bool, str]:
    # the table is stated for lines off the two axes (Delta != 0)
    lines = []
    while len(lines) < 50:
        line = random_primitive_line(rng)
        if line.big_delta:
            lines.append(line)
    failures = []
    for line in lines:
        f = line.norm_poly()
        nd = line.delta.norm()
        for p in primerange(3, 51):
            count = sum(1 for k in range(p) if f(k) % p == 0)
            if p % 4 == 1:
                expected = 1 if nd % p == 0 else 2
            else:
                expected = 1 if line.big_delta % p == 0 else 0
            if count != expected:
                failures.append((line, p, count, expected))
    if failures:
        line, p, count, expected = failures[0]
        return False, (
            f"{len(failures)} mismatches; e.g. {line.spec()} Delta={line.big_delta} "
            f"N(delta)={line.delta.norm()} p={p}: |I_p|={count}, table says {expected}"
        )
    return True, "50 lines, odd p <= 50"


def _discriminant(rng: random.Random) -> tuple[bool, str]:
    for _ in range(1000):
        z = G(rng.randint(-10**4, 10**4), rng.randint(-10**4, 10**4))
        w = G(rng.randint(-10**4, 10**4), rng.randint(-10**4, 10**4))
        if z == w:
            continue
        line = Line.from_points(z, w)
        if line.norm_poly().discriminant != -4 * line.big_delta ** 2:
            return False, line.spec()
    return True, "1000 lines"


def criterion_7() -> list[Check]:
    t0 = time.perf_counter()
    checks = []
    for label, fn, seed in (
        ("C7a periodicity", _periodicity, 1),
        ("C7b line-CRT uniqueness", _crt_uniqueness, 2),
        ("C7c divisor-set rule vs scan", _divisor_set_rule, 3),
        ("C7d I_p residue-count table", _ip_table, 4),
        ("C7e discriminant = -4 Delta^2", _discriminant, 5),
    ):
        ok, detail = fn(random.Random(seed))
        checks.append(Check(label, ok, detail))
    elapsed = time.perf_counter() - t0
    checks.append(Check("C7f runtime", elapsed < 120, f"{elapsed:.1f}s < 120s"))
    return checks


def random_request(rng: random.Random, seed: int) -> ConstructionRequest:
    pool = [pi for p in primerange(2, 40) for pi in primes_over(p)]
    rng.shuffle(pool)
    taken: set[int] = set()
    cons, inert, split = [], [], []
    for pi in pool:
        p = pi.norm() if pi.im else pi.re
        if p in taken or rng.random() < 0.4:
            continue
        taken.add(p)
        roll = rng.random()
        if pi.im == 0 and roll < 0.3:
            inert.append(pi.re)
        elif pi.im and p != 2 and roll < 0.3:
            split.append(pi)
        else:
            mu = pi * pi if rng.random() < 0.15 else pi
            if rng.random() < 0.2:
                # composite modulus: pair with another unused prime
                for other in pool:
                    q = other.norm() if other.im else other.re
                    if q not in taken:
                        taken.add(q)
                        mu = mu * other
                        break
            cons.append((mu, rng.choice([0, rng.randint(-30, 30)])))
    return ConstructionRequest(cons, inert, split, seed)


def o_min_norm_ok(a0: GaussInt, dl: GaussInt) -> bool:
    n0 = a0.norm()
    return all((a0 + dl * n).norm() > n0 for n in range(-50, 51) if n) and dl.norm() > 4 * n0


def criterion_8() -> list[Check]:
    t0 = time.perf_counter()
    rng = random.Random(8)
    failures = []
    for i in range(100):
        req = random_request(rng, seed=rng.randint(0, 5))
        tr = construct_line(req)
        a0, dl = tr.alpha0, tr.delta
        big_delta = a0.re * dl.im - a0.im * dl.re
        props = {
            1: o_min_norm_ok(a0, dl),
            2: math.gcd(dl.re, dl.im) == 1 and dl.re >= 0,
            3: o_coprime(a0, dl),
            4: all(o_divides(mu, a0 + dl * b) for mu, b in req.div_constraints),
            5: all(big_delta % p for p in req.excluded_inert),
            6: all(o_divides(pi, dl) for pi in req.excluded_split),
        }
        post = {
            "canonical": Line.from_points(a0 + dl * 3, a0 - dl * 5) == tr.line and tr.line.alpha0 == a0,
            "primitive": tr.line.primitive,
            "excluded": all(not o_scan_member(tr.line, G(p)) for p in req.excluded_inert)
            and all(not o_scan_member(tr.line, pi) for pi in req.excluded_split),
            "delta = tau mod M": o_divides(tr.modulus, dl - tr.tau),
        }
        bad = [k for k, v in props.items() if not v] + [k for k, v in post.items() if not v]
        if bad:
            failures.append((i, bad))
    elapsed = time.perf_counter() - t0
    return [
        Check("C8a 100 constructions, properties 1-6 and postconditions", not failures, f"failures={failures[:3]}"),
        Check("C8b runtime", elapsed < 120, f"{elapsed:.1f}s < 120s"),
    ]


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"C{i}" for i in range(1, 9)])
def test_acceptance(criterion):
    assert_all(record(criterion()))


if __name__ == "__main__":
    failed = 0
    for crit in CRITERIA:
        for c in crit():
            print(c.line(), flush=True)
            failed += not c.ok
    sys.exit(1 if failed else 0)
