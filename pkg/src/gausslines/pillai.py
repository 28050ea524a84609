"""Windows of consecutive points on a line in which no term is coprime to all others.

A window of length n "at k" is alpha_{k+1}, ..., alpha_{k+n}.  Two points of
a window can only share a Gaussian prime pi with nu(pi) < n, and a prime in
the divisor set divides exactly one residue class of indices mod nu(pi), so
every window question reduces to residues of a handful of small primes.
The window structure repeats with period = product of the rational primes
p < n lying under those primes.

Scanning works on window *starts* s = k + 1 and encodes coverage of the n
positions as a bitmask; positions are reported 1-based.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import numpy as np
from sympy import primerange

from .crt import crt_int
from .errors import CapExceeded, DomainError
from .line import Line, member_index
from .zi import GaussInt, format_gauss, nu, parse_gauss, primes_over

DEFAULT_SCAN_CAP = 10**7
DEFAULT_BUDGET = 10**7
CHUNK = 1 << 16
LOCAL_SCAN = 1 << 16
MAX_NUMPY_N = 63


@dataclass(frozen=True)
class RelevantPrime:
    prime: GaussInt
    index: int
    period: int

    def to_dict(self) -> dict:
        return {"prime": format_gauss(self.prime), "index": self.index, "period": self.period}

    @classmethod
    def from_dict(cls, d: dict) -> RelevantPrime:
        return cls(parse_gauss(d["prime"]), int(d["index"]), int(d["period"]))


def _require_primitive(line: Line) -> None:
    if not line.primitive:
        raise DomainError("line is not primitive")


def relevant_primes(line: Line, n: int) -> list[RelevantPrime]:
    """Gaussian primes of the divisor set with nu < n, with their residue on the line."""
    _require_primitive(line)
    out = []
    for p in primerange(2, max(n, 2)):
        for pi in primes_over(p):
            t = member_index(line, pi)
            if t is not None:
                out.append(RelevantPrime(pi, t, nu(pi)))
    return out


def window_period(rel: list[RelevantPrime]) -> int:
    return math.prod({r.period for r in rel})


@dataclass(frozen=True)
class WindowReport:
    line: Line
    start_k: int
    n: int
    partners: tuple[tuple[tuple[int, GaussInt], ...], ...]
    lonely: tuple[int, ...]

    @property
    def bad(self) -> bool:
        return not self.lonely

    def to_dict(self) -> dict:
        return {
            "line": self.line.to_dict(),
            "start_k": self.start_k,
            "first_index": self.start_k + 1,
            "n": self.n,
            "partners": [[[j, format_gauss(pi)] for j, pi in row] for row in self.partners],
            "lonely": list(self.lonely),
        }

    @classmethod
    def from_dict(cls, d: dict) -> WindowReport:
        return cls(
            Line.from_dict(d["line"]),
            int(d["start_k"]),
            int(d["n"]),
            tuple(tuple((int(j), parse_gauss(pi)) for j, pi in row) for row in d["partners"]),
            tuple(int(j) for j in d["lonely"]),
        )


def window_report(line: Line, k: int, n: int) -> WindowReport:
    if n < 2:
        raise DomainError("window length must be at least 2")
    rel = relevant_primes(line, n)
    rows: list[list[tuple[int, GaussInt]]] = [[] for _ in range(n)]
    for r in rel:
        # 1-based positions j with k + j = index (mod period)
        first = (r.index - k - 1) % r.period + 1
        hits = list(range(first, n + 1, r.period))
        for a in hits:
            for b in hits:
                if a != b:
                    rows[a - 1].append((b, r.prime))
    partners = tuple(tuple(sorted(row, key=lambda e: (e[0], e[1].im, e[1].re))) for row in rows)
    lonely = tuple(j + 1 for j, row in enumerate(partners) if not row)
    return WindowReport(line, k, n, partners, lonely)


@dataclass(frozen=True)
class Certificate:
    kind: str  # "witness" | "none-in-period" | "unknown"
    n: int
    witness_k: int | None = None
    period: int | None = None
    budget_spent: int = 0

    @property
    def first_index(self) -> int | None:
        return None if self.witness_k is None else self.witness_k + 1

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "n": self.n}
        if self.kind == "witness":
            d["witness_k"] = self.witness_k
            d["first_index"] = self.first_index
        if self.period is not None:
            d["period"] = self.period
        d["budget_spent"] = self.budget_spent
        return d

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        return cls(
            d["kind"],
            int(d["n"]),
            None if d.get("witness_k") is None else int(d["witness_k"]),
            None if d.get("period") is None else int(d["period"]),
            int(d.get("budget_spent", 0)),
        )


class _Coverage:
    """Per rational prime p, the covered-position bitmask for each residue of the window start mod p.

    A prime covers the positions it divides only if it divides at least two of them.
    """

    def __init__(self, rel: list[RelevantPrime], n: int):
        self.n = n
        self.full = (1 << n) - 1
        self.offsets: dict[int, list[int]] = {}
        for r in rel:
            self.offsets.setdefault(r.period, []).append(r.index)
        self.periods = sorted(self.offsets)
        self.tables: dict[int, list[int]] = {}
        for p in self.periods:
            table = []
            for res in range(p):
                mask = 0
                for t in self.offsets[p]:
                    mask |= self.prime_mask(p, (t - res) % p)
                table.append(mask)
            self.tables[p] = table

    def prime_mask(self, p: int, j0: int) -> int:
        hits = range(j0, self.n, p)
        if len(hits) < 2:
            return 0
        m = 0
        for j in hits:
            m |= 1 << j
        return m

    def mask_at(self, s: int) -> int:
        m = 0
        for p in self.periods:
            m |= self.tables[p][s % p]
        return m

    def first_bad(self, lo: int, hi: int) -> int | None:
        """Smallest window start s in [lo, hi) whose window has no lonely term."""
        if not self.periods:
            return lo if lo < hi and self.full == 0 else None
        if self.n <= MAX_NUMPY_N:
            np_tables = {p: np.array(self.tables[p], dtype=np.uint64) for p in self.periods}
            full = np.uint64(self.full)
            for a in range(lo, hi, CHUNK):
                b = min(a + CHUNK, hi)
                starts = np.arange(a, b, dtype=np.int64)
                acc = np.zeros(b - a, dtype=np.uint64)
                for p in self.periods:
                    acc |= np_tables[p][starts % p]
                hit = np.flatnonzero(acc == full)
                if hit.size:
                    return a + int(hit[0])
            return None
        for s in range(lo, hi):
            if self.mask_at(s) == self.full:
                return s
        return None


def _parallel_first_bad(cov: _Coverage, lo: int, hi: int, threads: int) -> int | None:
    if threads <= 1 or hi - lo <= CHUNK:
        return cov.first_bad(lo, hi)
    span = CHUNK * 4
    with ThreadPoolExecutor(max_workers=threads) as pool:
        a = lo
        while a < hi:
            bounds = []
            for _ in range(threads):
                if a >= hi:
                    break
                bounds.append((a, min(a + span, hi)))
                a += span
            found = [s for s in pool.map(lambda ab: cov.first_bad(*ab), bounds) if s is not None]
            if found:
                return min(found)
    return None


def certify_no_bad_window(line: Line, n: int, scan_cap: int = DEFAULT_SCAN_CAP, threads: int = 1) -> Certificate:
    """Scan one full period of window starts; raises CapExceeded if the period is above scan_cap."""
    _require_primitive(line)
    rel = relevant_primes(line, n)
    period = window_period(rel)
    if period > scan_cap:
        raise CapExceeded(f"period {period} for n={n} exceeds scan cap {scan_cap}")
    s = _parallel_first_bad(_Coverage(rel, n), 0, period, threads)
    if s is None:
        return Certificate("none-in-period", n, period=period, budget_spent=period)
    return Certificate("witness", n, witness_k=s - 1, period=period, budget_spent=s + 1)


def _cover_search(cov: _Coverage, node_budget: int) -> tuple[dict[int, int] | None, int]:
    """Depth-first search for residues s mod p making every position covered.

    Branches on the lowest uncovered position; each branch fixes one rational
    prime's residue so that some prime over it hits that position.  Returns
    (assignment, nodes_used); assignment is None if nothing was found.
    """
    n, full = cov.n, cov.full
    best_gain = {p: max(bin(m).count("1") for m in cov.tables[p]) for p in cov.periods}
    nodes = 0

    def options(j: int, free: list[int]) -> list[tuple[int, int, int]]:
        opts = {}
        for p in free:
            if j + p >= n and j - p < 0:
                continue
            for t in cov.offsets[p]:
                res = (t - j) % p
                if (p, res) not in opts:
                    opts[(p, res)] = cov.tables[p][res]
        return sorted(((p, res, m) for (p, res), m in opts.items()), key=lambda o: (-bin(o[2]).count("1"), o[0], o[1]))

    def dfs(mask: int, free: list[int], assign: dict[int, int]) -> dict[int, int] | None:
        nonlocal nodes
        if mask == full:
            return dict(assign)
        nodes += 1
        if nodes > node_budget:
            return None
        missing = n - bin(mask).count("1")
        if sum(best_gain[p] for p in free) < missing:
            return None
        j = _lowest_bit(~mask & full)
        for p, res, m in options(j, free):
            if m >> j & 1 == 0:
                continue
            assign[p] = res
            rest = [q for q in free if q != p]
            got = dfs(mask | m, rest, assign)
            del assign[p]
            if got is not None or nodes > node_budget:
                return got
        return None

    return dfs(0, list(cov.periods), {}), nodes


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def find_bad_window(line: Line, n: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Certificate:
    """Look for a window with no lonely term.

    If a full period of window starts fits in ``budget`` the scan is exhaustive
    and the smallest witness start in [0, period) is returned.  Otherwise: a
    short local scan from 0, then a residue cover search solved by CRT, then a
    linear scan with whatever budget is left.
    """
    _require_primitive(line)
    if n < 2:
        raise DomainError("window length must be at least 2")
    rel = relevant_primes(line, n)
    period = window_period(rel)
    cov = _Coverage(rel, n)
    if period <= budget:
        s = _parallel_first_bad(cov, 0, period, threads)
        if s is None:
            return Certificate("none-in-period", n, period=period, budget_spent=period)
        return Certificate("witness", n, witness_k=s - 1, period=period, budget_spent=s + 1)

    spent = 0
    local = min(LOCAL_SCAN, budget // 4)
    s = _parallel_first_bad(cov, 0, local, threads)
    if s is not None:
        return Certificate("witness", n, witness_k=s - 1, period=period, budget_spent=s + 1)
    spent += local

    assign, nodes = _cover_search(cov, max(budget // 4, 1))
    spent += nodes
    if assign is not None:
        s, _ = crt_int((assign.get(p, 0), p) for p in cov.periods)
        report = window_report(line, s - 1, n)
        if not report.bad:
            raise AssertionError("cover search produced a window that does not verify")
        return Certificate("witness", n, witness_k=s - 1, period=period, budget_spent=spent)

    remaining = max(budget - spent, 0)
    s = _parallel_first_bad(cov, local, local + remaining, threads)
    if s is not None:
        return Certificate("witness", n, witness_k=s - 1, period=period, budget_spent=spent + s - local + 1)
    return Certificate("unknown", n, period=period, budget_spent=spent + remaining)


@dataclass(frozen=True)
class GResult:
    """Outcome of the search for the smallest bad window length.

    status is "exact" (g found, every smaller n certified), "conditional" (g
    found, but some smaller n ended unknown), "lower-bound" (no witness up to
    n_max and all certified, so g > n_max) or "unknown".
    """

    g: int | None
    status: str
    n_max: int
    certificates: tuple[Certificate, ...]

    @property
    def witness(self) -> Certificate | None:
        return self.certificates[-1] if self.g is not None else None

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "status": self.status,
            "n_max": self.n_max,
            "certificates": [c.to_dict() for c in self.certificates],
        }

    @classmethod
    def from_dict(cls, d: dict) -> GResult:
        return cls(
            None if d["g"] is None else int(d["g"]),
            d["status"],
            int(d["n_max"]),
            tuple(Certificate.from_dict(c) for c in d["certificates"]),
        )


def g_of_line(line: Line, n_max: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> GResult:
    _require_primitive(line)
    certs = []
    unknown = False
    for n in range(2, n_max + 1):
        cert = find_bad_window(line, n, budget, threads)
        certs.append(cert)
        if cert.kind == "witness":
            return GResult(n, "conditional" if unknown else "exact", n_max, tuple(certs))
        if cert.kind == "unknown":
            unknown = True
    return GResult(None, "unknown" if unknown else "lower-bound", n_max, tuple(certs))


def explore_G(line: Line, n_lo: int, n_hi: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> list[Certificate]:
    """Best certificate per window length; a none-in-period entry at n shows G_L > n."""
    _require_primitive(line)
    return [find_bad_window(line, n, budget, threads) for n in range(max(n_lo, 2), n_hi + 1)]


def bound_B(t: int) -> int:
    """Sum of ceil(t/p) over primes p < t with p = 1 (mod 4)."""
    if t < 1:
        raise DomainError("t must be positive")
    return sum(-(-t // p) for p in primerange(2, t) if p % 4 == 1)


@dataclass
class BoundTable:
    """B_t for t = 2..limit.

    threshold is the largest t with B_u < u for every u <= t; first_exceed is
    the smallest t with B_t > t (None if there is none up to limit).  The two
    can differ when B_t = t occurs.
    """

    limit: int
    values: list[int] = field(repr=False)  # values[t - 2] = B_t
    threshold: int
    first_exceed: int | None = None

    def B(self, t: int) -> int:
        return self.values[t - 2]

    def to_dict(self, include_values: bool = True) -> dict:
        d = {
            "limit": self.limit,
            "threshold": self.threshold,
            "first_exceed": self.first_exceed,
            "B_limit": self.values[-1],
        }
        if include_values:
            d["values"] = list(self.values)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> BoundTable:
        fe = d.get("first_exceed")
        return cls(int(d["limit"]), [int(v) for v in d["values"]], int(d["threshold"]), None if fe is None else int(fe))


def bound_table(limit: int) -> BoundTable:
    """B_t for 2 <= t <= limit, built incrementally.

    Going from t to t+1 the ceiling for p grows by one exactly when p | t, and
    a new term ceil((t+1)/t) = 2 appears when t itself is a prime = 1 (mod 4).
    """
    if limit < 2:
        raise DomainError("limit must be at least 2")
    bump = np.zeros(limit + 1, dtype=np.int64)  # bump[t] = B_{t+1} - B_t
    for p in primerange(5, limit + 1):
        if p % 4 == 1:
            bump[p::p] += 1
            bump[p] += 1
    values = np.zeros(limit + 1, dtype=np.int64)
    values[3:] = np.cumsum(bump[2:limit])
    vals = [int(v) for v in values[2:]]
    ts = np.arange(2, limit + 1)
    b = values[2:]
    not_below = np.flatnonzero(b >= ts)
    above = np.flatnonzero(b > ts)
    threshold = int(ts[not_below[0]]) - 1 if not_below.size else limit
    first_exceed = int(ts[above[0]]) if above.size else None
    return BoundTable(limit, vals, threshold, first_exceed)
