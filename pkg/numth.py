"""
Number theory for evasilab
Primality, primes in progressions, near-Fermat primes, roughly-equal prime
partitions, and the n-decomposition planners behind the group constructions.
Every fractional-power threshold is compared with cross-multiplied integers.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, isqrt
from typing import Optional

from sympy import factorint, integer_nthroot
from sympy.ntheory.modular import crt as _sympy_crt

from errors import (
    BadShape, CapExceeded, NoPartition, NoPrimeInWindow, NotCoprime,
    NoValidT, PoolExhausted, TooLarge,
)

log = logging.getLogger(__name__)

# Complete for every m < 3.3 * 10^24, far past the 64-bit range
MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

DEFAULT_PRIME_CAP = 2 ** 40
NEAR_FERMAT_LIMIT_CAP = 2 ** 50
DEFAULT_POOL_LIMIT = 2 ** 48
TOLERANCE_LADDER = (Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(1, 2))
SPARSE_CONSTANT = Fraction(1, 32)

SCHEMES = {
    "near_fermat": {"label": "p-blocks plus near-Fermat clusters (Λ₁ × Λ₂)"},
    "near_eva": {"label": "kT_H blocks of size p plus a k'-tail (Λ × Z_k')"},
    "uncond_sparse": {"label": "largest prime power times a Vinogradov partition"},
    "erh": {"label": "n = pk + r with p ~ n^(1/4), n/4 <= r <= n/2"},
    "chowla": {"label": "n = pk + r with p ~ n^(1/2), r ≡ a (mod pq)"},
}


## ============================================================
## Primes
## ============================================================

def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin."""
    if m < 2:
        return False
    for p in MR_WITNESSES:
        if m % p == 0:
            return m == p
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_WITNESSES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def next_prime(m: int) -> int:
    """Smallest prime >= m."""
    c = max(m, 2)
    while not is_prime(c):
        c += 1
    return c


def factor(n: int) -> dict:
    return {int(p): int(e) for p, e in factorint(n).items()}


def crt(residues, moduli):
    """Solve x ≡ residues[i] (mod moduli[i]); returns (x, lcm) with 0 <= x < lcm."""
    pairs = [(r, m) for r, m in zip(residues, moduli) if m != 1]
    if not pairs:
        return 0, 1
    solved = _sympy_crt([m for _, m in pairs], [r % m for r, m in pairs], check=True)
    if solved is None:
        raise NotCoprime(f"incompatible congruences {list(zip(residues, moduli))}")
    x, m = solved
    return int(x) % int(m), int(m)


def odd_part(x: int) -> int:
    return x >> ((x & -x).bit_length() - 1)


def two_part(x: int) -> int:
    """Largest power of 2 dividing x."""
    return x & -x


def ceil_root_at_least(n: int, exponent: Fraction) -> int:
    """Smallest integer c >= 1 with c^den >= n^num, i.e. c >= n^exponent."""
    num, den = exponent.numerator, exponent.denominator
    target = n ** num
    root, exact = integer_nthroot(target, den)
    root = int(root)
    return max(root if exact else root + 1, 1)


def dirichlet_prime(m: int, a: int, cap: int = DEFAULT_PRIME_CAP) -> int:
    """Smallest prime p ≡ a (mod m)."""
    if m < 1:
        raise BadShape(f"modulus must be positive, got {m}")
    if gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) != 1")
    c = a % m
    step = m
    while c < 2:
        c += step
    while c <= cap:
        if is_prime(c):
            return c
        c += step
    raise CapExceeded(f"no prime ≡ {a} (mod {m}) below {cap}")


def dirichlet_max(m: int, cap: int = DEFAULT_PRIME_CAP) -> int:
    """p(m): the largest of the least primes over all reduced residues."""
    return max(dirichlet_prime(m, a, cap) for a in range(m) if gcd(a, m) == 1)


## ============================================================
## Near-Fermat primes
## ============================================================

def is_near_fermat(p: int, eps) -> bool:
    eps = Fraction(eps)
    if not is_prime(p):
        return False
    return odd_part(p - 1) ** eps.denominator <= p ** eps.numerator


def near_fermat_primes(eps, limit: int) -> list:
    """All primes p <= limit whose p-1 has odd part at most p^eps."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise BadShape(f"eps must lie in (0, 1), got {eps}")
    if limit > NEAR_FERMAT_LIMIT_CAP:
        raise TooLarge(f"limit {limit} exceeds 2^50")
    num, den = eps.numerator, eps.denominator
    found = [2] if limit >= 2 else []
    # p - 1 = m * 2^s with m odd; the condition m^den <= p^num is monotone in m
    for s in range(1, limit.bit_length() + 1):
        step = 1 << s
        m = 1
        while True:
            p = m * step + 1
            if p > limit or m ** den > p ** num:
                break
            if is_prime(p):
                found.append(p)
            m += 2
    found.sort()
    log.debug("near_fermat_primes(eps=%s, limit=%d): %d primes", eps, limit, len(found))
    return found


## ============================================================
## Roughly-equal prime partitions
## ============================================================

@dataclass(frozen=True)
class VinogradovPartition:
    k: int
    primes: tuple
    delta: Optional[Fraction]   # None for the exhaustive small-k cases

    @property
    def t(self):
        return len(self.primes)

    def window(self):
        if self.delta is None:
            return None
        centre = Fraction(self.k, self.t)
        return centre * (1 - self.delta), centre * (1 + self.delta)


def _small_partition(k):
    """Fewest primes summing to k, then smallest spread, then lexicographic."""
    primes = [p for p in range(2, k + 1) if is_prime(p)]
    best = None

    def extend(rest, start, parts, limit):
        nonlocal best
        if rest == 0:
            key = (len(parts), parts[-1] - parts[0], tuple(parts))
            if best is None or key < best[0]:
                best = (key, tuple(parts))
            return
        if len(parts) == limit:
            return
        for i in range(start, len(primes)):
            if primes[i] > rest:
                break
            extend(rest - primes[i], i, parts + [primes[i]], limit)

    for limit in range(1, 5):
        extend(k, 0, [], limit)
        if best is not None:
            return best[1]
    raise NoPartition(f"{k} is not a sum of at most four primes")


def vinogradov_partition(k: int, ladder=TOLERANCE_LADDER) -> VinogradovPartition:
    """Write k as 3 (odd k) or 4 (even k) primes, each within k/t·(1 ± δ)."""
    if k < 2:
        raise NoPartition(f"k = {k} has no prime partition")
    if k < 12:
        return VinogradovPartition(k, _small_partition(k), None)

    t = 3 if k % 2 else 4
    for delta in ladder:
        delta = Fraction(delta)
        lo = Fraction(k, t) * (1 - delta)
        hi = Fraction(k, t) * (1 + delta)
        window = [p for p in range(max(2, -(-lo.numerator // lo.denominator)), int(hi) + 1)
                  if is_prime(p)]
        window.sort(key=lambda p: (abs(p * t - k), p))
        members = set(window)
        found = _scan_window(k, t, window, members)
        if found:
            log.debug("vinogradov_partition(%d): %s at delta=%s", k, found, delta)
            return VinogradovPartition(k, tuple(sorted(found)), delta)
    raise NoPartition(f"no {t}-prime partition of {k} within relative width {ladder[-1]}")


def _scan_window(k, t, window, members):
    if t == 3:
        for p1 in window:
            for p2 in window:
                p3 = k - p1 - p2
                if p3 in members:
                    return (p1, p2, p3)
        return None
    for p1 in window:
        for p2 in window:
            for p3 in window:
                p4 = k - p1 - p2 - p3
                if p4 in members:
                    return (p1, p2, p3, p4)
    return None


def partition_orbit_minima(partition):
    """(m'_k, m''_k) for the diagonal cyclic action on blocks of the given prime sizes.

    Pairs inside one block of odd size r form orbits of size r (size 1 when r = 2),
    pairs across two blocks of equal size r orbits of size r, and pairs across
    blocks of distinct sizes r1, r2 orbits of size r1*r2. m''_k is None when k = 1.
    """
    parts = sorted(partition)
    m_prime = parts[0]
    sizes = []
    for i, r in enumerate(parts):
        if r >= 2:
            sizes.append(r if r > 2 else 1)
        for s in parts[i + 1:]:
            sizes.append(r if s == r else r * s)
    return m_prime, (min(sizes) if sizes else None)


## ============================================================
## Partition certificates
## ============================================================

@dataclass
class PartitionCertificate:
    scheme: str
    n: int
    components: dict
    checks: list = field(default_factory=list)

    def holds(self):
        return all(c["holds"] for c in self.checks if c["kind"] == "constraint")

    def window_ok(self):
        return all(c["holds"] for c in self.checks if c["kind"] == "window")

    def to_dict(self):
        return {"scheme": self.scheme, "n": self.n,
                "components": self.components, "checks": self.checks}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        return cls(data["scheme"], int(data["n"]), dict(data["components"]),
                   [dict(c) for c in data.get("checks", [])])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _check(name, holds, kind="constraint"):
    return {"name": name, "holds": bool(holds), "kind": kind}


def double_exp_threshold(h: int) -> int:
    """min{2^(2^t) - 1 : 2^(2^t) >= h}."""
    t = 0
    while 2 ** (2 ** t) < h:
        t += 1
    return 2 ** (2 ** t) - 1


def _smallest_prime_2_mod(T, start, odd=False):
    p = next_prime(max(start, 3 if odd else 2))
    while p % T != 2 % T:
        p = next_prime(p + 1)
    return p


def verify_certificate(cert: PartitionCertificate) -> list:
    """Recompute every check of a certificate from (scheme, n, components) alone."""
    recompute = _VERIFIERS.get(cert.scheme)
    if recompute is None:
        return [_check(f"known scheme {cert.scheme!r}", False)]
    try:
        return recompute(cert.n, cert.components)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        return [_check(f"components well-formed ({e.__class__.__name__}: {e})", False)]


def certificate_valid(cert: PartitionCertificate) -> bool:
    """True iff the recomputed constraints all hold and agree with the recorded checks."""
    fresh = verify_certificate(cert)
    if not all(c["holds"] for c in fresh if c["kind"] == "constraint"):
        return False
    return fresh == cert.checks


## ── near_eva ────────────────────────────────────────────────

def plan_near_eva(n: int, H) -> PartitionCertificate:
    """n = k·p·T_H + k' with k' ≡ n (mod pT_H), k' ≡ 1 (mod p-1), r = kT_H + 1."""
    h = H.n
    T = double_exp_threshold(h)
    if T == 1:
        log.warning("T_H = 1 for h = %d: every prime qualifies", h)
    p = _smallest_prime_2_mod(T, h)
    kprime, modulus = crt([n % (p * T), 1 % (p - 1)], [p * T, p - 1])
    if kprime == 0:
        kprime = modulus
    if n < kprime:
        raise BadShape(f"n = {n} is smaller than the tail k' = {kprime}")
    k = (n - kprime) // (p * T)
    comps = {
        "h": h, "T_H": T, "p": p, "kprime": kprime, "k": k,
        "r": k * T + 1, "N_prime": comb(n, 2) - comb(kprime, 2),
        "C_H": comb(kprime, 2),
    }
    cert = PartitionCertificate("near_eva", n, comps)
    cert.checks = _verify_near_eva(n, comps)
    return cert


def _verify_near_eva(n, c):
    h, T, p, kp, k = c["h"], c["T_H"], c["p"], c["kprime"], c["k"]
    lcm = p * T * (p - 1) // gcd(p * T, p - 1)
    smaller = [x for x in range(max(h, 2), p) if is_prime(x) and x % T == 2 % T]
    return [
        _check("T_H = threshold(h)", T == double_exp_threshold(h)),
        _check("p prime", is_prime(p)),
        _check("p >= h", p >= h),
        _check("p ≡ 2 (mod T_H)", p % T == 2 % T),
        _check("p smallest such prime", not smaller),
        _check("k' >= 1", kp >= 1),
        _check("k' ≡ n (mod pT_H)", (kp - n) % (p * T) == 0),
        _check("k' ≡ 1 (mod p-1)", (kp - 1) % (p - 1) == 0),
        _check("k' smallest positive solution", kp <= lcm),
        _check("k' < p^2 T_H", kp < p * p * T),
        _check("n = k p T_H + k'", n == k * p * T + kp),
        _check("k >= 0", k >= 0),
        _check("r = k T_H + 1", c["r"] == k * T + 1),
        _check("C_H = C(k', 2)", c["C_H"] == comb(kp, 2)),
        _check("N' = C(n,2) - C(k',2)", c["N_prime"] == comb(n, 2) - comb(kp, 2)),
    ]


## ── near_fermat ─────────────────────────────────────────────

def plan_near_fermat(n: int, H, pool=None, pool_limit: int = DEFAULT_POOL_LIMIT) -> PartitionCertificate:
    """n = pk + Σq_i with q_i near-Fermat primes in one residue class a mod p.

    The t-congruence is solved so that r = t + (k - tp) + r' ≡ 1 (mod T_H).
    """
    h = H.n
    T = double_exp_threshold(h)
    if T == 1:
        log.warning("T_H = 1 for h = %d: every odd prime qualifies", h)
    p = _smallest_prime_2_mod(T, h, odd=True)
    if n < p:
        raise BadShape(f"n = {n} is smaller than p = {p}")
    eps = Fraction(1, 2 * h)
    if pool is None:
        pool = near_fermat_primes(eps, pool_limit)

    classes = {}
    for q in sorted(set(pool)):
        if q > p and is_near_fermat(q, eps):
            classes.setdefault(q % p, []).append(q)

    best, short_pool, bad_t = None, False, False
    for a in range(1, p):
        r_prime = n * pow(a, -1, p) % p
        members = classes.get(a, [])
        if len(members) < r_prime:
            short_pool = True
            continue
        qs = members[:r_prime]
        kprime = sum(qs)
        if kprime > n:
            short_pool = True
            continue
        k = (n - kprime) // p
        t = (k + r_prime - 1) * pow(p - 1, -1, T) % T if T > 1 else 0
        if t * p > k:
            bad_t = True
            continue
        key = (kprime, a)
        if best is None or key < best[0]:
            best = (key, a, r_prime, qs, kprime, k, t)

    if best is None:
        if bad_t:
            raise NoValidT(f"no t with 0 <= t <= k/p for n = {n}, p = {p}")
        raise PoolExhausted(f"no residue class mod {p} holds enough near-Fermat primes "
                            f"(eps = {eps}) for n = {n}" if short_pool else f"n = {n}")

    _, a, r_prime, qs, kprime, k, t = best
    comps = {
        "h": h, "T_H": T, "p": p, "a": a, "r_prime": r_prime,
        "q_list": list(qs), "d_list": [two_part(q - 1) for q in qs],
        "kprime": kprime, "k": k, "t": t,
        "r": t + (k - t * p) + r_prime, "eps": str(eps),
    }
    cert = PartitionCertificate("near_fermat", n, comps)
    cert.checks = _verify_near_fermat(n, comps)
    return cert


def _verify_near_fermat(n, c):
    h, T, p, a, rp = c["h"], c["T_H"], c["p"], c["a"], c["r_prime"]
    qs, ds, kp, k, t, r = c["q_list"], c["d_list"], c["kprime"], c["k"], c["t"], c["r"]
    eps = Fraction(c["eps"])
    return [
        _check("T_H = threshold(h)", T == double_exp_threshold(h)),
        _check("p odd prime", is_prime(p) and p % 2 == 1),
        _check("p >= h", p >= h),
        _check("p ≡ 2 (mod T_H)", p % T == 2 % T),
        _check("eps = 1/(2h)", eps == Fraction(1, 2 * h)),
        _check("1 <= a < p", 1 <= a < p),
        _check("r' ≡ n a^-1 (mod p)", (rp * a - n) % p == 0 and 0 <= rp < p),
        _check("r' near-Fermat primes listed", len(qs) == rp == len(ds)),
        _check("q_i distinct", len(set(qs)) == len(qs)),
        _check("q_i prime", all(is_prime(q) for q in qs)),
        _check("q_i > p", all(q > p for q in qs)),
        _check("q_i ≡ a (mod p)", all(q % p == a for q in qs)),
        _check("q_i eps-near-Fermat", all(is_near_fermat(q, eps) for q in qs)),
        _check("gcd(q_i, p^2 - 1) = 1", all(gcd(q, p * p - 1) == 1 for q in qs)),
        _check("d_i = 2-part of q_i - 1", all(d == two_part(q - 1) for q, d in zip(qs, ds))),
        _check("k' = Σ q_i", kp == sum(qs)),
        _check("n = pk + k'", n == p * k + kp),
        _check("0 <= tp <= k", t >= 0 and t * p <= k),
        _check("t(p-1) ≡ k + r' - 1 (mod T_H)", (t * (p - 1) - (k + rp - 1)) % T == 0),
        _check("r = t + (k - tp) + r'", r == t + (k - t * p) + rp),
        _check("r ≡ 1 (mod T_H)", r % T == 1 % T),
    ]


## ── uncond_sparse ───────────────────────────────────────────

def plan_uncond_sparse(n: int) -> PartitionCertificate:
    """n = p^α k with p^α the largest prime power dividing n; case 1 when p^{3α} >= n^2, else case 2."""
    if n < 2:
        raise BadShape(f"n must be at least 2, got {n}")
    p, alpha = max(factor(n).items(), key=lambda pe: (pe[0] ** pe[1], pe[0]))
    q = p ** alpha
    k = n // q
    case1 = q ** 3 >= n ** 2
    comps = {"p": p, "alpha": alpha, "prime_power": q, "k": k, "case": 1 if case1 else 2}
    if case1:
        comps.update(partition=[], delta=None, dividing=[], d=None,
                     m_k_prime=1, m_k_dblprime=1 if k > 1 else None,
                     m_star_lower=comb(q, 2), m_star_target=q * q, chain="cyclic")
    else:
        part = vinogradov_partition(k)
        m1, m2 = partition_orbit_minima(part.primes)
        distinct = sorted(set(part.primes))
        dividing = [r for r in distinct if (q - 1) % r == 0]
        comps.update(partition=list(part.primes),
                     delta=None if part.delta is None else str(part.delta),
                     dividing=dividing,
                     d=(q - 1) // dividing[0] if len(dividing) == 1 else None,
                     m_k_prime=m1, m_k_dblprime=m2,
                     m_star_lower=_sparse_lower(q, m1, m2), m_star_target=q * n,
                     chain=_sparse_chain(q, distinct, dividing))
        if comps["chain"] == "unresolved":
            log.warning("uncond_sparse(%d): no Oliver chain from the divisibility analysis", n)
    cert = PartitionCertificate("uncond_sparse", n, comps)
    cert.checks = _verify_uncond_sparse(n, comps)
    return cert


def _sparse_lower(q, m1, m2):
    intra = comb(q, 2) * m1
    return intra if m2 is None else min(intra, q * q * m2)


def _sparse_chain(q, distinct, dividing):
    if not dividing:
        return "cyclic"
    if len(dividing) == 1:
        p1 = dividing[0]
        d = (q - 1) // p1
        if d % p1 and all(gcd(d, r) == 1 for r in distinct):
            return "p1-extension"
    return "unresolved"


def _verify_uncond_sparse(n, c):
    p, alpha, q, k = c["p"], c["alpha"], c["prime_power"], c["k"]
    largest = max(l ** e for l, e in factor(n).items())
    checks = [
        _check("p prime", is_prime(p)),
        _check("p^alpha", q == p ** alpha and alpha >= 1),
        _check("n = p^alpha k", n == q * k),
        _check("p^alpha largest prime power dividing n", q == largest),
        _check("case matches p^{3alpha} >= n^2", (c["case"] == 1) == (q ** 3 >= n ** 2)),
    ]
    if c["case"] == 1:
        checks.append(_check("m* lower = C(p^alpha, 2)", c["m_star_lower"] == comb(q, 2)))
        checks.append(_check("target = p^{2alpha}", c["m_star_target"] == q * q))
    else:
        part = c["partition"]
        distinct = sorted(set(part))
        dividing = [r for r in distinct if (q - 1) % r == 0]
        m1, m2 = partition_orbit_minima(part)
        checks += [
            _check("partition sums to k", sum(part) == k),
            _check("partition primes", all(is_prime(r) for r in part)),
            _check("partition size 3 or 4 (k >= 12)", k < 12 or len(part) == (3 if k % 2 else 4)),
            _check("partition inside tolerance window", _in_window(k, part, c["delta"])),
            _check("dividing primes", c["dividing"] == dividing),
            _check("p^alpha - 1 = p_1 d", c["d"] == ((q - 1) // dividing[0] if len(dividing) == 1 else None)),
            _check("orbit minima", (c["m_k_prime"], c["m_k_dblprime"]) == (m1, m2)),
            _check("m* lower bound", c["m_star_lower"] == _sparse_lower(q, m1, m2)),
            _check("target = p^alpha n", c["m_star_target"] == q * n),
            _check("chain", c["chain"] == _sparse_chain(q, distinct, dividing)),
        ]
    checks.append(_check(f"m* lower >= {SPARSE_CONSTANT} target",
                         c["m_star_lower"] >= SPARSE_CONSTANT * c["m_star_target"]))
    return checks


def _in_window(k, part, delta):
    if delta is None:
        return k < 12
    delta = Fraction(delta)
    t = len(part)
    return all(k * (1 - delta) <= r * t <= k * (1 + delta) for r in part)


## ── erh / chowla ────────────────────────────────────────────

def _coprime_prime_at_least(start, n):
    p = next_prime(start)
    while n % p == 0:
        p = next_prime(p + 1)
    return p


def _prime_at_least_avoiding(start, avoid):
    q = next_prime(start)
    while q == avoid:
        q = next_prime(q + 1)
    return q


def _first_prime_in_progression(residue, modulus, lo, hi):
    c = lo + (residue - lo) % modulus
    while c <= hi:
        if is_prime(c):
            return c
        c += modulus
    raise NoPrimeInWindow(lo, hi, f"no prime ≡ {residue} (mod {modulus}) in [{lo}, {hi}]")


def _q_candidates(n, expo, avoid, constant):
    """Primes q >= n^expo, q != avoid, up to constant * n^expo (at least one)."""
    num, den = expo.numerator, expo.denominator
    q = _prime_at_least_avoiding(ceil_root_at_least(n, expo), avoid)
    yield q
    while True:
        q = _prime_at_least_avoiding(q + 1, avoid)
        if q ** den > constant ** den * n ** num:
            return
        yield q


def plan_erh(n: int, eps=Fraction(1, 20)) -> PartitionCertificate:
    """n = pk + r, p ~ n^(1/4), q ~ n^(1/4 - eps), r ≡ 1 (mod q), r ≡ n (mod p), n/4 <= r <= n/2.

    q steps through the primes of its window until the progression holds a prime.
    """
    eps = Fraction(eps)
    expo = Fraction(1, 4) - eps
    if n < 10 ** 4:
        raise BadShape(f"n must be at least 10^4, got {n}")
    if not 0 < eps < Fraction(1, 4):
        raise BadShape(f"eps must lie in (0, 1/4), got {eps}")
    p = _coprime_prime_at_least(ceil_root_at_least(n, Fraction(1, 4)), n)
    lo, hi = -(-n // 4), n // 2
    for q in _q_candidates(n, expo, p, 2):
        a, M = crt([1, n % p], [q, p])
        try:
            r = _first_prime_in_progression(a, M, lo, hi)
            break
        except NoPrimeInWindow:
            log.debug("erh(%d): no prime ≡ %d (mod %d), next q", n, a, M)
    else:
        raise NoPrimeInWindow(lo, hi, f"erh({n}): no q in its window gives a prime r")
    comps = {"p": p, "q": q, "a": a, "modulus": M, "r": r, "k": (n - r) // p,
             "eps": str(eps), "window_lo": lo, "window_hi": hi, "constant": 2}
    cert = PartitionCertificate("erh", n, comps)
    cert.checks = _verify_erh(n, comps)
    return cert


def _verify_erh(n, c):
    p, q, a, M, r, k = c["p"], c["q"], c["a"], c["modulus"], c["r"], c["k"]
    expo = Fraction(1, 4) - Fraction(c["eps"])
    C = c["constant"]
    num, den = expo.numerator, expo.denominator
    return [
        _check("p prime", is_prime(p)),
        _check("q prime", is_prime(q)),
        _check("r prime", is_prime(r)),
        _check("p != q", p != q),
        _check("gcd(p, n) = 1", gcd(p, n) == 1),
        _check("p^4 >= n", p ** 4 >= n),
        _check("q >= n^(1/4 - eps)", q ** den >= n ** num),
        _check("modulus = pq", M == p * q),
        _check("gcd(a, pq) = 1", gcd(a, M) == 1),
        _check("q | r - 1", (r - 1) % q == 0),
        _check("r ≡ n (mod p)", (r - n) % p == 0),
        _check("r ≡ a (mod pq)", (r - a) % M == 0),
        _check("n = pk + r", n == p * k + r),
        _check("4r >= n", 4 * r >= n and c["window_lo"] == -(-n // 4)),
        _check("2r <= n", 2 * r <= n and c["window_hi"] == n // 2),
        _check(f"p <= {C} n^(1/4)", p ** 4 <= C ** 4 * n, "window"),
        _check(f"q <= {C} n^(1/4 - eps)", q ** den <= C ** den * n ** num, "window"),
    ]


def plan_chowla(n: int, delta=Fraction(1, 10)) -> PartitionCertificate:
    """n = pk + r, p ~ √n, q ~ n^(1/2 - 2δ), r ≡ a (mod pq); if a is prime add r ≡ a+1 (mod 3).

    As in plan_erh, q moves up through its window when the progression is empty.
    """
    delta = Fraction(delta)
    expo = Fraction(1, 2) - 2 * delta
    if n < 10 ** 4:
        raise BadShape(f"n must be at least 10^4, got {n}")
    if not 0 < delta < Fraction(1, 4):
        raise BadShape(f"delta must lie in (0, 1/4), got {delta}")
    p = _coprime_prime_at_least(isqrt(n - 1) + 1, n)
    for q in _q_candidates(n, expo, p, 2):
        a, M = crt([1, n % p], [q, p])
        fallback = is_prime(a)
        residue, modulus = a, M
        if fallback:
            if M % 3 == 0:
                log.debug("chowla(%d): fallback congruence mod 3 clashes with pq = %d", n, M)
                continue
            residue, modulus = crt([a, (a + 1) % 3], [M, 3])
            log.debug("chowla(%d): base residue %d is prime, adding r ≡ a+1 (mod 3)", n, a)
        try:
            r = _first_prime_in_progression(residue, modulus, M + 1, n - 1)
            break
        except NoPrimeInWindow:
            log.debug("chowla(%d): no prime ≡ %d (mod %d), next q", n, residue, modulus)
    else:
        raise NoPrimeInWindow(p, n - 1, f"chowla({n}): no q in its window gives a prime r")
    comps = {"p": p, "q": q, "a": a, "modulus": M, "fallback": fallback, "r": r,
             "k": (n - r) // p, "delta": str(delta), "constant": 2}
    cert = PartitionCertificate("chowla", n, comps)
    cert.checks = _verify_chowla(n, comps)
    return cert


def _verify_chowla(n, c):
    p, q, a, M, r, k = c["p"], c["q"], c["a"], c["modulus"], c["r"], c["k"]
    delta = Fraction(c["delta"])
    expo = Fraction(1, 2) - 2 * delta
    lo_e, hi_e = 1 - Fraction(5, 2) * delta, 1 - delta / 2
    C = c["constant"]
    checks = [
        _check("p prime", is_prime(p)),
        _check("q prime", is_prime(q)),
        _check("r prime", is_prime(r)),
        _check("p != q", p != q),
        _check("gcd(p, n) = 1", gcd(p, n) == 1),
        _check("p^2 >= n", p * p >= n),
        _check("q >= n^(1/2 - 2delta)", q ** expo.denominator >= n ** expo.numerator),
        _check("modulus = pq", M == p * q),
        _check("a ≡ 1 (mod q), a ≡ n (mod p)", 0 <= a < M and a % q == 1 % q and (a - n) % p == 0),
        _check("fallback iff a prime", c["fallback"] == is_prime(a)),
        _check("q | r - 1", (r - 1) % q == 0),
        _check("r ≡ n (mod p)", (r - n) % p == 0),
        _check("r ≡ a (mod pq)", (r - a) % M == 0),
        _check("r > pq", r > M),
        _check("n = pk + r", n == p * k + r and k >= 0),
    ]
    if c["fallback"]:
        checks.append(_check("r ≡ a+1 (mod 3)", (r - a - 1) % 3 == 0))
    checks += [
        _check(f"p <= {C} sqrt(n)", p * p <= C * C * n, "window"),
        _check(f"q <= {C} n^(1/2 - 2delta)",
               q ** expo.denominator <= C ** expo.denominator * n ** expo.numerator, "window"),
        _check("r >= n^(1 - 5delta/2)", r ** lo_e.denominator >= n ** lo_e.numerator, "window"),
        _check("r <= n^(1 - delta/2)", r ** hi_e.denominator <= n ** hi_e.numerator, "window"),
    ]
    return checks


_VERIFIERS = {
    "near_eva": _verify_near_eva,
    "near_fermat": _verify_near_fermat,
    "uncond_sparse": _verify_uncond_sparse,
    "erh": _verify_erh,
    "chowla": _verify_chowla,
}
