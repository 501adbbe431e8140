"""
Permutation groups
Groups are stored by generators acting on [n]; composition reads left to
right (a * b applies a first). Orbits and u-orbitals come from BFS over the
generators, element enumeration is on demand and capped. The constructions
(Γ(q,d), Γ₀(p^α, Δ_k), Γ(p,q,r), Λ₁, Λ₂, Λ × Z_k') lay points out
block-major and tag every generator with a role so Oliver chains can be read
off the construction.
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, gcd, prod
from typing import Optional

from errors import (
    BadPartition, BadShape, DomainTooLarge, NonPrime, NotAnAction, NotDivisor,
    OrderTooLarge,
)
from ffield import field_of_order, make_field, primitive_root
from numth import factor, is_prime, two_part

log = logging.getLogger(__name__)

DOMAIN_CAP = 10_000
ENUM_CAP = 10_000_000
OLIVER_SEARCH_CAP = 100_000

# Generator roles, used to read Oliver chains off a construction
ROLES = {
    "translation": {"label": "additive translation inside one block"},
    "multiplier": {"label": "multiplication by a field element"},
    "submultiplier": {"label": "a power of the multiplier"},
    "block": {"label": "permutation of whole blocks"},
    "block-top": {"label": "block permutation outside Γ₁"},
    "cycle": {"label": "cycle on a tail"},
    "other": {"label": "unclassified generator"},
}


## ============================================================
## Permutations
## ============================================================

def compose(a, b):
    """Apply a, then b."""
    return tuple(b[i] for i in a)


def invert(a):
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def conjugate(h, g):
    """h^g = g^-1 h g."""
    return compose(compose(invert(g), h), g)


def cycles_of(a):
    seen, out = set(), []
    for start in range(len(a)):
        if start in seen:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = a[x]
        out.append(cyc)
    return out


def perm_order(a):
    order = 1
    for c in cycles_of(a):
        order = order * len(c) // gcd(order, len(c))
    return order


def perm_power(a, m):
    out = list(range(len(a)))
    for c in cycles_of(a):
        L = len(c)
        for idx, pt in enumerate(c):
            out[pt] = c[(idx + m) % L]
    return tuple(out)


@dataclass(frozen=True)
class Permutation:
    image: tuple

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise BadShape(f"not a bijection on [{len(self.image)}]: {self.image}")

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n, cycles):
        img = list(range(n))
        for c in cycles:
            for i, x in enumerate(c):
                img[x] = c[(i + 1) % len(c)]
        return cls(tuple(img))

    @property
    def n(self):
        return len(self.image)

    def __call__(self, x):
        return self.image[x]

    def __mul__(self, other):
        return Permutation(compose(self.image, other.image))

    def inverse(self):
        return Permutation(invert(self.image))

    def order(self):
        return perm_order(self.image)

    def cycles(self):
        return [c for c in cycles_of(self.image) if len(c) > 1]

    def is_identity(self):
        return all(i == x for i, x in enumerate(self.image))


## ============================================================
## Groups
## ============================================================

@dataclass(frozen=True)
class OliverHint:
    """Chain Γ₂ ⊴ Γ₁ ⊴ Γ given by generator indices of the host group."""
    p: int
    q: int
    gamma2: tuple
    gamma1: tuple


@dataclass(frozen=True)
class PermGroup:
    n: int
    generators: tuple
    structure_tag: Optional[str] = None
    order_hint: Optional[int] = None
    clusters: Optional[tuple] = None
    quotient: Optional["PermGroup"] = None
    roles: Optional[tuple] = None
    factors: Optional[tuple] = None        # orders of independent cyclic generators
    oliver_hint: Optional[OliverHint] = None

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise BadShape(f"generator on [{g.n}] in a group on [{self.n}]")
        if self.roles is not None and len(self.roles) != len(self.generators):
            raise BadShape("one role per generator")

    @property
    def images(self):
        return tuple(g.image for g in self.generators)

    def orbit(self, x):
        return orbit(self, x)

    def orbits(self):
        return orbits(self)

    def elements(self, cap=ENUM_CAP):
        return _closure(self.n, self.images, cap)

    def order(self, cap=ENUM_CAP):
        return len(self.elements(cap))

    def role_indices(self, *roles):
        return tuple(i for i, r in enumerate(self.roles or ()) if r in roles)

    def to_dict(self):
        return {
            "n": self.n,
            "generators": [list(g.image) for g in self.generators],
            "structure_tag": self.structure_tag,
            "order_hint": self.order_hint,
            "clusters": [list(c) for c in self.clusters] if self.clusters else None,
            "roles": list(self.roles) if self.roles else None,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        n = int(data["n"])
        gens = tuple(Permutation(tuple(int(x) for x in g)) for g in data.get("generators", []))
        clusters = data.get("clusters")
        roles = data.get("roles")
        return cls(n, gens, data.get("structure_tag"), data.get("order_hint"),
                   tuple(tuple(c) for c in clusters) if clusters else None,
                   roles=tuple(roles) if roles else None)


def _group(n, gens, roles, **kw):
    """Build a PermGroup, dropping identity generators."""
    keep = [(g, r) for g, r in zip(gens, roles) if any(i != x for i, x in enumerate(g))]
    return PermGroup(n, tuple(Permutation(tuple(g)) for g, _ in keep),
                     roles=tuple(r for _, r in keep), **kw)


@lru_cache(maxsize=8)
def _closure(n, gens, cap):
    identity = tuple(range(n))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = tuple(s[i] for i in g)
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise OrderTooLarge(f"group order exceeds {cap}")
                    nxt.append(h)
        frontier = nxt
    return frozenset(seen)


def trivial_group(n):
    return PermGroup(n, (), "trivial", 1, roles=(), factors=())


def cyclic_group(m, n=None):
    """Z_m generated by an m-cycle on the first m points of [n]."""
    n = m if n is None else n
    if m > n:
        raise BadShape(f"an {m}-cycle does not fit on [{n}]")
    if m <= 1:
        return trivial_group(n)
    g = Permutation.from_cycles(n, [list(range(m))])
    return PermGroup(n, (g,), f"Z{m}", m, roles=("cycle",), factors=(m,))


def symmetric_group(n):
    if n <= 1:
        return trivial_group(n)
    swap = Permutation.from_cycles(n, [[0, 1]])
    gens = (swap,) if n == 2 else (swap, Permutation.from_cycles(n, [list(range(n))]))
    return PermGroup(n, gens, f"Sym({n})", factorial(n), roles=("other",) * len(gens))


def direct_product(groups, tag=None):
    """Product acting on the disjoint union, domains laid out in order."""
    n = sum(G.n for G in groups)
    gens, roles, clusters = [], [], []
    offset = 0
    for G in groups:
        for g, role in zip(G.images, G.roles or ("other",) * len(G.generators)):
            img = list(range(n))
            for i, x in enumerate(g):
                img[offset + i] = offset + x
            gens.append(tuple(img))
            roles.append(role)
        for c in (G.clusters or (tuple(range(G.n)),)):
            clusters.append(tuple(offset + x for x in c))
        offset += G.n
    hints = [G.order_hint for G in groups]
    return PermGroup(n, tuple(Permutation(g) for g in gens),
                     tag or " x ".join(G.structure_tag or "?" for G in groups),
                     prod(hints) if all(h is not None for h in hints) else None,
                     clusters=tuple(clusters), roles=tuple(roles))


def induced_pair_action(G, slots):
    """Action of G on the given list of unordered pairs (i, j), i < j."""
    index = {tuple(s): k for k, s in enumerate(slots)}
    gens = []
    for g in G.images:
        img = []
        for i, j in slots:
            a, b = g[i], g[j]
            key = (a, b) if a < b else (b, a)
            if key not in index:
                raise BadShape(f"slot set not invariant: {(i, j)} -> {key}")
            img.append(index[key])
        gens.append(tuple(img))
    return PermGroup(len(slots), tuple(Permutation(g) for g in gens),
                     f"{G.structure_tag or 'G'} on pairs", G.order_hint,
                     roles=G.roles)


## ============================================================
## Orbits and u-orbitals
## ============================================================

def orbit(G, x):
    if not 0 <= x < G.n:
        raise BadShape(f"point {x} outside [{G.n}]")
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for g in G.images:
            z = g[y]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


def orbits(G):
    """Orbits as sorted lists, ordered by smallest point."""
    seen, out = set(), []
    for x in range(G.n):
        if x not in seen:
            o = orbit(G, x)
            seen |= o
            out.append(sorted(o))
    return out


@dataclass
class UOrbitalReport:
    orbitals: list
    m_star: Optional[int]
    tags: list = field(default_factory=list)
    m_intra: Optional[int] = None
    m_inter: Optional[int] = None
    m_k_prime: Optional[int] = None
    m_k_dblprime: Optional[int] = None

    @property
    def sizes(self):
        return [len(o) for o in self.orbitals]

    def to_dict(self):
        return {
            "orbitals": [{"representative": list(o[0]), "size": len(o), "tag": t}
                         for o, t in zip(self.orbitals, self.tags)],
            "count": len(self.orbitals),
            "m_star": self.m_star, "m_intra": self.m_intra, "m_inter": self.m_inter,
            "m_k_prime": self.m_k_prime, "m_k_dblprime": self.m_k_dblprime,
        }

    def tsv_rows(self):
        rows = [("i", "j", "size", "tag")]
        for o, t in zip(self.orbitals, self.tags):
            rows.append((o[0][0], o[0][1], len(o), t))
        return rows


def _pair_orbits(n, gens):
    seen = set()
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in seen:
                continue
            seen.add((i, j))
            orb = [(i, j)]
            queue = deque(orb)
            while queue:
                a, b = queue.popleft()
                for g in gens:
                    x, y = g[a], g[b]
                    key = (x, y) if x < y else (y, x)
                    if key not in seen:
                        seen.add(key)
                        orb.append(key)
                        queue.append(key)
            out.append(sorted(orb))
    return out


def u_orbitals(G, clusters=None):
    """Orbits on 2-subsets; tagged intra/inter when a cluster structure is known."""
    if G.n > DOMAIN_CAP:
        raise DomainTooLarge(f"{G.n} points exceed the u-orbital cap {DOMAIN_CAP}")
    orbitals = _pair_orbits(G.n, G.images)
    report = UOrbitalReport(orbitals, min((len(o) for o in orbitals), default=None))
    clusters = clusters if clusters is not None else G.clusters
    if not clusters:
        report.tags = [""] * len(orbitals)
        return report

    owner = {}
    for c, block in enumerate(clusters):
        for x in block:
            owner[x] = c
    for o in orbitals:
        kinds = {owner.get(a) == owner.get(b) for a, b in o}
        report.tags.append("mixed" if len(kinds) == 2 else ("intra" if kinds.pop() else "inter"))
    intra = [len(o) for o, t in zip(orbitals, report.tags) if t == "intra"]
    inter = [len(o) for o, t in zip(orbitals, report.tags) if t == "inter"]
    report.m_intra = min(intra, default=None)
    report.m_inter = min(inter, default=None)
    if G.quotient is not None:
        report.m_k_prime = min(len(o) for o in orbits(G.quotient))
        qpairs = _pair_orbits(G.quotient.n, G.quotient.images)
        report.m_k_dblprime = min((len(o) for o in qpairs), default=None)
    return report


## ============================================================
## Semidirect products
## ============================================================

def semidirect(gamma, delta, psi=None, action=None, domain=None, cap=OLIVER_SEARCH_CAP):
    """Θ = Γ ⋊_ψ Δ with (δ₁,γ₁)(δ₂,γ₂) = (δ₁δ₂, γ₁^{ψ(δ₂)}γ₂).

    gamma, delta: PermGroups (their element sets are the abstract groups).
    psi(δ, γ) -> γ^{ψ(δ)}, on image tuples; default is conjugation, which needs
    both groups on one domain and realizes (δ, γ) as δγ there.
    action(δ, γ) -> image tuple on [domain] declares another faithful domain;
    without one the product acts regularly on its own elements.
    """
    if psi is None:
        if gamma.n != delta.n:
            raise NotAnAction("conjugation needs gamma and delta on one domain")
        psi = lambda d, g: conjugate(g, d)
        action = action or (lambda d, g: compose(d, g))
        domain = domain or gamma.n

    G_el = gamma.elements(cap)
    D_el = delta.elements(cap)
    _check_action(gamma, delta, psi, G_el)

    one_g, one_d = tuple(range(gamma.n)), tuple(range(delta.n))
    if action is not None:
        gens = [action(d, one_g) for d in delta.images] + [action(one_d, g) for g in gamma.images]
        theta = _group(domain, gens, ["other"] * len(gens),
                       structure_tag=f"({gamma.structure_tag}) x| ({delta.structure_tag})",
                       order_hint=len(G_el) * len(D_el))
    else:
        theta = _regular_semidirect(gamma, delta, psi, G_el, D_el)

    # Γ* ⊴ Θ, Γ* ∩ Δ* = 1 and |Θ| = |Γ||Δ|
    T_el = theta.elements(cap)
    if len(T_el) != len(G_el) * len(D_el):
        raise NotAnAction(f"|Θ| = {len(T_el)} but |Γ||Δ| = {len(G_el) * len(D_el)}")
    if action is not None:
        gamma_star = _closure(domain, tuple(action(one_d, g) for g in gamma.images), cap)
        delta_star = _closure(domain, tuple(action(d, one_g) for d in delta.images), cap)
        for h in (action(one_d, g) for g in gamma.images):
            for t in theta.images:
                if conjugate(h, t) not in gamma_star:
                    raise NotAnAction("image of Γ is not normal in Θ")
        if len(gamma_star & delta_star) != 1:
            raise NotAnAction("images of Γ and Δ intersect nontrivially")
    return theta


def _check_action(gamma, delta, psi, G_el):
    """Spot-check that ψ is a right action of Δ by automorphisms of Γ."""
    one_d = tuple(range(delta.n))
    for g in gamma.images:
        if psi(one_d, g) != g:
            raise NotAnAction("ψ(1) is not the identity")
    for d in delta.images:
        image = {psi(d, x) for x in G_el}
        if image != set(G_el):
            raise NotAnAction("ψ(δ) is not a bijection of Γ")
        for g1 in gamma.images:
            for g2 in gamma.images:
                if psi(d, compose(g1, g2)) != compose(psi(d, g1), psi(d, g2)):
                    raise NotAnAction("ψ(δ) is not a homomorphism")
        for d2 in delta.images:
            for g in gamma.images:
                if psi(compose(d, d2), g) != psi(d2, psi(d, g)):
                    raise NotAnAction("ψ is not a homomorphism of Δ")


def _regular_semidirect(gamma, delta, psi, G_el, D_el):
    pairs = [(d, g) for d in sorted(D_el) for g in sorted(G_el)]
    index = {pr: i for i, pr in enumerate(pairs)}
    one_g, one_d = tuple(range(gamma.n)), tuple(range(delta.n))

    def right_mult(d0, g0):
        return tuple(index[(compose(d, d0), compose(psi(d0, g), g0))] for d, g in pairs)

    gens = [right_mult(d, one_g) for d in delta.images] + [right_mult(one_d, g) for g in gamma.images]
    return _group(len(pairs), gens, ["other"] * len(gens),
                  structure_tag=f"({gamma.structure_tag}) x| ({delta.structure_tag}) regular",
                  order_hint=len(G_el) * len(D_el))


## ============================================================
## Field-based constructions
## ============================================================

def _block_perm(n, offset, local):
    img = list(range(n))
    for i, x in enumerate(local):
        img[offset + i] = offset + x
    return tuple(img)


def gamma_qd(q, d):
    """Γ(q,d) = {x ↦ ax + b : a ∈ C_d} on F_q."""
    F = field_of_order(q)
    if d < 1 or (q - 1) % d:
        raise NotDivisor(f"{d} does not divide {q - 1}")
    gens = [F.add_map(b) for b in F.additive_basis()]
    roles = ["translation"] * len(gens)
    if d > 1:
        c = primitive_root(F) ** ((q - 1) // d)
        gens.append(F.mul_map(c))
        roles.append("multiplier")
    G = _group(q, gens, roles, structure_tag=f"Gamma({q},{d})", order_hint=q * d,
               clusters=(tuple(range(q)),))
    return _with_hint(G, OliverHint(F.p, 2, G.role_indices("translation"),
                                    tuple(range(len(G.generators)))))


def _with_hint(G, hint):
    return PermGroup(G.n, G.generators, G.structure_tag, G.order_hint, G.clusters,
                     G.quotient, G.roles, G.factors, hint)


def gamma0(p, alpha, delta_k):
    """Γ₀(p^α, Δ_k) on [k] × F_{p^α}: (x, y) ↦ (σ(x), a·y + b_{σ(x)})."""
    F = make_field(p, alpha)
    Q, k = F.q, delta_k.n
    n = Q * k
    if n > DOMAIN_CAP:
        raise DomainTooLarge(f"{n} points exceed {DOMAIN_CAP}")
    chain, p1 = _gamma0_chain(Q, delta_k)
    gens, roles = [], []
    for x in range(k):
        for b in F.additive_basis():
            gens.append(_block_perm(n, x * Q, F.add_map(b)))
            roles.append("translation")
    if Q > 2:
        mul = F.mul_map(primitive_root(F))
        img = [0] * n
        for x in range(k):
            for y in range(Q):
                img[x * Q + y] = x * Q + mul[y]
        gens.append(tuple(img))
        roles.append("multiplier")
        if p1 is not None and (Q - 1) // p1 > 1:
            gens.append(perm_power(tuple(img), p1))
            roles.append("submultiplier")
    fs = list(delta_k.factors) if delta_k.factors is not None else [None] * len(delta_k.images)
    for sigma, f in zip(delta_k.images, fs):
        gens.append(tuple(sigma[x] * Q + y for x in range(k) for y in range(Q)))
        roles.append("block" if f != p1 else "block-top")
    delta_order = delta_k.order_hint if delta_k.order_hint is not None else delta_k.order()
    G = _group(n, gens, roles,
               structure_tag=f"Gamma0({Q},{delta_k.structure_tag or 'Delta'})",
               order_hint=Q ** k * (Q - 1) * delta_order,
               clusters=tuple(tuple(range(x * Q, (x + 1) * Q)) for x in range(k)),
               quotient=delta_k)
    if chain is None:
        return G
    translations = G.role_indices("translation")
    if p1 is None:
        return _with_hint(G, OliverHint(p, 2, translations, tuple(range(len(G.generators)))))
    # Γ₁ = translations ⋊ (C_{(q-1)/p₁} × the Δ factors other than Z_{p₁})
    return _with_hint(G, OliverHint(p, p1, translations,
                                    G.role_indices("translation", "submultiplier", "block")))


def _gamma0_chain(Q, delta_k):
    """("cyclic", None) when F_Q^× × Δ_k is cyclic, ("extension", p₁) when exactly
    one Δ factor p₁ (a prime) shares a divisor with Q - 1, else (None, None)."""
    fs = delta_k.factors if delta_k.factors is not None else (() if not delta_k.generators else None)
    if fs is None or not all(gcd(a, b) == 1 for i, a in enumerate(fs) for b in fs[i + 1:]):
        return None, None
    sharing = [f for f in fs if gcd(f, Q - 1) > 1]
    if not sharing:
        return "cyclic", None
    if len(sharing) == 1 and is_prime(sharing[0]):
        return "extension", sharing[0]
    return None, None


def delta_k_vinogradov(k, partition):
    """∏ Z_{p_i} over distinct p_i, each acting diagonally on all blocks of size p_i."""
    partition = [int(x) for x in partition]
    if sum(partition) != k or not partition or not all(is_prime(x) for x in partition):
        raise BadPartition(f"{partition} is not a prime partition of {k}")
    blocks, start = [], 0
    for size in partition:
        blocks.append(tuple(range(start, start + size)))
        start += size
    gens, distinct = [], sorted(set(partition))
    for r in distinct:
        gens.append(Permutation.from_cycles(k, [list(b) for b in blocks if len(b) == r]))
    return PermGroup(k, tuple(gens), f"Delta{k}{partition}", prod(distinct),
                     clusters=tuple(blocks), roles=("block",) * len(gens),
                     factors=tuple(distinct))


def gamma_pqr(p, k, r, q, partition):
    """Γ(p,q,r) = Γ₀(p, Δ_k) × Γ(r,q) on [pk] ⊔ [r]."""
    if not is_prime(q):
        raise BadShape(f"q = {q} must be prime")
    if not is_prime(r):
        raise NonPrime(f"r = {r} is not prime")
    if (r - 1) % q:
        raise NotDivisor(f"{q} does not divide {r - 1}")
    delta = delta_k_vinogradov(k, partition)
    G0 = gamma0(p, 1, delta)
    G1 = gamma_qd(r, q)
    if p * k + r > DOMAIN_CAP:
        raise DomainTooLarge(f"{p * k + r} points exceed {DOMAIN_CAP}")
    G = direct_product([G0, G1], tag=f"Gamma({p},{q},{r})")
    G = PermGroup(G.n, G.generators, G.structure_tag, G.order_hint,
                  G.clusters, delta, G.roles)
    orders = [p - 1, prod(delta.factors), r]
    if all(gcd(a, b) == 1 for i, a in enumerate(orders) for b in orders[i + 1:]):
        n0 = len(G0.generators)
        gamma2 = tuple(i for i in G0.role_indices("translation"))
        gamma1 = tuple(range(n0)) + tuple(n0 + i for i in G1.role_indices("translation"))
        return _with_hint(G, OliverHint(p, q, gamma2, gamma1))
    return G


def _character_on_prime_block(g, p, block_character):
    """Image of the generator g of F_{p²}^× in F_p^×."""
    if block_character == "norm":
        chi = g ** (p + 1)
    elif block_character == "power":
        # quadratic character, ±1
        chi = g ** ((p * p - 1) // 2) if p > 2 else g ** 0
    else:
        raise BadShape(f"unknown block character {block_character!r}")
    if chi.coeffs[1] != 0:
        raise BadShape("block character left F_p")
    return chi.coeffs[0]


def lambda1(p, t, k, block_character="norm"):
    """((F_{p²}^+)^t × (F_p^+)^{k-tp}) ⋊ F_{p²}^× on [pk]."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if t < 0 or t * p > k:
        raise BadShape(f"need 0 <= t <= k/p, got t = {t}, k = {k}, p = {p}")
    n = p * k
    if n > DOMAIN_CAP:
        raise DomainTooLarge(f"{n} points exceed {DOMAIN_CAP}")
    F2, F1 = make_field(p, 2), make_field(p, 1)
    g = primitive_root(F2)
    c = _character_on_prime_block(g, p, block_character)

    sizes = [p * p] * t + [p] * (k - t * p)
    blocks, start = [], 0
    for s in sizes:
        blocks.append(tuple(range(start, start + s)))
        start += s

    gens, roles = [], []
    for b in blocks:
        F = F2 if len(b) == p * p else F1
        for e in F.additive_basis():
            gens.append(_block_perm(n, b[0], F.add_map(e)))
            roles.append("translation")
    big, small = F2.mul_map(g), F1.mul_map(c)
    img = list(range(n))
    for b in blocks:
        local = big if len(b) == p * p else small
        for i, x in enumerate(local):
            img[b[0] + i] = b[0] + x
    gens.append(tuple(img))
    roles.append("multiplier")

    top = p * p - 1 if t else perm_order(small)
    G = _group(n, gens, roles, structure_tag=f"Lambda1({p},{t},{k})",
               order_hint=p ** (2 * t + k - t * p) * top, clusters=tuple(blocks))
    return _with_hint(G, OliverHint(p, 2, G.role_indices("translation"),
                                    tuple(range(len(G.generators)))))


def lambda2(qs, ds=None):
    """∏ Γ(q_i, d_i), d_i the largest power of 2 dividing q_i - 1 by default."""
    ds = [two_part(q - 1) for q in qs] if ds is None else list(ds)
    parts = [gamma_qd(q, d) for q, d in zip(qs, ds)]
    G = direct_product(parts, tag=f"Lambda2{list(qs)}")
    return G


def near_fermat_group(p, t, k, qs, block_character="norm"):
    """Λ₁ × Λ₂: a 2-group extension of a cyclic extension of a p-group."""
    L1 = lambda1(p, t, k, block_character)
    L2 = lambda2(qs)
    G = direct_product([L1, L2], tag=f"Lambda1({p},{t},{k}) x Lambda2{list(qs)}")
    n1 = len(L1.generators)
    gamma2 = L1.role_indices("translation")
    gamma1 = tuple(range(n1)) + tuple(n1 + i for i in L2.role_indices("translation"))
    return _with_hint(G, OliverHint(p, 2, gamma2, gamma1))


def lambda_neareva(p, kT, kprime):
    """(F_p^+)^{kT} ⋊ F_p^× (diagonal) times a k'-cycle on the tail."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if kT < 0 or kprime < 0:
        raise BadShape("block and tail counts must be non-negative")
    n = p * kT + kprime
    if n > DOMAIN_CAP:
        raise DomainTooLarge(f"{n} points exceed {DOMAIN_CAP}")
    F = make_field(p, 1)
    gens, roles = [], []
    for x in range(kT):
        gens.append(_block_perm(n, x * p, F.add_map(1)))
        roles.append("translation")
    mul = F.mul_map(primitive_root(F))
    img = list(range(n))
    for x in range(kT):
        for y in range(p):
            img[x * p + y] = x * p + mul[y]
    gens.append(tuple(img))
    roles.append("multiplier")
    if kprime >= 2:
        tail = list(range(p * kT, n))
        gens.append(Permutation.from_cycles(n, [tail]).image)
        roles.append("cycle")

    tag = f"Lambda({p},{kT}) x Z{kprime}"
    cyclic_top = gcd(p - 1, kprime) == 1 if kprime else True
    if not cyclic_top:
        log.warning("gcd(p-1, k') = %d for p = %d, k' = %d: Γ/Γ₂ is not cyclic",
                    gcd(p - 1, kprime), p, kprime)
        tag += " [non-cyclic top]"
    blocks = tuple(tuple(range(x * p, (x + 1) * p)) for x in range(kT))
    if kprime:
        blocks += (tuple(range(p * kT, n)),)
    # with no blocks F_p^× acts trivially and only the tail cycle is left
    top = p - 1 if kT else 1
    G = _group(n, gens, roles, structure_tag=tag,
               order_hint=p ** kT * top * max(kprime, 1), clusters=blocks)
    if not cyclic_top or not kT:
        return G
    return _with_hint(G, OliverHint(p, 2, G.role_indices("translation"),
                                    tuple(range(len(G.generators)))))


## ============================================================
## Oliver's condition
## ============================================================

@dataclass(frozen=True)
class OliverCertificate:
    p: int
    q: int
    gens_gamma2: tuple
    gens_gamma1: tuple
    coset_generator: tuple
    orders: tuple            # (|Γ₂|, |Γ₁|, |Γ|)

    def to_dict(self):
        return {"p": self.p, "q": self.q,
                "gens_gamma2": [list(g) for g in self.gens_gamma2],
                "gens_gamma1": [list(g) for g in self.gens_gamma1],
                "coset_generator": list(self.coset_generator),
                "orders": list(self.orders)}

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["p"]), int(data["q"]),
                   tuple(tuple(g) for g in data["gens_gamma2"]),
                   tuple(tuple(g) for g in data["gens_gamma1"]),
                   tuple(data["coset_generator"]), tuple(data["orders"]))


def _is_power_of(x, p):
    while x % p == 0:
        x //= p
    return x == 1


def _order_modulo(c, N, limit):
    """Smallest m >= 1 with c^m ∈ N, or None past limit."""
    x = c
    for m in range(1, limit + 1):
        if x in N:
            return m
        x = compose(x, c)
    return None


def _small_generating_set(n, elements, cap):
    gens, H = [], frozenset([tuple(range(n))])
    for x in sorted(elements):
        if x not in H:
            gens.append(x)
            H = _closure(n, tuple(gens), cap)
            if len(H) == len(elements):
                break
    return tuple(gens), H


def _find_coset_generator(n, gens1, E1, E2, index):
    if index == 1:
        return tuple(range(n))
    candidates = list(gens1) + [compose(a, b) for a in gens1 for b in gens1]
    for c in candidates:
        if _order_modulo(c, E2, index) == index:
            return c
    for c in sorted(E1):
        if _order_modulo(c, E2, index) == index:
            return c
    return None


def oliver_certificate_checks(G, cert, cap=ENUM_CAP):
    """List of (name, holds) for a certificate against G."""
    n = G.n
    E = G.elements(cap)
    E1 = _closure(n, tuple(cert.gens_gamma1), cap)
    E2 = _closure(n, tuple(cert.gens_gamma2), cap)
    p, q = cert.p, cert.q
    c = cert.coset_generator
    index = len(E1) // len(E2) if len(E1) % len(E2) == 0 else None
    checks = [
        ("p prime", is_prime(p)),
        ("q prime", is_prime(q)),
        ("Γ₁ ≤ Γ", all(g in E for g in cert.gens_gamma1)),
        ("Γ₂ ≤ Γ₁", all(g in E1 for g in cert.gens_gamma2)),
        ("Γ₂ ⊴ Γ₁", all(conjugate(h, g) in E2 for h in cert.gens_gamma2 for g in cert.gens_gamma1)),
        ("Γ₁ ⊴ Γ", all(conjugate(h, g) in E1 for h in cert.gens_gamma1 for g in G.images)),
        ("|Γ₂| is a power of p", _is_power_of(len(E2), p)),
        ("Γ₁/Γ₂ cyclic", index is not None and c in E1 and _order_modulo(c, E2, index) == index),
        ("|Γ|/|Γ₁| is a power of q", len(E) % len(E1) == 0 and _is_power_of(len(E) // len(E1), q)),
        ("orders", tuple(cert.orders) == (len(E2), len(E1), len(E))),
    ]
    return checks


def verify_oliver_certificate(G, cert, cap=ENUM_CAP):
    return all(ok for _, ok in oliver_certificate_checks(G, cert, cap))


def _certificate_from_hint(G, hint, cap):
    gens = G.images
    gens2 = tuple(gens[i] for i in hint.gamma2)
    gens1 = tuple(gens[i] for i in hint.gamma1)
    E = G.elements(cap)
    E1 = _closure(G.n, gens1, cap)
    E2 = _closure(G.n, gens2, cap)
    if len(E1) % len(E2):
        return None
    c = _find_coset_generator(G.n, gens1, E1, E2, len(E1) // len(E2))
    if c is None:
        return None
    return OliverCertificate(hint.p, hint.q, gens2, gens1, c, (len(E2), len(E1), len(E)))


def oliver_condition(G, hint=None, cap=OLIVER_SEARCH_CAP, enum_cap=ENUM_CAP):
    """A verified OliverCertificate, or None when no chain exists / the hint fails.

    hint: an OliverHint, or "auto" for the chain recorded by the construction.
    Without a hint the group is enumerated (|G| <= cap) and the chain is built
    canonically: Γ₁ = O^q(Γ) and Γ₂ the preimage of the p-part of Γ₁/[Γ₁,Γ₁].
    """
    if hint == "auto":
        hint = G.oliver_hint
    if hint is not None:
        cert = _certificate_from_hint(G, hint, enum_cap)
        if cert is not None and verify_oliver_certificate(G, cert, enum_cap):
            return cert
        log.info("Oliver hint failed for %s", G.structure_tag)
        return None

    E = G.elements(cap)
    order = len(E)
    n = G.n
    primes = sorted(factor(order)) if order > 1 else []
    spare = 2
    while spare in primes:
        spare = next(x for x in range(spare + 1, 10 ** 6) if is_prime(x))
    orders_of = {x: perm_order(x) for x in E}

    for q in primes + [spare]:
        top = [x for x in E if gcd(orders_of[x], q) == 1]
        gens1, E1 = _small_generating_set(n, top, cap)
        if not _is_power_of(order // len(E1), q):
            continue
        D = _derived_subgroup(n, gens1, cap)
        for p in (sorted(factor(len(E1))) if len(E1) > 1 else [2]):
            if not _is_power_of(len(D), p):
                continue
            part = [x for x in E1 if perm_power(x, _p_part(orders_of[x], p)) in D]
            gens2, E2 = _small_generating_set(n, part, cap)
            if not _is_power_of(len(E2), p):
                continue
            c = _find_coset_generator(n, gens1, E1, E2, len(E1) // len(E2))
            if c is None:
                continue
            cert = OliverCertificate(p, q, gens2, gens1, c, (len(E2), len(E1), order))
            if verify_oliver_certificate(G, cert, cap):
                return cert
    return None


def _p_part(x, p):
    out = 1
    while x % p == 0:
        x //= p
        out *= p
    return out


def _derived_subgroup(n, gens, cap):
    """Normal closure of the generator commutators inside ⟨gens⟩."""
    comms = []
    for a in gens:
        for b in gens:
            c = compose(compose(invert(a), invert(b)), compose(a, b))
            if any(i != x for i, x in enumerate(c)):
                comms.append(c)
    D = _closure(n, tuple(comms), cap)
    changed = True
    while changed:
        changed = False
        for h in list(comms):
            for g in gens:
                x = conjugate(h, g)
                if x not in D:
                    comms.append(x)
                    D = _closure(n, tuple(comms), cap)
                    changed = True
    return D
