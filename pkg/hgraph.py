"""
Small graphs
Adjacency-bitmask graphs on at most 64 vertices with graph6 I/O,
homomorphism and subgraph search, clique search, generalized Paley graphs
P(q,d), the hom-free complexes Q_r^[[H]] and the parity, Weil-count and
Paley-clique checks built on them.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb, sqrt
from typing import Optional

import numpy as np

from errors import BadShape, NonPrime, NotDivisor, OddD, TooLarge
from ffield import field_of_order, make_field, multiplicative_subgroup, primitive_root
from numth import double_exp_threshold, is_prime
from perm import gamma_qd, u_orbitals
from scomplex import ExplicitComplex

log = logging.getLogger(__name__)

MAX_VERTICES = 64
EXPLICIT_PALEY_CAP = 64
ORACLE_PALEY_CAP = 100_000
MAX_SLOTS = 21
CHUNK_BITS = 18

# popcount of every 16-bit word
_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


## ============================================================
## SmallGraph
## ============================================================

@dataclass(frozen=True)
class SmallGraph:
    n: int
    adj: tuple

    def __post_init__(self):
        if self.n > MAX_VERTICES:
            raise TooLarge(f"{self.n} vertices exceed {MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise BadShape("one adjacency mask per vertex")
        for i, row in enumerate(self.adj):
            if row >> i & 1:
                raise BadShape(f"loop at vertex {i}")
            for j in range(self.n):
                if (row >> j & 1) != (self.adj[j] >> i & 1):
                    raise BadShape(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n, edges):
        adj = [0] * n
        for i, j in edges:
            if i == j:
                raise BadShape(f"loop at vertex {i}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(n, tuple(adj))

    @classmethod
    def complete(cls, n):
        return cls.from_edges(n, combinations(range(n), 2))

    @classmethod
    def empty(cls, n):
        return cls(n, (0,) * n)

    @classmethod
    def cycle(cls, n):
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n):
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def star(cls, leaves):
        return cls.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @classmethod
    def petersen(cls):
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    def has_edge(self, i, j):
        return bool(self.adj[i] >> j & 1)

    def edges(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.adj[i] >> j & 1]

    def degree(self, v):
        return bin(self.adj[v]).count("1")

    def neighbors(self, v):
        return [j for j in range(self.n) if self.adj[v] >> j & 1]

    def is_complete(self):
        return all(self.degree(v) == self.n - 1 for v in range(self.n))

    def relabel(self, perm):
        return SmallGraph.from_edges(self.n, [(perm[i], perm[j]) for i, j in self.edges()])

    # ── graph6 ───────────────────────────────────────────

    def to_graph6(self):
        n = self.n
        head = chr(n + 63) if n < 63 else chr(126) + "".join(
            chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
        bits = [self.adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
        bits += [0] * (-len(bits) % 6)
        body = "".join(chr(int("".join(map(str, bits[k:k + 6])), 2) + 63)
                       for k in range(0, len(bits), 6))
        return head + body

    @classmethod
    def from_graph6(cls, text):
        text = text.strip()
        if text.startswith(">>graph6<<"):
            text = text[10:]
        if not text:
            raise BadShape("empty graph6 string")
        codes = [ord(c) - 63 for c in text]
        if any(c < 0 or c > 63 for c in codes):
            raise BadShape(f"invalid graph6 character in {text!r}")
        if codes[0] == 63:
            n = (codes[1] << 12) | (codes[2] << 6) | codes[3]
            codes = codes[4:]
        else:
            n, codes = codes[0], codes[1:]
        bits = [c >> s & 1 for c in codes for s in range(5, -1, -1)]
        need = n * (n - 1) // 2
        if len(bits) < need:
            raise BadShape(f"graph6 string too short for {n} vertices")
        edges, k = [], 0
        for j in range(1, n):
            for i in range(j):
                if bits[k]:
                    edges.append((i, j))
                k += 1
        return cls.from_edges(n, edges)


NAMED_GRAPHS = {
    "K": {"label": "complete graph K<m>", "build": SmallGraph.complete},
    "C": {"label": "cycle C<m>", "build": SmallGraph.cycle},
    "P": {"label": "path P<m> on m vertices", "build": SmallGraph.path},
    "E": {"label": "edgeless graph E<m>", "build": SmallGraph.empty},
    "S": {"label": "star S<m> with m leaves", "build": SmallGraph.star},
}


def named(name):
    """K3, C5, P3 (a path on three vertices), S5, E2, 'petersen', or a graph6 string."""
    if name.lower() == "petersen":
        return SmallGraph.petersen()
    kind, rest = name[:1], name[1:]
    if kind in NAMED_GRAPHS and rest.isdigit():
        return NAMED_GRAPHS[kind]["build"](int(rest))
    return SmallGraph.from_graph6(name)


## ============================================================
## Homomorphisms and subgraphs
## ============================================================

@dataclass(frozen=True)
class HomWitness:
    mapping: tuple
    kind: str            # "homomorphism" or "subgraph-iso"

    def check(self, H, G):
        f = self.mapping
        if len(f) != H.n:
            return False
        if self.kind == "subgraph-iso" and len(set(f)) != len(f):
            return False
        return all(G.has_edge(f[i], f[j]) for i, j in H.edges())


def _map_search(H, G, injective):
    if H.n == 0:
        return ()
    if G.n == 0:
        return None
    order = sorted(range(H.n), key=lambda v: (-H.degree(v), v))
    position = {v: k for k, v in enumerate(order)}
    earlier = [[u for u in H.neighbors(v) if position[u] < position[v]] for v in order]
    full = (1 << G.n) - 1
    f = [0] * H.n

    def extend(k, used):
        if k == len(order):
            return True
        cand = full & ~used if injective else full
        for u in earlier[k]:
            cand &= G.adj[f[u]]
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            f[order[k]] = w
            if extend(k + 1, used | low):
                return True
            cand ^= low
        return False

    return tuple(f) if extend(0, 0) else None


def exists_hom(H, G):
    mapping = _map_search(H, G, injective=False)
    return None if mapping is None else HomWitness(mapping, "homomorphism")


def has_subgraph(G, H):
    if H.n > G.n:
        return None
    if H.is_complete():
        clique = has_clique(G, H.n)
        return None if clique is None else HomWitness(tuple(clique), "subgraph-iso")
    mapping = _map_search(H, G, injective=True)
    return None if mapping is None else HomWitness(mapping, "subgraph-iso")


def t_of_h(H):
    return double_exp_threshold(H.n)


## ============================================================
## Cliques
## ============================================================

class AdjacencyOracle:
    """Graph given by neighbor sets; used above the explicit vertex cap."""

    def __init__(self, n, neighbor_sets):
        self.n = n
        self._nbrs = neighbor_sets

    def neighbors(self, v):
        return self._nbrs[v]

    def has_edge(self, i, j):
        return j in self.neighbors(i)


class PaleyOracle(AdjacencyOracle):
    """P(q,d) with C_d kept as a set of field indices."""

    def __init__(self, q, d, subgroup):
        self.q, self.d = q, d
        self.spec = field_of_order(q)
        self.subgroup = frozenset(subgroup)
        super().__init__(q, None)

    def _add(self, a, b):
        p = self.spec.p
        if self.spec.alpha == 1:
            return (a + b) % p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a, b, scale = a // p, b // p, scale * p
        return out

    def neighbors(self, v):
        return {self._add(v, s) for s in self.subgroup}


def _color_sort(adj, cand):
    """Greedy colouring of the candidate set; vertices with their colour numbers."""
    order, colors, color = [], [], 0
    remaining = cand
    while remaining:
        color += 1
        avail = remaining
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            order.append(v)
            colors.append(color)
            remaining &= ~low
            avail &= ~low & ~adj[v]
    return order, colors


def _clique_explicit(G, h):
    adj = G.adj

    def expand(clique, cand):
        if len(clique) == h:
            return clique
        order, colors = _color_sort(adj, cand)
        for v, c in zip(reversed(order), reversed(colors)):
            if len(clique) + c < h:
                return None
            found = expand(clique + [v], cand & adj[v])
            if found:
                return found
            cand &= ~(1 << v)
        return None

    return expand([], (1 << G.n) - 1)


def _clique_oracle(G, h):
    def expand(clique, cand):
        if len(clique) == h:
            return clique
        for v in sorted(cand):
            if len(clique) + 1 + sum(1 for w in cand if w > v) < h:
                return None
            found = expand(clique + [v], {w for w in cand if w > v} & G.neighbors(v))
            if found:
                return found
        return None

    for v in range(G.n):
        found = expand([v], {w for w in G.neighbors(v) if w > v})
        if found:
            return found
    return None


def has_clique(G, h):
    """A sorted vertex list of an h-clique, or None."""
    if h <= 0:
        return []
    if h > G.n:
        return None
    if h == 1:
        return [0]
    found = _clique_explicit(G, h) if isinstance(G, SmallGraph) else _clique_oracle(G, h)
    return sorted(found) if found else None


def clique_number(G):
    h = 1 if G.n else 0
    while has_clique(G, h + 1):
        h += 1
    return h


## ============================================================
## Paley graphs
## ============================================================

def paley(q, d):
    """P(q,d): i ~ j iff i - j lies in the order-d subgroup of F_q^×."""
    spec = field_of_order(q)
    if d < 1 or (q - 1) % d:
        raise NotDivisor(f"{d} does not divide {q - 1}")
    if d % 2 and q % 2:
        raise OddD(f"d = {d} is odd, so -1 is not in C_d and adjacency is not symmetric")
    if q > ORACLE_PALEY_CAP:
        raise TooLarge(f"q = {q} exceeds {ORACLE_PALEY_CAP}")
    subgroup = [e.index for e in multiplicative_subgroup(spec, d)]
    oracle = PaleyOracle(q, d, subgroup)
    if q > EXPLICIT_PALEY_CAP:
        return oracle
    return SmallGraph.from_edges(q, [(i, j) for i in range(q) for j in oracle.neighbors(i) if i < j])


def paley_clique_check(q, d, h):
    """Hypothesis (q-1)/d <= q^(1/(2h)) in integers, then a clique search."""
    hypothesis = (q - 1) ** (2 * h) <= q * d ** (2 * h)
    clique = has_clique(paley(q, d), h)
    return {"q": q, "d": d, "h": h,
            "hypothesis_holds": hypothesis,
            "clique_found": clique is not None,
            "clique": clique,
            "consistent": (not hypothesis) or clique is not None}


def weil_count_check(q, l, a_list):
    """#{x : a_i + x ∈ C_{(q-1)/l} for all i} against q/l^t ± t√q."""
    if not is_prime(q):
        raise NonPrime(f"{q} is not prime")
    if l < 1 or (q - 1) % l:
        raise NotDivisor(f"{l} does not divide {q - 1}")
    a_list = [a % q for a in a_list]
    if len(set(a_list)) != len(a_list):
        raise BadShape("a_list must hold distinct field elements")
    t = len(a_list)
    spec = make_field(q)
    step = (primitive_root(spec) ** l).index
    indicator = np.zeros(q, dtype=bool)
    x = 1
    for _ in range((q - 1) // l):
        indicator[x] = True
        x = x * step % q
    hit = np.ones(q, dtype=bool)
    for a in a_list:
        hit &= np.roll(indicator, -a)
    count = int(hit.sum())
    lt = l ** t
    within = (count * lt - q) ** 2 <= t * t * q * lt * lt
    centre = Fraction(q, lt)
    slack = t * sqrt(q)
    return {"q": q, "l": l, "a_list": a_list, "count": count,
            "bound_lo": float(centre) - slack, "bound_hi": float(centre) + slack,
            "within": within}


def orbital_paley_isomorphism(q, d):
    """Each u-orbital graph of Γ(q,d) is the image of P(q,d) under x ↦ c·x."""
    spec = field_of_order(q)
    G = paley(q, d)
    if isinstance(G, SmallGraph):
        paley_edges = {tuple(e) for e in G.edges()}
    else:
        paley_edges = {(min(i, j), max(i, j)) for i in range(q) for j in G.neighbors(i)}
    results = []
    for orbital in u_orbitals(gamma_qd(q, d)).orbitals:
        i, j = orbital[0]
        c = spec.from_index(j) - spec.from_index(i)
        cinv = c.inverse()
        image = set()
        for a, b in orbital:
            x, y = (cinv * spec.from_index(a)).index, (cinv * spec.from_index(b)).index
            image.add((min(x, y), max(x, y)))
        results.append({"representative": [i, j], "c": c.index, "isomorphic": image == paley_edges})
    return results


## ============================================================
## Hom-free complexes
## ============================================================

def slot_index(r):
    """Lexicographic index of each pair (i, j), i < j, of [r]."""
    return {pair: k for k, pair in enumerate(combinations(range(r), 2))}


def hom_image_masks(r, H, slots=None):
    """Minimal edge masks f(E(H)) over all homomorphisms f: H → K_r.

    slots maps pairs to variable indices; pairs missing from it are absent
    edges, so images using them are dropped.
    """
    slots = slot_index(r) if slots is None else slots
    edges = H.edges()
    if not edges:
        return [0]
    images = set()
    for f in product(range(r), repeat=H.n):
        mask, ok = 0, True
        for i, j in edges:
            a, b = f[i], f[j]
            if a == b:
                ok = False
                break
            key = (a, b) if a < b else (b, a)
            if key not in slots:
                ok = False
                break
            mask |= 1 << slots[key]
        if ok:
            images.add(mask)
    minimal = sorted(images, key=lambda m: (bin(m).count("1"), m))
    kept = []
    for m in minimal:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def hom_free_table(n_vars, masks, start=0, stop=None):
    """Boolean numpy array over assignments [start, stop): no image mask contained."""
    stop = (1 << n_vars) if stop is None else stop
    xs = np.arange(start, stop, dtype=np.uint64)
    good = np.ones(len(xs), dtype=bool)
    for m in masks:
        mm = np.uint64(m)
        good &= (xs & mm) != mm
    return good


def _popcount64(xs):
    xs = xs.astype(np.uint64)
    total = np.zeros(len(xs), dtype=np.int64)
    for shift in (0, 16, 32, 48):
        total += _POP16[((xs >> np.uint64(shift)) & np.uint64(0xFFFF)).astype(np.int64)]
    return total


def _chi_chunk(args):
    n_vars, masks, start, stop = args
    good = hom_free_table(n_vars, masks, start, stop)
    xs = np.nonzero(good)[0].astype(np.uint64) + np.uint64(start)
    xs = xs[xs != 0]
    pc = _popcount64(xs)
    return int(np.sum(pc % 2 == 1)) - int(np.sum(pc % 2 == 0))


def hom_free_chi(r, H, workers=1):
    """χ(Q_r^[[H]]) by a chunked scan of all 2^C(r,2) graphs."""
    N = comb(r, 2)
    if N > MAX_SLOTS:
        raise TooLarge(f"C({r},2) = {N} slots exceed {MAX_SLOTS}")
    masks = hom_image_masks(r, H)
    total = 1 << N
    step = 1 << min(CHUNK_BITS, N)
    jobs = [(N, masks, s, min(s + step, total)) for s in range(0, total, step)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return sum(pool.map(_chi_chunk, jobs))
    return sum(_chi_chunk(job) for job in jobs)


def q_hom_complex(r, H):
    """Q_r^[[H]] on the C(r,2) edge slots: graphs admitting no H-homomorphism."""
    N = comb(r, 2)
    if N > MAX_SLOTS:
        raise TooLarge(f"C({r},2) = {N} slots exceed {MAX_SLOTS}")
    good = hom_free_table(N, hom_image_masks(r, H))
    return ExplicitComplex(N, (int(x) for x in np.nonzero(good)[0]))


@dataclass
class ParityResult:
    verdict: str         # holds, fails, inapplicable
    r: int
    t_h: int
    chi: Optional[int] = None

    def to_dict(self):
        return {"verdict": self.verdict, "r": self.r, "T_H": self.t_h, "chi": self.chi}


def cks_parity_check(r, H, workers=1):
    """χ(Q_r^[[H]]) is even whenever r ≡ 1 (mod T_H)."""
    T = t_of_h(H)
    if r % T != 1 % T:
        return ParityResult("inapplicable", r, T)
    chi = hom_free_chi(r, H, workers)
    verdict = "holds" if chi % 2 == 0 else "fails"
    if verdict == "fails":
        log.error("parity fails for r = %d, H = %s: chi = %d", r, H.to_graph6(), chi)
    return ParityResult(verdict, r, T, chi)
