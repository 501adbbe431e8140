"""
Boolean functions and graph properties
Truth tables are Python ints (bit x holds f(x), bit i of x is variable i).
Exact decision-tree complexity comes from a memoized minimax with
branch-and-bound; graph properties become functions over the C(n,2) edge
slots in lexicographic pair order.
"""

import logging
import random
from collections import namedtuple
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb
from typing import Callable, Optional

import numpy as np

from errors import (
    BadShape, BudgetExceeded, CapExceeded, NotDownwardClosed, TooLarge,
)
from hgraph import (
    SmallGraph, _map_search, has_subgraph, hom_free_table, named,
)
from scomplex import OracleComplex

log = logging.getLogger(__name__)

MAX_VARS = 24
MAX_PROPERTY_VERTICES = 7
MAX_RESTRICTED_SLOTS = 21
CERTIFICATE_VARS = 12
DEFAULT_BUDGET = 5_000_000
DEFAULT_PROPERTY_CAP = 200_000

ORDER_TAGS = {
    "plain": {"label": "variable i is bit i"},
    "lex-pairs": {"label": "edge slots (0,1), (0,2), ..., (n-2,n-1)"},
    "lex-pairs-minus-tail": {"label": "lex pairs without the slots inside the last k' vertices"},
}


## ============================================================
## BooleanFunction
## ============================================================

@lru_cache(maxsize=None)
def _var_mask(n, i):
    """Positions x in [2^n] with bit i of x set."""
    width = 1 << i
    m = ((1 << width) - 1) << width
    length = 2 * width
    while length < (1 << n):
        m |= m << length
        length *= 2
    return m


@dataclass(frozen=True)
class BooleanFunction:
    n_vars: int
    table: int
    order_tag: str = "plain"

    def __post_init__(self):
        if not 0 <= self.n_vars <= MAX_VARS:
            raise TooLarge(f"{self.n_vars} variables exceed {MAX_VARS}")
        if self.table < 0 or self.table >> (1 << self.n_vars):
            raise BadShape(f"table longer than 2^{self.n_vars} bits")

    @property
    def size(self):
        return 1 << self.n_vars

    @property
    def full(self):
        return (1 << self.size) - 1

    def __call__(self, x):
        return bool(self.table >> x & 1)

    # ── constructors ─────────────────────────────────────

    @classmethod
    def from_callable(cls, n, fn, order_tag="plain"):
        table = 0
        for x in range(1 << n):
            if fn(x):
                table |= 1 << x
        return cls(n, table, order_tag)

    @classmethod
    def from_bits(cls, n, bits, order_tag="plain"):
        bits = np.asarray(bits, dtype=bool)
        if len(bits) != 1 << n:
            raise BadShape(f"{len(bits)} truth values for {n} variables")
        packed = np.packbits(bits, bitorder="little")
        return cls(n, int.from_bytes(packed.tobytes(), "little"), order_tag)

    @classmethod
    def constant(cls, n, value):
        return cls(n, (1 << (1 << n)) - 1 if value else 0)

    @classmethod
    def and_(cls, n):
        return cls(n, 1 << ((1 << n) - 1))

    @classmethod
    def or_(cls, n):
        return cls(n, ((1 << (1 << n)) - 1) ^ 1)

    @classmethod
    def parity(cls, n):
        return cls.from_callable(n, lambda x: bin(x).count("1") % 2)

    @classmethod
    def dictator(cls, n, i):
        return cls(n, _var_mask(n, i))

    # ── structure ────────────────────────────────────────

    def to_bits(self):
        nbytes = max(1, self.size // 8)
        raw = np.frombuffer(self.table.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:self.size].astype(bool)

    def weight(self):
        return bin(self.table).count("1")

    def is_constant(self):
        return self.table in (0, self.full)

    def restrict(self, i, b):
        return BooleanFunction(self.n_vars, _restrict(self.table, self.n_vars, i, b), self.order_tag)

    def depends_on(self, i):
        return _restrict(self.table, self.n_vars, i, 0) != _restrict(self.table, self.n_vars, i, 1)

    def relevant_vars(self):
        return [i for i in range(self.n_vars) if self.depends_on(i)]

    def permute_vars(self, perm):
        """g with g(x) = f(y), y_{perm[i]} = x_i."""
        xs = np.arange(self.size, dtype=np.int64)
        ys = np.zeros(self.size, dtype=np.int64)
        for i, target in enumerate(perm):
            ys |= ((xs >> i) & 1) << target
        return BooleanFunction.from_bits(self.n_vars, self.to_bits()[ys], self.order_tag)

    def to_dict(self):
        return {"n_vars": self.n_vars, "order_tag": self.order_tag,
                "table": format(self.table, "x")}

    @classmethod
    def from_dict(cls, data):
        return cls(int(data["n_vars"]), int(data["table"], 16), data.get("order_tag", "plain"))


def _restrict(table, n, i, b):
    shift = 1 << i
    if b:
        part = table & _var_mask(n, i)
        return part | (part >> shift)
    part = table & ~_var_mask(n, i) & ((1 << (1 << n)) - 1)
    return part | (part << shift)


## ============================================================
## Decision-tree complexity
## ============================================================

@dataclass
class DTCResult:
    value: int
    query: Optional[int]        # optimal first variable, lowest index on ties
    nodes: int
    adversary: Optional[dict] = None

    def to_dict(self):
        out = {"D": self.value, "query": self.query, "nodes": self.nodes}
        if self.adversary is not None:
            out["adversary"] = self.adversary
        return out


class _OutOfNodes(Exception):
    pass


class _Minimax:
    def __init__(self, f, budget, memo_key):
        self.n = f.n_vars
        self.full = f.full
        self.budget = budget
        self.memo_key = memo_key
        self.memo = {}
        self.nodes = 0
        self.lo, self.hi = 0, f.n_vars

    def _key(self, table, mask, assign):
        return table if self.memo_key == "table" else (mask, assign)

    def value(self, table, mask, assign):
        key = self._key(table, mask, assign)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise _OutOfNodes()
        best = self.search(table, mask, assign, root=False)[0]
        self.memo[key] = best
        return best

    def search(self, table, mask, assign, root):
        if table == 0 or table == self.full:
            return 0, None
        relevant = []
        for i in range(self.n):
            if mask >> i & 1:
                continue
            t0, t1 = _restrict(table, self.n, i, 0), _restrict(table, self.n, i, 1)
            if t0 != t1:
                relevant.append((i, t0, t1))
        best, best_var = len(relevant), relevant[0][0]
        if root:
            self.lo, self.hi = 1, best
        for i, t0, t1 in relevant:
            if best == 1:
                break
            bit = 1 << i
            d0 = self.value(t0, mask | bit, assign)
            if 1 + d0 >= best:
                continue
            d1 = self.value(t1, mask | bit, assign | bit)
            cost = 1 + max(d0, d1)
            if cost < best:
                best, best_var = cost, i
                if root:
                    self.hi = best
        return best, best_var


def sensitivity(f):
    """max over inputs x of the number of variables whose flip changes f(x); a lower bound on D(f)."""
    bits = f.to_bits()
    xs = np.arange(f.size, dtype=np.int64)
    count = np.zeros(f.size, dtype=np.int64)
    for i in range(f.n_vars):
        count += bits != bits[xs ^ (1 << i)]
    return int(count.max())


def decision_tree_complexity(f, budget=DEFAULT_BUDGET, certificate=False, memo_key="restriction"):
    """Exact D(f) = 0 for constants, else 1 + min_i max(D(f|x_i=0), D(f|x_i=1))."""
    solver = _Minimax(f, budget, memo_key)
    try:
        value, var = solver.search(f.table, 0, 0, root=True)
    except _OutOfNodes:
        raise BudgetExceeded(max(solver.lo, sensitivity(f)), solver.hi)
    adversary = adversary_strategy(f, budget) if certificate else None
    log.debug("D = %d for %d variables after %d nodes", value, f.n_vars, solver.nodes)
    return DTCResult(value, var, solver.nodes, adversary)


def is_evasive(f, budget=DEFAULT_BUDGET):
    return decision_tree_complexity(f, budget).value == f.n_vars


def naive_decision_tree_complexity(f):
    """Reference recursion without pruning, keyed on the subfunction table."""
    n, full = f.n_vars, f.full

    @lru_cache(maxsize=None)
    def D(table):
        if table == 0 or table == full:
            return 0
        best = None
        for i in range(n):
            t0, t1 = _restrict(table, n, i, 0), _restrict(table, n, i, 1)
            if t0 == t1:
                continue
            cost = 1 + max(D(t0), D(t1))
            best = cost if best is None else min(best, cost)
        return best

    return D(f.table)


def _state_key(mask, assign):
    return f"{mask:x}:{assign:x}"


def adversary_strategy(f, budget=DEFAULT_BUDGET):
    """Answers keeping D of the restricted function as large as possible.

    {"value": D(f), "answers": {"mask:assign": {var: bit}}} over every state
    the adversary can reach.
    """
    if f.n_vars > CERTIFICATE_VARS:
        raise TooLarge(f"adversary certificates are built for at most {CERTIFICATE_VARS} variables")
    solver = _Minimax(f, budget, "restriction")
    try:
        root = solver.search(f.table, 0, 0, root=True)[0]
        answers = {}
        stack = [(f.table, 0, 0)]
        while stack:
            table, mask, assign = stack.pop()
            key = _state_key(mask, assign)
            if key in answers or table in (0, f.full):
                continue
            row = {}
            for i in range(f.n_vars):
                if mask >> i & 1:
                    continue
                bit = 1 << i
                t0, t1 = _restrict(table, f.n_vars, i, 0), _restrict(table, f.n_vars, i, 1)
                d0 = solver.value(t0, mask | bit, assign)
                d1 = solver.value(t1, mask | bit, assign | bit)
                b = 1 if d1 > d0 else 0
                row[i] = b
                stack.append((t1 if b else t0, mask | bit, assign | (bit if b else 0)))
            answers[key] = row
    except _OutOfNodes:
        raise BudgetExceeded(max(solver.lo, sensitivity(f)), solver.hi)
    return {"value": root, "answers": answers}


def check_adversary(f, certificate):
    """Replay the strategy: every query order must spend at least `value` queries."""
    answers = certificate["answers"]
    n, full = f.n_vars, f.full

    @lru_cache(maxsize=None)
    def forced(table, mask, assign):
        if table == 0 or table == full:
            return 0
        row = answers.get(_state_key(mask, assign))
        if row is None:
            return -1
        worst = None
        for i in range(n):
            if mask >> i & 1:
                continue
            b = row.get(i, row.get(str(i)))
            if b is None:
                return -1
            bit = 1 << i
            sub = forced(_restrict(table, n, i, b), mask | bit, assign | (bit if b else 0))
            if sub < 0:
                return -1
            worst = 1 + sub if worst is None else min(worst, 1 + sub)
        return worst

    return forced(f.table, 0, 0) >= certificate["value"]


## ============================================================
## Graph properties
## ============================================================

_Adjacency = namedtuple("_Adjacency", "n adj")


def edge_slots(n):
    return list(combinations(range(n), 2))


def graph_from_mask(n, mask, slots=None):
    slots = edge_slots(n) if slots is None else slots
    return SmallGraph.from_edges(n, [slots[k] for k in range(len(slots)) if mask >> k & 1])


def _adjacency_from_mask(n, mask, slots):
    adj = [0] * n
    while mask:
        low = mask & -mask
        i, j = slots[low.bit_length() - 1]
        adj[i] |= 1 << j
        adj[j] |= 1 << i
        mask ^= low
    return _Adjacency(n, adj)


def subgraph_copy_masks(n, F, slots=None):
    """Edge masks of every labeled copy of F in K_n.

    slots maps pairs to variable indices; copies using a pair missing from
    it are dropped.
    """
    index = {pair: k for k, pair in enumerate(edge_slots(n))} if slots is None else slots
    masks = set()
    for f in permutations(range(n), F.n):
        m = 0
        for i, j in F.edges():
            key = (f[i], f[j]) if f[i] < f[j] else (f[j], f[i])
            if key not in index:
                break
            m |= 1 << index[key]
        else:
            masks.add(m)
    return sorted(masks)


def _popcounts(xs):
    out = np.zeros(len(xs), dtype=np.int64)
    x = xs.copy()
    while np.any(x):
        out += (x & 1).astype(np.int64)
        x >>= 1
    return out


@dataclass(frozen=True)
class GraphPropertySpec:
    n: int
    predicate: Callable
    monotone: bool = False
    name: str = ""
    vector: Optional[Callable] = None     # numpy masks -> bool array
    trivial: bool = False


def forbid_property(n, F, name=None):
    copies = subgraph_copy_masks(n, F) if F.n <= n else []

    def vector(xs):
        good = np.ones(len(xs), dtype=bool)
        for m in copies:
            good &= (xs & m) != m
        return good

    return GraphPropertySpec(n, lambda G: has_subgraph(G, F) is None, True,
                             name or f"forbid:{F.to_graph6()}", vector)


def _connected(G):
    if G.n <= 1:
        return True
    seen, frontier = 1, 1
    while frontier:
        nxt = 0
        for v in range(G.n):
            if frontier >> v & 1:
                nxt |= G.adj[v]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << G.n) - 1


def _build_property(kind, n, arg):
    if kind == "triangle-free":
        return forbid_property(n, SmallGraph.complete(3), "triangle-free")
    if kind == "contains-triangle":
        base = forbid_property(n, SmallGraph.complete(3))
        return GraphPropertySpec(n, lambda G: not base.predicate(G), False, "contains-triangle",
                                 lambda xs: ~base.vector(xs))
    if kind == "forbid":
        return forbid_property(n, named(arg))
    if kind == "connectivity":
        return GraphPropertySpec(n, _connected, False, "connectivity")
    if kind == "max-edges":
        m = int(arg)
        return GraphPropertySpec(n, lambda G: len(G.edges()) <= m, True, f"max-edges:{m}",
                                 lambda xs: _popcounts(xs) <= m)
    if kind == "empty":
        return GraphPropertySpec(n, lambda G: False, True, "empty",
                                 lambda xs: np.zeros(len(xs), dtype=bool), trivial=True)
    if kind == "no-edges":
        return GraphPropertySpec(n, lambda G: not G.edges(), True, "no-edges",
                                 lambda xs: xs == 0)
    raise BadShape(f"unknown property {kind!r}; known: {sorted(BUILTIN_PROPERTIES)}")


BUILTIN_PROPERTIES = {
    "triangle-free": {"label": "no K3 subgraph", "monotone": True},
    "contains-triangle": {"label": "some K3 subgraph", "monotone": False},
    "forbid": {"label": "forbid:<graph6>, no copy of the given graph", "monotone": True},
    "connectivity": {"label": "connected", "monotone": False},
    "max-edges": {"label": "max-edges:<m>, at most m edges", "monotone": True},
    "empty": {"label": "the empty property", "monotone": True},
    "no-edges": {"label": "only the edgeless graph", "monotone": True},
}


def make_property(name, n):
    kind, _, arg = name.partition(":")
    if kind not in BUILTIN_PROPERTIES:
        raise BadShape(f"unknown property {name!r}; known: {sorted(BUILTIN_PROPERTIES)}")
    return _build_property(kind, n, arg)


def _property_bits(spec):
    N = comb(spec.n, 2)
    xs = np.arange(1 << N, dtype=np.int64)
    if spec.vector is not None:
        return np.asarray(spec.vector(xs), dtype=bool)
    slots = edge_slots(spec.n)
    return np.array([bool(spec.predicate(graph_from_mask(spec.n, int(x), slots))) for x in xs])


def property_to_function(spec):
    if spec.n > MAX_PROPERTY_VERTICES:
        raise TooLarge(f"n = {spec.n} exceeds {MAX_PROPERTY_VERTICES} vertices")
    return BooleanFunction.from_bits(comb(spec.n, 2), _property_bits(spec), "lex-pairs")


def slot_permutation(n, perm):
    """Where each lex slot goes under the vertex relabeling perm."""
    index = {pair: k for k, pair in enumerate(edge_slots(n))}
    return [index[tuple(sorted((perm[i], perm[j])))] for i, j in edge_slots(n)]


def _relabel_masks(xs, targets):
    ys = np.zeros_like(xs)
    for k, t in enumerate(targets):
        ys |= ((xs >> k) & 1) << t
    return ys


def validate_property(spec, seed=0, samples=2000):
    """Check invariance under relabeling and, when flagged, closure under edge deletion.

    Exhaustive for n <= 5 (two generators of Sym(n) over every graph), sampled above.
    """
    n, N = spec.n, comb(spec.n, 2)
    bits = _property_bits(spec)
    xs = np.arange(1 << N, dtype=np.int64)
    rng = random.Random(seed)
    if n <= 5:
        perms = [] if n < 2 else [[1, 0] + list(range(2, n)), list(range(1, n)) + [0]]
        picks = xs
    else:
        perms = [rng.sample(range(n), n) for _ in range(8)]
        picks = np.array([rng.randrange(1 << N) for _ in range(samples)], dtype=np.int64)
    for perm in perms:
        moved = _relabel_masks(picks, slot_permutation(n, perm))
        if np.any(bits[picks] != bits[moved]):
            raise BadShape(f"{spec.name or 'property'} is not invariant under relabeling {perm}")
    if spec.monotone:
        for k in range(N):
            below = picks & ~(1 << k)
            if np.any(bits[picks] & ~bits[below]):
                raise NotDownwardClosed(f"{spec.name or 'property'} is not closed under edge deletion")
    return spec


## ============================================================
## Monotone property enumeration
## ============================================================

def isomorphism_classes(n):
    """(class representatives by (edges, mask), class index of every labeled graph)."""
    N = comb(n, 2)
    xs = np.arange(1 << N, dtype=np.int64)
    canon = xs.copy()
    for perm in permutations(range(n)):
        canon = np.minimum(canon, _relabel_masks(xs, slot_permutation(n, perm)))
    reps = sorted({int(c) for c in canon}, key=lambda m: (bin(m).count("1"), m))
    lookup = {r: k for k, r in enumerate(reps)}
    class_of = np.array([lookup[int(c)] for c in canon], dtype=np.int64)
    return reps, class_of


def enumerate_monotone_properties(n, cap=DEFAULT_PROPERTY_CAP):
    """Every monotone (deletion-closed) property on [n] as a downset of isomorphism classes."""
    if n > 5:
        raise TooLarge(f"monotone property enumeration is limited to n <= 5, got {n}")
    reps, class_of = isomorphism_classes(n)
    k = len(reps)
    below = []
    for rep in reps:
        lower, sub = set(), rep
        while True:
            lower.add(int(class_of[sub]))
            if sub == 0:
                break
            sub = (sub - 1) & rep
        lower.discard(int(class_of[rep]))
        below.append(lower)
    log.info("n = %d: %d isomorphism classes", n, k)

    count = 0
    chosen = [False] * k

    def walk(i):
        nonlocal count
        if i == k:
            count += 1
            if count > cap:
                raise CapExceeded(f"more than {cap} monotone properties on {n} vertices")
            yield _downset_property(n, reps, class_of, list(chosen))
            return
        chosen[i] = False
        yield from walk(i + 1)
        if all(chosen[j] for j in below[i]):
            chosen[i] = True
            yield from walk(i + 1)
            chosen[i] = False

    yield from walk(0)


def _downset_property(n, reps, class_of, chosen):
    members = np.array(chosen, dtype=bool)
    slots = edge_slots(n)
    index = {s: k for k, s in enumerate(slots)}
    maximal = [reps[c] for c in range(len(reps))
               if chosen[c] and not any(chosen[d] and c != d and _is_sub(reps, class_of, c, d)
                                        for d in range(len(reps)))]
    name = "downset:" + ",".join(graph_from_mask(n, m, slots).to_graph6() for m in maximal)

    def predicate(G):
        mask = 0
        for i, j in G.edges():
            mask |= 1 << index[(i, j)]
        return bool(members[class_of[mask]])

    return GraphPropertySpec(n, predicate, True, name, lambda xs: members[class_of[xs]],
                             trivial=not any(chosen) or all(chosen))


def _is_sub(reps, class_of, c, d):
    """Class c lies below class d."""
    rep, sub = reps[d], reps[d]
    while True:
        if class_of[sub] == c:
            return True
        if sub == 0:
            return False
        sub = (sub - 1) & rep


## ============================================================
## H-free functions with an edgeless tail
## ============================================================

def bnh_slots(n, kprime):
    """Lex pairs of [n] minus the pairs inside the last k' vertices."""
    tail = n - kprime
    return [(i, j) for i, j in edge_slots(n) if not (i >= tail and j >= tail)]


def restricted_function_bnh(n, kprime, H):
    """Graphs on [n] with no edges inside the last k' vertices and no copy of H."""
    if not 0 <= kprime <= n:
        raise BadShape(f"tail size {kprime} outside [0, {n}]")
    slots = bnh_slots(n, kprime)
    if len(slots) > MAX_RESTRICTED_SLOTS:
        raise TooLarge(f"{len(slots)} free slots exceed {MAX_RESTRICTED_SLOTS}")
    if not slots:
        log.warning("k' = %d leaves no free slots on %d vertices: constant function", kprime, n)
    index = {s: k for k, s in enumerate(slots)}
    masks = subgraph_copy_masks(n, H, slots=index)
    return BooleanFunction.from_bits(len(slots), hom_free_table(len(slots), masks),
                                     "lex-pairs-minus-tail")


def bnh_complex(n, kprime, H, seed=0):
    """B_n^H as a membership oracle over the bnh_slots ordering."""
    slots = bnh_slots(n, kprime)

    def member(mask):
        return _map_search(H, _adjacency_from_mask(n, mask, slots), injective=True) is None

    return OracleComplex(len(slots), member, seed=seed), slots
