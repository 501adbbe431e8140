"""
Simplicial complexes
Faces are int bitmasks over the ground set [N]. An ExplicitComplex holds
its face set; an OracleComplex only answers membership, which is all the
fixed-point construction needs, so parents on hundreds of ground elements
stay usable.
"""

import json
import logging
import random
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from errors import BadShape, EmptyComplex, NotDownwardClosed, TooLarge, TooManyOrbits

log = logging.getLogger(__name__)

SCAN_CAP_BITS = 24
DEFAULT_MAX_ORBITS = 24
COLLAPSE_BUDGET = 200_000
BINARY_MAGIC = b"EVSC"

STRATEGIES = {
    "grow": {"label": "grow faces from ∅, pruning non-faces"},
    "scan": {"label": "query every subset of the orbits"},
}


def popcount(x):
    return bin(x).count("1")


def mask_of(vertices):
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _subfaces(mask):
    """Faces of codimension one."""
    m = mask
    while m:
        low = m & -m
        yield mask ^ low
        m ^= low


class ExplicitComplex:
    def __init__(self, ground, faces, check=True):
        self.ground = int(ground)
        self.faces = frozenset(int(f) for f in faces)
        if check:
            self._validate()

    def _validate(self):
        limit = 1 << self.ground
        for f in self.faces:
            if f < 0 or f >= limit:
                raise BadShape(f"face {vertices_of(f)} outside [{self.ground}]")
            for s in _subfaces(f):
                if s not in self.faces:
                    raise NotDownwardClosed(
                        f"{vertices_of(f)} is a face but {vertices_of(s)} is not")
        if self.faces and 0 not in self.faces:
            raise NotDownwardClosed("∅ missing from a non-empty complex")

    def __contains__(self, mask):
        return mask in self.faces

    def __len__(self):
        return len(self.faces)

    def member(self, mask):
        return mask in self.faces

    def iter_faces(self):
        return iter(sorted(self.faces, key=lambda f: (popcount(f), f)))

    def facets(self):
        return sorted(f for f in self.faces
                      if not any((f | (1 << v)) in self.faces
                                 for v in range(self.ground) if not f >> v & 1))

    def f_vector(self):
        counts = {}
        for f in self.faces:
            counts[popcount(f) - 1] = counts.get(popcount(f) - 1, 0) + 1
        return [counts.get(d, 0) for d in range(-1, max(counts, default=-1) + 1)]

    def to_dict(self):
        return {"ground": self.ground,
                "faces": [vertices_of(f) for f in self.iter_faces()]}


class OracleComplex:
    """Membership-only complex; closure is spot-checked on random descending chains."""

    def __init__(self, ground, member: Callable[[int], bool], seed=0, samples=64):
        self.ground = int(ground)
        self._member = member
        self._spot_check(seed, samples)

    def member(self, mask):
        return bool(self._member(mask))

    def __contains__(self, mask):
        return self.member(mask)

    def _spot_check(self, seed, samples):
        rng = random.Random(seed)
        for _ in range(samples):
            # grow a random face, then check every codimension-one subface
            face = 0
            order = list(range(self.ground))
            rng.shuffle(order)
            for v in order:
                if self.member(face | (1 << v)):
                    face |= 1 << v
                if rng.random() < 0.3:
                    break
            for s in _subfaces(face):
                if not self.member(s):
                    raise NotDownwardClosed(
                        f"oracle accepts {vertices_of(face)} but rejects {vertices_of(s)}")

    def iter_faces(self, cap=1 << SCAN_CAP_BITS):
        """Enumerate faces by growing from ∅."""
        if not self.member(0):
            return
        yield 0
        stack = [(0, [v for v in range(self.ground) if self.member(1 << v)])]
        count = 1
        while stack:
            face, cands = stack.pop()
            for idx, v in enumerate(cands):
                child = face | (1 << v)
                count += 1
                if count > cap:
                    raise TooLarge(f"more than {cap} faces")
                yield child
                nxt = [w for w in cands[idx + 1:] if self.member(child | (1 << w))]
                if nxt:
                    stack.append((child, nxt))

    def materialize(self, cap=1 << SCAN_CAP_BITS):
        return ExplicitComplex(self.ground, self.iter_faces(cap), check=False)


## ============================================================
## Invariants
## ============================================================

def euler_characteristic(K, cap=1 << SCAN_CAP_BITS):
    """Σ over nonempty faces of (-1)^(|A|-1)."""
    faces = K.faces if isinstance(K, ExplicitComplex) else K.iter_faces(cap)
    chi = 0
    for f in faces:
        if f:
            chi += 1 if popcount(f) % 2 else -1
    return chi


def dim_complex(K):
    faces = K.faces if isinstance(K, ExplicitComplex) else set(K.iter_faces())
    if not faces:
        raise EmptyComplex("the void complex has no dimension")
    return max(popcount(f) for f in faces) - 1


## ============================================================
## Fixed-point complexes
## ============================================================

@dataclass
class FixedPointComplex:
    orbit_count: int
    orbits: list
    faces: ExplicitComplex
    orbit_masks: list = field(default_factory=list)

    def union_mask(self, S):
        m = 0
        for i in vertices_of(S):
            m |= self.orbit_masks[i]
        return m

    def to_dict(self):
        return {"orbit_count": self.orbit_count, "orbits": self.orbits,
                "faces": [vertices_of(f) for f in self.faces.iter_faces()],
                "chi": euler_characteristic(self.faces)}


def fixed_point_complex(K, G, max_orbits=DEFAULT_MAX_ORBITS, strategy="grow"):
    """K_Γ = {S ⊆ [k] : ⋃_{i∈S} Ω_i ∈ K}."""
    if G.n != K.ground:
        raise BadShape(f"group on [{G.n}] acting on a complex over [{K.ground}]")
    orbits = G.orbits()
    k = len(orbits)
    if k > max_orbits:
        raise TooManyOrbits(f"{k} orbits exceed the cap of {max_orbits}")
    masks = [mask_of(o) for o in orbits]
    if strategy == "scan":
        faces = _scan_orbit_unions(K, masks)
    elif strategy == "grow":
        faces = _grow_orbit_unions(K, masks)
    else:
        raise BadShape(f"unknown strategy {strategy!r}; use one of {sorted(STRATEGIES)}")
    log.debug("fixed_point_complex: %d orbits, %d faces", k, len(faces))
    return FixedPointComplex(k, orbits, ExplicitComplex(k, faces, check=False), masks)


def _scan_orbit_unions(K, masks):
    k = len(masks)
    faces = []
    for S in range(1 << k):
        union = 0
        for i in vertices_of(S):
            union |= masks[i]
        if K.member(union):
            faces.append(S)
    return faces


def _grow_orbit_unions(K, masks):
    if not K.member(0):
        return []
    faces = [0]
    stack = [(0, 0, [i for i in range(len(masks)) if K.member(masks[i])])]
    while stack:
        S, union, cands = stack.pop()
        for idx, i in enumerate(cands):
            child, cu = S | (1 << i), union | masks[i]
            faces.append(child)
            nxt = [j for j in cands[idx + 1:] if K.member(cu | masks[j])]
            if nxt:
                stack.append((child, cu, nxt))
    return faces


## ============================================================
## Collapsibility
## ============================================================

@dataclass
class Collapsible:
    pairs: list          # [(σ, τ)] as vertex lists, in collapse order

    collapsible = True


@dataclass
class NotCollapsed:
    remaining: int
    exhausted: bool = False

    collapsible = False


def _free_pairs(faces, ground):
    pairs = []
    for s in faces:
        cof = [s | (1 << v) for v in range(ground)
               if not s >> v & 1 and (s | (1 << v)) in faces]
        if len(cof) != 1:
            continue
        t = cof[0]
        if any((t | (1 << v)) in faces for v in range(ground) if not t >> v & 1):
            continue
        pairs.append((s, t))
    pairs.sort(key=lambda st: (-popcount(st[1]), st))
    return pairs


def is_collapsible(K, budget=COLLAPSE_BUDGET):
    """Greedy elementary collapses toward a vertex with bounded backtracking.

    NotCollapsed is not a proof of non-contractibility.
    """
    start = frozenset(f for f in K.faces if f)
    if not start:
        return NotCollapsed(0)
    if len(start) == 1:
        return Collapsible([])

    failed = set()
    trail = []
    stack = [(start, iter(_free_pairs(start, K.ground)))]
    nodes = 0
    while stack:
        faces, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            failed.add(faces)
            stack.pop()
            if trail:
                trail.pop()
            continue
        child = faces - set(nxt)
        if child in failed:
            continue
        nodes += 1
        if nodes > budget:
            log.info("collapse search exhausted after %d nodes", budget)
            return NotCollapsed(len(faces), exhausted=True)
        trail.append(nxt)
        if len(child) == 1:
            return Collapsible([(vertices_of(s), vertices_of(t)) for s, t in trail])
        stack.append((child, iter(_free_pairs(child, K.ground))))
    return NotCollapsed(len(start))


## ============================================================
## Constructions
## ============================================================

def from_maximal_faces(ground, facets):
    faces = set()
    for f in facets:
        m = f if isinstance(f, int) else mask_of(f)
        sub = m
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & m
    return ExplicitComplex(ground, faces, check=False)


def cone(K, apex=None):
    """K * {apex}; the apex defaults to a new vertex N."""
    apex = K.ground if apex is None else apex
    ground = max(K.ground, apex + 1)
    bit = 1 << apex
    faces = set(K.faces)
    faces |= {f | bit for f in K.faces}
    return ExplicitComplex(ground, faces, check=False)


def apply_to_mask(g, mask):
    out = 0
    for v in vertices_of(mask):
        out |= 1 << g[v]
    return out


def gamma_closure(ground, facets, gens):
    """Smallest complex containing the facets and invariant under the generators."""
    seen = set()
    queue = [f if isinstance(f, int) else mask_of(f) for f in facets]
    while queue:
        f = queue.pop()
        if f in seen:
            continue
        seen.add(f)
        queue.extend(apply_to_mask(g, f) for g in gens)
    return from_maximal_faces(ground, seen)


## ============================================================
## Face I/O
## ============================================================

def write_faces(K, path):
    """One face per line as a JSON list of sorted vertex indices."""
    with open(path, "w") as fh:
        for f in K.iter_faces():
            fh.write(json.dumps(vertices_of(f)) + "\n")


def read_faces(path, ground=None):
    """Read a face list ("-" for stdin), closing it downward; ground defaults to max vertex + 1."""
    if path == "-":
        return _parse_faces(sys.stdin, "<stdin>", ground)
    with open(path) as fh:
        return _parse_faces(fh, path, ground)


def _parse_faces(lines, source, ground):
    facets, top = [], -1
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            face = [int(v) for v in json.loads(line)]
        except (ValueError, TypeError) as e:
            raise BadShape(f"{source}:{lineno}: not a JSON list of vertices ({e})")
        facets.append(mask_of(face))
        top = max([top] + face)
    return from_maximal_faces(top + 1 if ground is None else ground, facets)


def write_binary(K, path):
    """EVSC | uint32 N | uint64 count | count × uint64 masks, little-endian."""
    if K.ground > 64:
        raise TooLarge("the binary format holds ground sets of at most 64 elements")
    masks = np.array(sorted(K.faces), dtype="<u8")
    with open(path, "wb") as fh:
        fh.write(BINARY_MAGIC)
        fh.write(np.array([K.ground], dtype="<u4").tobytes())
        fh.write(np.array([len(masks)], dtype="<u8").tobytes())
        fh.write(masks.tobytes())


def read_binary(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != BINARY_MAGIC:
        raise BadShape(f"{path} is not an EVSC file")
    ground = int(np.frombuffer(data, dtype="<u4", count=1, offset=4)[0])
    count = int(np.frombuffer(data, dtype="<u8", count=1, offset=8)[0])
    masks = np.frombuffer(data, dtype="<u8", count=count, offset=16)
    return ExplicitComplex(ground, (int(m) for m in masks))
