"""
Finite fields F_q, q = p^alpha
Elements are coefficient vectors over F_p reduced modulo the lexicographically
least monic irreducible of degree alpha. Every element also has an integer
index Σ c_i p^i, which is the canonical element order used everywhere else.
"""

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from errors import DivisionByZero, FieldMismatch, FieldOverflow, NonPrime, NotDivisor
from numth import factor, is_prime

FIELD_BITS = 64


@dataclass(frozen=True)
class FieldSpec:
    p: int
    alpha: int = 1
    modulus: Optional[tuple] = None     # low-first, monic, length alpha + 1

    @property
    def q(self):
        return self.p ** self.alpha

    # ── element construction ─────────────────────────────

    def element(self, value):
        """From an integer (a prime-subfield scalar) or a coefficient sequence (low-first).

        Indices go through from_index.
        """
        if isinstance(value, FieldElem):
            value._same(self)
            return value
        if isinstance(value, int):
            return FieldElem(self, (value % self.p,) + (0,) * (self.alpha - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.alpha:
            raise FieldMismatch(f"{len(coeffs)} coefficients for degree {self.alpha}")
        return FieldElem(self, coeffs + (0,) * (self.alpha - len(coeffs)))

    def from_index(self, i):
        if not 0 <= i < self.q:
            raise FieldMismatch(f"index {i} outside F_{self.q}")
        coeffs = []
        for _ in range(self.alpha):
            i, c = divmod(i, self.p)
            coeffs.append(c)
        return FieldElem(self, tuple(coeffs))

    @property
    def zero(self):
        return FieldElem(self, (0,) * self.alpha)

    @property
    def one(self):
        return FieldElem(self, (1,) + (0,) * (self.alpha - 1))

    def elements(self):
        return [self.from_index(i) for i in range(self.q)]

    # ── index-level maps used by the group constructions ──

    def mul_map(self, a):
        """Tuple t with t[i] = index(a * from_index(i))."""
        a = self.element(a)
        if self.alpha == 1:
            av = a.coeffs[0]
            return tuple(av * i % self.p for i in range(self.p))
        return tuple((a * e).index for e in self.elements())

    def add_map(self, b):
        """Tuple t with t[i] = index(from_index(i) + b)."""
        b = self.element(b)
        return tuple((e + b).index for e in self.elements())

    def additive_basis(self):
        """The unit vectors 1, x, ..., x^(alpha-1)."""
        return [self.from_index(self.p ** j) for j in range(self.alpha)]

    # ── serialization ────────────────────────────────────

    def to_dict(self):
        out = {"p": self.p, "alpha": self.alpha}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        modulus = data.get("modulus")
        spec = cls(int(data["p"]), int(data.get("alpha", 1)),
                   tuple(modulus) if modulus is not None else None)
        _validate(spec)
        return spec


@dataclass(frozen=True)
class FieldElem:
    spec: FieldSpec
    coeffs: tuple

    def _same(self, other_spec):
        if self.spec != other_spec:
            raise FieldMismatch(f"F_{self.spec.q} element used with F_{other_spec.q}")

    def _coerce(self, other):
        if isinstance(other, int):
            return self.spec.element(other)
        other._same(self.spec)
        return other

    @property
    def index(self):
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.spec.p + c
        return i

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.spec.p
        return FieldElem(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        p = self.spec.p
        return FieldElem(self.spec, tuple(-c % p for c in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElem(self.spec, _mulmod(self.coeffs, other.coeffs, self.spec))

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.spec.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if not self:
            raise DivisionByZero(f"0 has no inverse in F_{self.spec.q}")
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def frobenius(self):
        return self ** self.spec.p

    def __repr__(self):
        return f"F{self.spec.q}[{self.index}]"


def _mulmod(a, b, spec):
    p, alpha = spec.p, spec.alpha
    if alpha == 1:
        return (a[0] * b[0] % p,)
    prod = [0] * (2 * alpha - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    mod = spec.modulus
    for deg in range(2 * alpha - 2, alpha - 1, -1):
        c = prod[deg] % p
        if c:
            shift = deg - alpha
            for i in range(alpha + 1):
                prod[shift + i] -= c * mod[i]
    return tuple(c % p for c in prod[:alpha])


def _irreducible(coeffs_low_first, p):
    return gf_irreducible_p([int(c) for c in reversed(coeffs_low_first)], p, ZZ)


def _validate(spec):
    if not is_prime(spec.p):
        raise NonPrime(f"{spec.p} is not prime")
    if spec.alpha < 1:
        raise FieldOverflow(f"exponent must be at least 1, got {spec.alpha}")
    if spec.p ** spec.alpha >= 2 ** FIELD_BITS:
        raise FieldOverflow(f"{spec.p}^{spec.alpha} exceeds {FIELD_BITS} bits")
    if spec.alpha == 1:
        if spec.modulus is not None:
            raise FieldMismatch("prime fields carry no modulus polynomial")
        return
    m = spec.modulus
    if m is None or len(m) != spec.alpha + 1 or m[-1] != 1 or not _irreducible(m, spec.p):
        raise FieldMismatch(f"modulus {m} is not a monic irreducible of degree {spec.alpha}")


@lru_cache(maxsize=None)
def make_field(p: int, alpha: int = 1) -> FieldSpec:
    """F_{p^alpha} with the lexicographically least monic irreducible modulus [c0, ..., 1]."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if alpha < 1:
        raise FieldOverflow(f"exponent must be at least 1, got {alpha}")
    if p ** alpha >= 2 ** FIELD_BITS:
        raise FieldOverflow(f"{p}^{alpha} exceeds {FIELD_BITS} bits")
    if alpha == 1:
        return FieldSpec(p, 1, None)
    # c0 = 0 is divisible by x
    for c0 in range(1, p):
        for rest in product(range(p), repeat=alpha - 1):
            coeffs = (c0,) + rest + (1,)
            if _irreducible(coeffs, p):
                return FieldSpec(p, alpha, coeffs)
    raise FieldMismatch(f"no irreducible of degree {alpha} over F_{p}")


def field_of_order(q: int) -> FieldSpec:
    """F_q for a prime power q."""
    fac = factor(q) if q > 1 else {}
    if len(fac) != 1:
        raise NonPrime(f"{q} is not a prime power")
    (p, alpha), = fac.items()
    return make_field(p, alpha)


# ── functional API ───────────────────────────────────────

def add(x, y):
    return x + y


def mul(x, y):
    return x * y


def neg(x):
    return -x


def inv(x):
    return x.inverse()


def power(x, e):
    return x ** e


@lru_cache(maxsize=None)
def primitive_root(spec: FieldSpec) -> FieldElem:
    """Smallest generator of F_q^× in canonical element order."""
    n = spec.q - 1
    if n == 1:
        return spec.one
    cofactors = [n // r for r in factor(n)]
    for i in range(1, spec.q):
        g = spec.from_index(i)
        if all((g ** c).index != 1 for c in cofactors):
            return g
    raise FieldMismatch(f"F_{spec.q} has no primitive root")


def multiplicative_subgroup(spec: FieldSpec, d: int) -> list:
    """The order-d subgroup C_d of F_q^×, sorted by index."""
    if d < 1 or (spec.q - 1) % d:
        raise NotDivisor(f"{d} does not divide {spec.q - 1}")
    g = primitive_root(spec)
    step = g ** ((spec.q - 1) // d)
    members, x = [], spec.one
    for _ in range(d):
        members.append(x)
        x = x * step
    return sorted(members, key=lambda e: e.index)
