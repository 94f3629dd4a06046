"""Exact arithmetic for small finite fields F_q, q = p^k.

Field elements are plain ints in 0..q-1.  The element with coefficient
vector (c_0, ..., c_{k-1}) over F_p (low degree first) is encoded as
sum(c_i * p**i), so 0 and 1 always encode the additive and multiplicative
identities, and for prime fields the encoding is just the residue.

Multiplication, inversion and powers run on log/antilog tables built once
per field; addition is digitwise mod p (a plain XOR when p = 2).  Fields
are immutable and safe to share between workers.
"""
from __future__ import annotations

from itertools import product

from .errors import CapExceeded, NotPrime, NotPrimePower

DEFAULT_FIELD_CAP = 1 << 16

_FIELD_CACHE: dict[tuple[int, int], "FiniteField"] = {}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mod(poly, div, p):
    """Remainder of poly by monic div, coefficients mod p, low degree first."""
    r = [c % p for c in poly]
    dd = len(div) - 1
    while len(r) > dd:
        c = r[-1]
        if c:
            for i in range(dd + 1):
                r[len(r) - 1 - dd + i] = (r[len(r) - 1 - dd + i] - c * div[i]) % p
        r.pop()
    while r and r[-1] == 0:
        r.pop()
    return r


def _is_irreducible(modulus, p):
    # trial division by every monic polynomial of degree <= k/2
    k = len(modulus) - 1
    for e in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=e):
            div = list(tail) + [1]
            if not _poly_mod(modulus, div, p):
                return False
    return True


def _smallest_irreducible(p, k):
    # candidates scanned in lex order on (c_0, ..., c_{k-1})
    for tail in product(range(p), repeat=k):
        cand = list(tail) + [1]
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class FiniteField:
    """A concrete F_q with integer-encoded elements; construct via make_field."""

    __slots__ = ("p", "k", "q", "modulus", "_exp", "_log", "_prim")

    def __init__(self, p: int, k: int, modulus):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self._exp, self._log = self._build_tables()
        self._prim = None

    # -- bootstrap arithmetic (used only to build the tables) ---------------

    def _raw_mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        p, k = self.p, self.k
        ac = self.coeffs(a)
        bc = self.coeffs(b)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(ac):
            if ai:
                for j, bj in enumerate(bc):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i in range(k):
                    prod[deg - k + i] = (prod[deg - k + i] - c * self.modulus[i]) % p
        return self.from_coeffs(prod[:k])

    def _raw_pow(self, a: int, e: int) -> int:
        r = 1
        b = a
        while e:
            if e & 1:
                r = self._raw_mul(r, b)
            b = self._raw_mul(b, b)
            e >>= 1
        return r

    def _build_tables(self):
        q = self.q
        if q == 2:
            return [1], [0, 0]
        factors = _prime_factors(q - 1)
        gen = None
        for cand in range(2, q):
            if all(self._raw_pow(cand, (q - 1) // f) != 1 for f in factors):
                gen = cand
                break
        assert gen is not None
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._raw_mul(x, gen)
        return exp, log

    # -- encoding ------------------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector (c_0, ..., c_{k-1}) of an encoded element."""
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(a % p)
            a //= p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        a = 0
        for c in reversed(tuple(cs)):
            a = a * self.p + (c % self.p)
        return a

    # -- arithmetic ------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        s = 0
        shift = 1
        for _ in range(self.k):
            s += ((a + b) % p) * shift
            a //= p
            b //= p
            shift *= p
        return s

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p = self.p
        s = 0
        shift = 1
        for _ in range(self.k):
            s += ((-a) % p) * shift
            a //= p
            shift *= p
        return s

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        if e < 0:
            a = self.inv(a)
            e = -e
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def order(self, a: int) -> int:
        """Multiplicative order, by explicit iteration."""
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        n = 1
        x = a
        while x != 1:
            x = self.mul(x, a)
            n += 1
        return n

    def primitive_element(self) -> int:
        """Smallest-encoded element of order q-1 (exhaustive order scan)."""
        if self._prim is None:
            prim = None
            for a in range(1, self.q):
                if self.order(a) == self.q - 1:
                    prim = a
                    break
            self._prim = prim
        return self._prim

    def elements(self) -> range:
        return range(self.q)

    # -- misc ------------------------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.q})"


def make_field(p: int, k: int, cap: int = DEFAULT_FIELD_CAP) -> FiniteField:
    """Build F_{p^k} on the lex-smallest monic irreducible modulus."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    q = p**k
    if q > cap:
        raise CapExceeded(q, cap, what="field order")
    key = (p, k)
    if key not in _FIELD_CACHE:
        modulus = [0, 1] if k == 1 else _smallest_irreducible(p, k)
        _FIELD_CACHE[key] = FiniteField(p, k, modulus)
    return _FIELD_CACHE[key]


def field_for_order(q: int, cap: int = DEFAULT_FIELD_CAP) -> FiniteField:
    """Resolve an order q = p^k to a field, rejecting non prime powers."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = min(_prime_factors(q))
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return make_field(p, k, cap)


def primitive_element(field: FiniteField) -> int:
    return field.primitive_element()
