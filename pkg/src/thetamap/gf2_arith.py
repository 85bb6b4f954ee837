"""Exact arithmetic in binary fields GF(2^t).

Field elements are polynomial-basis coordinate vectors packed little-endian
into Python ints: bit i of the packed value is the coefficient of x^i.  With
that encoding addition is XOR and multiplication is a carry-less product
followed by reduction modulo the field's irreducible polynomial.

A ``FieldSpec`` fixes the arithmetic context: extension degree t (written
t = 2^r * s with s odd), the modulus, a generator of the multiplicative
group, and the factored group orders 2^t - 1 and 2^t + 1 that drive exact
multiplicative-order computations.  Moduli default to Conway polynomials for
t <= 16 (so generator labels are reproducible across tools), and to the
numerically least irreducible polynomial beyond that.

``FieldSpec`` methods operate on raw packed ints; they are the kernels used
by the graph and sweep code.  The module-level ``add``/``mul``/``inv``/
``trace``/``order``/``degree`` functions operate on ``FieldElement`` values
and refuse to mix elements of different fields.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

__all__ = [
    "FieldError",
    "Factorization",
    "FieldSpec",
    "FieldElement",
    "make_field",
    "max_t_cap",
    "add",
    "mul",
    "inv",
    "trace",
    "order",
    "degree",
    "factorize",
    "field_to_record",
    "field_from_record",
    "CONWAY_POLY",
]

DEFAULT_MAX_T = 24

# Log/exp tables are built lazily for fields up to this degree; beyond it
# multiplication stays on the shift-xor path and discrete logs are refused.
TABLE_MAX_T = 20


class FieldError(ValueError):
    """Domain error in field construction or element arithmetic."""


# ---------------------------------------------------------------------------
# GF(2)[x] on packed ints

def _pmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    r = 0
    while a:
        if a & 1:
            r ^= b
        a >>= 1
        b <<= 1
    return r


def _pmod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    da = a.bit_length() - 1
    while da >= dm:
        a ^= m << (da - dm)
        da = a.bit_length() - 1
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    return _pmod(_pmul(a, b), m)


def _ppowmod(a: int, e: int, m: int) -> int:
    r = _pmod(1, m)
    a = _pmod(a, m)
    while e:
        if e & 1:
            r = _pmulmod(r, a, m)
        a = _pmulmod(a, a, m)
        e >>= 1
    return r


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def is_irreducible(f: int) -> bool:
    """Rabin test: x^(2^t) = x mod f, gcd(x^(2^(t/p)) - x, f) = 1 for p | t."""
    t = f.bit_length() - 1
    if t < 1:
        return False
    if not (f & 1):
        return f == 2  # x itself; every other even polynomial has factor x
    x = _pmod(2, f)
    if _ppowmod(2, 1 << t, f) != x:
        return False
    for p, _ in factorize(t).primes:
        if _pgcd(_ppowmod(2, 1 << (t // p), f) ^ x, f) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Integer factorization (trial division + Brent's rho), 64-bit cap

_TRIAL_LIMIT = 10 ** 6

# Deterministic Miller-Rabin witnesses for n < 2^64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")


@dataclass(frozen=True)
class Factorization:
    """Complete prime factorization: strictly increasing (prime, exponent)."""

    primes: tuple[tuple[int, int], ...]
    value: int

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, e in self.primes:
            if p <= last or e < 1:
                raise FieldError(f"malformed factorization of {self.value}")
            last = p
            prod *= p ** e
        if prod != self.value:
            raise FieldError(f"factorization does not reconstruct {self.value}")

    def least_prime(self) -> int | None:
        return self.primes[0][0] if self.primes else None

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        divs = [1]
        for p, e in self.primes:
            divs = [d * p ** k for d in divs for k in range(e + 1)]
        return sorted(divs)


def factorize(n: int) -> Factorization:
    """Prime factorization of 1 <= n < 2^64."""
    if not 1 <= n < (1 << 64):
        raise FieldError(f"factorize: {n} outside [1, 2^64)")
    value = n
    fac: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d <= _TRIAL_LIMIT and d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        n = stack.pop()
        if n == 1:
            continue
        if _is_prime(n):
            fac[n] = fac.get(n, 0) + 1
            continue
        g = _brent_rho(n)
        stack.append(g)
        stack.append(n // g)
    return Factorization(tuple(sorted(fac.items())), value)


def _order_from_factors(n: int, fact: Factorization, pow1) -> int:
    """Exact order of an element in a group of order n = fact.value.

    ``pow1(e)`` raises the element to the e-th power; reduces the candidate
    exponent prime by prime.
    """
    o = n
    for p, _ in fact.primes:
        while o % p == 0 and pow1(o // p) == 1:
            o //= p
    return o


# ---------------------------------------------------------------------------
# Conway polynomials over GF(2), t <= 16 (verified against the defining
# property: least primitive polynomial norm-compatible with all subfields).

CONWAY_POLY = {
    1: 0x3,       # x + 1
    2: 0x7,       # x^2 + x + 1
    3: 0xB,       # x^3 + x + 1
    4: 0x13,      # x^4 + x + 1
    5: 0x25,      # x^5 + x^2 + 1
    6: 0x5B,      # x^6 + x^4 + x^3 + x + 1
    7: 0x83,      # x^7 + x + 1
    8: 0x11D,     # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,     # x^9 + x^4 + 1
    10: 0x46F,    # x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
    11: 0x805,    # x^11 + x^2 + 1
    12: 0x10EB,   # x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
    13: 0x201B,   # x^13 + x^4 + x^3 + x + 1
    14: 0x40A9,   # x^14 + x^7 + x^5 + x^3 + 1
    15: 0x8035,   # x^15 + x^5 + x^4 + x^2 + 1
    16: 0x1002D,  # x^16 + x^5 + x^3 + x^2 + 1
}


def _least_irreducible(t: int) -> int:
    f = (1 << t) | 1
    while not is_irreducible(f):
        f += 2
    return f


def max_t_cap() -> int:
    """The configured extension-degree ceiling (THETA_MAX_T, default 24)."""
    return int(os.environ.get("THETA_MAX_T", DEFAULT_MAX_T))


class FieldSpec:
    """Immutable arithmetic context for GF(2^t).

    All methods below take and return packed ints.  Construction validates
    the modulus, finds (or verifies) a generator of order 2^t - 1, factors
    both 2^t - 1 and 2^t + 1, and asserts gcd(2^t-1, 2^t+1) = 1 and
    gcd(2^t+1, 2^(2t)+1) = 1.
    """

    __slots__ = (
        "t", "r", "s", "q", "modulus", "gen", "fact_minus", "fact_plus",
        "_trace_mask", "_sub_masks", "_exp", "_log",
    )

    def __init__(self, t: int, modulus: int, generator: int | None = None):
        if t < 1:
            raise FieldError(f"t={t} must be positive")
        if modulus.bit_length() - 1 != t:
            raise FieldError(f"modulus degree {modulus.bit_length() - 1} != t={t}")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible")
        self.t = t
        r, s = 0, t
        while s % 2 == 0:
            r += 1
            s //= 2
        self.r = r
        self.s = s
        self.q = 1 << t
        self.modulus = modulus
        self.fact_minus = factorize(self.q - 1)
        self.fact_plus = factorize(self.q + 1)
        if math.gcd(self.q - 1, self.q + 1) != 1:
            raise FieldError("gcd(2^t-1, 2^t+1) != 1")  # impossible
        if math.gcd(self.q + 1, (1 << (2 * t)) + 1) != 1:
            raise FieldError("gcd(2^t+1, 2^(2t)+1) != 1")  # impossible
        self._trace_mask = None
        self._sub_masks = {}
        self._exp = None
        self._log = None
        if generator is None:
            generator = self._find_generator()
        elif self.order(generator) != self.q - 1:
            raise FieldError(f"{generator:#x} does not generate GF(2^{t})*")
        self.gen = generator

    # -- construction helpers ------------------------------------------------

    def _find_generator(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        for g in range(2, self.q):
            if self.order(g) == n:
                return g
        raise FieldError("no primitive element found")  # unreachable

    # -- raw arithmetic on packed ints ---------------------------------------

    def mul(self, a: int, b: int) -> int:
        log = self._log
        if log is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[log[a] + log[b]]
        return _pmulmod(a, b, self.modulus)

    def sqr(self, a: int) -> int:
        log = self._log
        if log is not None:
            if a == 0:
                return 0
            return self._exp[2 * log[a]]
        return _pmulmod(a, a, self.modulus)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise FieldError("negative power of zero")
            return 0
        log = self._log
        if log is not None:
            return self._exp[log[a] * e % (self.q - 1)]
        if e < 0:
            a = self.inv(a)
            e = -e
        return _ppowmod(a, e, self.modulus)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("zero has no inverse")
        log = self._log
        if log is not None:
            return self._exp[(self.q - 1 - log[a]) % (self.q - 1)]
        return _ppowmod(a, self.q - 2, self.modulus)

    def trace(self, a: int) -> int:
        """Absolute trace Tr_t(a), always 0 or 1."""
        if self._trace_mask is None:
            self._trace_mask = self._linear_form_mask(self.t)
        return (a & self._trace_mask).bit_count() & 1

    def subfield_trace(self, a: int, d: int) -> int:
        """Absolute trace Tr_d(a) of an element of the subfield GF(2^d).

        Raises unless d | t and a actually lies in GF(2^d); the trace at the
        wrong level is a contract violation, never a silent coercion.
        """
        if self.t % d != 0:
            raise FieldError(f"degree {d} is not a subfield of GF(2^{self.t})")
        if not self.in_subfield(a, d):
            raise FieldError(f"{a:#x} not in GF(2^{d})")
        mask = self._sub_masks.get(d)
        if mask is None:
            mask = self._sub_masks[d] = self._linear_form_mask(d)
        return (a & mask).bit_count() & 1

    def _linear_form_mask(self, d: int) -> int:
        # Bit j of the mask is bit 0 of sum_{i<d} (x^j)^(2^i); for arguments
        # inside GF(2^d) the full sum is 0 or 1, so the parity of
        # (a & mask) recovers it.
        mask = 0
        for j in range(self.t):
            acc = 0
            v = 1 << j
            for _ in range(d):
                acc ^= v
                v = self.sqr(v)
            mask |= (acc & 1) << j
        return mask

    def in_subfield(self, a: int, d: int) -> bool:
        """True iff a is fixed by the d-th Frobenius power: a^(2^d) = a."""
        v = a
        for _ in range(d):
            v = self.sqr(v)
        return v == a

    def order(self, a: int) -> int:
        """Exact multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        return _order_from_factors(
            self.q - 1, self.fact_minus, lambda e: self.pow(a, e))

    def degree(self, a: int) -> int:
        """Least d | t with a^(2^d) = a (degree of the minimal polynomial)."""
        for d in sorted(factorize(self.t).divisors()):
            if self.in_subfield(a, d):
                return d
        raise AssertionError("unreachable: degree(a) always divides t")

    # -- log/exp tables -------------------------------------------------------

    def ensure_tables(self) -> None:
        """Build log/exp tables (doubled exp to skip the mod) if t allows."""
        if self._log is not None:
            return
        if self.t > TABLE_MAX_T:
            raise FieldError(f"log tables refused for t={self.t} > {TABLE_MAX_T}")
        n = self.q - 1
        exp = [1] * (2 * n)
        log = [0] * self.q
        v = 1
        for i in range(n):
            exp[i] = v
            log[v] = i
            v = _pmulmod(v, self.gen, self.modulus)
        if v != 1:
            raise FieldError("generator order mismatch while building tables")
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log

    def exp_of(self, i: int) -> int:
        """gen^i as a packed int."""
        if self._log is not None:
            return self._exp[i % (self.q - 1)]
        return self.pow(self.gen, i % (self.q - 1))

    def dlog(self, a: int) -> int:
        """Discrete log of nonzero a w.r.t. the generator (table-backed)."""
        if a == 0:
            raise FieldError("zero has no discrete log")
        self.ensure_tables()
        return self._log[a]

    # -- element interface ----------------------------------------------------

    def element(self, bits: int) -> "FieldElement":
        return FieldElement(self, bits)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def generator(self) -> "FieldElement":
        return FieldElement(self, self.gen)

    def elements(self):
        """All field elements, ascending by packed value."""
        return (FieldElement(self, b) for b in range(self.q))

    def units(self):
        return (FieldElement(self, b) for b in range(1, self.q))

    def compatible(self, other: "FieldSpec") -> bool:
        return self is other or (
            self.t == other.t and self.modulus == other.modulus)

    def __repr__(self) -> str:
        return f"FieldSpec(t={self.t}, modulus={self.modulus:#x})"


class FieldElement:
    """A value of one specific GF(2^t); arithmetic never crosses fields."""

    __slots__ = ("field", "bits")

    def __init__(self, field: FieldSpec, bits: int):
        if not 0 <= bits < field.q:
            raise FieldError(f"bits {bits:#x} out of range for GF(2^{field.t})")
        self.field = field
        self.bits = bits

    def _join(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or not self.field.compatible(other.field):
            raise FieldError("operands belong to different fields")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._join(other)
        return FieldElement(self.field, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._join(other)
        return FieldElement(self.field, self.field.mul(self.bits, other.bits))

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._join(other)
        return FieldElement(
            self.field, self.field.mul(self.bits, self.field.inv(other.bits)))

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.field, self.field.pow(self.bits, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.bits))

    def trace(self) -> int:
        return self.field.trace(self.bits)

    def order(self) -> int:
        return self.field.order(self.bits)

    def degree(self) -> int:
        return self.field.degree(self.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field.compatible(other.field) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.field.t, self.field.modulus, self.bits))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"<GF(2^{self.field.t}) {self.bits:#x}>"


def make_field(t: int, modulus: int | None = None, *, max_t: int | None = None) -> FieldSpec:
    """Construct GF(2^t).

    Without an explicit modulus: the Conway polynomial for t <= 16 (its
    residue class of x is primitive by construction and becomes the
    generator), else the numerically least irreducible polynomial of degree
    t with a generator found by search.
    """
    cap = max_t if max_t is not None else max_t_cap()
    if not 1 <= t <= cap:
        raise FieldError(f"t={t} outside [1, {cap}]")
    if modulus is not None:
        return FieldSpec(t, modulus)
    conway = CONWAY_POLY.get(t)
    if conway is not None:
        return FieldSpec(t, conway, generator=_pmod(2, conway))
    return FieldSpec(t, _least_irreducible(t))


# ---------------------------------------------------------------------------
# Operations on FieldElement values

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Coordinate-wise XOR."""
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Polynomial product reduced by the modulus."""
    return a * b


def inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse of a nonzero element."""
    return a.inverse()


def trace(a: FieldElement) -> int:
    """Absolute trace: the sum of the t Frobenius conjugates, in {0, 1}."""
    return a.trace()


def order(a: FieldElement) -> int:
    """Exact multiplicative order of a nonzero element."""
    return a.order()


def degree(a: FieldElement) -> int:
    """Degree of the minimal polynomial over GF(2); a positive divisor of t."""
    return a.degree()


# ---------------------------------------------------------------------------
# Text record serialization: `t=<int> modulus=<hex> generator=<hex>`

def field_to_record(spec: FieldSpec) -> str:
    return f"t={spec.t} modulus={spec.modulus:x} generator={spec.gen:x}"


def field_from_record(record: str) -> FieldSpec:
    try:
        parts = dict(p.split("=", 1) for p in record.split())
        t = int(parts["t"])
        modulus = int(parts["modulus"], 16)
        gen = int(parts["generator"], 16)
    except (KeyError, ValueError) as exc:
        raise FieldError(f"bad field record: {record!r}") from exc
    return FieldSpec(t, modulus, generator=gen)
