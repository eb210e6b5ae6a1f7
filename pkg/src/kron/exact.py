"""Exact scalars: arbitrary-precision rationals and the cyclotomic fields Q(zeta_q).

A cyclotomic number is stored as a residue class in Q[x]/(Phi_q(x)), with x
standing for zeta_q = exp(2*i*pi/q).  Working modulo the cyclotomic polynomial
(rather than x^q - 1) keeps the ring a field, so constants of the form
1 - zeta^a can be inverted whenever they are nonzero.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def parse_rat(s: str) -> Fraction:
    """Parse "num/den" or "num" into a Fraction."""
    return Fraction(s)


def format_rat(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Exact division of integer polynomials, den monic-leading assumed to divide.
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(q: int) -> tuple[int, ...]:
    """Coefficients (constant first) of Phi_q, by recursive division of x^q - 1."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if q == 1:
        return (-1, 1)
    poly = [-1] + [0] * (q - 1) + [1]
    for d in range(1, q):
        if q % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(poly)


@lru_cache(maxsize=None)
def _euler_phi(q: int) -> int:
    return len(cyclotomic_polynomial(q)) - 1


@lru_cache(maxsize=None)
def _power_table(q: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^j mod Phi_q for j = 0 .. 2*phi(q) - 2, as Fraction tuples of length phi(q)."""
    phi = _euler_phi(q)
    cyc = cyclotomic_polynomial(q)
    lead = cyc[-1]  # always 1
    assert lead == 1
    rows: list[tuple[Fraction, ...]] = []
    cur = [_ZERO] * phi
    cur[0] = _ONE
    rows.append(tuple(cur))
    for _ in range(2 * phi - 2):
        shifted = [_ZERO] + cur[:]
        if shifted[phi] != 0:
            c = shifted[phi]
            for j in range(phi):
                shifted[j] -= c * cyc[j]
        cur = shifted[:phi]
        rows.append(tuple(cur))
    return tuple(rows)


@lru_cache(maxsize=None)
def _zeta_power_coeffs(q: int, a: int) -> tuple[Fraction, ...]:
    a %= q
    phi = _euler_phi(q)
    if a < min(q, 2 * phi - 1):
        return _power_table(q)[a]
    # Shift-reduce once from x^(a-1); a < q so the recursion terminates.
    prev = _zeta_power_coeffs(q, a - 1)
    cyc = cyclotomic_polynomial(q)
    shifted = [_ZERO] + list(prev)
    if shifted[phi] != 0:
        c = shifted[phi]
        for j in range(phi):
            shifted[j] -= c * cyc[j]
    return tuple(shifted[:phi])


def _mul_coeffs(q: int, a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    phi = _euler_phi(q)
    prod = [_ZERO] * (2 * phi - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    table = _power_table(q)
    out = list(prod[:phi])
    for k in range(phi, 2 * phi - 1):
        c = prod[k]
        if c:
            row = table[k]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
    return tuple(out)


class CycloRat:
    """An element of Q(zeta_q), immutable."""

    __slots__ = ("q", "coeffs", "_hash")

    def __init__(self, q: int, coeffs):
        phi = _euler_phi(q)
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != phi:
            raise ValueError(f"expected {phi} coefficients for q={q}, got {len(cs)}")
        self.q = q
        self.coeffs = cs
        self._hash = None

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_rat(x, q: int = 1) -> "CycloRat":
        phi = _euler_phi(q)
        return CycloRat(q, (Fraction(x),) + (_ZERO,) * (phi - 1))

    @staticmethod
    def zeta(q: int, a: int = 1) -> "CycloRat":
        return CycloRat(q, _zeta_power_coeffs(q, a))

    def promote(self, Q: int) -> "CycloRat":
        """Embed into Q(zeta_Q); requires q | Q."""
        if Q == self.q:
            return self
        if Q % self.q != 0:
            raise ValueError(f"cannot embed Q(zeta_{self.q}) into Q(zeta_{Q})")
        step = Q // self.q
        phi = _euler_phi(Q)
        out = [_ZERO] * phi
        for j, c in enumerate(self.coeffs):
            if c:
                row = _zeta_power_coeffs(Q, j * step)
                for k in range(phi):
                    if row[k]:
                        out[k] += c * row[k]
        return CycloRat(Q, out)

    # -- ring operations ----------------------------------------------
    def _pair(self, other) -> tuple["CycloRat", "CycloRat"]:
        if isinstance(other, (int, Fraction)):
            other = CycloRat.from_rat(other, 1)
        if not isinstance(other, CycloRat):
            return NotImplemented, NotImplemented
        if self.q == other.q:
            return self, other
        Q = self.q * other.q // gcd(self.q, other.q)
        return self.promote(Q), other.promote(Q)

    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycloRat(a.q, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloRat(self.q, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return CycloRat(a.q, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return CycloRat.from_rat(0, 1)
            return CycloRat(self.q, tuple(c * other for c in self.coeffs))
        if not isinstance(other, CycloRat):
            return NotImplemented
        a, b = self._pair(other)
        return CycloRat(a.q, _mul_coeffs(a.q, a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * Fraction(1, 1) / CycloRat.from_rat(other, 1)
        return self * cyclo_inverse(other)

    def __rtruediv__(self, other):
        return cyclo_inverse(self) * other

    def __pow__(self, n: int):
        if n < 0:
            return cyclo_inverse(self) ** (-n)
        result = CycloRat.from_rat(1, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.rational_part() == other
        if not isinstance(other, CycloRat):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.rational_part())
            else:
                self._hash = hash((self.q, self.coeffs))
        return self._hash

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        if self.is_rational():
            return f"CycloRat({format_rat(self.coeffs[0])})"
        return f"CycloRat(q={self.q}, {[format_rat(c) for c in self.coeffs]})"

    # -- predicates and projections -------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_part(self) -> Fraction:
        return self.coeffs[0]

    def as_rational(self) -> Fraction:
        """The value as a Fraction; raises if the element is irrational."""
        if not self.is_rational():
            raise NonRationalValueError(f"not a rational number: {self!r}")
        return self.coeffs[0]

    def complex_value(self, k: int = 1) -> complex:
        """Float evaluation at zeta_q -> exp(2*i*pi*k/q) (test-side sanity only)."""
        z = cmath.exp(2j * cmath.pi * k / self.q)
        return sum(complex(c) * z**j for j, c in enumerate(self.coeffs))


class NonRationalValueError(ArithmeticError):
    """A value the pipeline claims is rational failed to be one."""


def cyclo_pow(q: int, a: int) -> CycloRat:
    """zeta_q^a, reduced modulo Phi_q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return CycloRat.zeta(q, a % q)


def is_root_of_unity_one(q: int, a: int) -> bool:
    """Whether zeta_q^a = 1, i.e. a = 0 mod q."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return a % q == 0


def cyclo_inverse(v: CycloRat) -> CycloRat:
    """Multiplicative inverse in Q(zeta_q), by extended Euclid against Phi_q."""
    if not v:
        raise ZeroDivisionError("cyclotomic division by zero")
    if v.is_rational():
        return CycloRat.from_rat(Fraction(1) / v.coeffs[0], v.q)
    q = v.q
    mod = [Fraction(c) for c in cyclotomic_polynomial(q)]

    def polytrim(p):
        while p and not p[-1]:
            p.pop()
        return p

    def polydivmod(a, b):
        a = list(a)
        qq = [Fraction(0)] * max(1, len(a) - len(b) + 1)
        inv = Fraction(1) / b[-1]
        for i in range(len(a) - len(b), -1, -1):
            c = a[i + len(b) - 1] * inv
            qq[i] = c
            if c:
                for j, d in enumerate(b):
                    a[i + j] -= c * d
        return polytrim(qq), polytrim(a)

    # Extended Euclid: r0 = mod, r1 = v; invariant r_i = s_i*mod + t_i*v.
    r0, r1 = polytrim(mod[:]), polytrim([Fraction(c) for c in v.coeffs])
    t0, t1 = [], [Fraction(1)]
    while r1:
        quot, rem = polydivmod(r0, r1)
        # t0 - quot*t1
        prod = [Fraction(0)] * (len(quot) + len(t1))
        for i, qc in enumerate(quot):
            if qc:
                for j, tc in enumerate(t1):
                    prod[i + j] += qc * tc
        newt = [
            (t0[i] if i < len(t0) else Fraction(0)) - (prod[i] if i < len(prod) else Fraction(0))
            for i in range(max(len(t0), len(prod)))
        ]
        r0, r1 = r1, rem
        t0, t1 = t1, polytrim(newt)
    # r0 = gcd (a nonzero constant since Phi_q is irreducible and v != 0 mod Phi_q)
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible (zero divisor?)")
    c = r0[0]
    phi = _euler_phi(q)
    out = [Fraction(0)] * phi
    for i, tc in enumerate(t0):
        out[i] = tc / c
    return CycloRat(q, out)


@lru_cache(maxsize=None)
def one_minus_zeta_inverse(q: int, a: int) -> CycloRat:
    """(1 - zeta_q^a)^(-1), cached; a must not be 0 mod q."""
    if a % q == 0:
        raise ZeroDivisionError("1 - zeta^0 = 0")
    return cyclo_inverse(CycloRat.from_rat(1, q) - CycloRat.zeta(q, a))


def as_scalar(x):
    """Normalize a coefficient to Fraction when it is (or became) rational."""
    if isinstance(x, CycloRat) and x.is_rational():
        return x.rational_part()
    return x
