"""Exact arithmetic in the ring Z[w] of Eisenstein integers, w = e^{2 pi i/3}.

Elements are stored as a + b*w with integer a, b.  The ring is Euclidean
under the norm N(a+bw) = a^2 - ab + b^2, has six units, and its primes are
the ramified lam = 1 - w (above 3), split primes of norm p = 1 mod 3, and
inert rational primes p = 2 mod 3.

The additive character used everywhere is

    e(x) = exp(2 pi i (x/delta + x'/delta')),   delta = sqrt(-3),

which for x = r + s*w (rational r, s) equals exp(2 pi i s): only the
w-coordinate matters.  ``char_phase(x, c)`` returns the exact phase of
e(x/c) as a Fraction mod 1.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class Eisenstein:
    """a + b*w with w a primitive cube root of unity (w^2 + w + 1 = 0)."""

    a: int
    b: int

    def __add__(self, other):
        other = _coerce(other)
        return Eisenstein(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Eisenstein(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Eisenstein(-self.a, -self.b)

    def __mul__(self, other):
        other = _coerce(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        # (a+bw)(c+dw) = ac - bd + (ad + bc - bd) w   using w^2 = -1-w
        return Eisenstein(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not integral")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def conjugate(self) -> "Eisenstein":
        return Eisenstein(self.a - self.b, -self.b)

    def __complex__(self):
        return complex(self.a - 0.5 * self.b, 0.8660254037844386 * self.b)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        bs = f"{self.b:+d}*w"
        if self.a == 0:
            return bs.lstrip("+") if self.b > 0 else bs
        return f"{self.a}{bs}"

    def __repr__(self):
        return f"Eisenstein({self.a}, {self.b})"

    def to_json(self):
        return {"a": self.a, "b": self.b}


def _coerce(x) -> Eisenstein:
    if isinstance(x, Eisenstein):
        return x
    if isinstance(x, int):
        return Eisenstein(x, 0)
    raise TypeError(f"cannot coerce {x!r} to Eisenstein")


ZERO = Eisenstein(0, 0)
ONE = Eisenstein(1, 0)
OMEGA = Eisenstein(0, 1)
OMEGA2 = Eisenstein(-1, -1)
LAMBDA = Eisenstein(1, -1)  # 1 - w, the ramified prime above 3
THREE = Eisenstein(3, 0)

#: the six units 1, -1, w, -w, w^2, -w^2
UNITS = (ONE, -ONE, OMEGA, -OMEGA, OMEGA2, -OMEGA2)

_ELT_RE = re.compile(r"^\s*([+-]?\d+)?\s*(?:([+-]?\s*\d*)\s*\*?\s*w)?\s*$")


def parse_element(s: str) -> Eisenstein:
    """Parse "a+b*w" syntax, e.g. "-2-3*w", "w", "5", "1+w"."""
    if isinstance(s, Eisenstein):
        return s
    if isinstance(s, int):
        return Eisenstein(s, 0)
    m = _ELT_RE.match(s.replace(" ", ""))
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"cannot parse Eisenstein element: {s!r}")
    a = int(m.group(1)) if m.group(1) else 0
    b = 0
    if m.group(2) is not None:
        bs = m.group(2).replace(" ", "")
        if bs in ("", "+"):
            b = 1
        elif bs == "-":
            b = -1
        else:
            b = int(bs)
    return Eisenstein(a, b)


def divmod_euclidean(x: Eisenstein, c: Eisenstein):
    """q, r with x = q*c + r and N(r) <= (3/4) N(c) < N(c)."""
    if not c:
        raise ZeroDivisionError("division by zero in Z[w]")
    n = c.norm()
    t = x * c.conjugate()
    qa = (2 * t.a + n) // (2 * n)  # round(t.a / n), ties toward +inf
    qb = (2 * t.b + n) // (2 * n)
    q = Eisenstein(qa, qb)
    return q, x - q * c


def mod(x: Eisenstein, c: Eisenstein) -> Eisenstein:
    return divmod_euclidean(x, c)[1]


def exact_div(x: Eisenstein, c: Eisenstein) -> Eisenstein:
    q, r = divmod_euclidean(x, c)
    if r:
        raise ValueError(f"{x} is not divisible by {c}")
    return q


def divides(c: Eisenstein, x: Eisenstein) -> bool:
    return not divmod_euclidean(x, c)[1]


def gcd(x: Eisenstein, y: Eisenstein) -> Eisenstein:
    """Euclidean gcd, canonically normalized.

    The result is lam^e times a primary element (unit dropped), so gcds
    are comparable across runs.
    """
    if not x and not y:
        raise ValueError("gcd(0, 0) is undefined")
    while y:
        x, y = y, mod(x, y)
    return _canonical_associate(x)


def bezout(x: Eisenstein, y: Eisenstein):
    """g, s, t with s*x + t*y = g; g is a unit iff x, y are coprime."""
    r0, r1 = x, y
    s0, s1 = ONE, ZERO
    t0, t1 = ZERO, ONE
    while r1:
        q, r = divmod_euclidean(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return r0, s0, t0


def is_unit(x: Eisenstein) -> bool:
    return x.norm() == 1


def unit_inverse(u: Eisenstein) -> Eisenstein:
    for v in UNITS:
        if u * v == ONE:
            return v
    raise ValueError(f"{u} is not a unit")


def is_primary(x: Eisenstein) -> bool:
    """x = 1 (mod 3), the canonical associate convention for (x, 3) = 1."""
    return x.a % 3 == 1 and x.b % 3 == 0


def primary_associate(x: Eisenstein):
    """(u, y) with y = u*x primary; requires lam does not divide x."""
    if not x:
        raise NotCoprimeToLambda("0 has no primary associate")
    for u in UNITS:
        y = u * x
        if is_primary(y):
            return u, y
    raise NotCoprimeToLambda(f"{x} is divisible by lambda = 1 - w")


def _canonical_associate(x: Eisenstein) -> Eisenstein:
    """lam^e * primary(x / lam^e); canonical representative of the associate class."""
    if not x:
        return x
    e = 0
    while divides(LAMBDA, x):
        x = exact_div(x, LAMBDA)
        e += 1
    _, y = primary_associate(x)
    return LAMBDA**e * y


class NotCoprimeToLambda(ValueError):
    pass


@dataclass(frozen=True)
class Factorization:
    """unit * lam^lambda_exponent * prod(prime^exp) with primary primes.

    Inert rational primes are normalized primary too (-p for p = 2 mod 3).
    Factors are sorted by (norm, a, b) so fixtures are reproducible.
    """

    unit: Eisenstein
    lambda_exponent: int
    factors: tuple  # of (Eisenstein prime, exponent)

    def value(self) -> Eisenstein:
        x = self.unit * LAMBDA**self.lambda_exponent
        for p, e in self.factors:
            x = x * p**e
        return x

    def is_squarefree(self) -> bool:
        return self.lambda_exponent <= 1 and all(e == 1 for _, e in self.factors)

    def num_prime_factors(self) -> int:
        return (1 if self.lambda_exponent else 0) + sum(e for _, e in self.factors)


def _int_factor(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def _cube_root_mod(p: int) -> int:
    """Nontrivial cube root of 1 mod p, for p = 1 (mod 3)."""
    e = (p - 1) // 3
    for g in range(2, p):
        r = pow(g, e, p)
        if r != 1 and pow(r, 3, p) == 1:
            return r
    raise ArithmeticError(f"no cube root of unity mod {p}")


@lru_cache(maxsize=None)
def split_prime_above(p: int) -> Eisenstein:
    """The primary prime pi with N(pi) = p, for a rational prime p = 1 (mod 3)."""
    r = _cube_root_mod(p)
    g = gcd(Eisenstein(p, 0), OMEGA - r)
    assert g.norm() == p
    return g


def factor(x: Eisenstein) -> Factorization:
    """Exact factorization into unit * lam^e * primary prime powers."""
    if not x:
        raise ValueError("cannot factor 0")
    lam_e = 0
    while divides(LAMBDA, x):
        x = exact_div(x, LAMBDA)
        lam_e += 1
    facs = []
    for p, _ in _int_factor(x.norm()):
        if p == 3:
            raise AssertionError("lambda part not fully removed")
        if p % 3 == 1:
            pi = split_prime_above(p)
            for q in (pi, primary_associate(pi.conjugate())[1]):
                e = 0
                while divides(q, x):
                    x = exact_div(x, q)
                    e += 1
                if e:
                    facs.append((q, e))
        else:
            q = Eisenstein(-p, 0)  # primary associate of an inert prime
            e = 0
            while divides(q, x):
                x = exact_div(x, q)
                e += 1
            if e:
                facs.append((q, e))
    assert is_unit(x), f"leftover cofactor {x}"
    facs.sort(key=lambda t: (t[0].norm(), t[0].a, t[0].b))
    return Factorization(unit=x, lambda_exponent=lam_e, factors=tuple(facs))


def mobius(c: Eisenstein) -> int:
    f = factor(c)
    if f.lambda_exponent > 1 or any(e > 1 for _, e in f.factors):
        return 0
    return -1 if f.num_prime_factors() % 2 else 1


def euler_phi(c: Eisenstein) -> int:
    """#(Z[w]/c)^*; multiplicative, N(pi)^{e-1}(N(pi)-1) on prime powers."""
    f = factor(c)
    out = 1
    if f.lambda_exponent:
        out *= 3 ** (f.lambda_exponent - 1) * 2
    for p, e in f.factors:
        n = p.norm()
        out *= n ** (e - 1) * (n - 1)
    return out


def primary_divisors(c: Eisenstein):
    """All primary divisors of c (up to associates), sorted by (norm, a, b)."""
    f = factor(c)
    divs = [ONE]
    for p, e in f.factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs, key=lambda d: (d.norm(), d.a, d.b))


def divisors(c: Eisenstein):
    """All divisors up to associates, as lam^j * primary; sorted by norm."""
    f = factor(c)
    divs = [LAMBDA**j for j in range(f.lambda_exponent + 1)]
    for p, e in f.factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs, key=lambda d: (d.norm(), d.a, d.b))


def char_phase(x: Eisenstein, c: Eisenstein) -> Fraction:
    """Phase s in [0,1) with e(x/c) = exp(2 pi i s); exact."""
    if not c:
        raise ZeroDivisionError("character phase with zero modulus")
    n = c.norm()
    t = (x * c.conjugate()).b % n
    return Fraction(t, n)


def char_index(x: Eisenstein, c: Eisenstein) -> int:
    """t with e(x/c) = zeta_{N(c)}^t; the integer N(c) * char_phase."""
    return (x * c.conjugate()).b % c.norm()


# ---------------------------------------------------------------------------
# residue rings


class ResidueRing:
    """Z[w]/(c) with enumeration, reduction and inverses.

    Residues are represented by coordinates in the Hermite-normal-form box
    of the lattice generated by c and c*w: exactly N(c) elements.
    """

    def __init__(self, c: Eisenstein):
        if not c:
            raise ZeroDivisionError("zero modulus")
        self.modulus = c
        self.size = c.norm()
        a, b = c.a, c.b
        # lattice rows (a, b) = c and (-b, a-b) = c*w; bring to HNF
        r1, r2 = (a, b), (-b, a - b)
        if r1[0] == 0:
            r1, r2 = r2, r1
        while r2[0] != 0:
            q = r1[0] // r2[0]
            r1, r2 = r2, (r1[0] - q * r2[0], r1[1] - q * r2[1])
        d2 = abs(r2[1])
        # make second coord of r1 reduced mod d2
        d1, e = abs(r1[0]), r1[1] * (1 if r1[0] > 0 else -1)
        self._d1, self._d2, self._e = d1, d2, e % d2 if d2 else e
        assert d1 * d2 == self.size

    def reduce(self, x: Eisenstein) -> Eisenstein:
        u, v = x.a, x.b
        k = u // self._d1
        u -= k * self._d1
        v -= k * self._e
        v %= self._d2
        return Eisenstein(u, v)

    def elements(self):
        for i in range(self._d1):
            for j in range(self._d2):
                yield Eisenstein(i, j)

    def units(self):
        c = self.modulus
        for x in self.elements():
            if is_unit(gcd(x, c) if x else c):
                yield x

    def inverse(self, x: Eisenstein) -> Eisenstein:
        g, s, _ = bezout(x, self.modulus)
        if not is_unit(g):
            raise ZeroDivisionError(f"{x} is not invertible mod {self.modulus}")
        return self.reduce(unit_inverse(g) * s)

    def mul(self, x, y):
        return self.reduce(x * y)

    def pow(self, x, n: int):
        if n < 0:
            x, n = self.inverse(x), -n
        r = ONE
        x = self.reduce(x)
        while n:
            if n & 1:
                r = self.reduce(r * x)
            x = self.reduce(x * x)
            n >>= 1
        return r


def residues(c: Eisenstein):
    return ResidueRing(c).elements()


def reduced_residues(c: Eisenstein):
    return ResidueRing(c).units()


def inverse_mod(x: Eisenstein, c: Eisenstein) -> Eisenstein:
    return ResidueRing(c).inverse(x)


# ---------------------------------------------------------------------------
# element enumeration helpers (lattice scans)


def elements_with_norm_leq(bound: int, primary_only: bool = False):
    """All x with 0 < N(x) <= bound (optionally only primary x)."""
    out = []
    amax = int(math.isqrt(4 * bound // 3)) + 1
    for a in range(-amax, amax + 1):
        for b in range(-amax, amax + 1):
            n = a * a - a * b + b * b
            if 0 < n <= bound:
                if primary_only and not (a % 3 == 1 and b % 3 == 0):
                    continue
                out.append(Eisenstein(a, b))
    out.sort(key=lambda x: (x.norm(), x.a, x.b))
    return out


def primary_primes_up_to(bound: int):
    """Primary primes of norm <= bound, sorted by norm."""
    out = []
    for p, _ in _sieve_pairs(bound):
        if p == 3:
            continue
        if p % 3 == 1:
            pi = split_prime_above(p)
            out.append(pi)
            out.append(primary_associate(pi.conjugate())[1])
        elif p * p <= bound:
            out.append(Eisenstein(-p, 0))
    out.sort(key=lambda x: (x.norm(), x.a, x.b))
    return out


def rational_primes_up_to(n: int):
    n = max(n, 2)
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(math.isqrt(n)) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [p for p in range(2, n + 1) if sieve[p]]


def _sieve_pairs(bound: int):
    return [(p, 1) for p in rational_primes_up_to(max(bound, 4))]
