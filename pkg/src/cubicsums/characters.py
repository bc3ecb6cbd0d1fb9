"""Cubic residue symbols, cubic Gauss sums and Ramanujan sums over Z[w].

The cubic symbol (x/c)_3 is defined on primes by the Euler criterion
x^{(N(pi)-1)/3} = w^j (mod pi) and extended multiplicatively; moduli are
normalized to their primary associate first.  Gauss sums

    g_k(a, c) = sum over x in (Z[w]/c)* of (x/c)_3^k e(ax/c)

are returned as exact RootSum values with modulus lcm(3, N(c)).
"""

from __future__ import annotations

import math

import numpy as np

from .eisenstein import (
    Eisenstein,
    ResidueRing,
    divisors,
    euler_phi,
    gcd,
    is_primary,
    is_unit,
    mobius,
    char_index,
    primary_associate,
)
from .modring import VecRing
from .rootsum import RootSum


class ModulusDivisibleByLambda(ValueError):
    pass


class NotPrimary(ValueError):
    pass


class CubicSymbolValue:
    """Element of {0, 1, w, w^2}: zero or a power of the cube root of unity."""

    __slots__ = ("power",)

    def __init__(self, power: int | None):
        self.power = power if power is None else power % 3

    @property
    def is_zero(self) -> bool:
        return self.power is None

    def value(self) -> complex:
        if self.power is None:
            return 0j
        return complex(RootSum.root(3, self.power).value())

    def rootsum(self) -> RootSum:
        if self.power is None:
            return RootSum.zero(3)
        return RootSum.root(3, self.power)

    def conj(self) -> "CubicSymbolValue":
        return CubicSymbolValue(None if self.power is None else -self.power)

    def __mul__(self, other):
        if self.power is None or other.power is None:
            return CubicSymbolValue(None)
        return CubicSymbolValue(self.power + other.power)

    def __eq__(self, other):
        if isinstance(other, CubicSymbolValue):
            return self.power == other.power
        return NotImplemented

    def __hash__(self):
        return hash(self.power)

    def __repr__(self):
        return "CubicSymbol(0)" if self.power is None else f"CubicSymbol(w^{self.power})"

    def to_json(self):
        return "zero" if self.power is None else f"w^{self.power}"


ZERO_SYMBOL = CubicSymbolValue(None)


def _symbol_mod_prime(x: Eisenstein, pi: Eisenstein) -> int | None:
    """Euler criterion; None when pi | x."""
    ring = ResidueRing(pi)
    if not is_unit(gcd(x, pi)):
        return None
    n = pi.norm()
    r = ring.pow(ring.reduce(x), (n - 1) // 3)
    for j, w in enumerate((Eisenstein(1, 0), Eisenstein(0, 1), Eisenstein(-1, -1))):
        if r == ring.reduce(w):
            return j
    raise ArithmeticError(f"Euler criterion failed for {x} mod {pi}")


def cubic_symbol(x: Eisenstein, c: Eisenstein) -> CubicSymbolValue:
    """(x/c)_3, with c normalized to its primary associate."""
    if not c:
        raise ValueError("zero modulus")
    if is_unit(c):
        return CubicSymbolValue(0)
    if c.norm() % 3 == 0:
        raise ModulusDivisibleByLambda(f"{c} is divisible by lambda")
    _, c = primary_associate(c)
    from .eisenstein import factor

    total = 0
    for pi, e in factor(c).factors:
        j = _symbol_mod_prime(x, pi)
        if j is None:
            return CubicSymbolValue(None)
        total += e * j
    return CubicSymbolValue(total)


def check_cubic_reciprocity(a: Eisenstein, b: Eisenstein) -> bool:
    """(a/b)_3 = (b/a)_3 for primary coprime a, b; always true."""
    if not (is_primary(a) and is_primary(b)):
        raise NotPrimary("cubic reciprocity requires primary arguments")
    if not is_unit(gcd(a, b)):
        raise ValueError("arguments must be coprime")
    return cubic_symbol(a, b) == cubic_symbol(b, a)


# ---------------------------------------------------------------------------
# Gauss and Ramanujan sums


def _char_sum_modulus(c: Eisenstein) -> int:
    return math.lcm(3, c.norm())


def gauss_sum(k: int, a: Eisenstein, c: Eisenstein) -> RootSum:
    """g_k(a, c) = sum_{(x,c)=1} (x/c)_3^k e(ax/c), exact.

    c is normalized to its primary associate (the sum is associate-invariant
    only up to the character convention; primary is the convention used
    throughout).
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    if not c:
        raise ValueError("zero modulus")
    if c.norm() % 3 == 0:
        raise ModulusDivisibleByLambda(f"{c} divisible by lambda")
    _, c = primary_associate(c)
    if is_unit(c):
        return RootSum.integer(1)
    ring = VecRing(c)
    n = ring.N
    m = math.lcm(3, n)
    U, V = ring.residues()
    mask = ring.unit_mask
    t = ring.phase_index(ring.scalar_mul(a, (U, V)))
    idx = (ring.sym_idx * k % 3) * (m // 3) + t * (m // n)
    return RootSum.from_counts(m, idx[mask])


def gauss_sum_table(k: int, c: Eisenstein) -> np.ndarray:
    """Complex g_k(a, c) for every residue a (box enumeration order).

    One FFT-free pass per a would be O(N^2); this uses the unit-function
    bincount per a only in tests.  Here: direct dense evaluation via a
    single matrix-free loop is avoided by the twist law in callers; this
    helper is for exhaustive small-norm checks.
    """
    ring = VecRing(c)
    n = ring.N
    m = math.lcm(3, n)
    U, V = ring.residues()
    mask = ring.unit_mask
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    sym_part = (ring.sym_idx[mask] * k % 3) * (m // 3)
    out = np.empty(n, dtype=np.complex128)
    Uu, Vu = U[mask], V[mask]
    for i in range(n):
        t = ring.phase_index(ring.mul((U[i], V[i]), (Uu, Vu)))
        out[i] = roots[(sym_part + t * (m // n)) % m].sum()
    return out


def ramanujan_sum(b: Eisenstein, c: Eisenstein) -> RootSum:
    """sum over (x,c)=1 of e(bx/c), exact; c arbitrary nonzero."""
    if not c:
        raise ValueError("zero modulus")
    n = c.norm()
    ring = ResidueRing(c)
    idx = [char_index(b * x, c) for x in ring.units()]
    return RootSum.from_counts(n, np.asarray(idx, dtype=np.int64))


def ramanujan_divisor_formula(b: Eisenstein, c: Eisenstein) -> int:
    """sum_{q | gcd(b,c)} mu(c/q) N(q); equals the Ramanujan sum."""
    from .eisenstein import exact_div

    g = gcd(b, c) if b else c
    return sum(mobius(exact_div(c, q)) * q.norm() for q in divisors(g))


def gauss_sum_numeric(k: int, a: Eisenstein, c: Eisenstein) -> complex:
    return complex(gauss_sum(k, a, c).value())
