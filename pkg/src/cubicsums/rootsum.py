"""Exact finite sums of roots of unity with integer multiplicities.

A RootSum holds a modulus M and an integer vector (mult[k] = multiplicity
of exp(2 pi i k/M)).  Every character/Gauss/Kloosterman/exponential sum in
this package is carried exactly in this form; numeric evaluation happens
once, at comparison time.

Equality testing is the dual test: exact reduction modulo the cyclotomic
polynomial when the aligned modulus is a prime power, plus a numeric test
at tolerance 1e-9 * mass in general.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

NUMERIC_TOL = 1e-9


class RootSum:
    __slots__ = ("modulus", "mult")

    def __init__(self, modulus: int, mult=None):
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        self.modulus = modulus
        if mult is None:
            self.mult = np.zeros(modulus, dtype=np.int64)
        else:
            arr = np.asarray(mult, dtype=np.int64)
            if arr.shape != (modulus,):
                raise ValueError("multiplicity vector has wrong length")
            self.mult = arr.copy()

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, modulus: int = 1):
        return cls(modulus)

    @classmethod
    def root(cls, modulus: int, k: int, mult: int = 1):
        rs = cls(modulus)
        rs.mult[k % modulus] = mult
        return rs

    @classmethod
    def integer(cls, n: int):
        return cls.root(1, 0, n)

    @classmethod
    def from_counts(cls, modulus: int, indices, weights=None):
        """Accumulate exp(2 pi i * indices/modulus), vectorized."""
        idx = np.asarray(indices, dtype=np.int64) % modulus
        if weights is None:
            mult = np.bincount(idx, minlength=modulus)
        else:
            mult = np.bincount(idx, weights=np.asarray(weights, dtype=np.float64),
                               minlength=modulus)
            rounded = np.rint(mult).astype(np.int64)
            if not np.array_equal(rounded, mult):
                raise ValueError("non-integer weights")
            mult = rounded
        return cls(modulus, mult.astype(np.int64))

    # -- ring operations ----------------------------------------------------

    def rescaled(self, new_modulus: int) -> "RootSum":
        """Index dilation M -> t*M; numeric value is unchanged."""
        t, r = divmod(new_modulus, self.modulus)
        if r:
            raise ValueError("new modulus must be a multiple")
        rs = RootSum(new_modulus)
        rs.mult[:: t] = self.mult
        return rs

    def _aligned(self, other: "RootSum"):
        m = math.lcm(self.modulus, other.modulus)
        return self.rescaled(m), other.rescaled(m)

    def __add__(self, other):
        if isinstance(other, int):
            other = RootSum.integer(other)
        a, b = self._aligned(other)
        return RootSum(a.modulus, a.mult + b.mult)

    __radd__ = __add__

    def __neg__(self):
        return RootSum(self.modulus, -self.mult)

    def __sub__(self, other):
        if isinstance(other, int):
            other = RootSum.integer(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return RootSum(self.modulus, self.mult * int(other))
        a, b = self._aligned(other)
        m = a.modulus
        conv = np.convolve(a.mult, b.mult)
        out = np.zeros(m, dtype=np.int64)
        np.add.at(out, np.arange(len(conv)) % m, conv)
        return RootSum(m, out)

    __rmul__ = __mul__

    def conj(self) -> "RootSum":
        out = np.roll(self.mult[::-1], 1)
        return RootSum(self.modulus, out)

    def rotated(self, k: int, modulus: int | None = None) -> "RootSum":
        """Multiply by exp(2 pi i k/modulus) (default: own modulus)."""
        if modulus is None or modulus == self.modulus:
            return RootSum(self.modulus, np.roll(self.mult, k % self.modulus))
        m = math.lcm(self.modulus, modulus)
        return self.rescaled(m).rotated(k * (m // modulus))

    def galois(self, sigma: int) -> "RootSum":
        """Apply zeta -> zeta^sigma; requires gcd(sigma, M) = 1."""
        if math.gcd(sigma, self.modulus) != 1:
            raise ValueError("sigma must be invertible mod M")
        idx = (np.arange(self.modulus) * sigma) % self.modulus
        out = np.zeros(self.modulus, dtype=np.int64)
        out[idx] = self.mult
        return RootSum(self.modulus, out)

    # -- evaluation and comparison ------------------------------------------

    def mass(self) -> int:
        return int(np.abs(self.mult).sum())

    def value(self) -> complex:
        """Double-precision value; error <= 1e-12 * mass (pairwise summation)."""
        nz = np.nonzero(self.mult)[0]
        if len(nz) == 0:
            return 0j
        ang = 2.0 * np.pi * nz / self.modulus
        w = self.mult[nz].astype(np.float64)
        return complex(np.dot(w, np.cos(ang)), np.dot(w, np.sin(ang)))

    def reduced(self) -> "RootSum":
        """Smallest modulus form: undo index dilation."""
        nz = np.nonzero(self.mult)[0]
        if len(nz) == 0:
            return RootSum(1)
        g = math.gcd(self.modulus, int(np.gcd.reduce(nz)))
        if g <= 1:
            return self
        return RootSum(self.modulus // g, self.mult[::g])

    def _canonical_prime_power(self):
        """Reduce mod the cyclotomic polynomial Phi_{p^k}; exact, or None.

        In Z[zeta_{p^k}] the relation is sum_{j<p} zeta^{j p^{k-1} + r} = 0
        for each r; canonical form zeroes the top digit block.
        """
        m = self.modulus
        if m == 1:
            return self.mult.copy()
        f = _prime_power_split(m)
        if f is None:
            return None
        p, k = f
        block = m // p  # p^{k-1}
        v = self.mult.reshape(p, block).copy()
        v -= v[p - 1]
        return v[: p - 1].ravel()

    def is_zero(self, tol: float = NUMERIC_TOL) -> bool:
        rs = self.reduced()
        canon = rs._canonical_prime_power()
        if canon is not None:
            return not canon.any()
        return abs(rs.value()) <= tol * max(1.0, rs.mass())

    def equals(self, other, tol: float = NUMERIC_TOL) -> bool:
        if isinstance(other, int):
            other = RootSum.integer(other)
        return (self - other).is_zero(tol)

    def __eq__(self, other):
        if not isinstance(other, (RootSum, int)):
            return NotImplemented
        return self.equals(other)

    def __hash__(self):
        raise TypeError("RootSum is not hashable")

    def __repr__(self):
        nz = np.nonzero(self.mult)[0]
        if len(nz) == 0:
            return "RootSum(0)"
        terms = " + ".join(f"{int(self.mult[k])}*z{self.modulus}^{int(k)}" for k in nz[:6])
        if len(nz) > 6:
            terms += " + ..."
        return f"RootSum({terms})"

    def to_json(self):
        rs = self.reduced()
        return {"modulus": rs.modulus, "mult": rs.mult.tolist()}


def _prime_power_split(m: int):
    if m < 2:
        return None
    p = 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
        p += 1 if p == 2 else 2
    return (m, 1)


def omega_power(j: int) -> RootSum:
    """The cube root of unity w^j as a RootSum."""
    return RootSum.root(3, j % 3)


def eval_omega(j: int) -> complex:
    return cmath.exp(2j * cmath.pi * (j % 3) / 3)
