"""Vectorized residue arithmetic mod a primary Eisenstein modulus.

Residues of Z[w]/(c) are coordinate pairs (u, v) = u + v*w; coordinates may
be reduced mod N(c) freely since N(c) lies in the ideal (c).  Enumeration
uses the Hermite-normal-form box (d1 x d2 with d1*d2 = N(c)).

For a prime-power modulus pi^k two fast layouts exist:

* split (N(pi) = p, a rational prime = 1 mod 3): Z[w]/(pi^k) = Z/p^k via
  the Hensel-lifted cube root of unity; residues are plain integers.
* inert (pi = -p, p = 2 mod 3): residues are coordinate pairs mod p^k.

Both expose the additive character index t with e(x/c) = zeta_{N(c)}^t,
the cubic-symbol index on units, and vectorized inverses.
"""

from __future__ import annotations

import numpy as np

from .eisenstein import (
    Eisenstein,
    ResidueRing,
    euler_phi,
    factor,
    split_prime_above,
)


def _hensel_cube_root(r: int, p: int, pk: int) -> int:
    """Lift r with r^2+r+1 = 0 (mod p) to the same equation mod p^k."""
    w = r % p
    m = p
    while m < pk:
        m = min(m * m, pk)
        f = (w * w + w + 1) % m
        fp = (2 * w + 1) % m
        w = (w - f * pow(fp, -1, m)) % m
    return w


def _pow_table_mod(base: np.ndarray, exp: int, m: int) -> np.ndarray:
    """Vectorized pow(base, exp, m) on int64 arrays (m^2 must fit in int64)."""
    result = np.ones_like(base)
    b = base % m
    while exp:
        if exp & 1:
            result = (result * b) % m
        b = (b * b) % m
        exp >>= 1
    return result


class SplitPrimePowerRing:
    """Z[w]/(pi^k) = Z/p^k for a split primary prime pi."""

    def __init__(self, pi: Eisenstein, k: int):
        self.pi = pi
        self.k = k
        self.p = pi.norm()
        self.q = self.p**k
        self.modulus = pi**k
        self.N = self.q
        # image of w: the cube root of unity r mod p with pi | (w - r)
        r = _find_root_for(pi)
        self.w_img = _hensel_cube_root(r, self.p, self.q)
        # e(x/c) = zeta_q^{t0 * n} for x = n in Z/q
        self.t0 = (-self.modulus.b) % self.q
        self.phi = self.q - self.q // self.p
        # cubic symbol table mod p: values 0,1,2 on units, 3 marks non-units
        p = self.p
        tbl = _pow_table_mod(np.arange(p, dtype=np.int64), (p - 1) // 3, p)
        sym = np.full(p, 3, dtype=np.int64)
        w1 = self.w_img % p
        sym[tbl == 1] = 0
        sym[tbl == w1] = 1
        sym[tbl == (w1 * w1) % p] = 2
        sym[0] = 3
        self.sym_mod_p = sym

    def embed(self, x: Eisenstein) -> int:
        return (x.a + x.b * self.w_img) % self.q

    def all_residues(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def unit_mask(self, n: np.ndarray) -> np.ndarray:
        return n % self.p != 0

    def symbol_index(self, n: np.ndarray) -> np.ndarray:
        """(x/pi^k)_3 = w^index on units; k-fold power of the mod-p symbol."""
        return (self.sym_mod_p[n % self.p] * self.k) % 3

    def inverse(self, n: np.ndarray) -> np.ndarray:
        return _pow_table_mod(n, self.phi - 1, self.q)

    def phase_index(self, n: np.ndarray) -> np.ndarray:
        return (self.t0 * (n % self.q)) % self.q


class InertPrimePowerRing:
    """Z[w]/(p^k) for an inert rational prime p = 2 (mod 3); pairs mod p^k."""

    def __init__(self, pi: Eisenstein, k: int):
        # pi is the primary inert prime -p
        self.pi = pi
        self.k = k
        self.p = -pi.a
        assert pi.b == 0 and self.p > 1
        self.P = self.p**k
        self.modulus = pi**k
        self.N = self.P * self.P
        self.phi = self.P * self.P - (self.P // self.p) ** 2
        # e(x/c): t(u, v) = v * ca mod N with ca = +-P; order-P character
        self.ca = self.modulus.a
        p = self.p
        uu, vv = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64),
                             indexing="ij")
        su, sv = _pair_pow(uu.ravel(), vv.ravel(), (p * p - 1) // 3, p)
        sym = np.full(p * p, 3, dtype=np.int64)
        sym[(su == 1) & (sv == 0)] = 0
        sym[(su == 0) & (sv == 1)] = 1
        sym[(su == p - 1) & (sv == p - 1)] = 2
        self.sym_mod_p = sym.reshape(p, p)
        self.sym_mod_p[0, 0] = 3

    def embed(self, x: Eisenstein):
        return x.a % self.P, x.b % self.P

    def all_residues(self):
        u, v = np.meshgrid(np.arange(self.P, dtype=np.int64),
                           np.arange(self.P, dtype=np.int64), indexing="ij")
        return u.ravel(), v.ravel()

    def unit_mask(self, u, v):
        return (u % self.p != 0) | (v % self.p != 0)

    def symbol_index(self, u, v):
        return (self.sym_mod_p[u % self.p, v % self.p] * self.k) % 3

    def inverse(self, u, v):
        return _pair_pow(u, v, self.phi - 1, self.P)

    def phase_index(self, u, v):
        """Index modulo N(c); always a multiple of P."""
        return (self.ca % self.N) * (v % self.P) % self.N


def _pair_pow(u, v, exp: int, m: int):
    """(u + v w)^exp with coordinates mod m, vectorized."""
    ru = np.ones_like(u)
    rv = np.zeros_like(v)
    bu, bv = u % m, v % m
    while exp:
        if exp & 1:
            ru, rv = (ru * bu - rv * bv) % m, (ru * bv + rv * bu - rv * bv) % m
        bu, bv = (bu * bu - bv * bv) % m, (2 * bu * bv - bv * bv) % m
        exp >>= 1
    return ru, rv


def _find_root_for(pi: Eisenstein) -> int:
    """The cube root r of 1 mod p with pi | (w - r)."""
    from .eisenstein import OMEGA, divides, _cube_root_mod

    p = pi.norm()
    r = _cube_root_mod(p)
    if divides(pi, OMEGA - r):
        return r
    r2 = (r * r) % p
    assert divides(pi, OMEGA - r2)
    return r2


def prime_power_ring(pi: Eisenstein, k: int):
    if pi.b == 0 and pi.a < 0:
        return InertPrimePowerRing(pi, k)
    return SplitPrimePowerRing(pi, k)


class VecRing:
    """General vectorized Z[w]/(c) for primary c (no lambda factor).

    Residue coordinates are carried as int64 arrays (U, V) mod N(c).
    Suitable for brute-force sums at desk scale; prime-power rings above
    are preferred inside inner loops where they apply.
    """

    def __init__(self, c: Eisenstein):
        self.c = c
        self.N = c.norm()
        if self.N % 3 == 0:
            raise ValueError("modulus must be coprime to lambda")
        fac = factor(c)
        self.factorization = fac
        self.phi = euler_phi(c)
        rr = ResidueRing(c)
        self._d1, self._d2, self._e = rr._d1, rr._d2, rr._e
        i = np.arange(self._d1, dtype=np.int64)
        j = np.arange(self._d2, dtype=np.int64)
        U, V = np.meshgrid(i, j, indexing="ij")
        self.U, self.V = U.ravel(), V.ravel()
        # per-prime symbol/unit data
        self._prime_data = []
        for pi, e in fac.factors:
            if pi.b == 0 and pi.a < 0:
                ring = InertPrimePowerRing(pi, 1)
                self._prime_data.append(("inert", -pi.a, e, ring.sym_mod_p))
            else:
                ring = SplitPrimePowerRing(pi, 1)
                self._prime_data.append(("split", pi.norm(), e, ring.sym_mod_p,
                                         ring.w_img))
        self.unit_mask = self._unit_mask(self.U, self.V)
        self.sym_idx = self._symbol_index(self.U, self.V)

    # -- elementwise ops ----------------------------------------------------

    def mul(self, x, y):
        xu, xv = x
        yu, yv = y
        n = self.N
        return (xu * yu - xv * yv) % n, (xu * yv + xv * yu - xv * yv) % n

    def pow(self, x, e: int):
        ru = np.ones_like(x[0])
        rv = np.zeros_like(x[1])
        b = (x[0] % self.N, x[1] % self.N)
        while e:
            if e & 1:
                ru, rv = self.mul((ru, rv), b)
            b = self.mul(b, b)
            e >>= 1
        return ru, rv

    def inverse(self, x):
        """Inverse on units (garbage elsewhere; mask with unit_mask)."""
        return self.pow(x, self.phi - 1)

    def embed(self, x: Eisenstein):
        return x.a % self.N, x.b % self.N

    def phase_index(self, x):
        """t with e((u+vw)/c) = zeta_{N}^t."""
        return (x[1] * self.c.a - x[0] * self.c.b) % self.N

    def scalar_mul(self, s: Eisenstein, x):
        su, sv = self.embed(s)
        return self.mul((np.int64(su), np.int64(sv)), x)

    # -- structure ----------------------------------------------------------

    def residues(self):
        return self.U, self.V

    def box_index(self, x):
        """Flat enumeration index of the residue containing (u, v)."""
        u, v = x
        # reduce coordinates into the HNF box
        k = u // self._d1
        u = u - k * self._d1
        v = (v - k * self._e) % self._d2
        return u * self._d2 + v

    def _unit_mask(self, U, V):
        mask = np.ones(U.shape, dtype=bool)
        for pd in self._prime_data:
            if pd[0] == "split":
                _, p, _, _, w1 = pd
                mask &= (U + V * w1) % p != 0
            else:
                _, p, _, _ = pd
                mask &= (U % p != 0) | (V % p != 0)
        return mask

    def _symbol_index(self, U, V):
        """(x/c)_3 index on units (value 0 elsewhere is meaningless)."""
        s = np.zeros(U.shape, dtype=np.int64)
        for pd in self._prime_data:
            if pd[0] == "split":
                _, p, e, tbl, w1 = pd
                s += e * tbl[(U + V * w1) % p]
            else:
                _, p, e, tbl = pd
                s += e * tbl[U % p, V % p]
        return s % 3

    def symbol_of(self, x: Eisenstein) -> int | None:
        """Scalar (x/c)_3 index, or None when gcd(x, c) != 1."""
        u = np.int64(x.a % self.N)
        v = np.int64(x.b % self.N)
        Ua, Va = np.array([u]), np.array([v])
        if not self._unit_mask(Ua, Va)[0]:
            return None
        return int(self._symbol_index(Ua, Va)[0])
