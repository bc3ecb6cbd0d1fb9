"""Desk-scale evaluation of the Kuznetsov geometric side and its comparison
against the spectral main term.

The double sum evaluated for each cutoff X is

    G(X) = unfold/X * sum_{c = 1 (3), D|c} N(c)^{-1}
           sum_{n != 0} g(N(n)/X) S_3(n^3, b, c) V(rho(n, c)),

with the radial window rho(n, c) = 4 pi sqrt(N(n^3 b)) / N(c) (this fixes
the c-range N(c) ~ X^{3/2}; the window convention is exposed, not derived).

Kloosterman values are evaluated with exact integer index arithmetic; the
per-modulus tables S_3(z, b, q) for prime powers q are produced by one FFT
over the residue ring and composite moduli are assembled through the exact
twisted multiplicativity

    S_3(mu, nu, c) = prod_i ((alpha_i)/q_i)_3 S_3(alpha_i^2 mu, nu, q_i),
    alpha_i = (c/q_i)^{-1} mod q_i,

which is unit-tested against the brute sum.  Per-term exact summation over
the default grid would take ~1e14 operations; the FFT route keeps the full
grid inside the budget while agreeing with the exact path to ~1e-12.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import constants as consts
from .bessel import TestFunctionPair, h_transform, preset
from .characters import cubic_symbol, gauss_sum
from .eisenstein import (
    Eisenstein,
    ONE,
    euler_phi,
    is_primary,
    is_unit,
    gcd,
    mobius,
    primary_primes_up_to,
)
from .modring import InertPrimePowerRing, SplitPrimePowerRing, prime_power_ring

FOUR_PI = 4 * math.pi


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    b: Eisenstein
    D: Eisenstein
    preset_name: str = "bump"
    x_grid: tuple = (20.0, 40.0, 80.0, 160.0, 320.0)
    budget: float = 5e9  # maximum number of (n, c) summation cells per X
    unfold: float = 1.0 / 6.0
    hilbert_unit: object = 1
    jobs: int = 1

    def __post_init__(self):
        self.pair: TestFunctionPair = preset(self.preset_name)
        if not is_primary(self.D):
            raise ValueError("level D must be primary")

    def n_norm_range(self, X: float):
        lo, hi = self.pair.g_support
        return lo * X, hi * X

    def c_norm_range(self, X: float):
        """Union over the n-window of the V-support constraint on N(c)."""
        vlo, vhi = self.pair.V_support
        nlo, nhi = self.n_norm_range(X)
        s = math.sqrt(self.b.norm())
        return (FOUR_PI * nlo**1.5 * s / vhi, FOUR_PI * nhi**1.5 * s / vlo)

    def to_json(self):
        return {
            "b": str(self.b), "D": str(self.D), "preset": self.preset_name,
            "x_grid": list(self.x_grid), "budget": self.budget,
            "unfold": self.unfold, "hilbert_unit": str(self.hilbert_unit),
        }


# ---------------------------------------------------------------------------
# enumeration of primary moduli with factorizations


def primary_with_factorization(bound: float):
    """All primary c with N(c) <= bound as (c, ((pi, e), ...)), norm order.

    Built as products of primary prime powers, so factorizations come free.
    """
    bound = int(bound)
    primes = primary_primes_up_to(bound)
    out = [(ONE, ())]

    def extend(idx: int, cur: Eisenstein, curn: int, fac: tuple):
        for i in range(idx, len(primes)):
            p = primes[i]
            pn = p.norm()
            if curn * pn > bound:
                break
            c, cn, e = cur, curn, 0
            while cn * pn <= bound:
                c = c * p
                cn = cn * pn
                e += 1
                out.append((c, fac + ((p, e),)))
                extend(i + 1, c, cn, fac + ((p, e),))

    extend(0, ONE, 1, ())
    out.sort(key=lambda t: (t[0].norm(), t[0].a, t[0].b))
    return out


# ---------------------------------------------------------------------------
# prime-power Kloosterman tables


class _PrimePowerTable:
    """S_3(z, nu, q) for all z mod a prime power q, via one ring FFT."""

    def __init__(self, pi: Eisenstein, k: int, nu: Eisenstein):
        ring = prime_power_ring(pi, k)
        self.ring = ring
        self.norm = ring.N
        if isinstance(ring, SplitPrimePowerRing):
            q = ring.q
            n = ring.all_residues()
            mask = ring.unit_mask(n)
            units = n[mask]
            inv = ring.inverse(units)
            sym = ring.symbol_index(units)
            t_out = (ring.t0 * (ring.embed(nu) * inv % q)) % q
            h = np.zeros(q, dtype=np.complex128)
            h[units] = np.exp(2j * np.pi * (sym / 3.0 + t_out / q))
            self.F = np.fft.fft(h)
            self.t0 = ring.t0
            self.split = True
        else:
            P = ring.P
            u, v = ring.all_residues()
            mask = ring.unit_mask(u, v)
            uu, vv = u[mask], v[mask]
            iu, iv = ring.inverse(uu, vv)
            sym = ring.symbol_index(uu, vv)
            nu_u, nu_v = ring.embed(nu)
            ou = (nu_u * iu - nu_v * iv) % P
            ov = (nu_u * iv + nu_v * iu - nu_v * iv) % P
            t_out = ring.phase_index(ou, ov)
            h = np.zeros((P, P), dtype=np.complex128)
            sgn = 1 if ring.ca > 0 else -1
            h[uu, vv] = np.exp(2j * np.pi * (sym / 3.0 + (sgn * ov) % P / P))
            # pairing exp(2 pi i sgn (zv*u + (zu - zv)*v)/P): fft2 frequencies
            self.F2 = np.fft.fft2(h)
            self.sgn = sgn
            self.P = P
            self.split = False

    def lookup_split(self, z: np.ndarray) -> np.ndarray:
        q = self.ring.q
        return self.F[(-self.t0 * (z % q)) % q]

    def lookup_pair(self, zu: np.ndarray, zv: np.ndarray) -> np.ndarray:
        P = self.P
        return self.F2[(-self.sgn * zv) % P, (-self.sgn * (zu - zv)) % P]


def kloosterman_table(pi: Eisenstein, k: int, nu: Eisenstein) -> _PrimePowerTable:
    return _PrimePowerTable(pi, k, nu)


# ---------------------------------------------------------------------------
# geometric side


class _NWindow:
    """Nonzero n sorted by norm with precomputed weights for one X."""

    def __init__(self, cfg: ExperimentConfig, X: float):
        nlo, nhi = cfg.n_norm_range(X)
        amax = int(math.isqrt(int(4 * nhi / 3))) + 2
        pts = []
        for a in range(-amax, amax + 1):
            for b in range(-amax, amax + 1):
                nn = a * a - a * b + b * b
                if nlo < nn < nhi:
                    pts.append((nn, a, b))
        pts.sort()
        self.norms = np.array([p[0] for p in pts], dtype=np.float64)
        self.elts = [Eisenstein(a, b) for _, a, b in pts]
        self.g_w = cfg.pair.g(self.norms / X)
        s = math.sqrt(cfg.b.norm())
        self.rho_num = FOUR_PI * self.norms**1.5 * s
        self.cube_cache: dict = {}

    def cubes_mod(self, table: _PrimePowerTable):
        key = (table.ring.pi, table.ring.k)
        if key in self.cube_cache:
            return self.cube_cache[key]
        ring = table.ring
        if table.split:
            q = ring.q
            vals = np.array([(e.a + e.b * ring.w_img) % q for e in self.elts],
                            dtype=np.int64)
            out = _powmod(vals, 3, q)
        else:
            P = ring.P
            au = np.array([e.a % P for e in self.elts], dtype=np.int64)
            av = np.array([e.b % P for e in self.elts], dtype=np.int64)
            from .modring import _pair_pow

            out = _pair_pow(au, av, 3, P)
        self.cube_cache[key] = out
        return out


def _powmod(x: np.ndarray, e: int, m: int) -> np.ndarray:
    r = np.ones_like(x)
    b = x % m
    while e:
        if e & 1:
            r = (r * b) % m
        b = (b * b) % m
        e >>= 1
    return r


def _scalar_inverse_mod(x: Eisenstein, ring) -> int | tuple:
    if isinstance(ring, SplitPrimePowerRing):
        return pow(ring.embed(x), ring.phi - 1, ring.q)
    u, v = ring.embed(x)
    iu, iv = ring.inverse(np.array([u]), np.array([v]))
    return int(iu[0]), int(iv[0])


def geometric_side(cfg: ExperimentConfig, X: float, return_cells: bool = False):
    """The weighted Kloosterman double sum at cutoff X."""
    nw = _NWindow(cfg, X)
    if len(nw.elts) == 0:
        return (0j, 0) if return_cells else 0j
    clo, chi = cfg.c_norm_range(X)
    mods = [mc for mc in primary_with_factorization(chi)
            if mc[0].norm() > max(1.0, 0.999 * clo * (cfg.pair.V_support[0] / cfg.pair.V_support[1]) ** 0)
            ]
    # per-c window bounds on N(n): rho in V support
    vlo, vhi = cfg.pair.V_support
    # group moduli by largest prime-power factor so its FFT table is built once
    def largest_key(fac):
        if not fac:
            return (1, 0, 0, 0)
        p, e = max(fac, key=lambda t: t[0].norm() ** t[1])
        return (p.norm() ** e, p.a, p.b, e)

    order = sorted(range(len(mods)), key=lambda i: (largest_key(mods[i][1]), mods[i][0].norm(), mods[i][0].a, mods[i][0].b))
    sq_b = math.sqrt(cfg.b.norm())
    n_norms = nw.norms
    partials = np.zeros(len(mods), dtype=np.complex128)
    cells = 0
    table_cache: dict = {}
    current_big = None
    big_table = None
    D = cfg.D

    for oi in order:
        c, fac = mods[oi]
        if not fac:
            continue  # c = 1 contributes S_3 = 1 but rho constraint below
        nc = c.norm()
        if nc <= 1:
            continue
        if D.norm() > 1 and not _divides(D, c):
            continue
        # n window for this modulus: vlo < 4 pi N(n)^{3/2} sqrt(Nb)/N(c) < vhi
        lo_n = (vlo * nc / (FOUR_PI * sq_b)) ** (2.0 / 3.0)
        hi_n = (vhi * nc / (FOUR_PI * sq_b)) ** (2.0 / 3.0)
        i0 = np.searchsorted(n_norms, lo_n, "right")
        i1 = np.searchsorted(n_norms, hi_n, "left")
        if i1 <= i0:
            continue
        cells += i1 - i0
        if cells > cfg.budget:
            raise BudgetExceeded(f"cell count exceeded budget {cfg.budget:g} at X={X}")
        val = np.ones(i1 - i0, dtype=np.complex128)
        for (p, e) in fac:
            key = (p.a, p.b, e)
            keysz = p.norm() ** e
            if key in table_cache:
                tab = table_cache[key]
            else:
                tab = _PrimePowerTable(p, e, cfg.b)
                # cache small tables permanently, largest-factor table once
                if keysz * keysz <= chi * 1.01 or True:
                    pass
                if largest_key(fac)[0] == keysz and keysz > math.sqrt(chi):
                    if current_big != key:
                        current_big = key
                        big_table = tab
                    tab = big_table
                else:
                    table_cache[key] = tab
            q_elt = p**e
            cof = _exact_div(c, q_elt)
            cubes = nw.cubes_mod(tab)
            if tab.split:
                alpha = _scalar_inverse_mod(cof, tab.ring)
                a2 = (alpha * alpha) % tab.ring.q
                z = (a2 * cubes[i0:i1]) % tab.ring.q
                fvals = tab.lookup_split(z)
                sym_j = tab.ring.symbol_index(np.array([alpha], dtype=np.int64))[0]
            else:
                au, av = _scalar_inverse_mod(cof, tab.ring)
                P = tab.ring.P
                a2u, a2v = (au * au - av * av) % P, (2 * au * av - av * av) % P
                cu, cv = cubes
                zu = (a2u * cu[i0:i1] - a2v * cv[i0:i1]) % P
                zv = (a2u * cv[i0:i1] + a2v * cu[i0:i1] - a2v * cv[i0:i1]) % P
                fvals = tab.lookup_pair(zu, zv)
                sym_j = tab.ring.symbol_index(np.array([au], dtype=np.int64),
                                              np.array([av], dtype=np.int64))[0]
            val = val * fvals * np.exp(2j * np.pi * sym_j / 3.0)
        rho = nw.rho_num[i0:i1] / nc
        weights = nw.g_w[i0:i1] * cfg.pair.V(rho)
        partials[oi] = np.dot(weights, val) / nc
    total = cfg.unfold / X * complex(partials.sum())
    return (total, cells) if return_cells else total


def _divides(q: Eisenstein, c: Eisenstein) -> bool:
    from .eisenstein import divides

    return divides(q, c)


def _exact_div(c: Eisenstein, q: Eisenstein) -> Eisenstein:
    from .eisenstein import exact_div

    return exact_div(c, q)


# ---------------------------------------------------------------------------
# the Poisson m = 0 term


_prime_local_cache: dict = {}


def _prime_local(sigma: Eisenstein, b: Eisenstein):
    """(g(1,sigma) numeric, (b^2/sigma)_3, locals) for the m=0 assembly."""
    key = (sigma.a, sigma.b, b.a, b.b)
    if key not in _prime_local_cache:
        g1 = complex(gauss_sum(1, ONE, sigma).value())
        _prime_local_cache[key] = g1
    return _prime_local_cache[key]


def m0_local_value(sigma: Eisenstein, bprime: Eisenstein) -> complex:
    """sum_x (x/sigma)_3 e(b' xbar/sigma) T(x,0,sigma) at a prime sigma:
    (b'^2/sigma)_3 N(sigma) + ram_sigma(b') g(1,sigma)."""
    n = sigma.norm()
    g1 = _prime_local(sigma, bprime)
    s = cubic_symbol(bprime * bprime, sigma)
    if s.is_zero:
        first = 0j
        ram = euler_phi(sigma)
    else:
        first = n * s.value()
        ram = -1
    return first + ram * g1


def m_zero_term(cfg: ExperimentConfig, X: float) -> complex:
    """The m = 0 Poisson term, assembled from the pinned local evaluations
    over squarefree moduli (square-full moduli vanish exactly)."""
    vlo, vhi = cfg.pair.V_support
    clo, chi = cfg.c_norm_range(X)
    sq_b = math.sqrt(cfg.b.norm())
    b = cfg.b
    nodes, wts = np.polynomial.legendre.leggauss(48)
    glo, ghi = cfg.pair.g_support
    u_lo, u_hi = math.sqrt(glo), math.sqrt(ghi)
    u = 0.5 * (u_hi - u_lo) * nodes + 0.5 * (u_hi + u_lo)
    uw = wts * 0.5 * (u_hi - u_lo)
    gu = cfg.pair.g(u * u) * u
    covol = math.sqrt(3.0) / 2.0
    total = 0j
    for c, fac in primary_with_factorization(chi):
        nc = c.norm()
        if nc <= 1 and False:
            pass
        if any(e > 1 for _, e in fac):
            continue
        if cfg.D.norm() > 1 and not _divides(cfg.D, c):
            continue
        # P0(c) via twisted multiplicativity over the prime factors
        val = 1j * 0 + 1.0
        for p, _e in fac:
            ring = prime_power_ring(p, 1)
            cof = _exact_div(c, p)
            if isinstance(ring, SplitPrimePowerRing):
                alpha_i = pow(ring.embed(cof), ring.phi - 1, ring.q)
                sym_alpha = ring.symbol_index(np.array([alpha_i], dtype=np.int64))[0]
                alpha = Eisenstein(int(alpha_i), 0)
            else:
                au, av = _scalar_inverse_mod(cof, ring)
                sym_alpha = ring.symbol_index(np.array([au], dtype=np.int64),
                                              np.array([av], dtype=np.int64))[0]
                alpha = Eisenstein(int(au), int(av))
            local = m0_local_value(p, alpha * alpha * b)
            val *= np.exp(2j * np.pi * ((-sym_alpha) % 3) / 3.0) * local
        # archimedean weight: int g(u^2) V(4 pi X^{3/2} u^3 sqrt(Nb)/N(c)) u du
        rho = FOUR_PI * X**1.5 * u**3 * sq_b / nc
        wint = float(np.dot(uw, gu * cfg.pair.V(rho)))
        if wint == 0.0:
            continue
        total += val * wint / nc**2
    return cfg.unfold * 2 * math.pi / covol * complex(total)


# ---------------------------------------------------------------------------
# main term and the experiment report


def main_term(cfg: ExperimentConfig, X: float, h_value: float | None = None) -> complex:
    """K_{p,D} X^{1/2} h(V,1/3,0) (b = p), or the p^3 bracket analog."""
    if X <= 0:
        return 0j
    if h_value is None:
        h_value = complex(h_transform(cfg.pair, 1.0 / 3.0, 0)).real
    from .eisenstein import factor

    fac = factor(cfg.b)
    if len(fac.factors) != 1 or fac.lambda_exponent:
        raise ValueError("b must be p or p^3 for the main term")
    p, e = fac.factors[0]
    if e == 1:
        K = consts.compute_K_pD(p, cfg.D, cfg.hilbert_unit)
    elif e == 3:
        K = (consts.main_term_bracket_pcubed(p, cfg.D)
             * (4 * math.pi**3 / 9) / (6 * consts.SQRT_M3**3 * cfg.D.norm()))
    else:
        raise ValueError("b must be p or p^3")
    return K * math.sqrt(X) * h_value


def fit_loglog_slope(xs, ys):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.abs(np.asarray(ys)) + 1e-300
    A = np.vstack([np.log(xs), np.ones_like(xs)]).T
    sol, *_ = np.linalg.lstsq(A, np.log(ys), rcond=None)
    return float(sol[0])


def asymptotic_experiment(cfg: ExperimentConfig) -> dict:
    """Table of (X, geometric side, main term, m=0 term, residual) with
    fitted log-log slopes."""
    if len(cfg.x_grid) < 5 or max(cfg.x_grid) / min(cfg.x_grid) < 8:
        raise ValueError("X grid must have >= 5 points spanning a factor >= 8")
    h_value = complex(h_transform(cfg.pair, 1.0 / 3.0, 0)).real
    rows = []
    for X in cfg.x_grid:
        t0 = time.time()
        geo, cells = geometric_side(cfg, X, return_cells=True)
        m0 = m_zero_term(cfg, X)
        mt = main_term(cfg, X, h_value=h_value)
        rows.append({
            "X": X,
            "geometric": [geo.real, geo.imag],
            "main": [mt.real, mt.imag],
            "m_zero": [m0.real, m0.imag],
            "residual": [geo.real - mt.real, geo.imag - mt.imag],
            "cells": int(cells),
            "elapsed_ms": int(1000 * (time.time() - t0)),
        })
    xs = [r["X"] for r in rows]
    report = {
        "config": cfg.to_json(),
        "rows": rows,
        "slopes": {
            "geometric": fit_loglog_slope(xs, [complex(*r["geometric"]) for r in rows]),
            "main": fit_loglog_slope(xs, [complex(*r["main"]) for r in rows]),
            "m_zero": fit_loglog_slope(xs, [complex(*r["m_zero"]) for r in rows]),
            "residual": fit_loglog_slope(xs, [complex(*r["residual"]) for r in rows]),
        },
        "h_value": h_value,
    }
    return report


def report_csv(report: dict) -> str:
    lines = ["X,re,im,main_re,main_im,resid"]
    for r in report["rows"]:
        resid = math.hypot(*r["residual"])
        lines.append(f"{r['X']},{r['geometric'][0]},{r['geometric'][1]},"
                     f"{r['main'][0]},{r['main'][1]},{resid}")
    return "\n".join(lines) + "\n"
