"""Bessel kernel B_{nu,p}, the normalized power series J*_mu, the spectral
transform h(V, nu, p), and the cubic w-integral identity.

Conventions (oracle-pinned, see the package docs):

* ``bessel_kernel`` implements the two-term J*J* difference over
  sin(pi(nu-p)).  At (nu, p) = (1/3, 0) it evaluates to
  (|J_{-1/3}(z)|^2 - |J_{1/3}(z)|^2)/sin(pi/3); the source text asserts the
  same expression with a plus sign, which is inconsistent with its own
  kernel display and with the w-integral below, and is therefore a typo.
* the cubic w-integral (the additive character e(x) = exp(2 pi i
  (x/delta + x'/delta')), delta = sqrt(-3)) evaluates exactly to

      int_C e((z w^3/b - 3 wbar z)/2) d+w
        = N(b)^{1/2} (pi^2/(3 sin(pi/3)))
          * [J_{-1/3}(2 pi z sqrt(b)/sqrt(3))^2 - J_{1/3}(...)^2]

  for real z > 0: the Bessel argument carries a 1/sqrt(3) from the
  character normalization and the combination is the minus one.  This is
  proved via the Airy product identity int Ai(x - t^2) dt
  = 2^{2/3} pi Ai Bi(-2^{-2/3} x) and verified here by regularized
  quadrature.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import jv as _jv

SIN_PI_3 = math.sin(math.pi / 3)


class SeriesDivergenceGuard(ValueError):
    pass


class QuadratureNonConvergence(RuntimeError):
    pass


class RegularizationNonConvergence(RuntimeError):
    pass


def j_star(mu: complex, z: complex) -> complex:
    """J*_mu(z) = J_mu(z) (z/2)^{-mu} = sum (-1)^n (z/2)^{2n} / (n! Gamma(n+mu+1)).

    Entire in z^2; power-series evaluation with tail bound 1e-12 relative.
    """
    z = complex(z)
    mu = complex(mu)
    if abs(z) > 50:
        raise SeriesDivergenceGuard("power-series regime is |z| <= 50")
    if abs(z) > 14:
        return _j_star_mp(mu, z)
    w = -(z / 2) ** 2
    term = 1.0 / _gamma(mu + 1)
    acc = term
    for n in range(1, 300):
        term = term * w / (n * (n + mu))
        acc += term
        if abs(term) <= 1e-17 * max(abs(acc), 1e-30) and abs(w) / (n * n) < 0.5:
            break
    return complex(acc)


def _j_star_mp(mu: complex, z: complex) -> complex:
    import mpmath as mp

    with mp.workdps(int(30 + abs(z))):
        zz = mp.mpc(z)
        mm = mp.mpc(mu)
        w = -((zz / 2) ** 2)
        term = 1 / mp.gamma(mm + 1)
        acc = term
        for n in range(1, 2000):
            term = term * w / (n * (n + mm))
            acc += term
            if abs(term) < mp.mpf(10) ** (-mp.mp.dps + 4) * max(abs(acc), mp.mpf(10) ** -40):
                if abs(w) / (n * n) < 0.5:
                    break
        return complex(acc)


def bessel_j(mu: float, x: float) -> float:
    """Standard J-Bessel via the J* series (real order/argument)."""
    return float((j_star(mu, x) * (x / 2) ** mu).real)


def bessel_kernel(nu: complex, p: int, z: complex) -> complex:
    """B_{nu,p}(z): the two-term J*J* difference over sin(pi (nu - p)).

    Near integer nu - p the sin pole is removable; evaluated there by
    averaging at nu +- 1e-6 (error ~ 1e-12 for smooth data).
    """
    if z == 0:
        raise ValueError("kernel is singular at z = 0")
    nu = complex(nu)
    s = cmath.sin(cmath.pi * (nu - p))
    if abs(s) < 1e-4:
        eps = 1e-6
        return 0.5 * (bessel_kernel(nu + eps, p, z) + bessel_kernel(nu - eps, p, z))
    zb = z.conjugate() if isinstance(z, complex) else complex(z)
    az = abs(z)
    phase = 1j * z / az
    t1 = az / 2
    term1 = t1 ** (-2 * nu) * phase ** (2 * p) * j_star(-nu + p, z) * j_star(-nu - p, zb)
    term2 = t1 ** (2 * nu) * phase ** (-2 * p) * j_star(nu - p, z) * j_star(nu + p, zb)
    return (term1 - term2) / s


def kernel_13_identity(z: float) -> float:
    """(|J_{-1/3}(z)|^2 - |J_{1/3}(z)|^2)/sin(pi/3), the value of B_{1/3,0}
    on the positive real ray (independent route via plain J-Bessel)."""
    jm = _jv(-1.0 / 3.0, z)
    jp = _jv(1.0 / 3.0, z)
    return float((jm * jm - jp * jp) / SIN_PI_3)


def kernel_13_stated_plus(z: float) -> float:
    """The source text's version with '+'; kept for the defect report."""
    jm = _jv(-1.0 / 3.0, z)
    jp = _jv(1.0 / 3.0, z)
    return float((jm * jm + jp * jp) / SIN_PI_3)


# ---------------------------------------------------------------------------
# test functions


def _bump(u):
    u = np.asarray(u, dtype=np.float64)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 / (ui * ui - 1.0))
    return out


class TestFunctionPair:
    """Smooth compactly supported weights (g, V).

    g lives on [g_lo, g_hi] in the positive reals with the normalization
    int g(t) sqrt(t) dt = 1; V is radial on the annulus [V_lo, V_hi].
    """

    def __init__(self, name: str, g_raw, g_support, v_radial, v_support):
        self.name = name
        self.g_support = g_support
        self.V_support = v_support
        nodes, weights = np.polynomial.legendre.leggauss(200)
        a, b = g_support
        t = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        mass = float(np.dot(weights, g_raw(t) * np.sqrt(t)) * 0.5 * (b - a))
        self._g_raw = g_raw
        self._scale = 1.0 / mass
        self._v = v_radial

    def g(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        a, b = self.g_support
        inside = (t > a) & (t < b)
        out[inside] = self._g_raw(t[inside]) * self._scale
        return out if out.shape else float(out)

    def V(self, r):
        r = np.asarray(r, dtype=np.float64)
        out = np.zeros_like(r)
        a, b = self.V_support
        inside = (r > a) & (r < b)
        out[inside] = self._v(r[inside])
        return out if out.shape else float(out)


def preset(name: str = "bump") -> TestFunctionPair:
    """Reference test functions: g = bump on [1,2] ("bump-12"), V = radial
    bump in log|z| on [1/e, e] ("bump-log-annulus")."""
    if name not in ("bump", "bump-12", "bump-log-annulus"):
        raise KeyError(f"unknown preset {name!r}")
    g_raw = lambda t: _bump(2.0 * t - 3.0)
    v_rad = lambda r: _bump(np.log(r))
    return TestFunctionPair("bump", g_raw, (1.0, 2.0), v_rad, (math.exp(-1), math.e))


# ---------------------------------------------------------------------------
# the h transform


def h_transform(V: TestFunctionPair, nu: complex, p: int,
                tol: float = 1e-8, max_level: int = 4) -> complex:
    """h(V, nu, p) = int V(z) B_{nu,p}(z) d+z/|z|^2, adaptive polar quadrature.

    Error estimated by successive refinement; raises on non-convergence.
    """
    a, b = V.V_support
    prev = None
    for level in range(max_level + 1):
        nr = 48 * 2**level
        nth = 32 * 2**level
        rn, rw = np.polynomial.legendre.leggauss(nr)
        r = 0.5 * (b - a) * rn + 0.5 * (a + b)
        rw = rw * 0.5 * (b - a)
        th = (np.arange(nth) + 0.5) * (2 * np.pi / nth)
        vals = np.empty((nr, nth), dtype=np.complex128)
        for i, ri in enumerate(r):
            for k, tk in enumerate(th):
                vals[i, k] = bessel_kernel(nu, p, ri * cmath.exp(1j * tk))
        vr = V.V(r)
        integ = complex(np.dot(rw * vr / r, vals.sum(axis=1)) * (2 * np.pi / nth))
        if prev is not None and abs(integ - prev) <= tol:
            return integ
        prev = integ
    raise QuadratureNonConvergence(f"h transform did not reach {tol}")


def h_transform_radial_13(V: TestFunctionPair, tol: float = 1e-8) -> float:
    """h(V, 1/3, 0) via the real-ray kernel identity and the rotational
    average of |J(z)|^2 products; consistency partner of h_transform.

    For the radial V the angular integral applies to
    (|J_{-1/3}(re^{it})|^2 - |J_{1/3}(re^{it})|^2)/sin(pi/3).
    """
    a, b = V.V_support
    prev = None
    for level in range(5):
        nr = 64 * 2**level
        nth = 48 * 2**level
        rn, rw = np.polynomial.legendre.leggauss(nr)
        r = 0.5 * (b - a) * rn + 0.5 * (a + b)
        rw = rw * 0.5 * (b - a)
        th = (np.arange(nth) + 0.5) * (2 * np.pi / nth)
        acc = np.zeros(nr)
        for k, tk in enumerate(th):
            z = r * cmath.exp(1j * tk)
            jm = np.array([j_star(-1 / 3, zi) * (zi / 2) ** (-1 / 3) for zi in z])
            jp = np.array([j_star(1 / 3, zi) * (zi / 2) ** (1 / 3) for zi in z])
            acc += (np.abs(jm) ** 2 - np.abs(jp) ** 2) / SIN_PI_3
        integ = float(np.dot(rw * V.V(r) / r, acc) * (2 * np.pi / nth))
        if prev is not None and abs(integ - prev) <= tol:
            return integ
        prev = integ
    raise QuadratureNonConvergence("radial h transform did not converge")


# ---------------------------------------------------------------------------
# the cubic w-integral


def w_integral_quadrature(b_norm_sqrt: float, z: float,
                          eps_list=(0.1, 0.05, 0.025, 0.0125)) -> complex:
    """int_C e((z w^3/b - 3 wbar z)/2) d+w, regularized; real z > 0.

    The phase is A Im(w^3) + C Im(w) with A = 2 pi z/(sqrt3 b'),
    C = 2 sqrt3 pi z.  The v-line integral is a pure cubic Fourier
    transform, evaluated in closed form through the Airy function; the
    remaining oscillatory u-integral is damped by exp(-eps u^2) and
    extrapolated eps -> 0 (Richardson, two levels).
    """
    from scipy.special import airy as _airy

    A = 2 * math.pi * z / (math.sqrt(3.0) * b_norm_sqrt)
    C = 2 * math.sqrt(3.0) * math.pi * z
    a3 = (3 * A) ** (1.0 / 3.0)
    scale = 2 * math.pi / a3  # v-line prefactor
    a_coef = a3 * a3  # (3A)^{2/3}
    c_coef = C / a3

    def damped(eps: float) -> float:
        U = math.sqrt(45.0 / eps)
        # resolve the Airy oscillation: d(phase)/du ~ 2 sqrt(a)(a u^2 + c)^{1/2}
        du = 0.15 / (2.0 * math.sqrt(a_coef) * math.sqrt(a_coef * U * U + c_coef))
        n = int(U / du) + 1
        u = (np.arange(n) + 0.5) * (U / n)
        vals = _airy(-(a_coef * u * u + c_coef))[0]
        return float(np.sum(vals * np.exp(-eps * u * u)) * (U / n))

    v = np.array([damped(e) for e in eps_list])
    r1 = 2 * v[1:] - v[:-1]  # kills the O(eps) term under eps halving
    r2 = (4 * r1[1:] - r1[:-1]) / 3.0  # kills O(eps^2)
    return complex(2 * scale * r2[-1])


def w_integral_bessel_form(b_norm_sqrt: float, z: float) -> float:
    """N(b)^{1/2} (pi^2/(3 sin pi/3)) [J_{-1/3}(x)^2 - J_{1/3}(x)^2],
    x = 2 pi z sqrt(b)/sqrt(3); built from j_star."""
    x = 2 * math.pi * z * math.sqrt(b_norm_sqrt) / math.sqrt(3.0)
    jm = float((j_star(-1 / 3, x) * (x / 2) ** (-1 / 3)).real)
    jp = float((j_star(1 / 3, x) * (x / 2) ** (1 / 3)).real)
    return b_norm_sqrt * (math.pi**2 / (3 * SIN_PI_3)) * (jm * jm - jp * jp)


def w_integral_stated_form(b_norm_sqrt: float, z: float) -> float:
    """The source display: plus combination at argument 2 pi z sqrt(b);
    kept for the defect report."""
    x = 2 * math.pi * z * math.sqrt(b_norm_sqrt)
    jm = float((j_star(-1 / 3, x) * (x / 2) ** (-1 / 3)).real)
    jp = float((j_star(1 / 3, x) * (x / 2) ** (1 / 3)).real)
    return b_norm_sqrt * (math.pi**2 / (3 * SIN_PI_3)) * (jm * jm + jp * jp)


def kuznetsov_w_integral(b, z: float, rel_tol: float = 1e-3):
    """(lhs, rhs, agree): regularized quadrature against the Bessel form.

    b may be an Eisenstein element (its norm is used) or a positive number.
    """
    from .eisenstein import Eisenstein

    if isinstance(b, Eisenstein):
        bq = math.sqrt(b.norm())
    else:
        bq = float(b)
    lhs = w_integral_quadrature(bq, z)
    rhs = w_integral_bessel_form(bq, z)
    agree = abs(lhs - rhs) <= rel_tol * max(abs(rhs), 1e-6)
    if not agree and abs(lhs - rhs) > 50 * rel_tol * max(abs(rhs), 1e-6):
        raise RegularizationNonConvergence(
            f"w-integral mismatch beyond tolerance at (b={bq}, z={z})")
    return complex(lhs), float(rhs), bool(agree)
