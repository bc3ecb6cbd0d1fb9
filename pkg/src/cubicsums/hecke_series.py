"""Formal power-series checks for the Hecke-recursion manipulations.

Coefficients live in Q(w) (pairs of rationals a + b w); series are plain
truncated polynomial arithmetic, exact throughout.  The recursion is

    lam * c_0 = c_1 + G          (G = gauss correction := g_2(1,p)(-1,p^2)/N(p) * a_1)
    lam * c_m = c_{m+1} + N(p)^3 c_{m-1}     (m >= 1)

for c_m = a_{p^{3m}}, and the generating function satisfies

    H(x) (1 - lam x + N(p)^3 x^2) = c_0 - G x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class QOmega:
    """a + b w with rational a, b; the field Q(w)."""

    a: Fraction
    b: Fraction

    @classmethod
    def of(cls, a, b=0) -> "QOmega":
        return cls(Fraction(a), Fraction(b))

    def __add__(self, other):
        other = _coerce(other)
        return QOmega(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QOmega(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return QOmega(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def inverse(self) -> "QOmega":
        n = self.a * self.a - self.a * self.b + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("QOmega inverse of 0")
        conj_a, conj_b = self.a - self.b, -self.b
        return QOmega(conj_a / n, conj_b / n)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QOmega({self.a}, {self.b})"


def _coerce(x) -> QOmega:
    if isinstance(x, QOmega):
        return x
    if isinstance(x, (int, Fraction)):
        return QOmega(Fraction(x), Fraction(0))
    raise TypeError(f"cannot coerce {x!r}")


QO_ZERO = QOmega.of(0)
QO_ONE = QOmega.of(1)


class FormalSeries:
    """Truncated power series over Q(w); order tracked, never exceeded."""

    def __init__(self, coeffs, order: int):
        self.order = order
        cs = list(coeffs)[: order + 1]
        cs += [QO_ZERO] * (order + 1 - len(cs))
        self.coeffs = [_coerce(c) for c in cs]

    def __add__(self, other):
        m = min(self.order, other.order)
        return FormalSeries([self.coeffs[i] + other.coeffs[i] for i in range(m + 1)], m)

    def __sub__(self, other):
        m = min(self.order, other.order)
        return FormalSeries([self.coeffs[i] - other.coeffs[i] for i in range(m + 1)], m)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QOmega)):
            return FormalSeries([c * other for c in self.coeffs], self.order)
        m = min(self.order, other.order)
        out = [QO_ZERO] * (m + 1)
        for i, ci in enumerate(self.coeffs[: m + 1]):
            if not ci:
                continue
            for j in range(m + 1 - i):
                out[i + j] = out[i + j] + ci * other.coeffs[j]
        return FormalSeries(out, m)

    __rmul__ = __mul__

    def inverse(self) -> "FormalSeries":
        c0 = self.coeffs[0]
        inv0 = c0.inverse()
        out = [inv0]
        for n in range(1, self.order + 1):
            s = QO_ZERO
            for k in range(1, n + 1):
                s = s + self.coeffs[k] * out[n - k] if k < len(self.coeffs) else s
            out.append(-(inv0 * s))
        return FormalSeries(out, self.order)

    def __eq__(self, other):
        m = min(self.order, other.order)
        return all((self.coeffs[i] - other.coeffs[i]) == QOmega(Fraction(0), Fraction(0))
                   for i in range(m + 1))

    def __repr__(self):
        return f"FormalSeries({self.coeffs[:4]}..., order={self.order})"


def hecke_coefficients(lam, a0, a1, gauss_term, Np: int, M: int):
    """The sequence c_m = a_{p^{3m}}, m <= M, from the two-term recursion
    with the first step's Gauss correction folded in."""
    if M < 2:
        raise ValueError("M >= 2 required")
    lam, a0, gauss_term = _coerce(lam), _coerce(a0), _coerce(gauss_term)
    cs = [a0, lam * a0 - gauss_term]
    for m in range(1, M):
        cs.append(lam * cs[m] - (Np**3) * cs[m - 1])
    return cs


def verify_euler_factor(lam, a0, a1, gauss_term, Np: int, M: int) -> bool:
    """H(x) (1 - lam x + N(p)^3 x^2) = a0 - gauss_term * x through x^M."""
    if M < 4:
        raise ValueError("M >= 4 required")
    cs = hecke_coefficients(lam, a0, a1, gauss_term, Np, M)
    H = FormalSeries(cs, M)
    quad = FormalSeries([QO_ONE, -_coerce(lam), QOmega.of(Np**3)], M)
    lhs = H * quad
    rhs = FormalSeries([_coerce(a0), -_coerce(gauss_term)], M)
    return lhs == rhs


def verify_series_split(lam, Np: int, M: int, classes=None) -> bool:
    """The two-bracket Dirichlet-series rearrangement, coefficientwise in
    u = N(p)^{-s} through u^M.

    For free symbols alpha_i = a_{n_i^3}, beta_i = a_{n_i^3 p} over classes
    with (n_i, p) = 1, the rearrangement is linear in (alpha, beta), so the
    basis settings (1, 0), (0, 1) prove it for all symbols; extra numeric
    classes may be supplied as (alpha, beta) pairs.
    """
    if M < 4:
        raise ValueError("M >= 4 required")
    lam = _coerce(lam)
    G = QOmega.of(1)  # the combined g_2(1,p)(-1,p^2)/N(p) weight on beta
    cases = [(QO_ONE, QO_ZERO), (QO_ZERO, QO_ONE)]
    if classes:
        cases += [(_coerce(al), _coerce(be)) for al, be in classes]
    euler = FormalSeries([QO_ONE, -lam, QOmega.of(Np**3)], M).inverse()
    for alpha, beta in cases:
        # full p-power column of the Dirichlet series for this class
        cs = hecke_coefficients(lam, alpha, beta, G * beta, Np, M)
        lhs = FormalSeries(cs, M)
        bracket = FormalSeries([alpha, -(G * beta)], M)
        rhs = euler * bracket
        if not lhs == rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# the residual-Eisenstein pattern


@dataclass(frozen=True)
class QSqrt:
    """x + y sqrt(N) with rational x, y (N a fixed nonsquare integer)."""

    x: Fraction
    y: Fraction
    N: int

    def __add__(self, other):
        return QSqrt(self.x + other.x, self.y + other.y, self.N)

    def __sub__(self, other):
        return QSqrt(self.x - other.x, self.y - other.y, self.N)

    def __mul__(self, other):
        if isinstance(other, int):
            return QSqrt(self.x * other, self.y * other, self.N)
        return QSqrt(self.x * other.x + self.N * self.y * other.y,
                     self.x * other.y + self.y * other.x, self.N)

    __rmul__ = __mul__

    def __eq__(self, other):
        return self.x == other.x and self.y == other.y and self.N == other.N


def eisenstein_pattern_lambda(Np: int, M: int = 8):
    """The unique lam consistent with c_m = N(p)^{3m/2}: exact in Q(sqrt N).

    Returns (lam, gauss_term) as QSqrt values; lam = 2 N(p)^{3/2} and the
    first-step correction equals N(p)^{3/2}.  Raises if the pattern is
    inconsistent at any order <= M.
    """
    half = lambda m: (QSqrt(Fraction(Np ** (3 * m // 2)), Fraction(0), Np)
                      if m % 2 == 0 else
                      QSqrt(Fraction(0), Fraction(Np ** ((3 * m - 1) // 2)), Np))
    c = [half(m) for m in range(M + 2)]
    # lam from m = 1: lam c_1 = c_2 + N^3 c_0
    lam = QSqrt(Fraction(0), Fraction(2 * Np), Np)  # 2 N^{3/2} = 0 + 2N sqrt(N)
    for m in range(1, M):
        if not (lam * c[m]) == (c[m + 1] + (Np**3) * c[m - 1]):
            raise ArithmeticError(f"pattern inconsistent at m = {m}")
    gauss_term = lam * c[0] - c[1]  # = N^{3/2}
    assert gauss_term == QSqrt(Fraction(0), Fraction(Np), Np)
    return lam, gauss_term
