"""Truncated power-series algebra and the generating-function machinery.

Covers the coefficient family sigma_b, the implicit branch Theta with
1 - Theta + w Theta^(1-nu) = 0, the series Sigma(w) and its ODE, the
forward map Xi and its inverse Omega, the ordinary-GF functional
equation, the confluent hypergeometric function, and the exponential-GF
formula.

Series arithmetic is exact on the retained prefix: every operation's
coefficients 0..N agree with those of the untruncated operation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scipy import special as _sp

from .errors import (
    BadBParameter,
    NoConvergence,
    OutsideDisk,
    PoleConfiguration,
    PoleInput,
    ZeroX,
)
from .exact import BiPoly

DISK_SAFETY = 0.95


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """Finite power-series prefix c_0 .. c_N with explicit truncation order N.

    Coefficients may be Fraction (exact mode) or float/complex. Binary
    operations align on the shorter prefix, where both operands are known.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Sequence, order: int | None = None):
        c = list(coeffs)
        if not c:
            raise ValueError("need at least the constant coefficient")
        if order is not None:
            if order < 0:
                raise ValueError("order must be >= 0")
            zero = c[0] * 0
            c = c[: order + 1] + [zero] * (order + 1 - len(c))
        self._c = c

    @property
    def coeffs(self) -> tuple:
        return tuple(self._c)

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __getitem__(self, n: int):
        return self._c[n]

    def _zero(self):
        return self._c[0] * 0

    def _one(self):
        return self._c[0] * 0 + 1

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self._c, order=order)

    # -- linear structure --------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries([self._c[i] + other._c[i] for i in range(n + 1)])

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return TruncatedSeries([self._c[i] - other._c[i] for i in range(n + 1)])

    def __neg__(self):
        return TruncatedSeries([-v for v in self._c])

    def scale(self, s) -> "TruncatedSeries":
        return TruncatedSeries([v * s for v in self._c])

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        n = min(self.order, other.order)
        out = [self._zero() for _ in range(n + 1)]
        for i, a in enumerate(self._c[: n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] = out[i + j] + a * other._c[j]
        return TruncatedSeries(out)

    __rmul__ = __mul__

    # -- multiplicative structure -------------------------------------------

    def reciprocal(self) -> "TruncatedSeries":
        c = self._c
        if c[0] == 0:
            raise ValueError("reciprocal needs a nonzero constant term")
        n = self.order
        inv0 = self._one() / c[0]
        out = [inv0]
        for m in range(1, n + 1):
            s = self._zero()
            for j in range(1, m + 1):
                s = s + c[j] * out[m - j]
            out.append(-s * inv0)
        return TruncatedSeries(out)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(z)), requiring inner's constant term to vanish."""
        if inner._c[0] != 0:
            raise ValueError("composition needs inner constant term 0")
        n = min(self.order, inner.order)
        g = inner.truncate(n)
        res = TruncatedSeries([self._c[n]], order=n)
        for j in range(n - 1, -1, -1):
            res = res * g
            res = TruncatedSeries(
                [res._c[0] + self._c[j]] + res._c[1:], order=n
            )
        return res

    def reversion(self) -> "TruncatedSeries":
        """Compositional inverse g with self(g(z)) = z (prefix-exact)."""
        c = self._c
        n = self.order
        if c[0] != 0:
            raise ValueError("reversion needs zero constant term")
        if n < 1 or c[1] == 0:
            raise ValueError("reversion needs a nonzero linear coefficient")
        inv1 = self._one() / c[1]
        g = [self._zero(), inv1]
        for m in range(2, n + 1):
            cur = TruncatedSeries(g, order=m)
            h = self.truncate(m).compose(cur)
            g.append(-h[m] * inv1)
        return TruncatedSeries(g, order=n)

    def exp(self) -> "TruncatedSeries":
        """Series exponential; needs zero constant term."""
        c = self._c
        if c[0] != 0:
            raise ValueError("exp needs zero constant term")
        n = self.order
        out = [self._one()]
        for m in range(1, n + 1):
            s = self._zero()
            for j in range(1, m + 1):
                s = s + j * c[j] * out[m - j]
            out.append(s / m)
        return TruncatedSeries(out)

    def log(self) -> "TruncatedSeries":
        """Series logarithm; needs constant term 1."""
        c = self._c
        if c[0] != 1:
            raise ValueError("log needs constant term 1")
        n = self.order
        out = [self._zero()]
        for m in range(1, n + 1):
            s = m * c[m]
            for j in range(1, m):
                s = s - j * out[j] * c[m - j]
            out.append(s / m)
        return TruncatedSeries(out)

    def pow_const(self, alpha) -> "TruncatedSeries":
        """self**alpha for arbitrary exponent; needs constant term 1."""
        return self.log().scale(alpha).exp()

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and len(self._c) == len(other._c)
            and all(a == b for a, b in zip(self._c, other._c))
        )

    def __repr__(self):
        head = ", ".join(repr(v) for v in self._c[:6])
        tail = ", ..." if self.order > 5 else ""
        return f"TruncatedSeries([{head}{tail}], order={self.order})"


def geometric_series(ratio, order: int) -> TruncatedSeries:
    """1 + ratio z + ratio^2 z^2 + ... up to the given order."""
    one = ratio * 0 + 1
    c = [one]
    for _ in range(order):
        c.append(c[-1] * ratio)
    return TruncatedSeries(c)


# ---------------------------------------------------------------------------
# The coefficient family sigma_b and its radius
# ---------------------------------------------------------------------------

def sigma_coeff(b: int, nu):
    """b-th series coefficient Gamma(b(1-nu)) / (Gamma(b) Gamma(1-b nu)).

    Computed through the pole-free product (1 - b nu)_(b-1) / (b-1)!,
    obtained by shifting the numerator Gamma by b-1 units; this is a
    polynomial in nu, exact for rational nu and finite for every nu.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    if isinstance(nu, (int, Fraction)):
        nu = Fraction(nu)
        acc = Fraction(1)
        for j in range(b - 1):
            acc = acc * (1 - b * nu + j) / (j + 1)
        return acc
    z = complex(nu)
    acc = 1.0 + 0.0j
    for j in range(b - 1):
        acc = acc * (1 - b * z + j) / (j + 1)
    return acc


def sigma_coeff_gamma(b: int, nu) -> complex:
    """Log-gamma float route for sigma_b, used as an independent cross-check.

    Raises PoleConfiguration when an argument sits on a Gamma pole, where
    only the rewritten product form of :func:`sigma_coeff` applies.
    """
    z = complex(nu)
    for arg in (b * (1 - z), 1 - b * z):
        if abs(arg.imag) < 1e-12 and abs(arg.real - round(arg.real)) < 1e-12 and round(arg.real) <= 0:
            raise PoleConfiguration(f"Gamma argument {arg} is a pole; use the product form")
    return complex(
        cmath.exp(
            _sp.loggamma(b * (1 - z)) - _sp.loggamma(complex(b)) - _sp.loggamma(1 - b * z)
        )
    )


@dataclass(frozen=True)
class NuParameter:
    """Parameter nu with its branch of psi and the radius it induces."""

    nu: complex
    branch: str
    psi: complex
    radius: float


def classify_nu(nu) -> NuParameter:
    """Resolve the three-branch definition of psi(nu) and R = |exp(-psi)|.

    Branches: the cut plane C \\ [0, inf) uses (1-nu)log(1-nu) + nu log(-nu);
    real 0 <= nu < 1 uses (1-nu)log(1-nu) + nu log(nu); real nu >= 1 uses
    (1-nu)log(nu-1) + nu log(nu). nu = 0 is special-cased to R = 1, the
    actual radius of w/(1-w), where the formula degenerates to 0*log 0.
    """
    z = complex(nu)
    if z == 0:
        return NuParameter(0j, "zero", 0j, 1.0)

    def term(coeff: complex, base: complex) -> complex:
        if coeff == 0:
            return 0j  # interpret 0*log(0) limits as 0
        return coeff * cmath.log(base)

    if z.imag == 0 and z.real >= 0:
        v = z.real
        if v < 1:
            psi = term(1 - v, 1 - v) + term(v, v)
            branch = "real-unit"
        else:
            psi = term(1 - v, v - 1) + term(v, v)
            branch = "real-ge1"
    else:
        psi = term(1 - z, 1 - z) + term(z, -z)
        branch = "cut-plane"
    return NuParameter(z, branch, psi, abs(cmath.exp(-psi)))


def radius_R(nu) -> float:
    """Convergence radius R(nu) = |exp(-psi(nu))| of the sigma series."""
    return classify_nu(nu).radius


# ---------------------------------------------------------------------------
# The implicit branch Theta and the closed form of Sigma
# ---------------------------------------------------------------------------

def _check_disk(w: complex, nu, what: str) -> float:
    radius = radius_R(nu)
    if abs(w) >= DISK_SAFETY * radius:
        raise OutsideDisk(
            f"|{what}| = {abs(w):.6g} >= {DISK_SAFETY} * R(nu) = {DISK_SAFETY * radius:.6g}"
        )
    return radius


def theta_eval(w, nu) -> complex:
    """Branch of 1 - Theta + w Theta^(1-nu) = 0 continuous from Theta(0) = 1.

    Newton iteration with continuation: w is approached from 0 along a
    straight path in at most 32 steps, each step warm-started from the
    previous solution, which keeps the iterate on the Theta(0) = 1 branch.
    """
    w = complex(w)
    nu = complex(nu)
    _check_disk(w, nu, "w")
    if w == 0:
        return 1.0 + 0.0j
    expo = 1 - nu
    last_err: Exception | None = None
    for steps in (8, 16, 32):
        theta = 1.0 + 0.0j
        ok = True
        for i in range(1, steps + 1):
            wi = w * (i / steps)
            theta, converged = _newton_theta(theta, wi, expo)
            if not converged:
                ok = False
                break
        if ok:
            resid = abs(1 - theta + w * _cpow(theta, expo))
            if resid <= 1e-12 * max(1.0, abs(theta)):
                return theta
            last_err = NoConvergence(f"residual {resid:.3g} above 1e-12 after continuation")
        else:
            last_err = NoConvergence("Newton step diverged along continuation path")
    raise last_err or NoConvergence("theta continuation failed")


def _cpow(z: complex, a: complex) -> complex:
    """Principal power z^a, continuous from the value 1 at z = 1."""
    return cmath.exp(a * cmath.log(z))


def _newton_theta(theta: complex, w: complex, expo: complex) -> tuple[complex, bool]:
    for _ in range(60):
        p = _cpow(theta, expo)
        f = 1 - theta + w * p
        if abs(f) <= 1e-15 * max(1.0, abs(theta)):
            return theta, True
        fp = -1 + w * expo * p / theta
        if fp == 0:
            return theta, False
        step = f / fp
        if abs(step) > 5.0:  # leaving the branch neighborhood
            return theta, False
        theta = theta - step
    return theta, abs(1 - theta + w * _cpow(theta, expo)) <= 1e-12 * max(1.0, abs(theta))


def sigma_eval(w, nu, method: str = "closed") -> complex:
    """Sigma(w): closed form (Theta(w)-1)/(nu Theta(w)+1-nu), or direct series."""
    w = complex(w)
    znu = complex(nu)
    if method == "closed":
        theta = theta_eval(w, nu)
        return (theta - 1) / (znu * theta + 1 - znu)
    if method == "series":
        _check_disk(w, nu, "w")
        if w == 0:
            return 0.0 + 0.0j
        acc = 0.0 + 0.0j
        small = 0
        for b in range(1, 100001):
            term = sigma_coeff(b, znu) * w**b
            acc += term
            if abs(term) <= 1e-17 * max(abs(acc), 1e-300):
                small += 1
                if small >= 3:
                    return acc
            else:
                small = 0
        raise NoConvergence("sigma series did not settle within 1e5 terms")
    raise ValueError(f"unknown method {method!r}")


@dataclass
class OdeReport:
    """Outcome of the exact coefficient-wise ODE verification."""

    ok: bool
    order: int
    first_failure: tuple[int, object, object] | None = None

    def __bool__(self):
        return self.ok


def ode_check_sigma(order: int, nu) -> OdeReport:
    """Verify w Sigma' = Sigma (1 + (1-2 nu) Sigma - nu(1-nu) Sigma^2) exactly.

    nu must be rational so the check runs in exact arithmetic; returns the
    first failing order with both sides' coefficients on failure.
    """
    nu = Fraction(nu)
    coeffs = [Fraction(0)] + [sigma_coeff(b, nu) for b in range(1, order + 1)]
    s = TruncatedSeries(coeffs)
    s2 = s * s
    s3 = s2 * s
    rhs = s + s2.scale(1 - 2 * nu) - s3.scale(nu * (1 - nu))
    for b in range(1, order + 1):
        lhs_b = b * coeffs[b]
        if lhs_b != rhs[b]:
            return OdeReport(False, order, (b, lhs_b, rhs[b]))
    return OdeReport(True, order)


# ---------------------------------------------------------------------------
# The mapping Xi and its inverse Omega
# ---------------------------------------------------------------------------

def xi_map(z, x, nu) -> complex:
    """Xi(z) = z/(z-1) * ((1-z)/(1-z(1-x)))^nu, principal power branch."""
    z = complex(z)
    x = complex(x)
    nu = complex(nu)
    denom = 1 - z * (1 - x)
    if z == 1 or denom == 0:
        raise PoleInput(f"z = {z} is a pole of the mapping")
    t = (1 - z) / denom
    return z / (z - 1) * _cpow(t, nu)


def xi_series(x, nu, order: int) -> TruncatedSeries:
    """Series prefix of Xi; zero constant term and linear coefficient -1.

    Exact for rational (x, nu), complex otherwise.
    """
    exact = isinstance(x, (int, Fraction)) and isinstance(nu, (int, Fraction))
    if exact:
        x = Fraction(x)
        nu = Fraction(nu)
        one = Fraction(1)
    else:
        x = complex(x)
        nu = complex(nu)
        one = 1.0 + 0.0j
    num = TruncatedSeries([one, -one], order=order)
    den = TruncatedSeries([one, -(1 - x)], order=order)
    t = num * den.reciprocal()
    powered = t.pow_const(nu)
    pref = geometric_series(one, order).scale(-one)  # -1/(1-z)
    pref = TruncatedSeries([one * 0] + list(pref.coeffs), order=order)  # * z
    out = pref * powered
    assert out[0] == 0 and out[1] == -1, "series must start -z + ..."
    return out


def _omega_closed(xi_val, x, nu) -> complex:
    x = complex(x)
    if x == 0:
        raise ZeroX("closed form of the inverse mapping requires x != 0")
    w = complex(xi_val) * x
    s = sigma_eval(w, nu, method="closed")
    znu = complex(nu)
    return s / ((1 - x * (1 - znu)) * s - x)


def omega_map(xi_val, x, nu) -> complex:
    """Inverse mapping Omega with Xi(Omega(xi)) = xi.

    Closed form Sigma(x xi) / ((1 - x(1-nu)) Sigma(x xi) - x) for x != 0.
    At x = 0 the closed form is unavailable and the mapping falls back to
    the reversion of Xi, which there is the involution z/(z-1) exactly.
    """
    try:
        return _omega_closed(xi_val, x, nu)
    except ZeroX:
        xi_val = complex(xi_val)
        return xi_val / (xi_val - 1)


def omega_series(x, nu, order: int) -> TruncatedSeries:
    """Series prefix of Omega; equals the compositional reversion of Xi."""
    exact = isinstance(x, (int, Fraction)) and isinstance(nu, (int, Fraction))
    if exact:
        x = Fraction(x)
        nu = Fraction(nu)
    else:
        x = complex(x)
        nu = complex(nu)
    if x == 0:
        return xi_series(x, nu, order).reversion()
    zero = x * 0
    coeffs = [zero]
    for b in range(1, order + 1):
        coeffs.append(sigma_coeff(b, nu) * x**b)
    s = TruncatedSeries(coeffs)
    den = s.scale(1 - x * (1 - nu)) - TruncatedSeries([x], order=order)
    return s * den.reciprocal()


# ---------------------------------------------------------------------------
# Ordinary-GF functional equation
# ---------------------------------------------------------------------------

def _prefactor_series(x, nu, order: int) -> TruncatedSeries:
    """(1-nu)/(1-z) + nu/(1-z(1-x)) as a series prefix."""
    one = x * 0 + 1
    g1 = geometric_series(one, order).scale(1 - nu)
    g2 = geometric_series(one * (1 - x), order).scale(nu)
    return g1 + g2


def ogf_forward(g_t: TruncatedSeries, x, nu) -> TruncatedSeries:
    """Ordinary GF of the transformed sequence from that of the source.

    G_S(z) = [(1-nu)/(1-z) + nu/(1-z(1-x))] * G_T(Xi(z)), computed by
    series composition on the shared prefix.
    """
    if g_t[0] != 0:
        raise ValueError("generating series must have zero constant term")
    order = g_t.order
    xi = xi_series(x, nu, order)
    return _prefactor_series(x, nu, order) * g_t.compose(xi)


def ogf_inverse(g_s: TruncatedSeries, x, nu) -> TruncatedSeries:
    """Inverse relation: G_T(xi) = G_S(Omega(xi)) / prefactor(Omega(xi))."""
    if g_s[0] != 0:
        raise ValueError("generating series must have zero constant term")
    order = g_s.order
    om = omega_series(x, nu, order)
    pref = _prefactor_series(x, nu, order).compose(om)
    return g_s.compose(om) * pref.reciprocal()


# ---------------------------------------------------------------------------
# Confluent hypergeometric function and the exponential-GF formula
# ---------------------------------------------------------------------------

def _is_nonpositive_int(v: complex, tol: float = 1e-12) -> bool:
    return (
        abs(v.imag) <= tol
        and abs(v.real - round(v.real)) <= tol
        and round(v.real) <= 0
    )


def confluent_phi(a, b, z) -> complex:
    """Kummer's function Phi(a; b; z) = sum (a)_m z^m / ((b)_m m!).

    The lower parameter must avoid the non-positive integers. For
    Re(z) < 0 the Kummer transformation Phi(a;b;z) = e^z Phi(b-a;b;-z)
    is applied first, which keeps the summed series stable.
    """
    a = complex(a)
    b = complex(b)
    z = complex(z)
    if _is_nonpositive_int(b):
        raise BadBParameter(f"lower parameter b = {b} is a non-positive integer")
    if z.real < 0:
        return cmath.exp(z) * _phi_series(b - a, b, -z)
    return _phi_series(a, b, z)


def _phi_series(a: complex, b: complex, z: complex) -> complex:
    acc = 1.0 + 0.0j
    term = 1.0 + 0.0j
    small = 0
    for m in range(100000):
        term = term * (a + m) * z / ((b + m) * (m + 1))
        acc += term
        if term == 0:
            return acc  # terminating case: a is a non-positive integer
        if abs(term) <= 1e-16 * abs(acc) and abs((a + m) * z / ((b + m) * (m + 1))) < 1.0:
            small += 1
            if small >= 2:
                return acc
        else:
            small = 0
    raise NoConvergence("confluent series did not reach its 1e-15 tail bound")


def egf_S(t_seq: Sequence, x, nu, z) -> complex:
    """Exponential GF of the transformed sequence from a source prefix.

    exp(z) * sum_k (-1)^k T_k z^k / k! * Phi(k nu; k; -x z) over the given
    finite prefix; trailing terms below 1e-15 of the running sum are cut.
    """
    x = complex(x)
    nu = complex(nu)
    z = complex(z)
    acc = 0.0 + 0.0j
    small = 0
    fact = 1.0
    for k, t_k in enumerate(t_seq, start=1):
        fact *= k
        if t_k == 0:
            continue
        term = (-1) ** k * t_k * z**k / fact * confluent_phi(k * nu, k, -x * z)
        acc += term
        if abs(term) <= 1e-15 * abs(acc) and k > 4:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return cmath.exp(z) * acc
