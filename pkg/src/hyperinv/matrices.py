"""Lower-triangular inversion pairs built from terminating hypergeometric sums.

Provides the matrix pair A(x, nu) / B(x, nu) whose entries are
(-1)^k C(n,k) F(k-n, -n nu; -n; x) and (-1)^k C(n,k) F(k-n, k nu; k; x),
the generalized family driven by an arbitrary coefficient sequence, the
inversion criterion on exponential generating functions, and the finite
gamma sum D_N together with its closed form.

Indexing is 1-based throughout, matching n, k >= 1 in every identity.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from scipy import special as _sp

from .errors import DegenerateParameter, LengthMismatch
from .exact import BiPoly, binomial, rising


class TriMatrix:
    """1-indexed lower-triangular matrix; entries above the diagonal are absent.

    Scalar-generic: rows may hold BiPoly (exact mode), complex, float or
    Fraction entries. Immutable after construction.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        for i, r in enumerate(rows):
            if len(r) != i + 1:
                raise ValueError(f"row {i + 1} must have {i + 1} entries, got {len(r)}")
        self._rows = rows

    @property
    def n_max(self) -> int:
        return len(self._rows)

    def entry(self, n: int, k: int):
        if not 1 <= k <= n <= self.n_max:
            raise IndexError(f"(n, k) = ({n}, {k}) outside lower triangle")
        return self._rows[n - 1][k - 1]

    def row(self, n: int) -> list:
        return list(self._rows[n - 1])

    def product(self, other: "TriMatrix") -> "TriMatrix":
        """Lower-triangular matrix product self * other."""
        if other.n_max != self.n_max:
            raise LengthMismatch("matrix sizes differ")
        rows = []
        for n in range(1, self.n_max + 1):
            row = []
            for k in range(1, n + 1):
                acc = None
                for ell in range(k, n + 1):
                    term = self.entry(n, ell) * other.entry(ell, k)
                    acc = term if acc is None else acc + term
                row.append(acc)
            rows.append(row)
        return TriMatrix(rows)

    def transform(self, seq: Sequence) -> list:
        """Apply the matrix to a sequence: T_n = sum_{k<=n} M_{n,k} S_k."""
        if len(seq) < self.n_max:
            raise LengthMismatch(
                f"sequence has {len(seq)} entries, matrix needs {self.n_max}"
            )
        out = []
        for n in range(1, self.n_max + 1):
            acc = None
            for k in range(1, n + 1):
                term = self.entry(n, k) * seq[k - 1]
                acc = term if acc is None else acc + term
            out.append(acc)
        return out

    def map(self, f: Callable) -> "TriMatrix":
        return TriMatrix([[f(v) for v in row] for row in self._rows])

    def __eq__(self, other):
        return isinstance(other, TriMatrix) and self._rows == other._rows

    def __repr__(self):
        return f"TriMatrix(n_max={self.n_max})"


def transform(matrix: TriMatrix, seq: Sequence) -> list:
    """Module-level alias for :meth:`TriMatrix.transform`."""
    return matrix.transform(seq)


# ---------------------------------------------------------------------------
# Terminating hypergeometric sums
# ---------------------------------------------------------------------------

def hyper_F_terminating(neg_deg: int, b_param, c_param, x):
    """F(neg_deg, b; c; x) = sum_{m<=|neg_deg|} (neg_deg)_m (b)_m / ((c)_m m!) x^m.

    Terminating Gauss sum: ``neg_deg`` must be a non-positive integer.
    Scalar-generic: passing BiPoly for ``b_param``/``x`` produces the exact
    polynomial entry in (x, nu); numeric inputs give numbers. ``c_param``
    stays a plain scalar, and (c)_m must not vanish inside the range (for
    c = -n and m < n it never does).
    """
    if neg_deg > 0:
        raise ValueError("first parameter must be a non-positive integer")
    depth = -neg_deg
    total = None
    fact = 1
    for m in range(depth + 1):
        cm = rising(c_param, m)
        if cm == 0:
            raise DegenerateParameter(
                f"(c)_m vanished at c={c_param!r}, m={m}; sum is ill-defined"
            )
        head = rising(neg_deg, m)  # never 0 for m <= |neg_deg|
        if m:
            fact *= m
        term = head * rising(b_param, m) * x**m / (cm * fact)
        total = term if total is None else total + term
    return total


def hyper_factor(n: int, k: int, c: int) -> BiPoly:
    """Exact polynomial F(k-n, c*nu; c; x) shared by both matrix families.

    The two families are this single function at c = -n (first) and
    c = k (second); the swap of those two parameter values is the only
    difference between their hypergeometric factors.
    """
    return hyper_F_terminating(k - n, BiPoly.monomial(0, 1, c), Fraction(c), BiPoly.x())


# ---------------------------------------------------------------------------
# Matrix builders
# ---------------------------------------------------------------------------

def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def build_A(n_max: int, x=None, nu=None, mode: str = "exact") -> TriMatrix:
    """First matrix of the pair: entries (-1)^k C(n,k) F(k-n, -n nu; -n; x).

    ``mode='exact'`` ignores x/nu and returns BiPoly entries;
    ``mode='float'`` evaluates at numeric (x, nu) in complex arithmetic.
    """
    return _build_hyper(n_max, x, nu, mode, side="a")


def build_B(n_max: int, x=None, nu=None, mode: str = "exact") -> TriMatrix:
    """Inverse-side matrix: entries (-1)^k C(n,k) F(k-n, k nu; k; x)."""
    return _build_hyper(n_max, x, nu, mode, side="b")


def _build_hyper(n_max, x, nu, mode, side):
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    if mode == "exact":
        for n in range(1, n_max + 1):
            row = []
            for k in range(1, n + 1):
                c = -n if side == "a" else k
                row.append(hyper_factor(n, k, c) * (_sign(k) * binomial(n, k)))
            rows.append(row)
    elif mode == "float":
        if x is None or nu is None:
            raise ValueError("float mode needs numeric x and nu")
        x = complex(x)
        nu = complex(nu)
        for n in range(1, n_max + 1):
            row = []
            for k in range(1, n + 1):
                c = -n if side == "a" else k
                f = hyper_F_terminating(k - n, c * nu, complex(c), x)
                row.append(_sign(k) * binomial(n, k) * f)
            rows.append(row)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TriMatrix(rows)


@dataclass(frozen=True)
class CoefficientFamily:
    """Index-dependent coefficient sequence a(m; n, k) with a(0; n, k) = 1."""

    a: Callable[[int, int, int], object]

    def __call__(self, m: int, n: int, k: int):
        v = self.a(m, n, k)
        if m == 0 and v != 1:
            raise ValueError(f"family must have a(0; {n}, {k}) = 1, got {v!r}")
        return v


def build_general(fam: CoefficientFamily, n_max: int, x) -> TriMatrix:
    """Matrix with entries (-1)^k C(n,k) sum_m (k-n)_m a(m;n,k) x^m / m!."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    for n in range(1, n_max + 1):
        row = []
        for k in range(1, n + 1):
            total = None
            fact = 1
            for m in range(n - k + 1):
                if m:
                    fact *= m
                term = rising(k - n, m) * fam(m, n, k) * x**m / fact
                total = term if total is None else total + term
            row.append(_sign(k) * binomial(n, k) * total)
        rows.append(row)
    return TriMatrix(rows)


# ---------------------------------------------------------------------------
# Exact inversion check
# ---------------------------------------------------------------------------

@dataclass
class InverseReport:
    """Outcome of the exact A*B = Id verification."""

    n_max: int
    ok: bool
    first_failure: tuple[int, int] | None = None
    residual: BiPoly | None = None
    checked_entries: int = 0

    def __bool__(self):
        return self.ok


def verify_inverse_exact(n_max: int) -> InverseReport:
    """Multiply the exact matrices and compare against the identity.

    Every off-diagonal product entry must be the zero polynomial and every
    diagonal entry the constant 1; the first offending entry (if any) is
    reported with its nonzero residual polynomial.
    """
    a = build_A(n_max, mode="exact")
    b = build_B(n_max, mode="exact")
    c = a.product(b)
    one = BiPoly.constant(1)
    checked = 0
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            expected = one if n == k else BiPoly()
            got = c.entry(n, k)
            checked += 1
            if got != expected:
                return InverseReport(n_max, False, (n, k), got - expected, checked)
    return InverseReport(n_max, True, None, None, checked)


# ---------------------------------------------------------------------------
# Inversion criterion on series coefficients
# ---------------------------------------------------------------------------

def inversion_criterion(f_coeffs: Sequence, g_coeffs: Sequence, order: int) -> bool:
    """Check [x^j] f(-x) g(x) = delta(j) for 0 <= j <= order.

    ``f_coeffs``/``g_coeffs`` are power-series coefficient prefixes with
    f_0 = g_0 = 1; entries beyond the given prefixes are treated as 0.
    """
    if not f_coeffs or not g_coeffs or f_coeffs[0] != 1 or g_coeffs[0] != 1:
        raise ValueError("series must start with constant coefficient 1")

    def fc(i):
        return f_coeffs[i] if i < len(f_coeffs) else 0

    def gc(i):
        return g_coeffs[i] if i < len(g_coeffs) else 0

    for j in range(order + 1):
        conv = sum((-1) ** i * fc(i) * gc(j - i) for i in range(j + 1))
        target = 1 if j == 0 else 0
        if isinstance(conv, (Fraction, int)):
            if conv != target:
                return False
        elif abs(conv - target) > 1e-12:
            return False
    return True


# ---------------------------------------------------------------------------
# The finite gamma sum D_N and its closed form
# ---------------------------------------------------------------------------

_EQUAL_BRANCH_WIDTH = 1e-8


def _csinc(t: complex) -> complex:
    """sin(pi t)/(pi t), entire; exact 0/1 at integer t, series near 0."""
    if isinstance(t, complex) and t.imag == 0:
        t = t.real
    if not isinstance(t, complex):
        r = round(t)
        if t == r:
            return 1.0 if r == 0 else 0.0
    u = t * math.pi
    if abs(u) < 1e-3:
        u2 = u * u
        return 1 - u2 / 6 * (1 - u2 / 20 * (1 - u2 / 42))
    return cmath.sin(u) / u if isinstance(u, complex) else math.sin(u) / u


def _rgamma(z):
    """1/Gamma(z); exactly 0 at the poles of Gamma."""
    return complex(_sp.rgamma(complex(z)))


def d_n_brute(lam, mu, n_terms: int) -> complex:
    """Direct alternating sum of reciprocal-gamma products, N terms."""
    if n_terms < 1:
        raise ValueError("need at least one term")
    total = 0.0 + 0.0j
    for r in range(n_terms):
        total += (-1) ** r * _rgamma(1 + r - lam) * _rgamma(1 - r + mu)
    return total


def d_n_equal(lam, n_terms: int) -> complex:
    """Limit branch at mu = lam: sin(pi lam)/pi [psi(-lam) - psi(N-lam)].

    Evaluated as the entire finite sum sum_{r<N} (-1)^r sinc(lam - r),
    an exact rewriting through the digamma recurrence; stable at every
    lam including the non-negative integers, where the psi form is an
    indeterminate 0 * inf.
    """
    total = 0.0 + 0.0j if isinstance(lam, complex) else 0.0
    for r in range(n_terms):
        total += (-1) ** r * _csinc(lam - r)
    return complex(total)


def d_n_closed(lam, mu, n_terms: int) -> complex:
    """Closed form of the sum: two-term gamma expression, or the limit branch.

    The generic branch 1/(mu-lam) [1/(G(-lam) G(1+mu)) - (-1)^N /
    (G(N-lam) G(1-N+mu))] is numerically singular near mu = lam, so the
    limit branch takes over inside a width-1e-8 collar of the diagonal.
    """
    if n_terms < 1:
        raise ValueError("need at least one term")
    if abs(complex(mu) - complex(lam)) < _EQUAL_BRANCH_WIDTH:
        return d_n_equal(lam, n_terms)
    lam = complex(lam)
    mu = complex(mu)
    bracket = _rgamma(-lam) * _rgamma(1 + mu) - (-1) ** n_terms * _rgamma(
        n_terms - lam
    ) * _rgamma(1 - n_terms + mu)
    return bracket / (mu - lam)


def d_n(lam, mu, n_terms: int, method: str = "closed") -> complex:
    """D_N(lam, mu) by the requested route ('closed' or 'brute')."""
    if method == "closed":
        return d_n_closed(lam, mu, n_terms)
    if method == "brute":
        return d_n_brute(lam, mu, n_terms)
    raise ValueError(f"unknown method {method!r}")
