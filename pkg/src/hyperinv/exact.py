"""Exact rational arithmetic and sparse bivariate polynomials in (x, nu).

``fractions.Fraction`` is the exact scalar carrier (normalized sign,
positive denominator, reduced after every operation), so this module only
adds what the stdlib lacks: Pochhammer symbols and a small polynomial ring
over the two formal variables used by the matrix entries.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

ExactScalar = Fraction

RationalLike = Union[int, Fraction]


def rising(a, m: int):
    """Rising factorial a (a+1) ... (a+m-1); 1 for m = 0.

    Generic in the scalar: exact for int/Fraction, float/complex for
    numeric work, and works for BiPoly arguments through operator
    overloading.
    """
    if m < 0:
        raise ValueError("rising factorial needs m >= 0")
    acc = None
    for j in range(m):
        term = a + j
        acc = term if acc is None else acc * term
    if acc is None:
        return 1
    return acc


def pochhammer_int(a: int, m: int) -> Fraction:
    """Pochhammer symbol (a)_m for integer a, as an exact rational."""
    return Fraction(rising(a, m))


def falling_factorial_negint(r: int, m: int) -> int:
    """(-r)_m = (-1)^m r!/(r-m)! for integers 0 <= m <= r, else 0 beyond."""
    return rising(-r, m)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"exact coefficient must be int or Fraction, got {type(v).__name__}")


class BiPoly:
    """Sparse polynomial in the formal pair (x, nu) over Fraction.

    Coefficients are stored by exponent pair; a zero polynomial is the
    empty map, which makes equality a structural comparison. Instances
    are immutable after construction and safe to share.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], RationalLike] | None = None):
        c: dict[tuple[int, int], Fraction] = {}
        if coeffs:
            for (dx, dn), v in coeffs.items():
                q = _as_fraction(v)
                if q:
                    c[(int(dx), int(dn))] = q
        self._c = c

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, v: RationalLike) -> "BiPoly":
        return cls({(0, 0): v})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def nu(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def monomial(cls, dx: int, dnu: int, coeff: RationalLike = 1) -> "BiPoly":
        return cls({(dx, dnu): coeff})

    # -- inspection ------------------------------------------------------

    @property
    def coeffs(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._c)

    def coeff(self, dx: int, dnu: int) -> Fraction:
        return self._c.get((dx, dnu), Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and (0, 0) in self._c)

    def degree_x(self) -> int:
        return max((k[0] for k in self._c), default=0)

    def degree_nu(self) -> int:
        return max((k[1] for k in self._c), default=0)

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "BiPoly | None":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return BiPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for k, v in o._c.items():
            s = c.get(k, Fraction(0)) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        out = BiPoly.__new__(BiPoly)
        out._c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = BiPoly.__new__(BiPoly)
        out._c = {k: -v for k, v in self._c.items()}
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if not q:
                return BiPoly()
            out = BiPoly.__new__(BiPoly)
            out._c = {k: v * q for k, v in self._c.items()}
            return out
        if not isinstance(other, BiPoly):
            return NotImplemented
        c: dict[tuple[int, int], Fraction] = {}
        get = c.get
        for (ax, an), av in self._c.items():
            for (bx, bn), bv in other._c.items():
                k = (ax + bx, an + bn)
                s = get(k)
                s = av * bv if s is None else s + av * bv
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        out = BiPoly.__new__(BiPoly)
        out._c = c
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = _as_fraction(other)
            if not q:
                raise ZeroDivisionError("division of BiPoly by zero scalar")
            return self * (Fraction(1) / q)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not polynomial")
        acc = BiPoly.constant(1)
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    # -- evaluation & rendering ------------------------------------------

    def __call__(self, x0, nu0):
        return bipoly_eval(self, x0, nu0)

    def sorted_terms(self) -> list[tuple[int, int, Fraction]]:
        return [(dx, dn, self._c[(dx, dn)]) for dx, dn in sorted(self._c)]

    def __repr__(self):
        if not self._c:
            return "BiPoly(0)"
        parts = []
        for dx, dn, q in self.sorted_terms():
            mon = "".join(
                s for s in (
                    f"x^{dx}" if dx else "",
                    f"nu^{dn}" if dn else "",
                ) if s
            )
            parts.append(f"{q}" + (f"*{mon}" if mon else ""))
        return "BiPoly(" + " + ".join(parts) + ")"


def bipoly_eval(p: BiPoly, x0, nu0):
    """Substitute (x0, nu0) into p term by term.

    Exact (Fraction in, Fraction out) for rational points; float/complex
    points give float/complex results.
    """
    total = None
    for (dx, dn), q in p._c.items():
        term = q * x0**dx * nu0**dn
        total = term if total is None else total + term
    if total is None:
        return 0 * x0 * nu0  # zero of the ambient scalar type
    return total


def pochhammer_linear(c: RationalLike, m: int) -> BiPoly:
    """(c*nu)_m expanded as a polynomial in nu, exactly.

    Degree is m when c != 0 and m >= 1; the m = 0 case is the constant 1.
    """
    base = BiPoly.monomial(0, 1, _as_fraction(c))
    return rising(base, m) if m else BiPoly.constant(1)


def zero_like(sample):
    """Additive zero matching the scalar family of ``sample``."""
    if isinstance(sample, BiPoly):
        return BiPoly()
    return type(sample)(0) if not isinstance(sample, int) else 0


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)
