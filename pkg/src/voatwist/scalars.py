"""Exact scalar arithmetic: rationals and the ring Q(zeta_D)[T].

Rationals are plain fractions.Fraction throughout the package.  The class
Cyc models elements of Q(zeta_D)[T], polynomials in a formal variable T
whose coefficients live in the cyclotomic field of order D.  T is the
formal stand-in for the branch constant 2*pi*i: a branch shift replaces
log x by log x + T, and equality of two expressions "identically in
zeta_D and T" is plain equality in this ring.

Only ring operations are provided (add, sub, mul, scalar division);
division by a general cyclotomic is never needed here.  Elements are kept
in a canonical reduced form, so == is exact and hash-safe.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

__all__ = [
    "Cyc",
    "binom",
    "cyclotomic_poly",
    "fmt_rational",
    "fmt_scalar",
    "parse_rational",
    "scalar_is_zero",
    "scalars_equal",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rational(text) -> Fraction:
    """Parse "p/q" or "n" (or an int) into an exact Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot parse rational from {text!r}")


def fmt_rational(q: Fraction) -> str:
    """Format a Fraction as "p/q", or "n" when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def binom(e, i: int) -> Fraction:
    """Generalized binomial coefficient C(e, i) for rational e, integer i >= 0."""
    if i < 0:
        return ZERO
    num = ONE
    e = Fraction(e)
    for j in range(i):
        num *= e - j
    den = 1
    for j in range(2, i + 1):
        den *= j
    return num / den


def _divisors(n: int):
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divmod_exact(a, b):
    # both lists of Fractions, ascending powers; b monic; remainder must be 0
    a = list(a)
    q = [ZERO] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> tuple:
    """Coefficients (ascending) of the d-th cyclotomic polynomial, monic over Q."""
    if d < 1:
        raise ValueError("order must be positive")
    p = [ZERO] * (d + 1)
    p[0], p[d] = -ONE, ONE
    for e in _divisors(d):
        if e < d:
            p = _poly_divmod_exact(p, cyclotomic_poly(e))
    return tuple(p)


def _vec_reduce(vec, d: int):
    """Reduce a coefficient list in x (ascending) mod Phi_d to length deg Phi_d."""
    phi = cyclotomic_poly(d)
    deg = len(phi) - 1
    out = list(vec) + [ZERO] * max(0, deg - len(vec))
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            out[k] = ZERO
            for j in range(deg):
                out[k - deg + j] -= c * phi[j]
    return tuple(out[:deg])


class Cyc:
    """An element of Q(zeta_D)[T] in canonical reduced form.

    Internal form: ``order`` D and ``coeffs`` mapping T-power -> tuple of
    Fractions of length deg Phi_D (the zeta-coordinate vector, reduced mod
    Phi_D).  Zero vectors are dropped; a purely rational element is stored
    at order 1.  Mixed-order arithmetic promotes to the lcm order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: dict):
        clean = {}
        for t, vec in coeffs.items():
            if any(vec):
                clean[t] = tuple(vec)
        # rebase to order 1 when only the zeta^0 coordinate survives
        if order > 1 and all(not any(v[1:]) for v in clean.values()):
            clean = {t: (v[0],) for t, v in clean.items()}
            order = 1
        self.order = order
        self.coeffs = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def of(value, order: int = 1) -> "Cyc":
        """Embed a rational (or pass a Cyc through)."""
        if isinstance(value, Cyc):
            return value
        q = Fraction(value)
        deg = len(cyclotomic_poly(order)) - 1
        vec = [ZERO] * deg
        vec[0] = q
        return Cyc(order, {0: tuple(vec)})

    @staticmethod
    def zeta(order: int, power) -> "Cyc":
        """zeta_order ** power, power an integer (negatives reduced mod order)."""
        k = int(power) % order
        deg = len(cyclotomic_poly(order)) - 1
        vec = [ZERO] * max(k + 1, deg)
        vec[k] = ONE
        return Cyc(order, {0: _vec_reduce(vec, order)})

    @staticmethod
    def t_power(k: int, order: int = 1) -> "Cyc":
        """T**k."""
        deg = len(cyclotomic_poly(order)) - 1
        vec = [ZERO] * deg
        vec[0] = ONE
        return Cyc(order, {k: tuple(vec)})

    # -- structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return self.order == 1 and set(self.coeffs) <= {0}

    def rational_value(self) -> Fraction:
        if not self.coeffs:
            return ZERO
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0][0]

    def _coeffs_at(self, order: int) -> dict:
        """Raw coefficient dict at a multiple order (no canonical rebase)."""
        if order % self.order:
            raise ValueError("can only promote to a multiple order")
        if order == self.order:
            return {t: tuple(vec) for t, vec in self.coeffs.items()}
        step = order // self.order
        deg = len(cyclotomic_poly(order)) - 1
        out = {}
        for t, vec in self.coeffs.items():
            acc = [ZERO] * deg
            for k, c in enumerate(vec):
                if c:
                    unit = [ZERO] * (k * step + 1)
                    unit[k * step] = ONE
                    red = _vec_reduce(unit, order)
                    for j in range(deg):
                        acc[j] += c * red[j]
            out[t] = tuple(acc)
        return out

    def promoted(self, order: int) -> "Cyc":
        """The same element expressed at a (multiple) cyclotomic order."""
        return Cyc(order, self._coeffs_at(order))

    @staticmethod
    def _scale(x: "Cyc", c: Fraction, tshift: int = 0) -> "Cyc":
        return Cyc(x.order, {t + tshift: tuple(c * a for a in vec)
                             for t, vec in x.coeffs.items()})

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.of(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        order = math.lcm(self.order, other.order)
        a = self._coeffs_at(order)
        b = other._coeffs_at(order)
        deg = len(cyclotomic_poly(order)) - 1
        out = dict(a)
        for t, vec in b.items():
            cur = out.get(t, (ZERO,) * deg)
            out[t] = tuple(x + y for x, y in zip(cur, vec))
        return Cyc(order, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Cyc(self.order, {t: tuple(-c for c in vec)
                                for t, vec in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.of(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Cyc.of(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc._scale(self, Fraction(other))
        if not isinstance(other, Cyc):
            return NotImplemented
        order = math.lcm(self.order, other.order)
        a = self._coeffs_at(order)
        b = other._coeffs_at(order)
        deg = len(cyclotomic_poly(order)) - 1
        out = {}
        for t1, v1 in a.items():
            for t2, v2 in b.items():
                prod = [ZERO] * (2 * deg - 1 if deg > 1 else 1)
                for i, c1 in enumerate(v1):
                    if not c1:
                        continue
                    for j, c2 in enumerate(v2):
                        if c2:
                            prod[i + j] += c1 * c2
                red = _vec_reduce(prod, order)
                t = t1 + t2
                cur = out.get(t)
                if cur is None:
                    out[t] = red
                else:
                    out[t] = tuple(x + y for x, y in zip(cur, red))
        return Cyc(order, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                raise ZeroDivisionError
            return Cyc._scale(self, 1 / q)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.of(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        order = math.lcm(self.order, other.order)
        return Cyc(order, self._coeffs_at(order)).coeffs == \
            Cyc(order, other._coeffs_at(order)).coeffs

    # no __hash__: equal elements can be stored at different orders, so
    # hashing would need subfield detection; Cyc values are never dict keys
    __hash__ = None

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Cyc({self.fmt()})"

    def fmt(self) -> str:
        """Deterministic human-readable form, terms sorted by (T-power, zeta-power)."""
        if not self.coeffs:
            return "0"
        parts = []
        for t in sorted(self.coeffs):
            vec = self.coeffs[t]
            for k, c in enumerate(vec):
                if not c:
                    continue
                factors = [fmt_rational(c)]
                if k:
                    factors.append(f"z{self.order}^{k}")
                if t:
                    factors.append(f"T^{t}")
                parts.append("*".join(factors))
        return " + ".join(parts)


def scalar_is_zero(c) -> bool:
    """Exact zero test for Fraction/int/Cyc coefficients."""
    if isinstance(c, Cyc):
        return c.is_zero()
    return c == 0


def scalars_equal(a, b) -> bool:
    """Exact equality across the Fraction/Cyc divide."""
    if isinstance(a, Cyc) or isinstance(b, Cyc):
        return Cyc.of(a) == Cyc.of(b)
    return Fraction(a) == Fraction(b)


def fmt_scalar(c) -> str:
    """Deterministic string form of a Fraction or Cyc coefficient."""
    if isinstance(c, Cyc):
        return c.fmt()
    return fmt_rational(c)
