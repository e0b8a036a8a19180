"""Finite formal series in x^e (log x)^k with exact rational exponents.

A LogSeries is a finite sum sum_{(e,k)} c_{e,k} x^e (log x)^k where the
exponents e are Fractions, the log powers k are nonnegative integers, and
the coefficients c_{e,k} live in any abelian group with scalar action
(rationals, cyclotomic-with-T scalars, or module vectors).  Series are
stored sparsely as a dict keyed by (e, k).

Two optional bounds record what part of the series is trusted:

* ``floor``: coefficients at e < floor are unknown (dropped, not zero);
* ``ceiling``: coefficients at e > ceiling are unknown.

``None`` means unbounded on that side, i.e. the stored terms are the whole
truth there.  Arithmetic propagates bounds pessimistically: a sum is
trusted only where both inputs are.  Comparisons must stay inside the
trusted window; ``series_eq`` enforces that.

The four core operations the rest of the package relies on are
``series_combine`` (add or scale), ``series_derivative`` (d/dx),
``formal_integral_0_to_x`` (the formal antiderivative with no constant
term), and ``branch_shift`` (log x -> log x + T, x^e -> zeta^(D e) x^e,
the formal substitution that moves between analytic branches).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .scalars import Cyc, binom, scalar_is_zero

__all__ = [
    "LogSeries",
    "branch_shift",
    "formal_integral_0_to_x",
    "series_combine",
    "series_derivative",
    "series_eq",
]


def value_is_zero(v) -> bool:
    """Zero test that works for scalars and module vectors alike."""
    if hasattr(v, "is_zero"):
        return v.is_zero()
    return v == 0


def _max_floor(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_ceiling(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LogSeries:
    """A finite x^e (log x)^k series with trusted-window bookkeeping."""

    __slots__ = ("terms", "floor", "ceiling")

    def __init__(self, terms=None, floor=None, ceiling=None):
        self.terms = {}
        if terms:
            for (e, k), v in terms.items():
                if not value_is_zero(v):
                    self.terms[(Fraction(e), int(k))] = v
        self.floor = floor
        self.ceiling = ceiling

    @staticmethod
    def single(value, e=0, k=0) -> "LogSeries":
        """The one-term series value * x^e (log x)^k."""
        return LogSeries({(Fraction(e), int(k)): value})

    def copy(self) -> "LogSeries":
        return LogSeries(dict(self.terms), self.floor, self.ceiling)

    def is_zero(self) -> bool:
        return not self.terms

    def in_window(self, e) -> bool:
        """Whether the coefficient at exponent e is trusted."""
        if self.floor is not None and e < self.floor:
            return False
        if self.ceiling is not None and e > self.ceiling:
            return False
        return True

    def coefficient(self, e, k=0):
        """Trusted coefficient at (e, k); DomainError outside the window."""
        e = Fraction(e)
        if not self.in_window(e):
            raise DomainError(f"coefficient at x^{e} is outside the trusted window")
        return self.terms.get((e, int(k)), 0)

    def add_term(self, e, k, value):
        key = (Fraction(e), int(k))
        cur = self.terms.get(key)
        new = value if cur is None else cur + value
        if value_is_zero(new):
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def map_values(self, fn) -> "LogSeries":
        """Apply fn to every coefficient (dropping zero results)."""
        out = LogSeries(floor=self.floor, ceiling=self.ceiling)
        for key, v in self.terms.items():
            w = fn(v)
            if not value_is_zero(w):
                out.terms[key] = w
        return out

    def clipped(self, floor=None, ceiling=None) -> "LogSeries":
        """Restrict storage and the trusted window to [floor, ceiling]."""
        nf = _max_floor(self.floor, floor)
        nc = _min_ceiling(self.ceiling, ceiling)
        out = LogSeries(floor=nf, ceiling=nc)
        for (e, k), v in self.terms.items():
            if (nf is None or e >= nf) and (nc is None or e <= nc):
                out.terms[(e, k)] = v
        return out

    def sorted_items(self):
        """Terms in deterministic (e, k) order."""
        return sorted(self.terms.items(), key=lambda it: (it[0][0], it[0][1]))

    def support(self):
        return set(self.terms)

    def __repr__(self):
        parts = [f"x^{e}" + (f"*log^{k}" if k else "") for (e, k), _ in self.sorted_items()]
        win = f" floor={self.floor} ceiling={self.ceiling}"
        return f"LogSeries({len(self.terms)} terms: {', '.join(parts[:6])}...{win})"


def series_combine(a: LogSeries, b=None, mode: str = "add", scalar=None,
                   eshift=0, kshift=0) -> LogSeries:
    """Combine series: mode "add" sums two series, "scale" multiplies one
    by a scalar times x^eshift (log x)^kshift.

    Addition intersects the trusted windows.  Scaling shifts them by eshift.
    """
    if mode == "add":
        if b is None:
            raise DomainError("add mode needs a second series")
        out = LogSeries(floor=_max_floor(a.floor, b.floor),
                        ceiling=_min_ceiling(a.ceiling, b.ceiling))
        for key, v in a.terms.items():
            out.add_term(key[0], key[1], v)
        for key, v in b.terms.items():
            out.add_term(key[0], key[1], v)
        return out
    if mode == "scale":
        if scalar is None:
            scalar = Fraction(1)
        eshift = Fraction(eshift)
        shift_f = None if a.floor is None else a.floor + eshift
        shift_c = None if a.ceiling is None else a.ceiling + eshift
        out = LogSeries(floor=shift_f, ceiling=shift_c)
        for (e, k), v in a.terms.items():
            w = scalar * v if not isinstance(v, (int, Fraction)) else scalar * v
            if not value_is_zero(w):
                out.add_term(e + eshift, k + kshift, w)
        return out
    raise DomainError(f"unknown combine mode {mode!r}")


def series_derivative(a: LogSeries) -> LogSeries:
    """Formal d/dx: x^e log^k -> e x^(e-1) log^k + k x^(e-1) log^(k-1)."""
    out = LogSeries(
        floor=None if a.floor is None else a.floor - 1,
        ceiling=None if a.ceiling is None else a.ceiling - 1,
    )
    for (e, k), v in a.terms.items():
        if e:
            out.add_term(e - 1, k, e * v if isinstance(v, (int, Fraction)) else v * e)
        if k:
            out.add_term(e - 1, k - 1, Fraction(k) * v if isinstance(v, (int, Fraction)) else v * Fraction(k))
    return out


def formal_integral_0_to_x(a: LogSeries) -> LogSeries:
    """Formal antiderivative with zero constant term: x^e -> x^(e+1)/(e+1).

    Only log-free series are integrable here, and the exponent -1 has no
    formal antiderivative in this ring; both raise DomainError.
    """
    out = LogSeries(
        floor=None if a.floor is None else a.floor + 1,
        ceiling=None if a.ceiling is None else a.ceiling + 1,
    )
    for (e, k), v in a.terms.items():
        if k:
            raise DomainError("cannot integrate a log term")
        if e == -1:
            raise DomainError("x^-1 has no antiderivative in this ring")
        c = Fraction(1) / (e + 1)
        out.add_term(e + 1, k, c * v if isinstance(v, (int, Fraction)) else v * c)
    return out


def branch_shift(a: LogSeries, steps: int, order: int) -> LogSeries:
    """Move ``steps`` analytic branches: log x -> log x + steps*T and
    x^e -> zeta_order^(order*e*steps) x^e.

    Coefficients come back as Cyc-multiplied values.  Exponents must lie on
    the (1/order)-lattice, otherwise the declared order is wrong and a
    DomainError is raised.
    """
    out = LogSeries(floor=a.floor, ceiling=a.ceiling)
    for (e, k), v in a.terms.items():
        scaled = e * order
        if scaled.denominator != 1:
            raise DomainError(
                f"exponent {e} is not on the 1/{order} lattice")
        zfac = Cyc.zeta(order, int(scaled) * steps)
        for j in range(k + 1):
            # (log x + steps*T)^k: keep j log-powers, k-j copies of steps*T
            tpart = Cyc.of(1)
            for _ in range(k - j):
                tpart = tpart * Cyc.t_power(1) * Fraction(steps)
            coeff = zfac * binom(k, j) * tpart
            w = v * coeff if not isinstance(v, (int, Fraction)) else coeff * v
            if not value_is_zero(w):
                out.add_term(e, j, w)
    return out


def series_eq(a: LogSeries, b: LogSeries, floor=None, ceiling=None):
    """Exact comparison inside the common trusted window and [floor, ceiling].

    Returns None when equal, else a witness tuple (e, k, left, right) for
    the first mismatch in (e, k) order.
    """
    lo = _max_floor(_max_floor(a.floor, b.floor), floor)
    hi = _min_ceiling(_min_ceiling(a.ceiling, b.ceiling), ceiling)
    keys = set(a.terms) | set(b.terms)
    for (e, k) in sorted(keys, key=lambda t: (t[0], t[1])):
        if lo is not None and e < lo:
            continue
        if hi is not None and e > hi:
            continue
        va = a.terms.get((e, k), 0)
        vb = b.terms.get((e, k), 0)
        diff = va - vb if not isinstance(va, int) else vb - va
        if not value_is_zero(diff):
            return (e, k, va, vb)
    return None
