"""Truncated univariate Laurent series over a pluggable coefficient ring.

Coefficients may be Fractions, critical-ring elements, spectator-ring
elements, or other Series (nesting gives multivariate local expansions).
They only need +, -, * among themselves and scalar multiplication.

Every series carries its own truncation order `trunc` (the largest exponent
whose coefficient is known); binary operations propagate the worst case, and
reading past the truncation raises TruncationUnderflow.  That bookkeeping is
deliberate: silent precision loss is the dominant failure mode of series
code.
"""

from fractions import Fraction


class TruncationUnderflow(Exception):
    """A coefficient beyond the known truncation order was requested."""


class BadSeries(ValueError):
    """Series does not satisfy the preconditions of the operation."""


def _inv_coeff(c):
    if isinstance(c, Fraction):
        return Fraction(1) / c
    if isinstance(c, int):
        return Fraction(1, c)
    return c.inverse()


class Series:
    """sum_{k} c_k t^k with exact coefficients, valid for k <= trunc."""

    __slots__ = ("c", "trunc", "zero")

    def __init__(self, coeffs, trunc, zero=Fraction(0)):
        self.c = {k: v for k, v in coeffs.items() if not _is_zero(v)}
        self.trunc = trunc
        self.zero = zero

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero_series(trunc, zero=Fraction(0)):
        return Series({}, trunc, zero)

    @staticmethod
    def const(value, trunc, zero=Fraction(0)):
        return Series({0: value}, trunc, zero)

    @staticmethod
    def x(trunc, one=Fraction(1), zero=Fraction(0)):
        return Series({1: one}, trunc, zero)

    @staticmethod
    def from_list(coeffs, zero=Fraction(0), low=0):
        return Series({low + k: v for k, v in enumerate(coeffs)},
                      low + len(coeffs) - 1, zero)

    # -- basic access --------------------------------------------------

    def coeff(self, k):
        if k > self.trunc:
            raise TruncationUnderflow(f"order {k} beyond truncation {self.trunc}")
        return self.c.get(k, self.zero)

    def low(self):
        """Smallest exponent with a nonzero coefficient (trunc+1 if zero)."""
        return min(self.c) if self.c else self.trunc + 1

    def is_zero(self):
        return not self.c

    def support(self):
        return sorted(self.c)

    # -- ring operations -----------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.const(other if not isinstance(other, int) else Fraction(other),
                                 self.trunc, self.zero)
        trunc = min(self.trunc, other.trunc)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out[k] + v if k in out else v
        return Series({k: v for k, v in out.items() if k <= trunc}, trunc, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return Series({k: -v for k, v in self.c.items()}, self.trunc, self.zero)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.const(other if not isinstance(other, int) else Fraction(other),
                                 self.trunc, self.zero)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        trunc = min(self.trunc + other.low(), other.trunc + self.low())
        out = {}
        for i, a in self.c.items():
            for j, b in other.c.items():
                k = i + j
                if k > trunc:
                    continue
                prod = a * b
                out[k] = out[k] + prod if k in out else prod
        return Series(out, trunc, self.zero)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor):
        if isinstance(factor, int):
            factor = Fraction(factor)
        return Series({k: v * factor for k, v in self.c.items()}, self.trunc, self.zero)

    def map_coeffs(self, fn, zero=None):
        return Series({k: fn(v) for k, v in self.c.items()}, self.trunc,
                      self.zero if zero is None else zero)

    def shift(self, n):
        """Multiply by t^n."""
        return Series({k + n: v for k, v in self.c.items()}, self.trunc + n, self.zero)

    def truncate(self, trunc):
        if trunc > self.trunc:
            raise TruncationUnderflow(
                f"cannot extend truncation {self.trunc} to {trunc}")
        return Series({k: v for k, v in self.c.items() if k <= trunc}, trunc, self.zero)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return Series({0: _one_like(self)}, self.trunc, self.zero)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self):
        """Multiplicative inverse of a series with invertible lowest term."""
        if self.is_zero():
            raise BadSeries("cannot invert the zero series")
        v = self.low()
        a0 = self.c[v]
        inv0 = _inv_coeff(a0)
        n_terms = self.trunc - v
        out = {-v: inv0}
        for k in range(1, n_terms + 1):
            acc = None
            for j in range(1, k + 1):
                aj = self.c.get(v + j)
                if aj is None:
                    continue
                b = out.get(k - j - v)
                if b is None:
                    continue
                term = aj * b
                acc = term if acc is None else acc + term
            if acc is not None:
                out[k - v] = -(inv0 * acc)
        return Series({k: c for k, c in out.items() if not _is_zero(c)},
                      n_terms - v, self.zero)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return self * other.inverse()
        return self.scale(Fraction(1) / Fraction(other) if isinstance(other, (int, Fraction))
                          else _inv_coeff(other))

    def derivative(self):
        return Series({k - 1: k * v for k, v in self.c.items() if k != 0},
                      self.trunc - 1, self.zero)

    def compose(self, inner):
        """self(inner(t)); inner must have valuation >= 1.

        Negative exponents of self are handled through inner.inverse(), which
        requires the leading coefficient of inner to be invertible.
        """
        if not isinstance(inner, Series):
            raise BadSeries("inner must be a Series")
        vi = inner.low()
        if inner.c and vi < 1:
            raise BadSeries("inner series must have positive valuation")
        lo = self.low()
        outer_cap = (self.trunc + 1) * max(vi, 1) - 1
        if self.is_zero():
            return Series.zero_series(min(inner.trunc, outer_cap), self.zero)
        inv = inner.inverse() if lo < 0 else None
        cache = {}

        def power(e):
            if e in cache:
                return cache[e]
            if e > 0:
                res = power(e - 1) * inner if e > 1 else inner
            else:
                res = power(e + 1) * inv if e < -1 else inv
            cache[e] = res
            return res

        result = None
        for e, coeff in sorted(self.c.items()):
            term = (Series.const(coeff, 10 ** 9, self.zero) if e == 0
                    else power(e).scale(coeff))
            result = term if result is None else result + term
        return result.truncate(min(result.trunc, outer_cap))

    def exp(self):
        """exp(self) for a series with valuation >= 1."""
        if self.c and self.low() < 1:
            raise BadSeries("exp needs positive valuation")
        result = Series({0: Fraction(1)}, self.trunc, self.zero)
        term = Series({0: Fraction(1)}, self.trunc, self.zero)
        k = 0
        v = max(self.low(), 1)
        while (k + 1) * v <= self.trunc:
            k += 1
            term = term * self * Fraction(1, k)
            if term.is_zero():
                break
            result = result + term
        return result

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        trunc = min(self.trunc, other.trunc)
        keys = {k for k in self.c if k <= trunc} | {k for k in other.c if k <= trunc}
        return all(_eq(self.coeff(k), other.coeff(k)) for k in keys)

    def __repr__(self):
        if not self.c:
            return f"O(t^{self.trunc + 1})"
        terms = " + ".join(f"({v})*t^{k}" for k, v in sorted(self.c.items()))
        return f"{terms} + O(t^{self.trunc + 1})"


def _is_zero(v):
    if isinstance(v, (int, Fraction)):
        return v == 0
    if isinstance(v, Series):
        return v.is_zero()
    return v.is_zero()


def _eq(a, b):
    return _is_zero(a - b)


def _one_like(s):
    for v in s.c.values():
        if isinstance(v, Fraction):
            return Fraction(1)
        if isinstance(v, Series):
            return Series.const(_one_like(v), v.trunc, v.zero)
        return v.ring.one if hasattr(v, "ring") else Fraction(1)
    return Fraction(1)


# -- the operation surface used throughout the package -----------------


def series_mul(a: Series, b: Series) -> Series:
    return a * b


def series_div(a: Series, b: Series) -> Series:
    return a / b


def series_compose(outer: Series, inner: Series) -> Series:
    return outer.compose(inner)


def series_derivative(s: Series) -> Series:
    """The operator D = x d/dx: multiplies the coefficient of x^k by k."""
    return Series({k: k * v for k, v in s.c.items() if k != 0}, s.trunc, s.zero)


def lagrange_invert(s: Series, order: int) -> Series:
    """Compositional inverse of s to the requested order.

    Requires s(0) = 0 and an invertible linear coefficient; then the result g
    satisfies s(g(x)) = x + O(x^{order+1}).
    """
    if 0 in s.c:
        raise BadSeries("constant term must vanish")
    if s.low() != 1:
        raise BadSeries("linear term must be nonzero")
    if s.trunc < order:
        raise TruncationUnderflow(
            f"need input to order {order}, have {s.trunc}")
    a1_inv = _inv_coeff(s.c[1])
    g = Series({1: a1_inv}, order, s.zero)
    for k in range(2, order + 1):
        err = s.truncate(k).compose(g.truncate(k)).coeff(k)
        if not _is_zero(err):
            g = g + Series({k: -(a1_inv * err)}, order, s.zero)
    return g
