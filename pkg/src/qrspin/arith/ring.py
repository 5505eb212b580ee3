"""The ring R = Q[p]/(qr*p^qr - 1) of functions on the critical points of X.

The curve X(z) = -z^{qr} + log z has X'(z) = 1/z - qr*z^{qr-1}, so its
critical points are exactly the roots of qr*p^{qr} = 1.  Working in R keeps
a single "generic critical point" around; summing a quantity over all qr
critical points is the trace map, which only needs the power sums

    sum_i p_i^k = qr * (qr)^{-k/qr}   if qr | k,   0 otherwise.

R need not be a field (qr*p^qr - 1 may factor over Q), so inversion runs an
extended gcd against the modulus and raises NonInvertible on zero divisors.
Every inverse the spectral recursion actually takes (p, X''(p), P'(p), ...)
exists, so NonInvertible signals a bug upstream, not a math obstruction.
"""

from fractions import Fraction


class NonInvertible(ArithmeticError):
    """Attempted to invert a zero divisor of R."""


def _poly_divmod(a, b):
    """Quotient/remainder for dense Fraction coefficient lists (low first)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lb
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a


def _poly_xgcd(a, b):
    """Extended gcd for dense polynomial lists: returns (g, s) with s*a = g mod b."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], [Fraction(0)]
    while any(c != 0 for c in r1):
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        # s_new = s0 - q*s1
        prod = [Fraction(0)] * (len(q) + len(s1) - 1)
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    prod[i + j] += qi * sj
        new = [Fraction(0)] * max(len(s0), len(prod))
        for i, c in enumerate(s0):
            new[i] += c
        for i, c in enumerate(prod):
            new[i] -= c
        while len(new) > 1 and new[-1] == 0:
            new.pop()
        s0, s1 = s1, new
    while len(r0) > 1 and r0[-1] == 0:
        r0.pop()
    return r0, s0


class CriticalRing:
    """Q[p]/(qr*p^qr - 1) with eager reduction p^qr -> 1/qr."""

    def __init__(self, qr: int):
        if qr < 1:
            raise ValueError("qr must be a positive integer")
        self.qr = qr
        self._inv_qr = Fraction(1, qr)
        self.zero = RingElem(self, (Fraction(0),) * qr)
        self.one = self.from_rational(1)
        self.p = self.monomial(1)

    def from_rational(self, value) -> "RingElem":
        c = [Fraction(0)] * self.qr
        c[0] = Fraction(value)
        return RingElem(self, tuple(c))

    def monomial(self, k, value=1) -> "RingElem":
        """value * p^k, reduced."""
        c = [Fraction(0)] * self.qr
        c[k % self.qr] = Fraction(value) * self._inv_qr ** (k // self.qr)
        return RingElem(self, tuple(c))

    def elem(self, coeffs) -> "RingElem":
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.qr:
            raise ValueError("coefficient vector must have length qr")
        return RingElem(self, coeffs)

    def power_sum(self, k: int) -> Fraction:
        """sum_i p_i^k over the critical points."""
        if k % self.qr:
            return Fraction(0)
        return self.qr * self._inv_qr ** (k // self.qr)

    def __eq__(self, other):
        return isinstance(other, CriticalRing) and other.qr == self.qr

    def __hash__(self):
        return hash(("CriticalRing", self.qr))

    def __repr__(self):
        return f"CriticalRing(qr={self.qr})"


class RingElem:
    """Element c0 + c1 p + ... + c_{qr-1} p^{qr-1} of the critical ring."""

    __slots__ = ("ring", "c")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = coeffs

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, RingElem):
            return self.ring.qr == other.ring.qr and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self == self.ring.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring.qr, self.c))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.from_rational(other)
        return RingElem(self.ring, tuple(a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.ring, tuple(-a for a in self.c))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.from_rational(other)
        return RingElem(self.ring, tuple(a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return RingElem(self.ring, tuple(a * f for a in self.c))
        if not isinstance(other, RingElem):
            return NotImplemented
        qr = self.ring.qr
        inv_qr = self.ring._inv_qr
        out = [Fraction(0)] * qr
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j, b in enumerate(other.c):
                if not b:
                    continue
                k = i + j
                if k >= qr:
                    out[k - qr] += a * b * inv_qr
                else:
                    out[k] += a * b
        return RingElem(self.ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "RingElem":
        """Multiplicative inverse in R; raises NonInvertible on zero divisors."""
        qr = self.ring.qr
        modulus = [Fraction(-1)] + [Fraction(0)] * (qr - 1) + [Fraction(qr)]
        g, s = _poly_xgcd(list(self.c), modulus)
        if len(g) != 1 or g[0] == 0:
            raise NonInvertible(f"zero divisor in R (qr={qr}): {self.c}")
        inv_g = 1 / g[0]
        c = [Fraction(0)] * qr
        for i, coeff in enumerate(s):
            # s may exceed degree qr-1 in corner cases; reduce p^qr -> 1/qr
            c[i % qr] += coeff * inv_g * self.ring._inv_qr ** (i // qr)
        return RingElem(self.ring, tuple(c))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return self * other.inverse()

    def trace(self) -> Fraction:
        """sum of this function's values over all qr critical points."""
        total = Fraction(0)
        for k, coeff in enumerate(self.c):
            if coeff:
                total += coeff * self.ring.power_sum(k)
        return total

    def __repr__(self):
        terms = [f"{c}*p^{k}" for k, c in enumerate(self.c) if c]
        return " + ".join(terms) if terms else "0"


def trace_critical(elem: RingElem) -> Fraction:
    """Trace map of the critical ring: sum over the roots of qr*p^qr = 1."""
    return elem.trace()


def invert_ring_elem(elem: RingElem) -> RingElem:
    return elem.inverse()
