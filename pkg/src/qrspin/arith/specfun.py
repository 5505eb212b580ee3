"""Coefficient ring for generic-critical-point residues.

A SpecElem is an element of R[z_1..z_s] localized at the critical
polynomials P(z_j) = qr*z_j^{qr} - 1: a polynomial numerator with
critical-ring coefficients over a denominator prod_j P(z_j)^{d_j}.  The
spectator variables z_j are the correlator arguments that stay global while
one argument is expanded at the generic critical point p.

The single genuinely non-polynomial inverse ever needed is

    1/(p - z) = -qr * (z^{qr-1} + z^{qr-2} p + ... + p^{qr-1}) / P(z),

a telescoping identity off the critical locus; everything else stays
polynomial.  RatFrac is the same structure with plain rational coefficients,
produced by the trace map and used as the stored correlator payload.
"""

from fractions import Fraction

from qrspin.arith.ring import CriticalRing, RingElem


def _poly_add(a, b):
    out = dict(a)
    for e, v in b.items():
        w = out.get(e)
        w = v if w is None else w + v
        if _zero(w):
            out.pop(e, None)
        else:
            out[e] = w
    return out


def _zero(v):
    if isinstance(v, (int, Fraction)):
        return v == 0
    return v.is_zero()


def _poly_mul(a, b):
    out = {}
    for ea, va in a.items():
        for eb, vb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            prod = va * vb
            w = out.get(e)
            w = prod if w is None else w + prod
            if _zero(w):
                out.pop(e, None)
            else:
                out[e] = w
    return out


from functools import lru_cache


@lru_cache(maxsize=None)
def _P_power_terms(qr, m):
    """Expansion of (qr z^qr - 1)^m as ((exponent, coefficient), ...)."""
    out = []
    binom = 1
    for k in range(m + 1):
        out.append((qr * k, Fraction(binom * qr ** k * (-1) ** (m - k))))
        binom = binom * (m - k) // (k + 1)
    return tuple(out)


def _poly_mul_P(poly, j, qr, times=1):
    """Multiply a numerator dict by P(z_j)^times, P = qr*z^qr - 1."""
    if times == 0 or not poly:
        return dict(poly)
    terms = _P_power_terms(qr, times)
    out = {}
    for e, v in poly.items():
        for off, cf in terms:
            key = e[:j] + (e[j] + off,) + e[j + 1:]
            val = v * cf
            w = out.get(key)
            w = val if w is None else w + val
            if _zero(w):
                out.pop(key, None)
            else:
                out[key] = w
    return out


def _poly_divide_P(poly, j, qr):
    """Exact division of a numerator dict by P(z_j); None if not divisible.

    Runs fiber by fiber in the remaining variables: along each fiber this
    is synthetic division by qr z^qr - 1 from the top degree down, with the
    low-degree remainder checked to vanish.
    """
    if not poly:
        return {}
    inv_qr = Fraction(1, qr)
    fibers = {}
    for e, v in poly.items():
        fibers.setdefault(e[:j] + e[j + 1:], {})[e[j]] = v
    quot = {}
    for rest, coeffs in fibers.items():
        top = max(coeffs)
        if top < qr:
            return None
        q = {}
        for a in range(top, qr - 1, -1):
            na = coeffs.get(a)
            qa = q.get(a)
            val = na if qa is None else (na + qa if na is not None else qa)
            if val is None or _zero(val):
                continue
            q[a - qr] = val * inv_qr
        for a in range(min(qr, top + 1)):
            na = coeffs.get(a)
            qa = q.get(a)
            val = (na if na is not None else 0) + (qa if qa is not None else 0)
            if not _zero(val):
                return None
        for a, v in q.items():
            if not _zero(v):
                quot[rest[:j] + (a,) + rest[j:]] = v
    return quot


class SpecElem:
    """num / prod_j P(z_j)^{den_j} with num in R[z_1..z_s]."""

    __slots__ = ("ring", "ns", "num", "den")

    def __init__(self, ring: CriticalRing, ns: int, num=None, den=None):
        self.ring = ring
        self.ns = ns
        self.num = num if num is not None else {}
        self.den = den if den is not None else (0,) * ns

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls, ring, ns, value):
        if isinstance(value, (int, Fraction)):
            value = ring.from_rational(value)
        if value.is_zero():
            return cls(ring, ns)
        return cls(ring, ns, {(0,) * ns: value})

    @classmethod
    def monomial(cls, ring, ns, j, e=1, value=1):
        exp = tuple(e if i == j else 0 for i in range(ns))
        v = value if isinstance(value, RingElem) else ring.from_rational(value)
        return cls(ring, ns, {exp: v})

    @classmethod
    def inv_p_minus_z(cls, ring, ns, j):
        """1/(p - z_j) as an exact element with a single P(z_j) denominator."""
        qr = ring.qr
        num = {}
        for k in range(qr):
            exp = tuple(qr - 1 - k if i == j else 0 for i in range(ns))
            num[exp] = ring.monomial(k, -qr)
        den = tuple(1 if i == j else 0 for i in range(ns))
        return cls(ring, ns, num, den)

    @classmethod
    def inv_P(cls, ring, ns, j, power=1):
        """1/P(z_j)^power."""
        den = tuple(power if i == j else 0 for i in range(ns))
        return cls(ring, ns, {(0,) * ns: ring.one}, den)

    # -- predicates ------------------------------------------------------

    def is_zero(self):
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            other = SpecElem.const(self.ring, self.ns, other)
        return (self - other).is_zero()

    # -- arithmetic --------------------------------------------------------

    def _match_den(self, other):
        den = tuple(max(a, b) for a, b in zip(self.den, other.den))
        na, nb = self.num, other.num
        qr = self.ring.qr
        for j in range(self.ns):
            if den[j] > self.den[j]:
                na = _poly_mul_P(na, j, qr, den[j] - self.den[j])
            if den[j] > other.den[j]:
                nb = _poly_mul_P(nb, j, qr, den[j] - other.den[j])
        return na, nb, den

    def __add__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            other = SpecElem.const(self.ring, self.ns, other)
        na, nb, den = self._match_den(other)
        return SpecElem(self.ring, self.ns, _poly_add(na, nb), den)

    __radd__ = __add__

    def __neg__(self):
        return SpecElem(self.ring, self.ns,
                        {e: -v for e, v in self.num.items()}, self.den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            other = SpecElem.const(self.ring, self.ns, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RingElem)):
            if _zero(other) if not isinstance(other, RingElem) else other.is_zero():
                return SpecElem(self.ring, self.ns)
            return SpecElem(self.ring, self.ns,
                            {e: v * other for e, v in self.num.items()}, self.den)
        return SpecElem(self.ring, self.ns, _poly_mul(self.num, other.num),
                        tuple(a + b for a, b in zip(self.den, other.den)))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("SpecElem supports nonnegative powers only")
        result = SpecElem.const(self.ring, self.ns, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def reduce(self):
        """Cancel P(z_j) factors common to the numerator and denominator."""
        num, den = self.num, list(self.den)
        qr = self.ring.qr
        for j in range(self.ns):
            while den[j] > 0 and num:
                q = _poly_divide_P(num, j, qr)
                if q is None:
                    break
                num, den[j] = q, den[j] - 1
        if not num:
            den = [0] * self.ns
        return SpecElem(self.ring, self.ns, num, tuple(den))

    def trace(self):
        """Coefficient-wise trace over the critical points -> RatFrac."""
        num = {}
        for e, v in self.num.items():
            t = v.trace()
            if t:
                num[e] = t
        return RatFrac(self.ns, self.ring.qr, num, self.den)

    def degree(self, j):
        return max((e[j] for e in self.num), default=-1)

    def __repr__(self):
        return f"SpecElem({len(self.num)} terms / P^{self.den})"


class RatFrac:
    """num / prod_j P(z_j)^{den_j} with rational coefficients."""

    __slots__ = ("ns", "qr", "num", "den")

    def __init__(self, ns, qr, num=None, den=None):
        self.ns = ns
        self.qr = qr
        self.num = {e: Fraction(v) if isinstance(v, int) else v
                    for e, v in (num or {}).items() if v}
        self.den = den if den is not None else (0,) * ns

    def is_zero(self):
        return not self.num

    def scale(self, f):
        f = Fraction(f)
        return RatFrac(self.ns, self.qr,
                       {e: v * f for e, v in self.num.items()}, self.den)

    def __eq__(self, other):
        if not isinstance(other, RatFrac):
            return NotImplemented
        if self.ns != other.ns or self.qr != other.qr:
            return False
        a, b = self.reduce(), other.reduce()
        return a.num == b.num and a.den == b.den

    def reduce(self):
        num, den = self.num, list(self.den)
        for j in range(self.ns):
            while den[j] > 0 and num:
                q = _poly_divide_P(num, j, self.qr)
                if q is None:
                    break
                num, den[j] = q, den[j] - 1
        if not num:
            den = [0] * self.ns
        return RatFrac(self.ns, self.qr, num, tuple(den))

    def degree(self, j):
        return max((e[j] for e in self.num), default=-1)

    def permuted(self, perm):
        """Apply z_i -> z_{perm[i]} to the stored data."""
        num = {}
        for e, v in self.num.items():
            ne = [0] * self.ns
            for i, x in enumerate(e):
                ne[perm[i]] = x
            num[tuple(ne)] = v
        den = [0] * self.ns
        for i, d in enumerate(self.den):
            den[perm[i]] = d
        return RatFrac(self.ns, self.qr, num, tuple(den))

    def is_symmetric(self):
        from itertools import permutations
        base = self.reduce()
        for perm in permutations(range(self.ns)):
            if base.permuted(perm) != base:
                return False
        return True
