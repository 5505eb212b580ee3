"""Spectral curve data and local expansions at the generic critical point.

The curve is X(z) = -z^{qr} + log z on P^1 with y = z^q and the standard
bidifferential.  X'(z) = 1/z - qr z^{qr-1} vanishes exactly on the roots of
P(z) = qr z^{qr} - 1, all simple, with X''(p) = -qr/p^2 invertible in the
critical ring.  All local data is expanded in t = z - p over R, so one
computation covers all qr critical points at once; sums over critical
points are traces.

The deck transformation is the non-identity branch of X(p + u) = X(p + t),
a series -t + s_2 t^2 + ... obtained by successive linear solves against
2 a_2 = X''(p).  Working in the unnormalized coordinate t avoids the square
root of X''(p) that the normalized coordinate would need.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from qrspin.arith.ring import CriticalRing, RingElem
from qrspin.arith.series import Series, lagrange_invert


@dataclass(frozen=True)
class DeckSeries:
    """sigma(t) = -t + sum_{k>=2} s_k t^k with critical-ring coefficients."""

    series: Series
    order: int

    def coeff(self, k) -> RingElem:
        return self.series.coeff(k)


class SpectralCurve:
    def __init__(self, q: int, r: int):
        if q < 1 or r < 1:
            raise ValueError("q and r must be positive")
        self.q = q
        self.r = r
        self.qr = q * r
        self.ring = CriticalRing(self.qr)
        self._cache = {}

    def __repr__(self):
        return f"SpectralCurve(q={self.q}, r={self.r})"

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- local series over the critical ring --------------------------------

    def A(self, order) -> Series:
        """X(p+t) - X(p) = -(p+t)^{qr} + p^{qr} + log(1 + t/p)."""
        def build():
            R = self.ring
            qr = self.qr
            c = {}
            p_inv = R.p.inverse()
            for k in range(1, order + 1):
                val = R.zero
                if k <= qr:
                    val = val - R.monomial(qr - k, comb(qr, k))
                val = val + (p_inv ** k) * Fraction((-1) ** (k + 1), k)
                if not val.is_zero():
                    c[k] = val
            s = Series(c, order, R.zero)
            assert s.coeff(1).is_zero(), "p must be a critical point"
            return s
        return self._cached(("A", order), build)

    def Xp(self, order) -> Series:
        """X'(p+t) as a series in t (valuation 1)."""
        def build():
            return self.A(order + 1).derivative()
        return self._cached(("Xp", order), build)

    def inv_Xp(self, order) -> Series:
        def build():
            return self.Xp(order + 2).inverse().truncate(order)
        return self._cached(("invXp", order), build)

    def deck(self, order) -> Series:
        """sigma(t) with X(p + sigma(t)) = X(p + t), sigma != id."""
        def build():
            R = self.ring
            A = self.A(order + 1)
            a2 = A.coeff(2)
            inv_2a2 = (a2 + a2).inverse()
            sigma = Series({1: R.from_rational(-1)}, order, R.zero)
            for m in range(2, order + 1):
                err = (A.compose(sigma) - A).coeff(m + 1)
                if not err.is_zero():
                    # A(sigma + s t^m) - A(sigma) = 2 a2 sigma_1 s t^{m+1} + ...
                    # and sigma_1 = -1, so the correction is err / (2 a2)
                    sigma = sigma + Series({m: err * inv_2a2}, order, R.zero)
            return sigma
        return self._cached(("deck", order), build)

    def deck_prime(self, order) -> Series:
        def build():
            return self.deck(order + 1).derivative()
        return self._cached(("deck'", order), build)

    def y_local(self, order) -> Series:
        """y(p+t) = (p+t)^q."""
        def build():
            R = self.ring
            c = {k: R.monomial(self.q - k, comb(self.q, k))
                 for k in range(0, min(self.q, order) + 1)}
            return Series(c, order, R.zero)
        return self._cached(("y", order), build)

    def P_local(self, order) -> Series:
        """P(p+t) = qr (p+t)^{qr} - 1, a series with valuation 1."""
        def build():
            R = self.ring
            qr = self.qr
            c = {k: R.monomial(qr - k, qr * comb(qr, k))
                 for k in range(1, min(qr, order) + 1)}
            return Series(c, order, R.zero)
        return self._cached(("P", order), build)

    # -- global rational series -------------------------------------------

    def x_series(self, order) -> Series:
        """x(z) = z e^{-z^{qr}} as a rational series in z."""
        def build():
            z = Series.x(order)
            return (z * (-(z ** self.qr)).exp()).truncate(order)
        return self._cached(("x", order), build)

    def z_of_x(self, order) -> Series:
        """Compositional inverse of x(z) near 0."""
        def build():
            return lagrange_invert(self.x_series(order), order)
        return self._cached(("zofx", order), build)


def deck_transformation(curve: SpectralCurve, order: int) -> DeckSeries:
    """Public deck-transformation op with its defining checks."""
    if order < 2:
        raise ValueError("order must be >= 2")
    sigma = curve.deck(order)
    square = sigma.compose(sigma)
    t = Series.x(order, one=curve.ring.one, zero=curve.ring.zero)
    if not square == t:
        raise AssertionError("deck transformation is not an involution")
    A = curve.A(order)
    if not A.compose(sigma) == A:
        raise AssertionError("deck transformation does not preserve X")
    return DeckSeries(sigma, order)
