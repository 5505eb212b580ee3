"""Sparse exact multivariate series with per-variable truncation.

Used for the free energies H_{g,n} and everything the cut-and-join machinery
manipulates.  Exponents may be negative (Laurent monomials show up when the
two-point singular part is expanded in a fixed region), so alongside the
per-variable upper truncation an optional total-degree cap is tracked: all
monomials of total degree <= total_cap and per-variable degree <= trunc[i]
are exact.
"""

from fractions import Fraction

_BIG = 10 ** 9


class MultiSeries:
    __slots__ = ("n", "trunc", "total_cap", "c")

    def __init__(self, n, trunc, coeffs=None, total_cap=_BIG):
        self.n = n
        if isinstance(trunc, int):
            trunc = (trunc,) * n
        self.trunc = tuple(trunc)
        self.total_cap = total_cap
        self.c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = Fraction(v) if isinstance(v, int) else v
                if v and self._inside(e):
                    self.c[e] = v

    def _inside(self, e):
        return all(x <= t for x, t in zip(e, self.trunc)) and sum(e) <= self.total_cap

    # -- access ---------------------------------------------------------

    def coeff(self, e):
        e = tuple(e)
        if not self._inside(e):
            raise KeyError(f"monomial {e} outside truncation")
        return self.c.get(e, Fraction(0))

    def is_zero(self):
        return not self.c

    def monomials(self):
        return sorted(self.c)

    # -- arithmetic -------------------------------------------------------

    def _merge_trunc(self, other):
        return (tuple(min(a, b) for a, b in zip(self.trunc, other.trunc)),
                min(self.total_cap, other.total_cap))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            zero = (0,) * self.n
            out = MultiSeries(self.n, self.trunc, self.c, self.total_cap)
            v = out.c.get(zero, Fraction(0)) + other
            if v:
                out.c[zero] = v
            else:
                out.c.pop(zero, None)
            return out
        trunc, cap = self._merge_trunc(other)
        out = MultiSeries(self.n, trunc, None, cap)
        for src in (self.c, other.c):
            for e, v in src.items():
                if not out._inside(e):
                    continue
                w = out.c.get(e, Fraction(0)) + v
                if w:
                    out.c[e] = w
                else:
                    out.c.pop(e, None)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = MultiSeries(self.n, self.trunc, None, self.total_cap)
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _lows(self):
        if not self.c:
            return (0,) * self.n, 0
        lows = tuple(min(e[i] for e in self.c) for i in range(self.n))
        return lows, min(sum(e) for e in self.c)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            out = MultiSeries(self.n, self.trunc, None, self.total_cap)
            if other:
                out.c = {e: v * other for e, v in self.c.items()}
            return out
        la, ta = self._lows()
        lb, tb = other._lows()
        trunc = tuple(min(sa + lbi, sb + lai) for sa, sb, lai, lbi in
                      zip(self.trunc, other.trunc, la, lb))
        cap = min(self.total_cap + tb, other.total_cap + ta)
        out = MultiSeries(self.n, trunc, None, cap)
        for ea, va in self.c.items():
            for eb, vb in other.c.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if not out._inside(e):
                    continue
                w = out.c.get(e, Fraction(0)) + va * vb
                if w:
                    out.c[e] = w
                else:
                    out.c.pop(e, None)
        return out

    __rmul__ = __mul__

    def D(self, i):
        """The degree operator x_i d/dx_i."""
        out = MultiSeries(self.n, self.trunc, None, self.total_cap)
        out.c = {e: v * e[i] for e, v in self.c.items() if e[i]}
        return out

    def truncate(self, trunc=None, total_cap=None):
        out = MultiSeries(self.n,
                          self.trunc if trunc is None else trunc,
                          None,
                          self.total_cap if total_cap is None else total_cap)
        for e, v in self.c.items():
            if out._inside(e):
                out.c[e] = v
        return out

    def permute_vars(self, perm):
        """Relabel variables: new exponent tuple e' with e'[perm[i]] = e[i]."""
        out = MultiSeries(self.n,
                          tuple(self.trunc[perm.index(i)] for i in range(self.n)),
                          None, self.total_cap)
        for e, v in self.c.items():
            ne = [0] * self.n
            for i, x in enumerate(e):
                ne[perm[i]] = x
            out.c[tuple(ne)] = v
        return out

    def is_symmetric(self):
        from itertools import permutations
        for perm in permutations(range(self.n)):
            for e, v in self.c.items():
                ne = tuple(e[perm.index(i)] for i in range(self.n))
                if not self._inside(ne):
                    continue
                if self.c.get(ne, Fraction(0)) != v:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, MultiSeries) or other.n != self.n:
            return NotImplemented
        trunc, cap = self._merge_trunc(other)
        keys = set(self.c) | set(other.c)
        for e in keys:
            if all(x <= t for x, t in zip(e, trunc)) and sum(e) <= cap:
                if self.c.get(e, Fraction(0)) != other.c.get(e, Fraction(0)):
                    return False
        return True

    def __repr__(self):
        if not self.c:
            return f"MultiSeries(0; trunc={self.trunc})"
        parts = [f"{v}*x^{e}" for e, v in sorted(self.c.items())[:8]]
        more = "" if len(self.c) <= 8 else f" ... ({len(self.c)} terms)"
        return " + ".join(parts) + more
