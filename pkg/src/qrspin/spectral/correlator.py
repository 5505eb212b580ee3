"""CEO correlators as exact rational data and the residue recursion.

A stable omega_{g,n} is stored as f_{g,n} = N(z_1..z_n) / prod_i P(z_i)^{d_i}
with omega = f dz_1...dz_n; the unstable cases keep their closed forms
omega_{0,1} = y dX and omega_{0,2} = dz dz/(z1-z2)^2.

ceo_step computes the residue at the generic critical point: every factor
is expanded in t = z - p over the spectator-localized ring (the other
variables stay exact rational data through 1/(p - z_j) = closed form over
P(z_j)), the t^{-1} coefficient is extracted, and the trace sums over all
qr critical points in one stroke.  The result is symmetry-checked and its
pole data validated before it enters the store.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from qrspin.arith.ring import RingElem
from qrspin.arith.series import Series, TruncationUnderflow
from qrspin.arith.specfun import RatFrac, SpecElem
from qrspin.arith.multiseries import MultiSeries
from qrspin.spectral.curve import SpectralCurve


class PoleEscape(ArithmeticError):
    """Computed correlator has poles away from the critical set."""


class AsymmetryDetected(ArithmeticError):
    """Computed correlator is not symmetric in its variables."""


@dataclass
class Correlator:
    q: int
    r: int
    g: int
    n: int
    frac: RatFrac

    def pole_orders(self):
        return self.frac.den


def _allowed_factor(g_i, arity):
    return (g_i, arity) == (0, 2) or 2 * g_i - 2 + arity > 0


class CorrelatorStore:
    """In-memory table of computed correlators keyed by (g, n) per curve.

    Disk persistence lives in qrspin.store; this object only coordinates
    the recursion.
    """

    def __init__(self, curve: SpectralCurve):
        self.curve = curve
        self.table = {}

    def has(self, g, n):
        return (g, n) in self.table

    def get(self, g, n) -> Correlator:
        if (g, n) not in self.table:
            raise KeyError(f"correlator ({g},{n}) not computed")
        return self.table[(g, n)]

    def put(self, corr: Correlator):
        self.table[(corr.g, corr.n)] = corr

    def ensure(self, g, n, order=None) -> Correlator:
        """Compute (and cache) omega_{g,n} and all its prerequisites."""
        if 2 * g - 2 + n <= 0:
            raise ValueError("only stable correlators are stored")
        if (g, n) in self.table:
            return self.table[(g, n)]
        if g >= 1 and 2 * (g - 1) - 2 + (n + 1) > 0:
            self.ensure(g - 1, n + 1, order)
        for g1 in range(g + 1):
            for a1 in range(1, n + 1):
                g2, a2 = g - g1, n + 1 - a1
                if _allowed_factor(g1, a1) and _allowed_factor(g2, a2):
                    if 2 * g1 - 2 + a1 > 0:
                        self.ensure(g1, a1, order)
                    if 2 * g2 - 2 + a2 > 0:
                        self.ensure(g2, a2, order)
        corr = ceo_step(self.curve, g, n, self, order=order)
        self.put(corr)
        return corr


# ---------------------------------------------------------------------------
# local expansions over the spectator ring
# ---------------------------------------------------------------------------


def _spec_zero(curve, ns):
    return SpecElem(curve.ring, ns)


def _lift(series_over_R: Series, curve, ns) -> Series:
    """Reinterpret a Series over R as a Series over the spectator ring."""
    return series_over_R.map_coeffs(
        lambda v: SpecElem.const(curve.ring, ns, v),
        zero=_spec_zero(curve, ns))


def geometric_pole(curve, ns, j, power, pad, sigma=None):
    """1/(z - z_j)^power at z = p + t (or p + sigma(t)) over the spectators.

    Returns (series, den) where every coefficient is a pure polynomial and
    den is the vector of cleared P(z_j)-exponents: the honest function is
    series / prod P^den.  Clearing denominators up front keeps coefficient
    addition free of denominator matching, which otherwise dominates.
    """
    from qrspin.arith.specfun import _poly_mul_P
    work = pad + power + 2
    D = work + 2
    R = curve.ring
    qr = curve.qr
    # u = (p - z_j) P(z_j) expressed as a polynomial: -qr sum z^{qr-1-i} p^i
    u = SpecElem(R, ns, {tuple(qr - 1 - i if v == j else 0 for v in range(ns)):
                         R.monomial(i, -qr) for i in range(qr)})
    upow = SpecElem.const(R, ns, 1)
    coeffs = {}
    for k in range(work + 1):
        upow = upow * u
        num = _poly_mul_P(upow.num, j, qr, D - k - 1)
        coeffs[k] = SpecElem(R, ns, num if k % 2 == 0 else
                             {e: -v for e, v in num.items()})
    base = Series(coeffs, work, _spec_zero(curve, ns))
    for m in range(1, power):
        base = base.derivative().scale(Fraction(-1, m))
    if sigma is not None:
        base = base.compose(_lift(sigma, curve, ns))
    den = tuple(D if v == j else 0 for v in range(ns))
    return base, den


def expand_correlator(corr: Correlator, curve, ns, slot_map, local_slots,
                      pad) -> Series:
    """Expand f_{g,n} with some slots local and the rest spectators.

    slot_map maps non-local slot index -> spectator id; local_slots maps
    slot index -> t-series over R for z - p (t itself or the deck series).
    """
    frac = corr.frac
    R = curve.ring
    zero = _spec_zero(curve, ns)
    zser = {slot: Series({0: R.p}, pad, R.zero) + s
            for slot, s in local_slots.items()}
    pow_cache = {}

    def local_pow(slot, e):
        key = (slot, e)
        if key not in pow_cache:
            if e == 0:
                pow_cache[key] = Series({0: R.one}, pad, R.zero)
            else:
                pow_cache[key] = local_pow(slot, e - 1) * zser[slot]
        return pow_cache[key]

    num_series = Series({}, pad, zero)
    den = [0] * ns
    for exps, coeff in frac.num.items():
        spec = SpecElem.const(curve.ring, ns, coeff)
        for slot, e in enumerate(exps):
            if slot in local_slots or e == 0:
                continue
            spec = spec * SpecElem.monomial(curve.ring, ns, slot_map[slot], e)
        term = Series({0: spec}, pad, zero)
        for slot in sorted(local_slots):
            if exps[slot]:
                term = term * _lift(local_pow(slot, exps[slot]), curve, ns)
        num_series = num_series + term
    for slot, d in enumerate(frac.den):
        if d == 0:
            continue
        if slot in local_slots:
            P = (zser[slot] ** curve.qr).scale(Fraction(curve.qr)) - R.one
            num_series = num_series * _lift(P.inverse() ** d, curve, ns)
        else:
            den[slot_map[slot]] += d
    return num_series, tuple(den)


# ---------------------------------------------------------------------------
# the recursion
# ---------------------------------------------------------------------------


def default_order(g, n):
    return 6 * g + 2 * n + 8


def ceo_step(curve: SpectralCurve, g, n, store: CorrelatorStore,
             order=None) -> Correlator:
    """One step of the CEO recursion at the generic critical point."""
    if order is None:
        order = default_order(g, n)
    for _ in range(3):
        try:
            return _ceo_step_at_order(curve, g, n, store, order)
        except TruncationUnderflow:
            order = order + order // 2 + 4
    return _ceo_step_at_order(curve, g, n, store, order)


def _lift_den(curve, piece, target):
    """Raise (series, den) to the common denominator vector `target`."""
    from qrspin.arith.specfun import _poly_mul_P
    series, den = piece
    diff = [t - d for t, d in zip(target, den)]
    if not any(diff):
        return series
    qr = curve.qr

    def lift(spec):
        num = spec.num
        for j, m in enumerate(diff):
            if m:
                num = _poly_mul_P(num, j, qr, m)
        return SpecElem(spec.ring, spec.ns, num, spec.den)

    return series.map_coeffs(lift)


def _sum_pieces(curve, ns, pieces, pad):
    """Sum of (series, den)-pieces over the common denominator."""
    if not pieces:
        return Series({}, pad, _spec_zero(curve, ns)), (0,) * ns
    target = tuple(max(d[i] for _, d in pieces) for i in range(ns))
    total = None
    for piece in pieces:
        lifted = _lift_den(curve, piece, target)
        total = lifted if total is None else total + lifted
    return total, target


def _ceo_step_at_order(curve, g, n, store, pad):
    ns = n
    R = curve.ring
    sigma = curve.deck(pad + 4)
    t_series = Series.x(pad + 4, one=R.one, zero=R.zero)

    # denominator: (y(sigma z) - y(z)) X'(z)
    y_loc = curve.y_local(pad + 4)
    den = (y_loc.compose(sigma) - y_loc) * curve.Xp(pad + 4)
    inv_den = _lift(den.inverse(), curve, ns)

    pieces = []

    # piece A: omega_{g-1, n+1}(z, sigma z, z_2..z_n)
    if g >= 1:
        if (g - 1, n + 1) == (0, 2):
            diff = t_series - sigma
            pieces.append((_lift((diff * diff).inverse(), curve, ns),
                           (0,) * ns))
        else:
            pieces.append(expand_correlator(
                store.get(g - 1, n + 1), curve, ns,
                slot_map={s: s - 1 for s in range(2, n + 1)},
                local_slots={0: t_series, 1: sigma},
                pad=pad))

    # piece B: products over stable splittings (no omega_{0,1} factors)
    rest = tuple(range(1, n))  # spectator ids of z_2..z_n

    def factor(g_i, ids, use_sigma):
        if (g_i, len(ids)) == (0, 1):
            return geometric_pole(curve, ns, ids[0], 2, pad,
                                  sigma=sigma if use_sigma else None)
        return expand_correlator(
            store.get(g_i, len(ids) + 1), curve, ns,
            slot_map={s: ids[s - 1] for s in range(1, len(ids) + 1)},
            local_slots={0: sigma if use_sigma else t_series},
            pad=pad)

    for g1 in range(g + 1):
        g2 = g - g1
        for size in range(0, len(rest) + 1):
            for I1 in combinations(rest, size):
                I2 = tuple(i for i in rest if i not in I1)
                if not _allowed_factor(g1, len(I1) + 1) \
                        or not _allowed_factor(g2, len(I2) + 1):
                    continue
                if (g1, len(I1)) == (0, 0) or (g2, len(I2)) == (0, 0):
                    continue
                f1, d1 = factor(g1, I1, False)
                f2, d2 = factor(g2, I2, True)
                pieces.append((f1 * f2,
                               tuple(a + b for a, b in zip(d1, d2))))

    bracket, bracket_den = _sum_pieces(curve, ns, pieces, pad)
    G = bracket * _lift(curve.deck_prime(pad + 2), curve, ns) * inv_den
    if G.trunc < -1:
        raise TruncationUnderflow("insufficient working order for residue")

    # The kernel's z_1 dependence is assembled after the residue: with
    # c = 1/(p - z_1),
    #   Res_t [1/(z - z_1) - 1/(sigma z - z_1)] G(t)
    #     = sum_{k>=1} (-1)^k c^{k+1} ([G]_{-1-k} - [sigma^k G]_{-1}),
    # so G never carries the extra variable through the products.
    depth = -G.low() - 1  # deepest k with [G]_{-1-k} nonzero
    c_elem = SpecElem.inv_p_minus_z(curve.ring, ns, 0)
    sigma_pow = Series({0: R.one}, pad + 4, R.zero)
    residue = SpecElem(curve.ring, ns)
    c_pow = c_elem
    for k in range(1, max(depth, 0) + 1):
        c_pow = c_pow * c_elem
        sigma_pow = sigma_pow * sigma
        direct = G.coeff(-1 - k)
        twisted = _spec_zero(curve, ns)
        for j, sj in sigma_pow.c.items():
            lowj = -1 - j
            if G.low() <= lowj <= G.trunc:
                twisted = twisted + G.coeff(lowj) * sj
        term = (direct - twisted) * c_pow
        residue = residue + term if k % 2 == 0 else residue - term
    raw = residue.trace()
    total_den = tuple(a + b for a, b in zip(raw.den, bracket_den))
    result = RatFrac(ns, curve.qr, raw.num, total_den)
    result = result.scale(Fraction(1, 2)).reduce()

    qr = curve.qr
    bound = 6 * g - 4 + 2 * n
    for i in range(ns):
        if result.den[i] > bound:
            raise PoleEscape(
                f"pole order {result.den[i]} at variable {i} exceeds {bound}")
        if result.degree(i) > qr * result.den[i] - 2:
            raise PoleEscape(
                f"numerator degree {result.degree(i)} in variable {i} "
                f"too large for P^{result.den[i]}")
    if not result.is_symmetric():
        raise AsymmetryDetected(f"omega_({g},{n}) came out asymmetric")
    return Correlator(curve.q, curve.r, g, n, result)


# ---------------------------------------------------------------------------
# expansion near x = 0
# ---------------------------------------------------------------------------


def expand_at_zero(curve: SpectralCurve, corr, degrees) -> MultiSeries:
    """Exact coefficients of W_{g,n}(z(x_1), .., z(x_n)) in powers of x.

    The coefficient of prod x_i^{mu_i} equals prod(mu_i) times the connected
    Hurwitz number of mu.  For (0,2) pass the string "w02": the double pole
    x1 x2/(x1-x2)^2 is subtracted before expanding.
    """
    if corr == "w02":
        if isinstance(degrees, int):
            degrees = (degrees, degrees)
        return _expand_w02(curve, degrees)
    if isinstance(degrees, int):
        degrees = (degrees,) * corr.n
    n = corr.n
    order = max(degrees) + 2
    zx = curve.z_of_x(order)
    frac = corr.frac
    per_var = []
    for i in range(n):
        d = frac.den[i]
        inv = _P_of(curve, zx, order).inverse() ** (d + 1)
        per_var.append(-zx * inv)
    pow_tables = []
    for i in range(n):
        tbl = [Series({0: Fraction(1)}, order)]
        for _ in range(max(frac.degree(i), 0)):
            tbl.append(tbl[-1] * zx)
        pow_tables.append(tbl)
    out = MultiSeries(n, degrees)
    for exps, coeff in frac.num.items():
        term = None
        for i, e in enumerate(exps):
            s = pow_tables[i][e] * per_var[i]
            term = _tensor(term, s, i, n, degrees)
        for key, v in term.items():
            w = out.c.get(key, Fraction(0)) + coeff * v
            if w:
                out.c[key] = w
            else:
                out.c.pop(key, None)
    return out


def _tensor(acc, series, i, n, degrees):
    if acc is None:
        return {tuple(k if j == i else 0 for j in range(n)): v
                for k, v in series.c.items() if 0 <= k <= degrees[i]}
    out = {}
    for key, v in acc.items():
        for k, w in series.c.items():
            if not 0 <= k <= degrees[i]:
                continue
            nk = key[:i] + (k,) + key[i + 1:]
            val = v * w
            cur = out.get(nk)
            cur = val if cur is None else cur + val
            if cur:
                out[nk] = cur
            else:
                out.pop(nk, None)
    return out


def _P_of(curve, zx, order):
    """P(z(x)) = qr z(x)^{qr} - 1 as a series in x."""
    return (zx ** curve.qr).scale(Fraction(curve.qr)) - Fraction(1)


def _expand_w02(curve, degrees):
    """Regularized W_{0,2}: B/(dX1 dX2) minus x1 x2/(x1 - x2)^2."""
    order = max(degrees) + 3
    zx = curve.z_of_x(order + 2)
    V = MultiSeries(2, (order, order), total_cap=10 ** 9)
    for k in sorted(zx.c):
        ck = zx.coeff(k)
        for i in range(k):  # (z(x1)-z(x2))/(x1-x2) = sum c_k h_{k-1}(x1,x2)
            e = (i, k - 1 - i)
            V.c[e] = V.c.get(e, Fraction(0)) + ck
    inv_xp = -zx * _P_of(curve, zx, order).inverse()
    G = (_to_ms(inv_xp, 0, order) * _to_ms(inv_xp, 1, order)
         * _ms_power_inverse(V, order, 2))
    N = G - MultiSeries(2, (order, order), {(1, 1): Fraction(1)})
    for _ in range(2):
        N = _divide_by_difference(N)
    return N.truncate((degrees[0], degrees[1]))


def _to_ms(series, slot, order):
    out = MultiSeries(2, (order, order))
    for k, v in series.c.items():
        if 0 <= k <= order:
            out.c[(k, 0) if slot == 0 else (0, k)] = v
    return out


def _ms_power_inverse(ms, order, power):
    """1/ms^power for a 2-variable series with invertible constant term."""
    c0 = ms.c.get((0, 0))
    if not c0:
        raise ArithmeticError("series has no constant term")
    rest = (ms * (Fraction(1) / c0)).truncate((order, order))
    rest.c.pop((0, 0), None)
    inv = MultiSeries(2, (order, order), {(0, 0): Fraction(1)})
    powr = MultiSeries(2, (order, order), {(0, 0): Fraction(1)})
    for k in range(1, 2 * order + 1):
        powr = (powr * rest).truncate((order, order))
        if powr.is_zero():
            break
        inv = inv + powr * Fraction((-1) ** k)
    out = inv
    for _ in range(power - 1):
        out = (out * inv).truncate((order, order))
    return out * (Fraction(1) / c0) ** power


def _divide_by_difference(N):
    """Exact division of a 2-variable series by (x1 - x2)."""
    by_b = {}
    for (a, b), v in N.c.items():
        by_b.setdefault(b, {})[a] = v
    out = MultiSeries(2, N.trunc, total_cap=N.total_cap)
    prev = {}
    for b in range(0, max(by_b, default=0) + 1):
        cur = dict(by_b.get(b, {}))
        for a, v in prev.items():
            w = cur.get(a, Fraction(0)) + v
            if w:
                cur[a] = w
            else:
                cur.pop(a, None)
        q = {}
        for a, v in cur.items():
            if a == 0:
                raise ArithmeticError("series not divisible by (x1 - x2)")
            q[a - 1] = v
        for a, v in q.items():
            out.c[(a, b)] = v
        prev = q
    return out
