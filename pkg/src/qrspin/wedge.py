"""q-orbifold r-spin Hurwitz numbers through the semi-infinite wedge.

The charge-zero Fock space is the span of basis vectors v_lambda indexed by
partitions.  alpha_{-k} adds a border strip of size k with sign (-1)^height,
alpha_k removes one, and the diagonal operator F_n acts on v_lambda by the
exact rational eigenvalue sum_i [(lam_i - i + 1/2)^n - (-i + 1/2)^n].  The
disconnected numbers are vacuum expectations

    h = < (alpha_q/q)^{d/q} / (d/q)!  *  F_{r+1}^m / (m! (r+1)^m)
          * prod_i alpha_{-mu_i}/mu_i >,

with m = (2g - 2 + l(mu) + d/q)/r, and connected numbers follow by
inclusion-exclusion over set partitions of the marked parts with genus
distributed so Euler characteristics add.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial

from qrspin.arith.multiseries import MultiSeries
from qrspin.partitions import (
    centralizer_order,
    character,
    check_partition,
    content_power_sum,
    dimension,
    partitions,
    strip_additions,
    strip_removals,
)


class IntegralityViolation(ValueError):
    """The (g, mu, q, r) data does not give a nonnegative integer m."""


class SingularSystem(RuntimeError):
    """Completed-cycle linear system was underdetermined."""


class FitImpossible(RuntimeError):
    """No polynomial within the degree bound interpolates the data."""


# ---------------------------------------------------------------------------
# Fock space
# ---------------------------------------------------------------------------


class FockVector:
    """Finite rational linear combination of partition basis vectors."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for lam, c in terms.items():
                if c:
                    self.terms[lam] = Fraction(c) if isinstance(c, int) else c

    @staticmethod
    def vacuum():
        return FockVector({(): Fraction(1)})

    def __add__(self, other):
        out = dict(self.terms)
        for lam, c in other.terms.items():
            v = out.get(lam, Fraction(0)) + c
            if v:
                out[lam] = v
            else:
                out.pop(lam, None)
        return FockVector(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, f):
        if not f:
            return FockVector()
        return FockVector({lam: c * f for lam, c in self.terms.items()})

    def coeff(self, lam):
        return self.terms.get(lam, Fraction(0))

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, FockVector) and (self - other).is_zero()

    def __repr__(self):
        return " + ".join(f"{c}*v{lam}" for lam, c in sorted(self.terms.items())) or "0"


def apply_alpha_neg(k: int, v: FockVector) -> FockVector:
    """alpha_{-k} v: add border strips of size k with sign (-1)^height."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = {}
    for lam, c in v.terms.items():
        for mu, h in strip_additions(lam, k):
            w = out.get(mu, Fraction(0)) + (c if h % 2 == 0 else -c)
            if w:
                out[mu] = w
            else:
                out.pop(mu, None)
    return FockVector(out)


def apply_alpha_pos(k: int, v: FockVector) -> FockVector:
    """alpha_k v for k >= 1: remove border strips of size k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = {}
    for lam, c in v.terms.items():
        for mu, h in strip_removals(lam, k):
            w = out.get(mu, Fraction(0)) + (c if h % 2 == 0 else -c)
            if w:
                out[mu] = w
            else:
                out.pop(mu, None)
    return FockVector(out)


def apply_f_operator(n: int, v: FockVector) -> FockVector:
    """Diagonal operator F_n."""
    return FockVector({lam: c * f_operator_eigenvalue(n, lam)
                       for lam, c in v.terms.items()})


def f_operator_eigenvalue(n: int, lam) -> Fraction:
    """Exact eigenvalue of F_n on v_lam."""
    return content_power_sum(tuple(lam), n)


# ---------------------------------------------------------------------------
# Hurwitz numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HurwitzKey:
    g: int
    mu: tuple
    q: int = 1
    r: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mu", check_partition(self.mu))
        if self.g < 0 or self.q < 1 or self.r < 1:
            raise ValueError("need g >= 0, q >= 1, r >= 1")
        if sum(self.mu) % self.q:
            raise IntegralityViolation(f"q={self.q} does not divide |mu|={sum(self.mu)}")
        if self.m < 0:
            raise IntegralityViolation(f"negative m for {self}")

    @property
    def d(self):
        return sum(self.mu)

    @property
    def m(self):
        num = 2 * self.g - 2 + len(self.mu) + self.d // self.q
        m, rem = divmod(num, self.r)
        if rem:
            raise IntegralityViolation(
                f"m = ({num})/{self.r} is not an integer for {self}")
        return m


def number_of_completed_cycles(g, mu, q, r):
    """m = (2g - 2 + l(mu) + |mu|/q)/r, or None when invalid."""
    d = sum(mu)
    if d % q:
        return None
    num = 2 * g - 2 + len(mu) + d // q
    m, rem = divmod(num, r)
    if rem or m < 0:
        return None
    return m


@lru_cache(maxsize=None)
def _scaled_eigenvalue_int(lam, r) -> int:
    """2^{r+1} * (eigenvalue of F_{r+1} on v_lam), an integer."""
    total = 0
    for i, part in enumerate(lam, start=1):
        total += (2 * part - 2 * i + 1) ** (r + 1) - (-2 * i + 1) ** (r + 1)
    return total


@lru_cache(maxsize=2048)
def _alpha_product(mu) -> tuple:
    """Coefficients of prod_i alpha_{-mu_i} |0>, as a sorted items tuple.

    mu is sorted descending and applied one part at a time, so partitions
    sharing leading parts share the whole prefix computation.
    """
    if not mu:
        return (((), 1),)
    prefix = dict(_alpha_product(mu[:-1]))
    k = mu[-1]
    out = {}
    for lam, c in prefix.items():
        for nu, h in strip_additions(lam, k):
            w = out.get(nu, 0) + (c if h % 2 == 0 else -c)
            if w:
                out[nu] = w
            else:
                out.pop(nu, None)
    return tuple(sorted(out.items()))


class WedgeEngine:
    """Shared caches for one (q, r): strip-product vectors and pairings."""

    def __init__(self, q: int, r: int):
        self.q = q
        self.r = r

    def _alpha_product(self, mu) -> tuple:
        return _alpha_product(mu)

    def _q_power_vector(self, d) -> tuple:
        return _alpha_product((self.q,) * (d // self.q))

    def disconnected(self, mu, m) -> Fraction:
        """Disconnected correlator with m completed-cycle insertions."""
        mu = tuple(sorted(mu, reverse=True))
        d = sum(mu)
        if d % self.q:
            return Fraction(0)
        if d == 0:
            return Fraction(1) if m == 0 else Fraction(0)
        r = self.r
        left = dict(self._q_power_vector(d))
        total = 0
        for lam, c in self._alpha_product(mu):
            lc = left.get(lam)
            if lc:
                total += lc * c * _scaled_eigenvalue_int(lam, r) ** m
        denom = (self.q ** (d // self.q) * factorial(d // self.q)
                 * factorial(m) * (r + 1) ** m * 2 ** ((r + 1) * m))
        for part in mu:
            denom *= part
        return Fraction(total, denom)

    def connected(self, g, mu) -> Fraction:
        """Connected number by inclusion-exclusion over part blocks."""
        mu = tuple(sorted(mu, reverse=True))
        m = number_of_completed_cycles(g, mu, self.q, self.r)
        if m is None:
            raise IntegralityViolation(f"invalid key g={g}, mu={mu}, q={self.q}, r={self.r}")
        return self._connected(mu, m)

    @lru_cache(maxsize=100000)
    def _connected(self, mu, m) -> Fraction:
        n = len(mu)
        if n == 1:
            return self.disconnected(mu, m)
        total = self.disconnected(mu, m)
        rest_idx = tuple(range(1, n))
        for size in range(0, n - 1):
            for comb in combinations(rest_idx, size):
                block = (0,) + comb
                other = tuple(i for i in rest_idx if i not in comb)
                mub = tuple(sorted((mu[i] for i in block), reverse=True))
                muo = tuple(sorted((mu[i] for i in other), reverse=True))
                if sum(mub) % self.q or sum(muo) % self.q:
                    continue
                for m1 in range(0, m + 1):
                    if not self._valid_m(mub, m1):
                        continue
                    conn = self._connected(mub, m1)
                    if conn:
                        disc = self.disconnected(muo, m - m1)
                        if disc:
                            total -= conn * disc
        return total

    def _valid_m(self, mu, m):
        # genus must be a nonnegative integer: 2g = r*m + 2 - l - d/q
        twog = self.r * m + 2 - len(mu) - sum(mu) // self.q
        return twog >= 0 and twog % 2 == 0


_ENGINES = {}


def engine(q, r) -> WedgeEngine:
    key = (q, r)
    if key not in _ENGINES:
        _ENGINES[key] = WedgeEngine(q, r)
    return _ENGINES[key]


def disconnected_hurwitz(key: HurwitzKey) -> Fraction:
    return engine(key.q, key.r).disconnected(key.mu, key.m)


def connected_hurwitz(key: HurwitzKey) -> Fraction:
    return engine(key.q, key.r).connected(key.g, key.mu)


# ---------------------------------------------------------------------------
# Completed cycles and central characters
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def central_character(lam, mu) -> Fraction:
    """Scalar by which the stable center element C_lam acts on rho_mu.

    Zero when |mu| < |lam|.  Otherwise C_{p,lam} is A * (class sum of
    nu = lam cup 1^{p-d}), where A counts the sets of distinguished cycles
    with length multiset lam, and the class sum acts by
    |C_nu| chi^mu(nu) / dim(mu).

    Normalization note: with repeated parts of lam, the distinguished
    cycles are counted as a set, not as a numbered list.  This is the
    normalization under which the classical completed-cycle table
    (C3bar = C3 + C11 + C1/12, ...) comes out of the linear solve.
    """
    lam, mu = tuple(lam), tuple(mu)
    p, d = sum(mu), sum(lam)
    if p < d:
        return Fraction(0)
    nu = tuple(sorted(lam + (1,) * (p - d), reverse=True))
    mult_nu, mult_lam = {}, {}
    for a in nu:
        mult_nu[a] = mult_nu.get(a, 0) + 1
    for a in lam:
        mult_lam[a] = mult_lam.get(a, 0) + 1
    ways = 1
    for k, need in mult_lam.items():
        have = mult_nu.get(k, 0)
        if have < need:
            return Fraction(0)
        ways *= factorial(have) // (factorial(need) * factorial(have - need))
    class_size = Fraction(factorial(p), centralizer_order(nu))
    return ways * class_size * Fraction(character(mu, nu), dimension(mu))


def shifted_power_sum(n, mu) -> Fraction:
    """p_n(mu) = (1/n) sum_i [(mu_i - i + 1/2)^n - (-i + 1/2)^n]."""
    return content_power_sum(tuple(mu), n) / n


def _solve_exact(rows, rhs):
    """Gaussian elimination over Q; returns solution or None if inconsistent,
    and a flag telling whether the solution is unique."""
    m, n = len(rows), len(rows[0]) if rows else 0
    a = [list(row) + [v] for row, v in zip(rows, rhs)]
    pivots = []
    col = 0
    for col in range(n):
        piv = None
        for i in range(len(pivots), m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[len(pivots)], a[piv] = a[piv], a[len(pivots)]
        i = len(pivots)
        inv = Fraction(1) / a[i][col]
        a[i] = [x * inv for x in a[i]]
        for j in range(m):
            if j != i and a[j][col]:
                f = a[j][col]
                a[j] = [x - f * y for x, y in zip(a[j], a[i])]
        pivots.append(col)
        if len(pivots) == m:
            break
    for i in range(len(pivots), m):
        if a[i][n]:
            return None, False
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = a[i][n]
    return sol, len(pivots) == n


@lru_cache(maxsize=None)
def completed_cycle(n: int) -> dict:
    """Coefficients of the completed n-cycle on stable center elements C_lam.

    Solves p_n = sum_lam c_lam f_lam exactly on all partitions of size up to
    n + 2, then checks the solution on every partition of size n + 3.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    unknowns = [lam for size in range(1, n + 1) for lam in partitions(size)]
    extra = 2
    while True:
        tests = [mu for size in range(1, n + extra + 1) for mu in partitions(size)]
        rows = [[central_character(lam, mu) for lam in unknowns] for mu in tests]
        rhs = [shifted_power_sum(n, mu) for mu in tests]
        sol, unique = _solve_exact(rows, rhs)
        if sol is None:
            raise SingularSystem(f"inconsistent system for completed cycle {n}")
        if unique:
            break
        extra += 2
        if extra > 8:
            raise SingularSystem(f"underdetermined system for completed cycle {n}")
    coeffs = {lam: c for lam, c in zip(unknowns, sol) if c}
    for mu in [m for m in partitions(n + extra + 1)]:
        lhs = sum((c * central_character(lam, mu) for lam, c in coeffs.items()),
                  Fraction(0))
        if lhs != shifted_power_sum(n, mu):
            raise SingularSystem(f"completed cycle {n} failed held-out check at {mu}")
    return coeffs


# ---------------------------------------------------------------------------
# Free energies and quasi-polynomiality
# ---------------------------------------------------------------------------


def free_energy(g, n, q, r, degree, total_cap=None) -> MultiSeries:
    """H_{g,n} in the x-monomial basis, exact up to the given truncation.

    Coefficient of x_1^{mu_1}..x_n^{mu_n} is the connected Hurwitz number of
    the sorted tuple; the result is symmetric by construction.  `degree`
    bounds each exponent; `total_cap` (default n*degree) bounds their sum.
    """
    if total_cap is None:
        total_cap = n * degree
    eng = engine(q, r)
    out = MultiSeries(n, degree, total_cap=total_cap)
    values = {}
    for mu in partitions_with_parts(n, degree, total_cap):
        if sum(mu) % q:
            continue
        m = number_of_completed_cycles(g, mu, q, r)
        if m is None:
            continue
        h = eng.connected(g, mu)
        if h:
            values[mu] = h
    from itertools import permutations as _perms
    for mu, h in values.items():
        for arrangement in set(_perms(mu)):
            out.c[arrangement] = h
    return out


def partitions_with_parts(n, max_part, total_cap):
    """Partitions with exactly n parts, each <= max_part, sum <= total_cap."""
    def rec(parts_left, bound, budget):
        if parts_left == 0:
            yield ()
            return
        if budget < parts_left:
            return
        for first in range(min(bound, budget - (parts_left - 1)), 0, -1):
            for rest in rec(parts_left - 1, first, budget - first):
                yield (first,) + rest
    yield from rec(n, max_part, total_cap)


def quasi_polynomiality_check(g, n, q, r, fit_box, test_box, degree_bound=None):
    """Fit P_<mu>(mu) = h / prod(mu_i^{[mu_i]}/[mu_i]!) per residue class.

    fit_box and test_box are disjoint iterables of [mu_i]-values (the
    quotients of mu_i by qr).  Returns a report dict; raises FitImpossible
    when no polynomial of per-variable degree <= degree_bound matches the
    fit data exactly.
    """
    if 2 * g - 2 + n <= 0:
        raise ValueError("quasi-polynomiality needs 2g - 2 + n > 0")
    qr = q * r
    if degree_bound is None:
        degree_bound = max(3 * g - 3 + n, 0)
    eng = engine(q, r)
    fit_box, test_box = list(fit_box), list(test_box)
    if set(fit_box) & set(test_box):
        raise ValueError("fit and test boxes must be disjoint")
    report = {"g": g, "n": n, "q": q, "r": r, "classes": [], "ok": True}

    def prefactor(mu):
        f = Fraction(1)
        for a in mu:
            f *= Fraction(a) ** (a // qr) / factorial(a // qr)
        return f

    def gather(residues, box):
        pts = []
        for ks in product(box, repeat=n):
            mu = tuple(res + qr * k for res, k in zip(residues, ks))
            if any(a < 1 for a in mu) or sum(mu) % q:
                continue
            if number_of_completed_cycles(g, tuple(sorted(mu, reverse=True)), q, r) is None:
                continue
            h = eng.connected(g, tuple(sorted(mu, reverse=True)))
            pts.append((mu, h / prefactor(mu)))
        return pts

    for residues in product(range(qr), repeat=n):
        if tuple(sorted(residues)) != residues:
            continue
        fit_pts = gather(residues, fit_box)
        if not fit_pts:
            continue
        test_pts = gather(residues, test_box)
        fitted = None
        for deg in range(degree_bound + 1):
            exps = list(product(range(deg + 1), repeat=n))
            rows = [[_mono(mu, e) for e in exps] for mu, _ in fit_pts]
            rhs = [v for _, v in fit_pts]
            sol, _ = _solve_exact(rows, rhs)
            if sol is None:
                continue
            fitted = dict(zip(exps, sol))
            break
        if fitted is None:
            raise FitImpossible(
                f"residues {residues}: no fit with degree <= {degree_bound}")
        errors = []
        for mu, v in test_pts:
            pred = sum((c * _mono(mu, e) for e, c in fitted.items()), Fraction(0))
            if pred != v:
                errors.append(mu)
        fitted_degree = max((max(e) for e, c in fitted.items() if c), default=0)
        entry = {"residues": residues, "fitted_degree": fitted_degree,
                 "n_fit": len(fit_pts), "n_test": len(test_pts),
                 "failures": errors}
        report["classes"].append(entry)
        if errors:
            report["ok"] = False
    return report


def _mono(mu, e):
    v = Fraction(1)
    for a, k in zip(mu, e):
        v *= Fraction(a) ** k
    return v
