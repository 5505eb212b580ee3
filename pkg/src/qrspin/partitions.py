"""Integer partitions, border strips, and symmetric-group characters.

Partitions are plain tuples of weakly decreasing positive ints.  Border
strips are handled through beta-numbers (first-column hook lengths), which
makes strip addition/removal and the Murnaghan-Nakayama recursion cheap.
"""

from fractions import Fraction
from functools import lru_cache
from math import factorial


def is_partition(parts) -> bool:
    return all(a >= b for a, b in zip(parts, parts[1:])) and all(a > 0 for a in parts)


def check_partition(parts):
    parts = tuple(int(a) for a in parts)
    if not is_partition(parts):
        raise ValueError(f"not a partition: {parts!r}")
    return parts


def partitions(n, max_part=None, max_len=None):
    """Yield all partitions of n with the given bounds, largest part first."""
    if max_part is None:
        max_part = n
    if max_len is None:
        max_len = n
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, max_part=first, max_len=max_len - 1):
            yield (first,) + rest


def partitions_in_box(max_len, max_part, min_len=0):
    """Yield all partitions with at most max_len parts, each at most max_part."""
    def rec(remaining_len, bound):
        yield ()
        if remaining_len == 0:
            return
        for first in range(bound, 0, -1):
            for rest in rec(remaining_len - 1, first):
                yield (first,) + rest

    for lam in rec(max_len, max_part):
        if len(lam) >= min_len:
            yield lam


def conjugate(lam):
    if not lam:
        return ()
    out = []
    for i in range(lam[0]):
        out.append(sum(1 for a in lam if a > i))
    return tuple(out)


def centralizer_order(mu) -> int:
    """z_mu = prod k^{m_k} m_k! for mu with m_k parts equal to k."""
    z = 1
    mult = {}
    for a in mu:
        mult[a] = mult.get(a, 0) + 1
    for k, m in mult.items():
        z *= k ** m * factorial(m)
    return z


def hook_lengths(lam):
    conj = conjugate(lam)
    return [
        [lam[i] - j + conj[j] - i - 1 for j in range(lam[i])]
        for i in range(len(lam))
    ]


@lru_cache(maxsize=None)
def dimension(lam) -> int:
    """Number of standard Young tableaux of shape lam (hook-length formula)."""
    n = sum(lam)
    denom = 1
    for row in hook_lengths(lam):
        for h in row:
            denom *= h
    dim, rem = divmod(factorial(n), denom)
    assert rem == 0
    return dim


def _beta(lam, length):
    """Beta-set of lam padded to the given number of rows (strictly decreasing)."""
    return [(lam[i] if i < len(lam) else 0) + length - 1 - i for i in range(length)]


def _from_beta(beta, length):
    beta = sorted(beta, reverse=True)
    lam = tuple(beta[i] - (length - 1 - i) for i in range(length))
    return tuple(a for a in lam if a > 0)


def strip_removals(lam, k):
    """Yield (mu, height) over border strips of size k removable from lam."""
    l = len(lam)
    if l == 0 or sum(lam) < k:
        return
    beta = _beta(lam, l)
    bset = set(beta)
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for c in beta if nb < c < b)
        yield _from_beta((bset - {b}) | {nb}, l), height


def strip_additions(lam, k):
    """Yield (mu, height) over border strips of size k addable to lam."""
    l = len(lam) + k
    beta = _beta(lam, l)
    bset = set(beta)
    for b in beta:
        nb = b + k
        if nb in bset:
            continue
        height = sum(1 for c in beta if b < c < nb)
        yield _from_beta((bset - {b}) | {nb}, l), height


@lru_cache(maxsize=None)
def character(lam, mu) -> int:
    """Irreducible character chi^lam(mu) by Murnaghan-Nakayama.

    Both arguments are partitions of the same integer.
    """
    if not mu:
        return 1 if not lam else 0
    k, rest = mu[0], mu[1:]
    total = 0
    for nl, height in strip_removals(lam, k):
        total += (-1) ** height * character(nl, rest)
    return total


def content_power_sum(lam, n) -> Fraction:
    """sum_i [(lam_i - i + 1/2)^n - (-i + 1/2)^n], an exact rational.

    This is the eigenvalue of the diagonal wedge operator F_n on v_lam;
    dividing by n gives the shifted power sum p_n(lam).
    """
    total = Fraction(0)
    for i, part in enumerate(lam, start=1):
        a = Fraction(2 * part - 2 * i + 1, 2)
        b = Fraction(-2 * i + 1, 2)
        total += a ** n - b ** n
    return total
