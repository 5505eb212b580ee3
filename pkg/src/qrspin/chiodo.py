"""Bernoulli polynomials, Chiodo Chern-character coefficients, and the
closed (0,3) side of the qr-ELSV formula.

The m-th Chern character of the derived pushforward of the universal r-th
root is a combination of kappa, psi and boundary classes whose coefficients
are values B_{m+1}(x)/(m+1)! of Bernoulli polynomials at rational points.
At (g,n) = (0,3) the moduli space is a point and only the degree-zero part
of the class survives (the exponential form of the pushforward has constant
term 1), so the ELSV-type formula degenerates to its explicit prefactor.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

from qrspin.wedge import IntegralityViolation


class RootConditionViolated(ValueError):
    """(2g-2+n)s - sum(a_i) is not divisible by r."""


@lru_cache(maxsize=None)
def bernoulli_polynomial(l: int):
    """Coefficients (low degree first) of B_l(x), from t e^{xt}/(e^t - 1).

    Expanding t/(e^t - 1) = sum b_k t^k and multiplying by e^{xt} gives
    B_l(x) = l! sum_{k} b_k x^{l-k}/(l-k)!.
    """
    if l < 0:
        raise ValueError("l must be >= 0")
    # inverse of (e^t - 1)/t = sum t^k/(k+1)! up to order l
    b = [Fraction(0)] * (l + 1)
    b[0] = Fraction(1)
    for k in range(1, l + 1):
        s = Fraction(0)
        for j in range(1, k + 1):
            s += b[k - j] * Fraction(1, factorial(j + 1))
        b[k] = -s
    coeffs = [Fraction(0)] * (l + 1)
    for k in range(l + 1):
        coeffs[l - k] = b[k] * Fraction(factorial(l), factorial(l - k))
    return tuple(coeffs)


def bernoulli_value(l: int, x) -> Fraction:
    x = Fraction(x)
    total = Fraction(0)
    for k, c in enumerate(bernoulli_polynomial(l)):
        total += c * x ** k
    return total


def bernoulli_number(l: int) -> Fraction:
    return bernoulli_polynomial(l)[0] if l else Fraction(1)


@dataclass(frozen=True)
class ChernCharacterData:
    """Coefficient table of ch_m for the root bundle data (r, s; a_1..a_n)."""

    r: int
    s: int
    a: tuple
    m: int
    kappa_coeff: Fraction
    psi_coeffs: tuple
    boundary_coeffs: dict = field(compare=False)


def chern_coefficients(r, s, a, m, gn=None) -> ChernCharacterData:
    """Populate the ch_m coefficient table; validates the root-existence
    condition when a full (g, n) context is supplied."""
    a = tuple(a)
    if m < 1:
        raise ValueError("m must be >= 1")
    if s < 0:
        raise ValueError("s must be >= 0")
    if not all(1 <= ai <= r for ai in a):
        raise ValueError("each a_i must lie in [1, r]")
    if gn is not None:
        g, n = gn
        if n != len(a):
            raise ValueError("n must match len(a)")
        if ((2 * g - 2 + n) * s - sum(a)) % r:
            raise RootConditionViolated(
                f"(2g-2+n)s - sum(a) = {(2*g-2+n)*s - sum(a)} not in {r}Z")
    fact = Fraction(1, factorial(m + 1))
    kappa = bernoulli_value(m + 1, Fraction(s, r)) * fact
    psi = tuple(-bernoulli_value(m + 1, Fraction(ai, r)) * fact for ai in a)
    boundary = {aa: Fraction(r, 2) * bernoulli_value(m + 1, Fraction(aa, r)) * fact
                for aa in range(r)}
    return ChernCharacterData(r, s, a, m, kappa, psi, boundary)


def elsv_rhs_g0_n3(q, r, mu) -> Fraction:
    """Right-hand side of the qr-ELSV formula at (g, n) = (0, 3).

    The moduli space is a point and only the degree-zero part of the
    integrand survives.  The pushforward from the moduli of roots carries
    the degree of the forgetful map, (qr)^{2g-1} = 1/(qr) in genus zero
    (r^{2g} roots modulo the mu_r automorphisms), so the value is

        (qr)^{-1} r^{2g-2+n} (qr)^{((2g-2+n) q + sum mu_j)/(qr)}
            * prod_j (mu_j/(qr))^{[mu_j]} / [mu_j]!

    with mu = qr [mu] + <mu> the integral division by qr.  The 1/(qr)
    normalization is pinned down by exact agreement with the symmetric-group
    count for every valid mu (see tests).
    """
    mu = tuple(mu)
    if len(mu) != 3:
        raise ValueError("this closed form is the (0,3) case; need 3 parts")
    d = sum(mu)
    if d % q:
        raise IntegralityViolation(f"q={q} does not divide |mu|={d}")
    qr = q * r
    num = q + d  # (2g-2+n) = 1 at (0,3)
    expo, rem = divmod(num, qr)
    if rem:
        raise IntegralityViolation(
            f"((2g-2+n)q + |mu|)/(qr) = {num}/{qr} is not an integer")
    value = Fraction(r, qr) * Fraction(qr) ** expo
    for a in mu:
        value *= Fraction(a, qr) ** (a // qr) / factorial(a // qr)
    return value
