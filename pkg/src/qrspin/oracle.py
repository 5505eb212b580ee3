"""Brute-force symmetric-group oracle for q,r-factorizations.

Counts weighted tuples (sigma_1, ..., sigma_m, gamma) in S_d with gamma of
cycle type (q,...,q) and product of cycle type mu, each sigma_i carrying a
set of distinguished cycles whose length multiset lam has a nonzero
coefficient in the completed (r+1)-cycle.  The weight of a tuple is the
product of those coefficients; dividing the total by |mu|! m! gives the
disconnected number, and restricting to transitive tuples (every element
reachable by applying the permutations and jumping between distinguished
cycles of the same factor) gives the connected number.

The enumeration shares prefixes: a dynamic program over states
(partial product, connectivity partition) sums the weights of all marked
tuples with that prefix data.  This is exact tuple enumeration, just with
identical prefixes merged; no character theory enters, which is the point
of an oracle for the wedge pipeline.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

from qrspin.wedge import completed_cycle


class TooLarge(ValueError):
    """Requested degree exceeds the oracle bound."""


DEFAULT_ORACLE_BOUND = 7


def _cycles_of(perm):
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = perm[x]
        out.append(tuple(cyc))
    return out


def cycle_type(perm):
    return tuple(sorted((len(c) for c in _cycles_of(perm)), reverse=True))


def _compose(a, b):
    """(a*b)(x) = a(b(x))."""
    return tuple(a[b[x]] for x in range(len(a)))


def _canon_partition(labels):
    """Canonical relabeling of a set partition given as element labels."""
    remap = {}
    out = []
    for l in labels:
        if l not in remap:
            remap[l] = len(remap)
        out.append(remap[l])
    return tuple(out)


def _merge(labels, groups):
    """Join the partition with the given groups of elements (union-find lite)."""
    labels = list(labels)
    for group in groups:
        if len(group) < 2:
            continue
        target = min(labels[x] for x in group)
        dead = {labels[x] for x in group} - {target}
        if dead:
            for i, l in enumerate(labels):
                if l in dead:
                    labels[i] = target
    return _canon_partition(labels)


def _tuples_of_disjoint_cycles(d, lengths):
    """All sets of disjoint cycles in S_d with the given length multiset.

    Each cycle is written with its minimal element first, and cycles of
    equal length appear with increasing minima, so every set is produced
    exactly once.
    """
    lengths = tuple(sorted(lengths, reverse=True))

    def rec(available, lengths, min_anchor_by_len):
        if not lengths:
            yield ()
            return
        k = lengths[0]
        rest_lengths = lengths[1:]
        floor = min_anchor_by_len.get(k, -1)
        for i, anchor in enumerate(available):
            if anchor < floor:
                continue
            others = available[:i] + available[i + 1:]
            larger = tuple(x for x in others if x > anchor)
            for tail in combinations(larger, k - 1):
                tail_set = set(tail)
                remaining = tuple(x for x in others if x not in tail_set)
                nxt = dict(min_anchor_by_len)
                nxt[k] = anchor + 1
                for order in (permutations(tail) if k > 2 else (tail,)):
                    cyc = (anchor,) + order
                    for sub in rec(remaining, rest_lengths, nxt):
                        yield (cyc,) + sub

    yield from rec(tuple(range(d)), lengths, {})


@lru_cache(maxsize=64)
def marked_generators(d, r):
    """All (permutation, clique, weight) marked factors for S_d and C-bar_{r+1}.

    The clique is the set of elements in distinguished cycles; weights are
    scaled by an overall integer `scale` so the DP runs on ints.  Returns
    (generators, scale).
    """
    table = completed_cycle(r + 1)
    scale = 1
    for c in table.values():
        scale = scale * c.denominator // _gcd(scale, c.denominator)
    gens = []
    for lam, coeff in table.items():
        if sum(lam) > d:
            continue
        w = int(coeff * scale)
        assert Fraction(w, scale) == coeff
        for cycles in _tuples_of_disjoint_cycles(d, lam):
            perm = list(range(d))
            clique = []
            for cyc in cycles:
                clique.extend(cyc)
                for i, x in enumerate(cyc):
                    perm[x] = cyc[(i + 1) % len(cyc)]
            gens.append((tuple(perm), tuple(sorted(clique)), w))
    return tuple(gens), scale


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def _aut(mu) -> int:
    """Number of numberings of cycles with length multiset mu: prod m_k!."""
    out, run = 1, 1
    for i in range(1, len(mu)):
        run = run + 1 if mu[i] == mu[i - 1] else 1
        out *= run
    return out


def _gamma_class(d, q):
    """All permutations of cycle type (q, ..., q) in S_d."""
    if d % q:
        return []
    out = []
    for cycles in _tuples_of_disjoint_cycles(d, (q,) * (d // q)):
        perm = list(range(d))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                perm[x] = cyc[(i + 1) % len(cyc)]
        out.append(tuple(perm))
    return out


@lru_cache(maxsize=32)
def factorization_table(d, q, r, m_max):
    """Weighted counts of q,r-factorizations, all m <= m_max at once.

    Returns {(m, mu): (total_weight, transitive_weight)} as Fractions (the
    raw weighted counts, not yet divided by |mu|! m!).
    """
    if d % q:
        return {}
    gens, scale = marked_generators(d, r)
    identity = tuple(range(d))
    start_partition = _canon_partition(range(d))
    states = {(identity, start_partition): 1}
    gammas = _gamma_class(d, q)
    table = {}

    def harvest(states, m):
        # A factorization of type (mu_1, ..., mu_n) carries a numbering of
        # the cycles of the product by the parts (the covers it encodes have
        # labeled poles), so each tuple counts once per admissible numbering.
        inv_scale = Fraction(1, scale ** m)
        for (perm, part), weight in states.items():
            for gamma in gammas:
                sigma = _compose(perm, gamma)
                mu = cycle_type(sigma)
                joined = _merge(part, _cycles_of(gamma) + _cycles_of(sigma))
                key = (m, mu)
                tot, trans = table.get(key, (Fraction(0), Fraction(0)))
                wf = weight * inv_scale * _aut(mu)
                table[key] = (tot + wf, trans + wf if len(set(joined)) == 1 else trans)

    harvest(states, 0)
    for step in range(1, m_max + 1):
        new_states = {}
        for (perm, part), weight in states.items():
            for gperm, clique, gw in gens:
                key = (_compose(perm, gperm), _merge(part, (clique,)))
                new_states[key] = new_states.get(key, 0) + weight * gw
        states = new_states
        harvest(states, step)
    return table


def brute_force_hurwitz(g, mu, q=1, r=1, connected=False,
                        bound=DEFAULT_ORACLE_BOUND) -> Fraction:
    """Hurwitz number by direct weighted enumeration over S_d.

    Raises TooLarge when |mu| exceeds the oracle bound.
    """
    mu = tuple(sorted(mu, reverse=True))
    d = sum(mu)
    if d > bound:
        raise TooLarge(f"|mu| = {d} exceeds oracle bound {bound}")
    if d % q:
        return Fraction(0)
    num = 2 * g - 2 + len(mu) + d // q
    m, rem = divmod(num, r)
    if rem or m < 0:
        raise ValueError(f"no integer m >= 0 for g={g}, mu={mu}, q={q}, r={r}")
    table = factorization_table(d, q, r, m)
    tot, trans = table.get((m, mu), (Fraction(0), Fraction(0)))
    value = trans if connected else tot
    return value / (factorial(d) * factorial(m))
