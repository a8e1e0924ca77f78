"""Independent oracles and seeded instance generators for the tests.

Nothing here uses the standard basis engine: lengths are ranks of plain
coefficient matrices, S-polynomials are built from Polynomial arithmetic.
"""
import itertools
import random

from sallylab import RingSpec
from sallylab.constructions import Instance, northcott_ideal
from sallylab.localring import local_length
from sallylab.poly import monomial_lcm

P = 32003


def monomials_below(nvars, N):
    """All exponent tuples of total degree < N."""
    out = []
    for d in range(N):
        for c in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return out


def rank_mod_p(rows, p=P):
    """Rank of a list of sparse rows {column: value} over F_p."""
    pivots = {}
    rank = 0
    for row in rows:
        r = {k: v % p for k, v in row.items() if v % p}
        while r:
            col = min(r)
            if col not in pivots:
                inv = pow(r[col], -1, p)
                pivots[col] = {k: v * inv % p for k, v in r.items()}
                rank += 1
                break
            a = r[col]
            for k, v in pivots[col].items():
                nv = (r.get(k, 0) - a * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return rank


def brute_length(gens, nvars, N, p=P):
    """dim_k k[x]/(gens + m^N), by linear algebra on monomials of degree < N.

    The quotient is supported at the origin, so this is a local length; it
    equals lambda(R/I) as soon as m^N lies in I.
    """
    monos = monomials_below(nvars, N)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in gens:
        terms = g.as_dict()
        if not terms:
            continue
        order = min(sum(m) for m in terms)
        for t in monos:
            if sum(t) + order >= N:
                continue
            row = {}
            for m, c in terms.items():
                mm = tuple(a + b for a, b in zip(m, t))
                if sum(mm) < N:
                    row[index[mm]] = c
            rows.append(row)
    return len(monos) - rank_mod_p(rows, p)


def s_polynomial(f, g):
    """S(f, g) = (L/LT(f)) f - (L/LT(g)) g with L the lcm of leading monomials."""
    lf, lg = f.leading_monomial(), g.leading_monomial()
    L = monomial_lcm(lf, lg)
    ring = f.ring
    tf = ring.monomial(tuple(a - b for a, b in zip(L, lf)), ring.inverse(f.leading_coefficient()))
    tg = ring.monomial(tuple(a - b for a, b in zip(L, lg)), ring.inverse(g.leading_coefficient()))
    return tf * f - tg * g


def plane():
    return RingSpec(["x", "y"], P, (), 2)


def random_plane_ideal(seed):
    """m-primary ideal of k[x,y] with generators of degree <= 6.

    A random staircase (pure powers plus one to three mixed corners), each
    corner perturbed by up to two higher terms of degree <= 6.
    """
    rng = random.Random(seed)
    spec = plane()
    a, b = rng.randint(2, 6), rng.randint(2, 6)
    corners = {(a, 0), (0, b)}
    for _ in range(rng.randint(1, 3)):
        i, j = rng.randint(1, a - 1), rng.randint(1, b - 1)
        if i + j <= 6:
            corners.add((i, j))
    gens = []
    for (i, j) in sorted(corners):
        terms = [f"x^{i}*y^{j}"]
        for _ in range(rng.randint(0, 2)):
            d = rng.randint(i + j + 1, 7)
            if d > 6:
                continue
            k = rng.randint(0, d)
            terms.append(f"{rng.randrange(1, P)}*x^{k}*y^{d - k}")
        gens.append("+".join(terms))
    return Instance(f"random-{seed}", spec, spec.ideal(gens))


def _random_in_x_yn(rng, n, low, high, nterms):
    """Random polynomial with terms in (x, y^n) of degree in [low, high]."""
    terms = []
    for _ in range(nterms):
        d = rng.randint(low, high)
        i = rng.randint(0, d)
        if i == 0 and d < n:
            i = 1
        terms.append(f"{rng.randrange(1, P)}*x^{i}*y^{d - i}")
    return "+".join(terms)


def random_northcott(seed):
    """Northcott data for a random m-primary Q = (a, b) inside (x, y^n) and m^(n+1)."""
    rng = random.Random(seed)
    spec = plane()
    while True:
        n = rng.choice((2, 3))
        i = rng.randint(n + 1, n + 3)
        j = rng.randint(n + 1, n + 3)
        a = f"x^{i}+" + _random_in_x_yn(rng, n, n + 1, n + 3, rng.randint(1, 2))
        b = f"y^{j}+" + _random_in_x_yn(rng, n, n + 1, n + 3, rng.randint(1, 2))
        Q = spec.ideal([a, b])
        if local_length(Q, spec).finite:
            return northcott_ideal(a, b, n, spec)
