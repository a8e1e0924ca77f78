"""Reduced Groebner bases (Buchberger) and ideal operations in k[x_1..x_v].

The kernel works on dictionaries ``{key: coefficient}`` where ``key`` is the
linear integer encoding of a monomial from :class:`~sallylab.poly.KeyEncoder`;
products of monomials become integer additions.
"""
from __future__ import annotations

import heapq
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .poly import (
    DEGREVLEX, MonomialOrder, PolyError, PolyRing, Polynomial,
    RingMismatchError, divides, elimination, guard_mask, monomial_lcm, pack,
)


class IdealError(PolyError):
    pass


class Ideal:
    """Generators in a polynomial ring plus a per-order cache of reduced bases.

    The cache is a write-once-per-key map guarded by a lock; computing the
    same basis twice from two threads is harmless.
    """

    def __init__(self, ring: PolyRing, generators: Iterable = ()):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Polynomial):
                g = ring.constant(g)
            if g.ring != ring:
                g = g.change_ring(ring)
            gens.append(g)
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._gb: Dict[MonomialOrder, List[Polynomial]] = {}
        self._lock = threading.Lock()
        # free-form memo for downstream modules (local lengths and so on)
        self.memo: Dict = {}

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.generators) or '0'})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def nonzero_generators(self) -> List[Polynomial]:
        return [g for g in self.generators if g]

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.generators), default=0)

    def groebner_basis(self, order: Optional[MonomialOrder] = None) -> List[Polynomial]:
        return groebner_basis(self, order)

    def digest_text(self) -> str:
        return ";".join(sorted(str(g) for g in self.generators))


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

class _Kernel:
    """Shared state of one Buchberger run."""

    def __init__(self, nvars: int, order: MonomialOrder, p: int):
        self.enc = order.encoder(nvars)
        self.nvars = nvars
        self.p = p
        self.guard = guard_mask(nvars)

    def to_dict(self, f: Polynomial) -> Dict[int, object]:
        enc = self.enc.encode
        return {enc(m): c for m, c in f.as_dict().items()}

    def monic(self, f: Dict[int, object]) -> List[Tuple[int, object]]:
        items = sorted(f.items(), reverse=True)
        lc = items[0][1]
        p = self.p
        if p:
            inv = pow(lc, -1, p)
            return [(k, c * inv % p) for k, c in items]
        return [(k, c / lc) for k, c in items]


def _axpy(f: Dict[int, object], a, shift: int, g: List[Tuple[int, object]], p: int) -> None:
    """f -= a * x^shift * g  (in place)."""
    get = f.get
    if p:
        for k, c in g:
            nk = k + shift
            v = get(nk)
            if v is None:
                f[nk] = (-a * c) % p
            else:
                v = (v - a * c) % p
                if v:
                    f[nk] = v
                else:
                    del f[nk]
    else:
        for k, c in g:
            nk = k + shift
            v = get(nk, 0) - a * c
            if v:
                f[nk] = v
            else:
                f.pop(nk, None)


class _Basis:
    def __init__(self, kernel: _Kernel):
        self.kernel = kernel
        self.polys: List[List[Tuple[int, object]]] = []
        self.lead_exps: List[Tuple[int, ...]] = []
        self.lead_packed: List[int] = []
        self.active: List[bool] = []

    def add(self, terms: List[Tuple[int, object]]) -> int:
        lm = self.kernel.enc.decode(terms[0][0])
        self.polys.append(terms)
        self.lead_exps.append(lm)
        self.lead_packed.append(pack(lm))
        self.active.append(True)
        return len(self.polys) - 1

    def find_reducer(self, lead_key: int) -> int:
        lp = pack(self.kernel.enc.decode(lead_key))
        guard = self.kernel.guard
        for i, (q, act) in enumerate(zip(self.lead_packed, self.active)):
            if act and not ((lp - q) & guard):
                return i
        return -1


def _normal_form(f: Dict[int, object], basis: _Basis, full: bool = True) -> Dict[int, object]:
    """Reduce ``f`` (consumed) against ``basis``; returns the remainder."""
    p = basis.kernel.p
    rem: Dict[int, object] = {}
    while f:
        lead = max(f)
        i = basis.find_reducer(lead)
        if i < 0:
            if not full:
                f.update(rem)
                return f
            rem[lead] = f.pop(lead)
            continue
        g = basis.polys[i]
        a = f[lead]
        _axpy(f, a, lead - g[0][0], g, p)
    return rem


def _update_pairs(basis: _Basis, pairs: Dict[Tuple[int, int], Tuple[int, ...]], h: int,
                  product_criterion: bool = True) -> List[Tuple[Tuple[int, int], Tuple[int, ...]]]:
    """Gebauer-Moeller update after adding basis element ``h``.

    Mutates ``pairs`` (removing pairs killed by the chain criterion) and
    returns the new pairs to insert.
    """
    lh = basis.lead_exps[h]
    cands = []
    for g in range(h):
        if basis.active[g]:
            cands.append((g, monomial_lcm(basis.lead_exps[g], lh)))
    # criterion M/F among the new pairs
    kept = []
    for idx, (g, lcm) in enumerate(cands):
        coprime = all(a == 0 or b == 0 for a, b in zip(basis.lead_exps[g], lh))
        if product_criterion and coprime:
            kept.append((g, lcm, True))
            continue
        dominated = False
        for g2, lcm2 in cands[idx + 1:]:
            if divides(lcm2, lcm):
                dominated = True
                break
        if not dominated:
            for g2, lcm2, _ in kept:
                if divides(lcm2, lcm):
                    dominated = True
                    break
        if not dominated:
            kept.append((g, lcm, coprime))
    new = [((g, h), lcm) for g, lcm, coprime in kept if not (product_criterion and coprime)]
    # chain criterion on old pairs
    for (i, j), lcm in list(pairs.items()):
        if divides(lh, lcm) and monomial_lcm(basis.lead_exps[i], lh) != lcm \
                and monomial_lcm(basis.lead_exps[j], lh) != lcm:
            del pairs[(i, j)]
    for g in range(h):
        if basis.active[g] and divides(lh, basis.lead_exps[g]):
            basis.active[g] = False
    return new


def _spoly(basis: _Basis, i: int, j: int, lcm_key: int) -> Dict[int, object]:
    fi, fj = basis.polys[i], basis.polys[j]
    si, sj = lcm_key - fi[0][0], lcm_key - fj[0][0]
    out = {k + si: c for k, c in fi}
    _axpy(out, 1, sj, fj, basis.kernel.p)
    return out


def buchberger(polys: Sequence[Polynomial], order: MonomialOrder) -> List[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``polys``.

    Normal selection strategy (smallest lcm first, ties by pair index), with
    the product and chain criteria.
    """
    polys = [f for f in polys if f]
    if not polys:
        return []
    ring = polys[0].ring.with_order(order)
    kernel = _Kernel(ring.nvars, order, ring.characteristic)
    basis = _Basis(kernel)
    pairs: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    heap: List[Tuple[int, int, int]] = []

    def insert(terms):
        h = basis.add(terms)
        for pair, lcm in _update_pairs(basis, pairs, h):
            pairs[pair] = lcm
            heapq.heappush(heap, (kernel.enc.encode(lcm), pair[0], pair[1]))

    for f in polys:
        r = _normal_form(kernel.to_dict(f), basis)
        if r:
            insert(kernel.monic(r))
    while heap:
        lk, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        del pairs[(i, j)]
        r = _normal_form(_spoly(basis, i, j, lk), basis)
        if r:
            insert(kernel.monic(r))
    return _reduce_basis(basis, ring)


def _reduce_basis(basis: _Basis, ring: PolyRing) -> List[Polynomial]:
    kernel = basis.kernel
    idx = [i for i in range(len(basis.polys))]
    # minimal basis: drop elements whose lead is divisible by another lead
    minimal = []
    for i in idx:
        li = basis.lead_exps[i]
        drop = False
        for j in idx:
            if j == i:
                continue
            lj = basis.lead_exps[j]
            if divides(lj, li) and (lj != li or j < i):
                drop = True
                break
        if not drop:
            minimal.append(i)
    red = _Basis(kernel)
    for i in minimal:
        red.add(basis.polys[i])
    out = []
    for i in range(len(red.polys)):
        terms = red.polys[i]
        lead_k, lead_c = terms[0]
        red.active[i] = False
        tail = _normal_form(dict(terms[1:]), red)
        red.active[i] = True
        tail[lead_k] = lead_c
        red.polys[i] = kernel.monic(tail)
    dec = kernel.enc.decode
    for terms in red.polys:
        out.append(Polynomial(ring, {dec(k): c for k, c in terms}, _clean=True))
    out.sort(key=lambda g: ring.key(g.leading_monomial()), reverse=True)
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def groebner_basis(I: Ideal, order: Optional[MonomialOrder] = None) -> List[Polynomial]:
    order = order or I.ring.order
    with I._lock:
        cached = I._gb.get(order)
    if cached is not None:
        return cached
    gb = buchberger(list(I.generators), order)
    with I._lock:
        I._gb.setdefault(order, gb)
        return I._gb[order]


def normal_form(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Full remainder of ``f`` modulo a Groebner basis (order taken from the basis)."""
    if not basis:
        return f
    ring = basis[0].ring
    if f.ring != ring:
        f = f.change_ring(ring)
    kernel = _Kernel(ring.nvars, ring.order, ring.characteristic)
    kb = _Basis(kernel)
    for g in basis:
        kb.add(kernel.monic(kernel.to_dict(g)))
    r = _normal_form(kernel.to_dict(f), kb)
    dec = kernel.enc.decode
    return Polynomial(f.ring, {dec(k): c for k, c in r.items()}, _clean=True)


def _same_ring(I: Ideal, J: Ideal):
    if I.ring.variables != J.ring.variables or I.ring.characteristic != J.ring.characteristic:
        raise RingMismatchError("ideals live in different rings")


def unit_ideal(ring: PolyRing) -> Ideal:
    return Ideal(ring, [ring.one()])


def maximal_ideal(ring: PolyRing) -> Ideal:
    """m = (x_1, ..., x_v)."""
    return Ideal(ring, ring.gens())


def prune_generators(gens: Iterable[Polynomial]) -> List[Polynomial]:
    """Echelon basis of the k-span of ``gens``; generates the same ideal.

    Keeps generator lists of powers and products from exploding.
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    p = ring.characteristic
    key = ring.key
    # eliminate on packed order keys; decoding happens once at the end
    codes: Dict = {}
    pivots: Dict[int, Dict[int, object]] = {}
    order: List[int] = []
    for g in gens:
        r = {}
        for m, c in g.as_dict().items():
            k = codes.get(m)
            if k is None:
                k = codes[m] = key(m)
            r[k] = c
        while r:
            lead = max(r)
            prow = pivots.get(lead)
            if prow is None:
                inv = ring.inverse(r[lead])
                pivots[lead] = {m: (c * inv % p if p else c * inv) for m, c in r.items()}
                order.append(lead)
                break
            a = r[lead]
            for m, c in prow.items():
                v = r.get(m, 0) - a * c
                if p:
                    v %= p
                if v:
                    r[m] = v
                else:
                    del r[m]
    monos = {k: m for m, k in codes.items()}
    order.sort(reverse=True)
    return [Polynomial(ring, {monos[k]: c for k, c in pivots[lead].items()}, _clean=True) for lead in order]


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same_ring(I, J)
    return Ideal(I.ring, list(I.generators) + list(J.generators))


def ideal_product(I: Ideal, J: Ideal, prune: bool = True) -> Ideal:
    _same_ring(I, J)
    prods = [f * g for f in I.nonzero_generators() for g in J.nonzero_generators()]
    return Ideal(I.ring, prune_generators(prods) if prune else prods)


def ideal_power(I: Ideal, n: int) -> Ideal:
    if n < 0:
        raise IdealError("negative power")
    result = unit_ideal(I.ring)
    for _ in range(n):
        result = ideal_product(result, I)
    return result


def _fresh_name(ring: PolyRing, base: str = "t") -> str:
    name = base
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{base}{k}"
    return name


def _extend(ring: PolyRing, f: Polynomial, ext: PolyRing, offset: int = 1) -> Polynomial:
    return Polynomial(ext, {(0,) * offset + m: c for m, c in f.as_dict().items()}, _clean=True)


def eliminate_first(polys: Sequence[Polynomial], block: int, target: PolyRing) -> List[Polynomial]:
    """Generators of (polys) intersected with the subring on the variables after
    the first ``block`` ones."""
    if not polys:
        return []
    gb = buchberger(polys, elimination(block))
    out = []
    for g in gb:
        if all(not any(m[:block]) for m in g.as_dict()):
            out.append(Polynomial(target, {m[block:]: c for m, c in g.as_dict().items()}, _clean=True))
    return out


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I cap J via t*I + (1-t)*J and elimination of t."""
    _same_ring(I, J)
    ring = I.ring
    gi, gj = I.nonzero_generators(), J.nonzero_generators()
    if not gi or not gj:
        return Ideal(ring, [])
    ext = PolyRing((_fresh_name(ring),) + ring.variables, ring.characteristic, DEGREVLEX)
    t = ext.gen(ext.variables[0])
    one = ext.one()
    polys = [t * _extend(ring, f, ext) for f in gi] + [(one - t) * _extend(ring, g, ext) for g in gj]
    return Ideal(ring, [g.change_ring(ring) for g in eliminate_first(polys, 1, ring.with_order(DEGREVLEX))])


def colon(I: Ideal, J: Ideal) -> Ideal:
    """I : J as the intersection over generators g of J of (I cap (g)) / g."""
    _same_ring(I, J)
    ring = I.ring
    gens = J.nonzero_generators()
    if not gens:
        raise IdealError("colon by the zero ideal")
    result: Optional[Ideal] = None
    for g in gens:
        inter = intersect(I, Ideal(ring, [g]))
        quot = []
        for h in inter.nonzero_generators():
            q, r = h.divide(g.change_ring(h.ring))
            if r:
                raise IdealError("inexact division in colon computation")
            quot.append(q.change_ring(ring))
        part = Ideal(ring, quot)
        result = part if result is None else intersect(result, part)
    return result


def contains(I: Ideal, f: Polynomial) -> bool:
    if not f:
        return True
    gb = groebner_basis(I, DEGREVLEX)
    if not gb:
        return False
    return not normal_form(f, gb)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    _same_ring(I, J)
    return all(contains(J, g) for g in I.generators) and all(contains(I, g) for g in J.generators)


def saturate_by_m(I: Ideal, max_iterations: int = 64) -> Ideal:
    """I : m^infinity by iterated colons with m = (all variables)."""
    m = maximal_ideal(I.ring)
    current = I
    if not I.nonzero_generators():
        return Ideal(I.ring, [])
    for _ in range(max_iterations):
        nxt = colon(current, m)
        if ideal_equal(nxt, current):
            return Ideal(I.ring, groebner_basis(current, DEGREVLEX))
        current = nxt
    raise IdealError("saturation did not stabilise within the iteration cap")
