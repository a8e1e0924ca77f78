"""Local rings R = k[x_1..x_v]_m / J and exact lengths of R/I.

Lengths are dimensions dim_k k[x]/(J + I + m^N), counted as standard
monomials of a standard basis for a local degree order (lowest degree
first) in the truncated algebra k[x]/m^N.  Because reductions never lower
the degree, the basis can be built one degree at a time; as soon as some
degree ``delta < N`` has no standard monomials, m^delta lies in J + I + m^(delta+1),
hence in J + I after localizing (Nakayama), and the count is the local
length.  That degree is recorded as ``certified_degree``.
"""
from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .groebner import Ideal, groebner_basis, maximal_ideal, normal_form, prune_generators
from .poly import (
    DEFAULT_CHARACTERISTIC, DEGREVLEX, FIELD_BITS, PolyError, PolyRing, Polynomial,
    guard_mask, monomial_lcm, divides, pack,
)

DEFAULT_TRUNC_CAP = 400
DEFAULT_MAX_STANDARD_MONOMIALS = 2_000_000


class LengthError(PolyError):
    pass


class _Infinite:
    """Marker for lengths of modules that are not of finite length."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __gt__(self, other):
        return other is not self

    def __lt__(self, other):
        return False


INFINITE = _Infinite()


@dataclass(frozen=True)
class LengthResult:
    value: object  # int or INFINITE
    truncation_used: int
    stabilized: bool
    certified_degree: Optional[int] = None

    @property
    def finite(self) -> bool:
        return self.value is not INFINITE

    def __int__(self):
        if not self.finite:
            raise LengthError("length is infinite")
        return self.value


class RingSpec:
    """The local ring (R, m): ambient variables, characteristic, relations J
    and the declared Krull dimension d."""

    def __init__(self, variables: Sequence[str], characteristic: int = DEFAULT_CHARACTERISTIC,
                 relations: Iterable = (), dimension: Optional[int] = None):
        self.ring = PolyRing(variables, characteristic, DEGREVLEX)
        self.relations = Ideal(self.ring, relations)
        if dimension is not None and dimension < 1:
            raise PolyError("declared dimension must be >= 1")
        self.dimension = dimension
        gb = groebner_basis(self.relations, DEGREVLEX)
        if gb and gb[0].is_constant():
            raise PolyError("relations generate the unit ideal")
        self._relations_gb = gb

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.ring.variables

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    @property
    def is_polynomial_ring(self) -> bool:
        return not self._relations_gb

    def __repr__(self):
        rel = ", ".join(str(g) for g in self.relations.generators) or "0"
        return f"RingSpec({self.ring!r} / ({rel}), dim={self.dimension})"

    def parse(self, text: str) -> Polynomial:
        return self.ring.parse(text)

    def ideal(self, generators: Iterable) -> Ideal:
        return Ideal(self.ring, generators)

    def maximal_ideal(self) -> Ideal:
        return maximal_ideal(self.ring)

    def reduce(self, f: Polynomial) -> Polynomial:
        """Normal form modulo the relations (global degrevlex basis)."""
        if not self._relations_gb:
            return f
        return normal_form(f, self._relations_gb)

    def reduced_generators(self, gens: Iterable[Polynomial]) -> List[Polynomial]:
        """Generators reduced modulo J, zeros dropped, k-span pruned."""
        return prune_generators(self.reduce(g) for g in gens)

    def digest(self) -> str:
        text = "|".join([",".join(self.variables), str(self.characteristic),
                         self.relations.digest_text(), str(self.dimension)])
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def with_relations(self, relations: Iterable, dimension: Optional[int] = None) -> "RingSpec":
        return RingSpec(self.variables, self.characteristic, relations,
                        self.dimension if dimension is None else dimension)


# ---------------------------------------------------------------------------
# truncated local standard bases
# ---------------------------------------------------------------------------

class _LocalEncoder:
    """Linear key for the local degree order: lower total degree is larger,
    ties broken by reverse lexicographic order."""

    def __init__(self, nvars: int):
        B = FIELD_BITS
        v = nvars
        self.nvars = v
        self.shift = B * (v - 1)
        w = []
        for i in range(v):
            wi = -(1 << self.shift)
            for k in range(i + 1, v):
                wi += 1 << (B * (k - 1))
            w.append(wi)
        self.weights = w
        self._mask = (1 << B) - 1

    def encode(self, m) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    def degree(self, key: int) -> int:
        return -(key >> self.shift)

    def decode(self, key: int) -> Tuple[int, ...]:
        B, v, mask = FIELD_BITS, self.nvars, self._mask
        total = -(key >> self.shift)
        low = key + (total << self.shift)
        sums = [(low >> (B * k)) & mask for k in range(v - 1)] + [total]
        out = [sums[0]]
        for k in range(1, v):
            out.append(sums[k] - sums[k - 1])
        return tuple(out)


class TruncatedStandardBasis:
    """Standard basis of (polys) + m^N for the local degree order, built
    degree by degree until a degree without standard monomials appears."""

    def __init__(self, polys: Sequence[Polynomial], nvars: int, characteristic: int, N: int,
                 max_standard_monomials: int = DEFAULT_MAX_STANDARD_MONOMIALS):
        self.N = N
        self.nvars = nvars
        self.p = characteristic
        self.enc = _LocalEncoder(nvars)
        self.low = -((N - 1) << self.enc.shift)
        self.guard = guard_mask(nvars)
        self.terms: List[List[Tuple[int, object]]] = []
        self.lead_exps: List[Tuple[int, ...]] = []
        self.lead_packed: List[int] = []
        self.count = 0
        self.certified_degree: Optional[int] = None
        self.exhausted = False  # standard monomial budget blown
        self._build([f for f in polys if f], max_standard_monomials)

    # -- kernel helpers --
    def _axpy(self, f: Dict[int, object], a, shift: int, g: List[Tuple[int, object]]) -> None:
        p, low = self.p, self.low
        get = f.get
        if p:
            na = p - a
            for k, c in g:
                nk = k + shift
                if nk < low:
                    break
                v = get(nk)
                if v is None:
                    f[nk] = na * c % p
                else:
                    v = (v + na * c) % p
                    if v:
                        f[nk] = v
                    else:
                        del f[nk]
            return
        for k, c in g:
            nk = k + shift
            if nk < low:
                break
            v = get(nk)
            if v is None:
                f[nk] = (-a * c) % p if p else -a * c
            else:
                v = (v - a * c) % p if p else v - a * c
                if v:
                    f[nk] = v
                else:
                    del f[nk]

    def _reducer(self, lead: int) -> int:
        lp = pack(self.enc.decode(lead))
        guard = self.guard
        for i, q in enumerate(self.lead_packed):
            if not ((lp - q) & guard):
                return i
        return -1

    def _top_reduce(self, f: Dict[int, object], max_degree: Optional[int]) -> Optional[Dict[int, object]]:
        deg = self.enc.degree
        while f:
            lead = max(f)
            if max_degree is not None and deg(lead) > max_degree:
                return f
            i = self._reducer(lead)
            if i < 0:
                return f
            g = self.terms[i]
            self._axpy(f, f[lead], lead - g[0][0], g)
        return None

    def _monic(self, f: Dict[int, object]) -> List[Tuple[int, object]]:
        items = sorted(f.items(), reverse=True)
        lc = items[0][1]
        p = self.p
        if p:
            inv = pow(lc, -1, p)
            return [(k, c * inv % p) for k, c in items]
        return [(k, c / lc) for k, c in items]

    def _build(self, polys: List[Polynomial], budget: int) -> None:
        enc, N, B, v = self.enc, self.N, FIELD_BITS, self.nvars
        pending: Dict[int, List[Dict[int, object]]] = defaultdict(list)
        for f in polys:
            d = {}
            for m, c in f.as_dict().items():
                if sum(m) < N:
                    d[enc.encode(m)] = c
            if d:
                pending[enc.degree(max(d))].append(d)
        pairs: Dict[int, Dict[Tuple[int, int], Tuple[int, ...]]] = defaultdict(dict)
        std: List[int] = []
        steps = [1 << (B * i) for i in range(v)]
        guard = self.guard
        for delta in range(N):
            work = pending.pop(delta, [])
            bucket = pairs.pop(delta, {})
            for (i, j) in sorted(bucket):
                lcm = bucket[(i, j)]
                lk = enc.encode(lcm)
                fi, fj = self.terms[i], self.terms[j]
                s = {}
                si = lk - fi[0][0]
                low = self.low
                for k, c in fi:
                    nk = k + si
                    if nk < low:
                        break
                    s[nk] = c
                self._axpy(s, 1, lk - fj[0][0], fj)
                work.append(s)
            for f in work:
                r = self._top_reduce(f, delta)
                if r is None:
                    continue
                dl = enc.degree(max(r))
                if dl > delta:
                    pending[dl].append(r)
                else:
                    self._insert(self._monic(r), pairs)
            # standard monomials of degree delta
            if delta == 0:
                cands = [0]
            else:
                cands = sorted({s + st for s in std for st in steps})
            leads = self.lead_packed
            std = [c for c in cands if all((c - q) & guard for q in leads)]
            self.count += len(std)
            if not std:
                self.certified_degree = delta
                return
            if self.count > budget:
                self.exhausted = True
                return

    def _insert(self, terms: List[Tuple[int, object]], pairs) -> None:
        h = len(self.terms)
        lh = self.enc.decode(terms[0][0])
        # new pairs, criteria M and F (no product criterion for local orders)
        cands = [(g, monomial_lcm(self.lead_exps[g], lh)) for g in range(h)]
        kept = []
        for idx, (g, lcm) in enumerate(cands):
            if sum(lcm) >= self.N:
                continue
            if any(divides(l2, lcm) for _, l2 in cands[idx + 1:]) or any(divides(l2, lcm) for _, l2 in kept):
                continue
            kept.append((g, lcm))
        # chain criterion on existing pairs
        for d, bucket in pairs.items():
            for (i, j), lcm in list(bucket.items()):
                if divides(lh, lcm) and monomial_lcm(self.lead_exps[i], lh) != lcm \
                        and monomial_lcm(self.lead_exps[j], lh) != lcm:
                    del bucket[(i, j)]
        self.terms.append(terms)
        self.lead_exps.append(lh)
        self.lead_packed.append(pack(lh))
        for g, lcm in kept:
            pairs[sum(lcm)][(g, h)] = lcm

    # -- queries --
    @property
    def certified(self) -> bool:
        return self.certified_degree is not None

    def reduces_to_zero(self, f: Polynomial) -> bool:
        """Membership of ``f`` in the (certified) local ideal."""
        if not self.certified:
            raise LengthError("membership needs a certified standard basis")
        enc = self.enc
        d = {}
        for m, c in f.as_dict().items():
            if sum(m) < self.N:
                d[enc.encode(m)] = c
        return self._top_reduce(d, None) is None

    def leading_monomials(self) -> List[Tuple[int, ...]]:
        return list(self.lead_exps)

    def polynomials(self, ring) -> List[Polynomial]:
        """The basis elements (truncated below degree N) as polynomials.

        Once certified they generate the ideal of the local ring, since the
        dropped tails lie in m^N, which is inside the ideal.
        """
        dec = self.enc.decode
        return [Polynomial(ring, {dec(k): c for k, c in t}, _clean=True) for t in self.terms]


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def _initial_truncation(gens: Sequence[Polynomial], hint: Optional[int]) -> int:
    if hint is not None:
        return hint + 1
    orders = [g.order() for g in gens if g]
    return max(orders, default=0) + 2


def standard_basis(I: Ideal, spec: RingSpec, hint: Optional[int] = None,
                   cap: int = DEFAULT_TRUNC_CAP,
                   max_standard_monomials: int = DEFAULT_MAX_STANDARD_MONOMIALS,
                   guess: Optional[int] = None) -> TruncatedStandardBasis:
    """Certified truncated standard basis of J + I (memoized on ``I``).

    ``hint`` is an upper bound for the certification degree if one is known
    (e.g. n*delta(I) for I^n); without it the truncation grows geometrically.
    ``guess`` is a cheaper estimate tried first; a wrong guess costs one
    extra attempt and never changes the result.  Returns the last
    (uncertified) attempt when the cap is reached.
    """
    key = ("local_sb", spec.digest(), cap)
    cached = I.memo.get(key)
    if cached is not None:
        return cached
    gens = list(I.nonzero_generators()) + list(spec.relations.nonzero_generators())
    nvars, p = spec.ring.nvars, spec.characteristic
    N = max(1, min(_initial_truncation(gens, hint), cap))
    if guess is not None and guess + 1 < N:
        sb = TruncatedStandardBasis(gens, nvars, p, max(1, guess + 1), max_standard_monomials)
        if sb.certified or sb.exhausted:
            I.memo[key] = sb
            return sb
    while True:
        sb = TruncatedStandardBasis(gens, nvars, p, N, max_standard_monomials)
        if sb.certified or sb.exhausted or N >= cap:
            break
        N = min(cap, N + max(4, N // 2))
    I.memo[key] = sb
    return sb


def local_length(I: Ideal, spec: RingSpec, hint: Optional[int] = None,
                 cap: int = DEFAULT_TRUNC_CAP, guess: Optional[int] = None) -> LengthResult:
    """lambda(R/I) for R = k[x]_m / J."""
    sb = standard_basis(I, spec, hint, cap, guess=guess)
    if sb.certified:
        return LengthResult(sb.count, sb.N, True, sb.certified_degree)
    return LengthResult(INFINITE, sb.N, False, None)


def local_contains(I: Ideal, f: Polynomial, spec: RingSpec, hint: Optional[int] = None,
                   cap: int = DEFAULT_TRUNC_CAP) -> bool:
    """f in I R for a locally m-primary I."""
    sb = standard_basis(I, spec, hint, cap)
    if not sb.certified:
        raise LengthError("ideal is not locally m-primary (or the truncation cap is too small)")
    return sb.reduces_to_zero(f)


def quotient_length(inner: Ideal, outer: Ideal, spec: RingSpec, check: bool = True,
                    inner_hint: Optional[int] = None, outer_hint: Optional[int] = None,
                    cap: int = DEFAULT_TRUNC_CAP) -> int:
    """lambda(outer/inner) = lambda(R/inner) - lambda(R/outer)."""
    li = local_length(inner, spec, inner_hint, cap)
    lo = local_length(outer, spec, outer_hint, cap)
    if not (li.finite and lo.finite):
        raise LengthError("quotient length needs finite lengths")
    if check:
        for g in inner.nonzero_generators():
            if not local_contains(outer, g, spec, outer_hint, cap):
                raise LengthError(f"inner ideal is not contained in outer ideal ({g})")
    out = li.value - lo.value
    if out < 0:
        raise LengthError("negative quotient length")
    return out


def is_locally_m_primary(I: Ideal, spec: RingSpec, cap: int = DEFAULT_TRUNC_CAP) -> bool:
    return local_length(I, spec, cap=cap).finite


def min_generators(I: Ideal, spec: RingSpec, cap: int = DEFAULT_TRUNC_CAP) -> int:
    """nu(I) = lambda(I/mI)."""
    m = spec.maximal_ideal()
    mI = Ideal(spec.ring, spec.reduced_generators(f * g for f in m.generators for g in I.nonzero_generators()))
    li = local_length(I, spec, cap=cap)
    hint = None if li.certified_degree is None else li.certified_degree + 1
    return quotient_length(mI, I, spec, check=False, inner_hint=hint, cap=cap)


def power_of_maximal_ideal(spec: RingSpec, n: int) -> Ideal:
    ring = spec.ring
    v = ring.nvars
    gens = []

    def rec(i, left, acc):
        if i == v - 1:
            gens.append(ring.monomial(acc + [left]))
            return
        for e in range(left, -1, -1):
            rec(i + 1, left - e, acc + [e])

    rec(0, n, [])
    return Ideal(ring, gens)


def order_of_ideal(I: Ideal, spec: RingSpec, cap: int = DEFAULT_TRUNC_CAP) -> int:
    """Largest n with I contained in m^n (in R)."""
    gens = [g for g in spec.reduced_generators(I.generators)]
    if not gens:
        raise LengthError("order of the zero ideal is undefined")
    n = 0
    while True:
        mn = power_of_maximal_ideal(spec, n + 1)
        if not all(local_contains(mn, g, spec, hint=n + 1, cap=cap) for g in gens):
            return n
        n += 1
        if n > cap:
            raise LengthError("order exceeds the truncation cap")
