"""Numerical invariants of an m-primary ideal I and a reduction Q of I.

Everything is reduced to local lengths of products of powers of I, Q and m.
Those products live in a per-ideal :class:`PowerTower`, which memoizes the
ideals and their lengths and feeds each length computation an upper bound
for the degree at which it certifies (m^a in A, m^b in B => m^(a+b) in AB).
"""
from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .config import DEFAULT_CONFIG, Config
from .groebner import Ideal, unit_ideal
from .localring import (
    DEFAULT_TRUNC_CAP, LengthError, LengthResult, RingSpec, local_contains, local_length,
    min_generators, order_of_ideal, standard_basis,
)
from .poly import PolyError


class FitError(PolyError):
    """No exact polynomial tail in a table of values."""


class _NotFound:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NOT_FOUND"

    __str__ = __repr__


NOT_FOUND = _NotFound()


def ring_dimension(spec: RingSpec) -> int:
    if spec.dimension is not None:
        return spec.dimension
    if spec.is_polynomial_ring:
        return spec.ring.nvars
    raise PolyError("the ring needs a declared dimension")


# ---------------------------------------------------------------------------
# products of powers
# ---------------------------------------------------------------------------

class PowerTower:
    """Ideals I^n and the mixed products Q I^n, I Q^n, m I^n, with their
    local lengths.

    Kinds: "I" (I^n), "QI" (Q I^n), "IQ" (I Q^n), "mI" (m I^n); the mixed
    kinds take the tower of Q.  Memo writes happen under a lock, so a tower
    may be shared by threads.
    """

    KINDS = ("I", "QI", "IQ", "mI")

    def __init__(self, spec: RingSpec, I: Ideal, cap: int = DEFAULT_TRUNC_CAP):
        self.spec = spec
        self.cap = cap
        self.base = Ideal(spec.ring, spec.reduced_generators(I.generators))
        self.key = self.base.digest_text()
        self._m = spec.maximal_ideal()
        self._ideals: Dict[tuple, Ideal] = {}
        self._lengths: Dict[tuple, LengthResult] = {}
        self._lock = threading.RLock()

    def _mul(self, A: Ideal, B: Ideal) -> Ideal:
        gens = (f * g for f in A.nonzero_generators() for g in B.nonzero_generators())
        return Ideal(self.spec.ring, self.spec.reduced_generators(gens))

    @staticmethod
    def _memo_key(kind, n, other):
        return (kind, n, None if other is None else other.key)

    def _need(self, kind, other):
        if kind not in self.KINDS:
            raise ValueError(f"unknown product kind {kind!r}")
        if kind in ("QI", "IQ") and other is None:
            raise PolyError(f"product {kind} needs the tower of Q")

    def ideal(self, kind: str, n: int, other: Optional["PowerTower"] = None) -> Ideal:
        self._need(kind, other)
        if n < 0:
            raise ValueError("negative power")
        key = self._memo_key(kind, n, other)
        with self._lock:
            got = self._ideals.get(key)
            if got is not None:
                return got
            if kind == "I":
                if n == 0:
                    out = unit_ideal(self.spec.ring)
                elif n == 1:
                    out = self.base
                else:
                    out = self._mul(self.local_generators(n - 1), self.base)
            elif kind == "QI":
                out = self._mul(other.base, self.local_generators(n))
            elif kind == "IQ":
                out = self._mul(self.base, other.local_generators(n))
            else:
                out = self._mul(self._m, self.local_generators(n))
            self._ideals[key] = out
            return out

    def local_generators(self, n: int) -> Ideal:
        """I^n, or the standard basis of I^n when it is certified and shorter.

        Both generate the same ideal of the local ring; products built from
        the shorter list are much cheaper for large n.
        """
        A = self.ideal("I", n)
        if n < 2:
            return A
        with self._lock:
            key = ("sbgens", n)
            got = self._ideals.get(key)
            if got is not None:
                return got
            if not self.length("I", n).finite:
                out = A
            else:
                sb = standard_basis(A, self.spec, cap=self.cap)
                polys = sb.polynomials(self.spec.ring)
                out = Ideal(self.spec.ring, polys) if len(polys) < len(A.generators) else A
            self._ideals[key] = out
            return out

    def degree(self, kind: str, n: int, other: Optional["PowerTower"] = None) -> Optional[int]:
        """Least delta with m^delta inside the product (None if not m-primary)."""
        return self.length(kind, n, other).certified_degree

    def _known(self, kind: str, n: int, other=None) -> Optional[int]:
        """Certification degree if that length is already computed."""
        got = self._lengths.get(self._memo_key(kind, n, other))
        return None if got is None else got.certified_degree

    def _hint(self, kind: str, n: int, other) -> Tuple[Optional[int], Optional[int]]:
        """(sure bound, cheaper guess) for the certification degree."""
        # m^a in A and m^b in B give m^(a+b) in AB
        if kind == "I":
            if n == 0:
                return 0, None
            if n == 1:
                return None, None
            parts = [(self, "I", n - 1), (self, "I", 1)]
        elif kind == "QI":
            parts = [(other, "I", 1), (self, "I", n)]
        elif kind == "IQ":
            parts = [(self, "I", 1), (other, "I", n)]
        else:
            d = self.degree("I", n)
            if d is None:
                return None, None
            # I^(n+1) lies in m I^n
            known = self._known("I", n + 1)
            return (d + 1 if known is None else min(d + 1, known)), None
        total = 0
        for tower, k, e in parts:
            d = tower.degree(k, e)
            if d is None:
                return None, None
            total += d
        guess = None
        if kind == "I":
            prev = self.degree("I", n - 1)
            before = self.degree("I", n - 2) if n >= 3 else None
            if before is not None:
                guess = 2 * prev - before  # certification degrees grow linearly
            else:
                guess = prev + min((g.order() for g in self.base.nonzero_generators()), default=1)
        elif kind == "QI":
            # Q^(n+1) lies in Q I^n, which lies in I^(n+1)
            sure = other._known("I", n + 1)
            if sure is not None:
                total = min(total, sure)
            guess = self._known("I", n + 1)
        else:
            sure = other._known("I", n + 1)
            if sure is not None:
                total = min(total, sure)
            guess = self._known("QI", n, other)
        if guess is not None and guess >= total:
            guess = None
        return total, guess

    def length(self, kind: str, n: int, other: Optional["PowerTower"] = None) -> LengthResult:
        """lambda(R / product)."""
        self._need(kind, other)
        key = self._memo_key(kind, n, other)
        with self._lock:
            got = self._lengths.get(key)
            if got is not None:
                return got
            A = self.ideal(kind, n, other)
            hint, guess = self._hint(kind, n, other)
            res = local_length(A, self.spec, hint, self.cap, guess=guess)
            self._lengths[key] = res
            return res

    def value(self, kind: str, n: int, other: Optional["PowerTower"] = None) -> int:
        res = self.length(kind, n, other)
        if not res.finite:
            raise LengthError(f"lambda(R/{kind}^{n}) is not finite within the truncation cap")
        return res.value


def tower_for(I: Ideal, spec: RingSpec, cap: int = DEFAULT_TRUNC_CAP) -> PowerTower:
    """Tower memoized on I, keyed by the ring and the truncation cap."""
    key = ("tower", spec.digest(), cap)
    with _TOWER_LOCK:
        t = I.memo.get(key)
        if t is None:
            t = PowerTower(spec, I, cap)
            I.memo[key] = t
        return t


_TOWER_LOCK = threading.Lock()


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

@dataclass
class ReductionSearchReport:
    Q: Optional[Ideal]
    r: object  # int or NOT_FOUND
    attempts: int
    seed: int

    @property
    def found(self) -> bool:
        return self.r is not NOT_FOUND


def _check_contained(Q: Ideal, I: Ideal, spec: RingSpec, cap: int) -> None:
    base = tower_for(I, spec, cap).base
    for g in Q.nonzero_generators():
        if not local_contains(base, spec.reduce(g), spec, cap=cap):
            raise LengthError(f"{g} is not in I")


def is_reduction(I: Ideal, Q: Ideal, spec: RingSpec, cap: int = 12,
                 trunc_cap: int = DEFAULT_TRUNC_CAP):
    """Least r <= cap with I^(r+1) = Q I^r, or NOT_FOUND.

    Equality is certified by equal lengths, Q I^r being inside I^(r+1).
    """
    _check_contained(Q, I, spec, trunc_cap)
    t, tq = tower_for(I, spec, trunc_cap), tower_for(Q, spec, trunc_cap)
    for r in range(cap + 1):
        if t.value("I", r + 1) == t.value("QI", r, tq):
            return r
    return NOT_FOUND


def _random_combinations(I: Ideal, count: int, rng: random.Random, p: int) -> List:
    gens = I.nonzero_generators()
    out = []
    for _ in range(count):
        if p:
            coeffs = [rng.randrange(1, p) for _ in gens]
        else:
            coeffs = [rng.choice([-1, 1]) * rng.randrange(1, 100) for _ in gens]
        f = I.ring.zero()
        for c, g in zip(coeffs, gens):
            f = f + g * c
        out.append(f)
    return out


def find_minimal_reduction(I: Ideal, spec: RingSpec, seed: int = 0, cap: int = 12,
                           retries: int = 5, trunc_cap: int = DEFAULT_TRUNC_CAP) -> ReductionSearchReport:
    """d random combinations of the generators of I, retried with fresh
    coefficients until one is a reduction with r <= cap."""
    d = ring_dimension(spec)
    rng = random.Random(seed)
    red = Ideal(spec.ring, spec.reduced_generators(I.generators))
    for attempt in range(1, retries + 1):
        Q = Ideal(spec.ring, _random_combinations(red, d, rng, spec.characteristic))
        if not local_length(Q, spec, cap=trunc_cap).finite:
            continue
        r = is_reduction(I, Q, spec, cap, trunc_cap)
        if r is not NOT_FOUND:
            return ReductionSearchReport(Q, r, attempt, seed)
    return ReductionSearchReport(None, NOT_FOUND, retries, seed)


def sampled_reductions(I: Ideal, spec: RingSpec, seed: int = 0, samples: int = 3, cap: int = 12,
                       retries: int = 5, trunc_cap: int = DEFAULT_TRUNC_CAP) -> List[ReductionSearchReport]:
    """Independent reduction searches; min r over them bounds r(I) from above."""
    rng = random.Random(seed)
    seeds = [rng.randrange(1 << 30) for _ in range(samples)]
    return [find_minimal_reduction(I, spec, s, cap, retries, trunc_cap) for s in seeds]


# ---------------------------------------------------------------------------
# exact polynomial fits
# ---------------------------------------------------------------------------

def _solve(rows: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise FitError("singular interpolation system")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [v - f * w for v, w in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def _basis(n: int, k: int) -> List[int]:
    # (-1)^i C(n+k-i, k-i), i = 0..k
    return [(-1) ** i * comb(n + k - i, k - i) for i in range(k + 1)]


def fit_binomial(points: Sequence[Tuple[int, int]], k: int) -> Tuple[int, ...]:
    """Integers c_0..c_k with value(n) = sum (-1)^i c_i C(n+k-i, k-i).

    Fitted on the last k+1 points, accepted only if it reproduces the last
    k+3 points exactly.
    """
    if k < 0:
        raise FitError("negative degree")
    pts = list(points)
    if len(pts) < k + 3:
        raise FitError(f"need at least {k + 3} values, got {len(pts)}")
    fit = pts[-(k + 1):]
    coeffs = _solve([[Fraction(b) for b in _basis(n, k)] for n, _ in fit],
                    [Fraction(v) for _, v in fit])
    for n, v in pts[-(k + 3):]:
        if sum(c * b for c, b in zip(coeffs, _basis(n, k))) != v:
            raise FitError("values are not yet polynomial")
    if any(c.denominator != 1 for c in coeffs):
        raise FitError("non-integral binomial coefficients")
    return tuple(int(c) for c in coeffs)


def hilbert_coefficients(table: Sequence[int], d: int) -> Tuple[int, ...]:
    """(e_0, ..., e_d) from table[n] = lambda(R/I^(n+1))."""
    return fit_binomial(list(enumerate(table)), d)


# ---------------------------------------------------------------------------
# tables and multiplicities
# ---------------------------------------------------------------------------

def hilbert_samuel_table(I: Ideal, spec: RingSpec, n_max: int = 12,
                         trunc_cap: int = DEFAULT_TRUNC_CAP) -> List[int]:
    """lambda(R/I^(n+1)) for n = 0..n_max."""
    t = tower_for(I, spec, trunc_cap)
    return [t.value("I", n + 1) for n in range(n_max + 1)]


def _with_extension(fn, n_max: int, n_ext: int):
    try:
        return fn(n_max)
    except FitError:
        if n_ext <= n_max:
            raise
        return fn(n_ext)


def hilbert_coefficients_of(I: Ideal, spec: RingSpec, n_max: int = 12, n_ext: int = 24,
                            trunc_cap: int = DEFAULT_TRUNC_CAP) -> Tuple[int, ...]:
    d = ring_dimension(spec)
    return _with_extension(
        lambda n: hilbert_coefficients(hilbert_samuel_table(I, spec, n, trunc_cap), d), n_max, n_ext)


def sally_fiber_lengths(I: Ideal, Q: Ideal, spec: RingSpec, r=None, cap: int = 12,
                        trunc_cap: int = DEFAULT_TRUNC_CAP) -> Tuple[int, ...]:
    """lambda(I^(n+1)/Q I^n) for n = 1..r-1."""
    if r is None:
        r = is_reduction(I, Q, spec, cap, trunc_cap)
    if r is NOT_FOUND:
        raise LengthError("Q is not a reduction of I within the cap")
    t, tq = tower_for(I, spec, trunc_cap), tower_for(Q, spec, trunc_cap)
    return tuple(t.value("QI", n, tq) - t.value("I", n + 1) for n in range(1, r))


def sally_lengths(I: Ideal, Q: Ideal, spec: RingSpec, n_max: int = 12,
                  trunc_cap: int = DEFAULT_TRUNC_CAP) -> List[int]:
    """lambda(I^(n+1)/I Q^n) for n = 1..n_max."""
    t, tq = tower_for(I, spec, trunc_cap), tower_for(Q, spec, trunc_cap)
    return [t.value("IQ", n, tq) - t.value("I", n + 1) for n in range(1, n_max + 1)]


def sally_multiplicity(I: Ideal, Q: Ideal, spec: RingSpec, n_max: int = 12, n_ext: int = 24,
                       trunc_cap: int = DEFAULT_TRUNC_CAP) -> int:
    """Leading coefficient of the degree d-1 polynomial tail of the Sally lengths."""
    d = ring_dimension(spec)

    def fit(n):
        vals = sally_lengths(I, Q, spec, n, trunc_cap)
        return fit_binomial(list(zip(range(1, n + 1), vals)), d - 1)[0]

    return _with_extension(fit, n_max, n_ext)


def special_fiber_lengths(I: Ideal, spec: RingSpec, n_max: int = 12,
                          trunc_cap: int = DEFAULT_TRUNC_CAP) -> List[int]:
    """nu(I^n) = lambda(I^n/m I^n) for n = 1..n_max."""
    t = tower_for(I, spec, trunc_cap)
    return [t.value("mI", n) - t.value("I", n) for n in range(1, n_max + 1)]


def fiber_multiplicity(I: Ideal, spec: RingSpec, n_max: int = 12, n_ext: int = 24,
                       trunc_cap: int = DEFAULT_TRUNC_CAP) -> int:
    """f_0(I): leading coefficient of n -> nu(I^n)."""
    d = ring_dimension(spec)

    def fit(n):
        vals = special_fiber_lengths(I, spec, n, trunc_cap)
        return fit_binomial(list(zip(range(1, n + 1), vals)), d - 1)[0]

    return _with_extension(fit, n_max, n_ext)


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------

@dataclass
class InvariantRecord:
    lambda_RI: Optional[int] = None
    e: Optional[Tuple[int, ...]] = None
    eQ: Optional[Tuple[int, ...]] = None
    rQ: object = None
    fiber_lengths: Optional[Tuple[int, ...]] = None
    sally_lengths: Optional[Tuple[int, ...]] = None
    sQ: Optional[int] = None
    f0: Optional[int] = None
    nuI: Optional[int] = None
    nu_m: Optional[int] = None
    oI: Optional[int] = None
    rossi_index: Optional[int] = None
    buchsbaum_I: Optional[int] = None
    diagnostics: Dict[str, str] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = list(v)
        if self.rQ is NOT_FOUND:
            out["rQ"] = "NOT_FOUND"
        return out


def rossi_index(record: InvariantRecord) -> int:
    e0, e1 = record.e[0], record.e[1]
    return e1 - e0 + record.lambda_RI + 1


def buchsbaum_invariant(eQ: Sequence[int]) -> int:
    return sum((-1) ** i * eQ[i] for i in range(1, len(eQ)))


COMPUTE_ERRORS = (PolyError, ValueError, ArithmeticError, RecursionError)


class InstanceInvariants:
    """Lazily computed, memoized invariants of one (R, I, Q).

    Each accessor computes its value once; failures are cached too and
    re-raised on later calls.  When Q is not supplied a minimal reduction is
    searched with ``config.seed``.
    """

    def __init__(self, spec: RingSpec, I: Ideal, Q: Optional[Ideal] = None,
                 config: Config = DEFAULT_CONFIG):
        self.spec = spec
        self.I = I
        self.config = config
        self._Q = Q
        self._memo: Dict[str, object] = {}
        self._lock = threading.RLock()

    def _get(self, name, fn):
        with self._lock:
            if name in self._memo:
                val = self._memo[name]
            else:
                try:
                    val = fn()
                except COMPUTE_ERRORS as exc:
                    val = exc
                self._memo[name] = val
        if isinstance(val, BaseException):
            raise val
        return val

    @property
    def d(self) -> int:
        return ring_dimension(self.spec)

    @property
    def tower(self) -> PowerTower:
        return tower_for(self.I, self.spec, self.config.trunc_cap)

    @property
    def Q(self) -> Ideal:
        def search():
            if self._Q is not None:
                return self._Q
            c = self.config
            rep = find_minimal_reduction(self.I, self.spec, c.seed, c.red_cap, c.retries, c.trunc_cap)
            if rep.Q is None:
                raise LengthError("no minimal reduction found within the retry limit")
            return rep.Q
        return self._get("Q", search)

    @property
    def qtower(self) -> PowerTower:
        return tower_for(self.Q, self.spec, self.config.trunc_cap)

    def lambda_RI(self) -> int:
        return self._get("lambda_RI", lambda: self.tower.value("I", 1))

    def lambda_RQ(self) -> int:
        return self._get("lambda_RQ", lambda: self.qtower.value("I", 1))

    def lambda_IQ(self) -> int:
        return self.lambda_RQ() - self.lambda_RI()

    def e(self) -> Tuple[int, ...]:
        c = self.config
        return self._get("e", lambda: hilbert_coefficients_of(
            self.I, self.spec, c.n_max, c.n_max_extended, c.trunc_cap))

    def eQ(self) -> Tuple[int, ...]:
        c = self.config
        return self._get("eQ", lambda: hilbert_coefficients_of(
            self.Q, self.spec, c.n_max, c.n_max_extended, c.trunc_cap))

    def rQ(self):
        c = self.config
        return self._get("rQ", lambda: is_reduction(self.I, self.Q, self.spec, c.red_cap, c.trunc_cap))

    def fiber_lengths(self) -> Tuple[int, ...]:
        c = self.config
        return self._get("fiber_lengths", lambda: sally_fiber_lengths(
            self.I, self.Q, self.spec, self.rQ(), c.red_cap, c.trunc_cap))

    def fiber_length(self, n: int) -> int:
        """lambda(I^(n+1)/Q I^n), any n >= 0."""
        return self.tower.value("QI", n, self.qtower) - self.tower.value("I", n + 1)

    def _require_reduction(self):
        if self.rQ() is NOT_FOUND:
            raise LengthError("Q is not known to be a reduction of I (no r within the cap)")

    def sally_lengths(self) -> Tuple[int, ...]:
        c = self.config

        def run():
            self._require_reduction()
            return tuple(sally_lengths(self.I, self.Q, self.spec, c.n_max, c.trunc_cap))
        return self._get("sally_lengths", run)

    def sQ(self) -> int:
        c = self.config

        def run():
            self._require_reduction()
            return sally_multiplicity(self.I, self.Q, self.spec, c.n_max, c.n_max_extended, c.trunc_cap)
        return self._get("sQ", run)

    def f0(self) -> int:
        c = self.config
        return self._get("f0", lambda: fiber_multiplicity(
            self.I, self.spec, c.n_max, c.n_max_extended, c.trunc_cap))

    def nuI(self) -> int:
        return self._get("nuI", lambda: min_generators(self.tower.base, self.spec, self.config.trunc_cap))

    def nu_m(self) -> int:
        return self._get("nu_m", lambda: min_generators(self.spec.maximal_ideal(), self.spec,
                                                         self.config.trunc_cap))

    def oI(self) -> int:
        return self._get("oI", lambda: order_of_ideal(self.I, self.spec, self.config.trunc_cap))

    def rossi_index(self) -> int:
        e = self.e()
        return e[1] - e[0] + self.lambda_RI() + 1

    def buchsbaum_I(self) -> int:
        return buchsbaum_invariant(self.eQ())

    def sampled_r(self) -> List[object]:
        """r_Q(I) for the instance's Q followed by independently sampled reductions."""
        c = self.config

        def run():
            reps = sampled_reductions(self.I, self.spec, c.seed, c.samples, c.red_cap, c.retries, c.trunc_cap)
            return [self.rQ()] + [rep.r for rep in reps]
        return self._get("sampled_r", run)

    FIELDS = ("lambda_RI", "e", "eQ", "rQ", "fiber_lengths", "sally_lengths", "sQ", "f0",
              "nuI", "nu_m", "oI", "rossi_index", "buchsbaum_I")

    def record(self, only_cached: bool = False) -> InvariantRecord:
        """Fill an InvariantRecord; failures go to ``diagnostics``.

        Fields that depend on Q being a reduction are listed in ``skipped``
        when no reduction number was found.  With ``only_cached`` nothing new
        is computed.
        """
        rec = InvariantRecord()
        deps = {"rossi_index": ("e", "lambda_RI"), "buchsbaum_I": ("eQ",)}
        for name in self.FIELDS:
            if name in ("fiber_lengths", "sally_lengths", "sQ") and self._memo.get("rQ") is NOT_FOUND:
                rec.skipped[name] = "Q is not known to be a reduction of I (no r within the cap)"
                continue
            if only_cached:
                needed = deps.get(name, (name,))
                if not all(k in self._memo and not isinstance(self._memo[k], BaseException) for k in needed):
                    if name in self._memo:
                        rec.diagnostics[name] = _describe(self._memo[name])
                    continue
            try:
                setattr(rec, name, getattr(self, name)())
            except COMPUTE_ERRORS as exc:
                rec.diagnostics[name] = _describe(exc)
        return rec


def _describe(exc) -> str:
    return f"{type(exc).__name__}: {exc}"


def compute_record(I: Ideal, spec: RingSpec, Q: Optional[Ideal] = None,
                   config: Config = DEFAULT_CONFIG) -> Tuple[InvariantRecord, Optional[Ideal]]:
    """Every invariant that can be computed, with the reduction that was used."""
    inv = InstanceInvariants(spec, I, Q, config)
    rec = inv.record()
    try:
        Q = inv.Q
    except COMPUTE_ERRORS:
        Q = None
    return rec, Q
