"""Checks of reduction-number and multiplicity relations on an instance.

Each check has ring-theoretic hypotheses (user assertions or computed
conditions) and a numerical relation lhs REL rhs.  The relation is only
evaluated when every hypothesis is SATISFIED or ASSERTED_BY_USER.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from .config import DEFAULT_CONFIG, Config
from .constructions import Instance, fitting_ideal_I1, is_integral_over
from .groebner import Ideal, ideal_equal, saturate_by_m
from .invariants import COMPUTE_ERRORS, NOT_FOUND, InstanceInvariants, is_reduction
from .localring import RingSpec, local_length, order_of_ideal

SATISFIED = "SATISFIED"
VIOLATED = "VIOLATED"
ASSERTED = "ASSERTED_BY_USER"
UNKNOWN = "UNKNOWN"

LE, EQ, GE = "<=", "=", ">="


@dataclass
class Verdict:
    check_id: str
    name: str
    hypothesis_status: str
    lhs: object = None
    rhs: object = None
    relation: str = EQ
    passed: Optional[bool] = None
    citation: str = ""
    note: str = ""
    hypotheses: Dict[str, str] = field(default_factory=dict)

    @property
    def evaluated(self) -> bool:
        return self.passed is not None

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "name": self.name,
            "hypothesis_status": self.hypothesis_status,
            "hypotheses": dict(self.hypotheses),
            "lhs": _jsonable(self.lhs),
            "relation": self.relation,
            "rhs": _jsonable(self.rhs),
            "pass": self.passed,
            "citation": self.citation,
            "note": self.note,
        }


def _jsonable(v):
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if v is NOT_FOUND:
        return "NOT_FOUND"
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


def compare(lhs, rel: str, rhs) -> bool:
    """Scalar comparison, or entrywise for equal-length sequences."""
    if isinstance(lhs, (list, tuple)) or isinstance(rhs, (list, tuple)):
        if rel == EQ:
            return tuple(lhs) == tuple(rhs)
        return len(lhs) == len(rhs) and all(compare(a, rel, b) for a, b in zip(lhs, rhs))
    if rel == LE:
        return lhs <= rhs
    if rel == GE:
        return lhs >= rhs
    return lhs == rhs


def combine(statuses: Sequence[str]) -> str:
    if VIOLATED in statuses:
        return VIOLATED
    if UNKNOWN in statuses:
        return UNKNOWN
    if ASSERTED in statuses:
        return ASSERTED
    return SATISFIED


class _Unknown(Exception):
    """A hypothesis could not be decided."""


class CheckContext:
    """Instance plus memoized invariants and derived hypothesis statuses."""

    def __init__(self, instance: Instance, config: Config = DEFAULT_CONFIG,
                 invariants: Optional[InstanceInvariants] = None):
        self.instance = instance
        self.config = config
        self.spec: RingSpec = instance.spec
        self.inv = invariants or InstanceInvariants(instance.spec, instance.I, instance.Q, config)
        self._cache: Dict[str, object] = {}

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- ring hypotheses --
    @property
    def regular(self) -> bool:
        return self.spec.is_polynomial_ring

    def flag_status(self, name: str, implied_by_regular: bool = True) -> str:
        if implied_by_regular and self.regular:
            return SATISFIED
        v = self.instance.flag(name)
        if v is True:
            return ASSERTED
        if v is False:
            return VIOLATED
        return UNKNOWN

    def cm(self) -> str:
        return self.flag_status("cm")

    def gorenstein(self) -> str:
        return self.flag_status("gorenstein")

    def buchsbaum(self) -> str:
        st = self.flag_status("buchsbaum")
        return ASSERTED if st == UNKNOWN and self.cm() == ASSERTED else st

    def d_sequence(self) -> str:
        # a system of parameters in a Cohen-Macaulay ring is a regular sequence
        st = self.flag_status("d_sequence")
        return ASSERTED if st == UNKNOWN and self.cm() == ASSERTED else st

    def fitting_in_I(self) -> str:
        # for a regular sequence the syzygies are Koszul, with entries in Q
        st = self.flag_status("fitting_in_I")
        return ASSERTED if st == UNKNOWN and self.cm() == ASSERTED else st

    def I_equals_IS(self) -> str:
        st = self.flag_status("I_equals_IS")
        return ASSERTED if st == UNKNOWN and self.cm() == ASSERTED else st

    def aci(self) -> str:
        """nu(I) = d + 1, computed; the user flag is used only if that fails."""
        try:
            return SATISFIED if self.inv.nuI() == self.inv.d + 1 else VIOLATED
        except COMPUTE_ERRORS:
            return self.flag_status("aci", implied_by_regular=False)

    def dim_at_most(self, k: int) -> str:
        return SATISFIED if self.inv.d <= k else VIOLATED

    def h0(self) -> Ideal:
        """Saturation of the relations: H^0_m(R) = sat(J)/J."""
        return self.cached("h0", lambda: saturate_by_m(self.spec.relations))

    def depth_zero(self) -> str:
        if self.regular:
            return VIOLATED
        return VIOLATED if ideal_equal(self.h0(), self.spec.relations) else SATISFIED

    def positive_depth(self) -> str:
        return VIOLATED if self.depth_zero() == SATISFIED else SATISFIED

    def condition(self, ok: bool) -> str:
        return SATISFIED if ok else VIOLATED

    def lambda1(self) -> str:
        """lambda(I^2/QI) = 1."""
        return self.condition(self.inv.fiber_length(1) == 1)

    def sally_dim_d(self) -> str:
        """dim S_Q(I) = d, inferred from a nonzero leading coefficient."""
        return self.condition(self.inv.sQ() > 0)


@dataclass(frozen=True)
class CheckDef:
    id: str
    name: str
    statement: str
    run: Callable


def _r(ctx: CheckContext) -> int:
    r = ctx.inv.rQ()
    if r is NOT_FOUND:
        raise _Unknown("Q is not a reduction of I within the reduction cap")
    return r


def _min_sampled_r(ctx: CheckContext) -> int:
    rs = [r for r in ctx.inv.sampled_r() if r is not NOT_FOUND]
    if not rs:
        raise _Unknown("no sampled reduction found within the reduction cap")
    return min(rs)


def _rossi_sum(ctx):
    e = ctx.inv.e()
    return e[1] - e[0] + ctx.inv.lambda_RI()


# Each body returns (hypotheses dict, thunk); the thunk returns (lhs, rel, rhs, passed, note)
def _c1(ctx):
    hyp = {"cm": ctx.cm(), "dim<=2": ctx.dim_at_most(2)}
    return hyp, lambda: (_r(ctx), LE, _rossi_sum(ctx) + 1, None, "")


def _c2(ctx):
    return {"cm": ctx.cm()}, lambda: (ctx.inv.sQ(), EQ, _rossi_sum(ctx), None, "")


def _c3(ctx):
    def body():
        s, fib = ctx.inv.sQ(), ctx.inv.fiber_lengths()
        note = "dim S_Q(I) = d inferred from s_Q(I) > 0" if s > 0 else \
            "s_Q(I) = 0: the inequality holds trivially"
        return s, LE, sum(fib), None, note
    return {}, body


def _c4(ctx):
    hyp = {"dim S = d": ctx.sally_dim_d()}
    if hyp["dim S = d"] == SATISFIED:
        hyp["s = sum of fibers"] = ctx.condition(ctx.inv.sQ() == sum(ctx.inv.fiber_lengths()))
    return hyp, lambda: (_r(ctx), LE, ctx.inv.sQ() + 1, None, "")


def _c5(ctx):
    hyp = {"lambda(I^2/QI)=1": ctx.lambda1()}

    def body():
        r = _r(ctx)
        fib = ctx.inv.fiber_lengths()
        return list(fib), EQ, [1] * (r - 1), None, f"fiber length sum {sum(fib)}, r - 1 = {r - 1}"
    return hyp, body


def _c6(ctx):
    hyp = {"cm": ctx.cm(), "lambda(I^2/QI)=1": ctx.lambda1()}

    def body():
        rs = ctx.inv.sampled_r()
        target = _rossi_sum(ctx) + 1
        ok = all(r == target for r in rs) and target > 1
        return list(rs), EQ, target, ok, "every sampled r_Q(I) must equal the Rossi index, which must exceed 1"
    return hyp, body


def _c7(ctx):
    nc = ctx.instance.northcott
    hyp = {"northcott": ctx.condition(nc is not None)}
    if nc is not None:
        hyp["Q in m^(n+1)"] = ctx.condition(order_of_ideal(nc.Q, ctx.spec, ctx.config.trunc_cap) >= nc.n + 1)

    def body():
        res = is_integral_over(nc.I, nc.Q, ctx.spec, ctx.config.red_cap, ctx.config.trunc_cap)
        return str(res), EQ, "YES", res.integral, ""
    return hyp, body


def _c8(ctx):
    nc = ctx.instance.northcott
    hyp = {"gorenstein": ctx.gorenstein(), "northcott": ctx.condition(nc is not None)}

    def body():
        I1 = fitting_ideal_I1(nc)
        l1 = local_length(I1, ctx.spec, cap=ctx.config.trunc_cap)
        if not l1.finite:
            raise _Unknown("lambda(R/I_1(phi)) is not finite")
        return ctx.inv.fiber_length(1), EQ, ctx.inv.lambda_IQ() - l1.value, None, ""
    return hyp, body


def _first_unit_fiber(ctx) -> Optional[int]:
    """Least n >= 1 with lambda(I^n/Q I^(n-1)) = 1."""
    if ctx.inv.lambda_IQ() == 1:
        return 1
    r = _r(ctx)
    for n in range(2, r + 1):
        if ctx.inv.fiber_length(n - 1) == 1:
            return n
    return None


def _c9(ctx):
    hyp = {"aci": ctx.aci()}
    n = None
    try:
        n = _first_unit_fiber(ctx)
        hyp["some lambda(I^n/QI^(n-1))=1"] = ctx.condition(n is not None)
    except _Unknown:
        hyp["some lambda(I^n/QI^(n-1))=1"] = UNKNOWN

    def body():
        return _min_sampled_r(ctx), LE, n * ctx.inv.nu_m() - 1, None, f"n = {n}; r(I) estimated as a minimum over sampled reductions"
    return hyp, body


def _c10(ctx):
    hyp = {"gorenstein": ctx.gorenstein(), "lambda(I/Q)=2": ctx.condition(ctx.inv.lambda_IQ() == 2)}

    def body():
        r = _min_sampled_r(ctx)
        rhs = 2 * ctx.inv.nu_m() - 1
        l1 = ctx.inv.fiber_length(1)
        ok = r <= rhs and l1 <= 1
        return r, LE, rhs, ok, f"also requires lambda(I^2/QI) <= 1 (found {l1})"
    return hyp, body


def _c11(ctx):
    hyp = {"cm": ctx.cm(), "aci": ctx.aci(), "lambda(I^2/QI)=1": ctx.lambda1()}

    def body():
        t, tq = ctx.inv.tower, ctx.inv.qtower
        m = ctx.spec.maximal_ideal()
        lhs, rhs = [], []
        for n in (2, 3):
            lhs.append(t.value("mI", n))
            IQ = t.ideal("IQ", n - 1, tq)
            mIQ = t._mul(m, IQ)
            hint = t.degree("IQ", n - 1, tq)
            res = local_length(mIQ, ctx.spec, None if hint is None else hint + 1, ctx.config.trunc_cap)
            if not res.finite:
                raise _Unknown("lambda(R/mIQ^(n-1)) is not finite")
            rhs.append(res.value)
        return lhs, EQ, rhs, None, "lambda(R/mI^n) against lambda(R/mIQ^(n-1)) for n = 2, 3 (one ideal contains the other)"
    return hyp, body


def _c12(ctx):
    hyp = {"cm": ctx.cm(), "aci": ctx.aci(), "lambda(I^2/QI)=1": ctx.lambda1()}

    def body():
        base = _rossi_sum(ctx)
        f0 = ctx.inv.f0()
        return [base + 1, f0], LE, [f0, base + 2], None, "lower and upper bound on f_0(I)"
    return hyp, body


def _c13(ctx):
    hyp = {"cm": ctx.cm(), "aci": ctx.aci(), "lambda(I^2/QI)=1": ctx.lambda1()}

    def body():
        f0, r = ctx.inv.f0(), _r(ctx)
        other = _rossi_sum(ctx) + 2
        return f0, EQ, r + 1, f0 == r + 1 and f0 == other, f"also requires f_0 = e_1 - e_0 + lambda(R/I) + 2 = {other}"
    return hyp, body


def _c14(ctx):
    hyp = {"buchsbaum": ctx.buchsbaum(), "dim=2": ctx.condition(ctx.inv.d == 2),
           "positive depth": ctx.positive_depth(), "I = IS": ctx.I_equals_IS()}

    def body():
        s, r = ctx.inv.sQ(), _r(ctx)
        rhs = _rossi_sum(ctx) - ctx.inv.eQ()[1]
        return s, EQ, rhs, s == rhs and r <= s + 1, f"also requires r_Q(I) <= s_Q(I) + 1 (r = {r})"
    return hyp, body


def _c15(ctx):
    hyp = {"buchsbaum": ctx.buchsbaum(), "dim=2": ctx.condition(ctx.inv.d == 2), "depth zero": ctx.depth_zero()}

    def body():
        bar = RingSpec(ctx.spec.variables, ctx.spec.characteristic, ctx.h0().generators, ctx.spec.dimension)
        Ib = Ideal(bar.ring, ctx.instance.I.generators)
        Qb = Ideal(bar.ring, ctx.inv.Q.generators)
        rb = is_reduction(Ib, Qb, bar, ctx.config.red_cap, ctx.config.trunc_cap)
        if rb is NOT_FOUND:
            raise _Unknown("reduction number over R/H^0 exceeds the cap")
        return _r(ctx), LE, rb + 1, None, "computed in R/H^0_m(R)"
    return hyp, body


def _c16(ctx):
    hyp = {"dim S = d": ctx.sally_dim_d()}

    def body():
        rhs = _rossi_sum(ctx) - ctx.inv.eQ()[1]
        return ctx.inv.sQ(), LE, rhs, None, "dim S_Q(I) = d inferred from s_Q(I) > 0"
    return hyp, body


def _c17(ctx):
    hyp = {"dim S = d": ctx.sally_dim_d(), "d-sequence": ctx.d_sequence(), "I_1(syz Q) in I": ctx.fitting_in_I()}

    def body():
        rhs = _rossi_sum(ctx) - ctx.inv.eQ()[1]
        return ctx.inv.sQ(), EQ, rhs, None, ""
    return hyp, body


CHECKS: Dict[str, CheckDef] = {c.id: c for c in [
    CheckDef("C1", "rossi_bound", "CM, dim <= 2: r_Q(I) <= e_1 - e_0 + lambda(R/I) + 1", _c1),
    CheckDef("C2", "sally_identity", "CM: s_Q(I) = e_1 - e_0 + lambda(R/I)", _c2),
    CheckDef("C3", "fiber_sum", "dim S_Q(I) = d: s_Q(I) <= sum_{n=1}^{r-1} lambda(I^(n+1)/QI^n)", _c3),
    CheckDef("C4", "cm_sally_bound", "equality in the fiber sum bound: r_Q(I) <= s_Q(I) + 1", _c4),
    CheckDef("C5", "cyclic_fiber", "lambda(I^2/QI) = 1: every fiber I^(n+1)/QI^n, 1 <= n <= r-1, has length 1", _c5),
    CheckDef("C6", "lambda1_package",
             "CM, lambda(I^2/QI) = 1: r_Q(I) does not depend on Q and equals e_1 - e_0 + lambda(R/I) + 1 > 1", _c6),
    CheckDef("C7", "integral_link", "Q in m^(n+1): Q:(x, y^n) is integral over Q", _c7),
    CheckDef("C8", "acm_formula", "Gorenstein, I = (Q, a): lambda(I^2/QI) = lambda(I/Q) - lambda(R/I_1(phi))", _c8),
    CheckDef("C9", "aci_nu_bound", "aci, lambda(I^n/QI^(n-1)) = 1: r(I) <= n nu(m) - 1", _c9),
    CheckDef("C10", "gorenstein2", "Gorenstein, lambda(I/Q) = 2: lambda(I^2/QI) <= 1 and r(I) <= 2 nu(m) - 1", _c10),
    CheckDef("C11", "m_collapse", "CM, aci, lambda(I^2/QI) = 1: m I^n = m I Q^(n-1) for n >= 2", _c11),
    CheckDef("C12", "fiber_window",
             "CM, aci, lambda(I^2/QI) = 1: e_1 - e_0 + lambda(R/I) + 1 <= f_0(I) <= e_1 - e_0 + lambda(R/I) + 2", _c12),
    CheckDef("C13", "fiber_cm", "CM, aci, lambda(I^2/QI) = 1: f_0(I) = r(I) + 1 = e_1 - e_0 + lambda(R/I) + 2", _c13),
    CheckDef("C14", "buchsbaum_rossi",
             "Buchsbaum, dim 2, positive depth, I = IS: s_Q(I) = e_1 - e_0 + lambda(R/I) - e_1(Q) and r_Q(I) <= s_Q(I) + 1",
             _c14),
    CheckDef("C15", "depth0_bound", "Buchsbaum, dim 2, depth 0: r_Q(I) <= r over R/H^0_m(R) + 1", _c15),
    CheckDef("C16", "sally_upper", "dim S_Q(I) = d: s_Q(I) <= e_1 - e_1(Q) - e_0 + lambda(R/I)", _c16),
    CheckDef("C17", "dseq_equality",
             "dim S_Q(I) = d, Q a d-sequence, I_1(syz Q) in I: s_Q(I) = e_1 - e_1(Q) - e_0 + lambda(R/I)", _c17),
]}


def parse_check_list(text: str) -> List[str]:
    """'all' or a comma-separated list of check ids (case-insensitive)."""
    text = text.strip()
    if text.lower() == "all":
        return list(CHECKS)
    out = []
    for part in text.split(","):
        cid = part.strip().upper()
        if not cid:
            continue
        if cid not in CHECKS:
            raise ValueError(f"unknown check id {part.strip()!r}")
        out.append(cid)
    return out


def run_check(ctx: CheckContext, cid: str) -> Verdict:
    cdef = CHECKS[cid]
    v = Verdict(cid, cdef.name, UNKNOWN, citation=cdef.statement)
    try:
        hyp, body = cdef.run(ctx)
    except _Unknown as exc:
        v.note = str(exc)
        return v
    except COMPUTE_ERRORS as exc:
        v.note = f"hypothesis evaluation failed: {type(exc).__name__}: {exc}"
        return v
    v.hypotheses = dict(hyp)
    v.hypothesis_status = combine(list(hyp.values()))
    if v.hypothesis_status not in (SATISFIED, ASSERTED):
        v.note = "hypotheses not met; relation not evaluated"
        return v
    try:
        lhs, rel, rhs, passed, note = body()
    except _Unknown as exc:
        v.hypothesis_status = UNKNOWN
        v.note = str(exc)
        return v
    except COMPUTE_ERRORS as exc:
        v.hypothesis_status = UNKNOWN
        v.note = f"{type(exc).__name__}: {exc}"
        return v
    v.lhs, v.relation, v.rhs, v.note = lhs, rel, rhs, note
    v.passed = compare(lhs, rel, rhs) if passed is None else bool(passed)
    return v


def check(instance: Instance, checks: Sequence[str] = ("all",), config: Config = DEFAULT_CONFIG,
          context: Optional[CheckContext] = None) -> List[Verdict]:
    """One Verdict per requested check id, in the order given."""
    ids: List[str] = []
    for c in checks:
        ids.extend(parse_check_list(c))
    ctx = context or CheckContext(instance, config)
    return [run_check(ctx, cid) for cid in ids]
