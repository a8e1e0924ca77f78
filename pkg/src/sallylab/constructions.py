"""Ideal families with known invariants: Northcott ideals Q:(x, y^n) in the
plane, direct links Q:L, and a small catalog of worked instances."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .groebner import Ideal, colon, contains
from .invariants import NOT_FOUND, is_reduction
from .localring import DEFAULT_TRUNC_CAP, LengthError, RingSpec, local_length, order_of_ideal
from .poly import PolyError, Polynomial


class ConstructionError(PolyError):
    pass


class CatalogError(ConstructionError):
    pass


# ---------------------------------------------------------------------------
# Northcott ideals
# ---------------------------------------------------------------------------

def _plane_variables(ring) -> Tuple[Polynomial, Polynomial]:
    if ring.nvars != 2:
        raise ConstructionError("Northcott constructions need a ring in two variables (x, y)")
    x, y = ring.gens()
    return x, y


def split_in_x_yn(f: Polynomial, n: int) -> Tuple[Polynomial, Polynomial]:
    """(f1, f2) with f = f1*x + f2*y^n.

    Terms containing x go to f1 (divided by x); pure powers y^k, k >= n, go
    to f2 (divided by y^n).  Anything else means f is not in (x, y^n).
    """
    ring = f.ring
    _plane_variables(ring)
    if n < 1:
        raise ConstructionError("n must be positive")
    d1: Dict = {}
    d2: Dict = {}
    for (i, j), c in f.as_dict().items():
        if i > 0:
            d1[(i - 1, j)] = c
        elif j >= n:
            d2[(0, j - n)] = c
        else:
            raise ConstructionError(f"{f} is not in (x, y^{n}): term of degree {j} in y alone")
    return Polynomial(ring, d1, _clean=True), Polynomial(ring, d2, _clean=True)


@dataclass
class NorthcottData:
    a: Polynomial
    b: Polynomial
    n: int
    a1: Polynomial
    a2: Polynomial
    b1: Polynomial
    b2: Polynomial
    c: Polynomial
    I: Ideal
    Q: Ideal
    spec: RingSpec
    proper: bool = True
    warnings: List[str] = field(default_factory=list)

    @property
    def phi_entries(self) -> Tuple[Polynomial, ...]:
        x, y = _plane_variables(self.a.ring)
        return (-self.b1, -self.b2, self.a1, self.a2, -(y ** self.n), x)

    @property
    def L(self) -> Ideal:
        x, y = _plane_variables(self.a.ring)
        return Ideal(self.a.ring, [x, y ** self.n])


def northcott_ideal(a, b, n: int, spec: RingSpec, check: bool = True,
                    trunc_cap: int = DEFAULT_TRUNC_CAP) -> NorthcottData:
    """I = (a, b, c) with c = a1*b2 - a2*b1 for Q = (a, b) inside (x, y^n).

    With ``check`` the ideal is compared with Q:(x, y^n) (locally), Q is
    required to be m-primary, and a warning is issued if Q is not inside
    m^(n+1).
    """
    ring = spec.ring
    a = ring.parse(a) if isinstance(a, str) else a
    b = ring.parse(b) if isinstance(b, str) else b
    a1, a2 = split_in_x_yn(a, n)
    b1, b2 = split_in_x_yn(b, n)
    c = a1 * b2 - a2 * b1
    Q = Ideal(ring, [a, b])
    I = Ideal(ring, [a, b, c])
    data = NorthcottData(a, b, n, a1, a2, b1, b2, c, I, Q, spec)
    if c.is_constant() and c:
        data.proper = False
        data.warnings.append("c is a unit: the ideal is not proper")
    if not check:
        return data
    if not local_length(Q, spec, cap=trunc_cap).finite:
        raise ConstructionError("(a, b) is not m-primary")
    if order_of_ideal(Q, spec, trunc_cap) < n + 1:
        msg = f"Q is not inside m^{n + 1}; integrality over Q is not guaranteed"
        data.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
    linked = colon(Q, data.L)
    # c times (x, y^n) lies in Q, so (a, b, c) is inside the colon; equal lengths close it
    if not all(contains(linked, g) for g in I.generators):
        raise ConstructionError("(a, b, c) is not inside Q:(x, y^n)")
    if local_length(I, spec, cap=trunc_cap).value != local_length(linked, spec, cap=trunc_cap).value:
        raise ConstructionError("(a, b, c) differs from Q:(x, y^n)")
    return data


def fitting_ideal_I1(data: NorthcottData) -> Ideal:
    """Ideal of entries of the syzygy matrix: (x, y^n, a1, a2, b1, b2)."""
    return Ideal(data.a.ring, [g for g in data.phi_entries if g])


# ---------------------------------------------------------------------------
# integrality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralityResult:
    integral: bool
    r: Optional[int] = None
    cap: Optional[int] = None

    def __str__(self):
        return f"YES({self.r})" if self.integral else "NO_UP_TO_CAP"


def is_integral_over(I: Ideal, Q: Ideal, spec: RingSpec, cap: int = 12,
                     trunc_cap: int = DEFAULT_TRUNC_CAP) -> IntegralityResult:
    """Semi-decision: YES(r) if I^(r+1) = Q I^r for some r <= cap."""
    r = is_reduction(I, Q, spec, cap, trunc_cap)
    if r is NOT_FOUND:
        return IntegralityResult(False, None, cap)
    return IntegralityResult(True, r, cap)


# ---------------------------------------------------------------------------
# instances and the catalog
# ---------------------------------------------------------------------------

HYPOTHESIS_FLAGS = ("cm", "gorenstein", "buchsbaum", "aci", "d_sequence", "I_equals_IS", "fitting_in_I")


@dataclass(frozen=True)
class Expected:
    value: object
    claim: str


@dataclass
class Instance:
    """A ring, an m-primary ideal I, an optional reduction Q and user
    assertions about ring-theoretic hypotheses (True, False or None)."""

    id: str
    spec: RingSpec
    I: Ideal
    Q: Optional[Ideal] = None
    expected: Dict[str, Expected] = field(default_factory=dict)
    params: Dict[str, int] = field(default_factory=dict)
    flags: Dict[str, Optional[bool]] = field(default_factory=dict)
    northcott: Optional[NorthcottData] = None

    def flag(self, name: str) -> Optional[bool]:
        return self.flags.get(name)

    def digest_text(self) -> str:
        parts = [self.id, repr(sorted(self.params.items())), ",".join(self.spec.variables),
                 str(self.spec.characteristic), self.spec.relations.digest_text(), str(self.spec.dimension),
                 self.I.digest_text(), "" if self.Q is None else self.Q.digest_text(),
                 repr(sorted((k, v) for k, v in self.flags.items())),
                 "" if self.northcott is None else f"northcott:{self.northcott.n}"]
        return "|".join(parts)


CatalogInstance = Instance

_EX32_Q = ("x^5+y^6", "x*y^5+y^7")


def _plane(characteristic: int) -> RingSpec:
    return RingSpec(["x", "y"], characteristic, (), 2)


def _ex27(params, characteristic) -> Instance:
    spec = _plane(characteristic)
    data = northcott_ideal("x^4+y^5", "x^2*y^2+x*y^3", 3, spec)
    exp = {
        "lambda_IQ": Expected(3, "lambda(I/Q) = 3"),
        "lambda_I2_QI": Expected(1, "lambda(I^2/QI) = 1"),
        "rQ": Expected(2, "r_Q(I) = 2"),
        "I1_phi": Expected(("x", "y^2"), "I_1(phi) = (x, y^2)"),
        "f0": Expected(3, "f_0(I) = r(I) + 1 = 3"),
    }
    return Instance("ex2.7", spec, data.I, data.Q, exp, {}, {}, data)


def _ex32(case: int):
    def build(params, characteristic) -> Instance:
        spec = _plane(characteristic)
        Q = spec.ideal(_EX32_Q)
        I = colon(Q, spec.ideal([f"x^{case + 1}", "y"]))
        exp: Dict[str, Expected] = {}
        if case == 1:
            exp["rQ"] = Expected(1, "I^2 = QI")
        elif case == 2:
            exp["lambda_I2_QI"] = Expected(1, "lambda(I^2/QI) = 1")
            exp["rQ"] = Expected(2, "r(I) = 2")
        elif case == 3:
            exp["fiber_lengths"] = Expected((3, 2, 1), "lambda(I^(n+1)/QI^n) = 3, 2, 1 for n = 1, 2, 3")
            exp["rQ"] = Expected(5, "r(I) = 5")
        else:
            exp["nuI"] = Expected(2, "I is a complete intersection")
            exp["integral_over_Q"] = Expected("NO_UP_TO_CAP", "I is not integral over Q")
        return Instance(f"ex3.2.{case}", spec, I, Q, exp, {}, {})
    return build


def _ex46(params, characteristic) -> Instance:
    q = params.get("q")
    if q is None:
        raise CatalogError("ex4.6 needs the parameter q")
    if not isinstance(q, int) or q < 1:
        raise CatalogError("ex4.6 needs an integer q >= 1")
    spec = RingSpec(["x", "y", "z", "w"], characteristic, ["x*z", "x*w", "y*z", "y*w"], 2)
    zw = [f"z^{q - i}*w^{i}" for i in range(q + 1)]
    I = spec.ideal(["x^4", "x^3*y", "x*y^3", "y^4"] + zw)
    Q = spec.ideal([f"x^4-z^{q}", f"y^4-w^{q}"])
    exp = {
        "e0": Expected(q * q + 16, "e_0(I) = q^2 + 16"),
        "e1": Expected((q * q - q + 12) // 2, "e_1(I) = (q^2 - q + 12)/2"),
        "lambda_RI": Expected((q * q + q + 20) // 2, "lambda(R/I) = (q^2 + q + 20)/2"),
        "e1Q": Expected(-1, "e_1(Q) = -1"),
        "rQ": Expected(2, "r_Q(I) = 2"),
        "sQ": Expected(1, "s_Q(I) = 1"),
    }
    # Buchsbaum of depth one; I = IS for the S2-fication S (asserted, not computed)
    flags = {"cm": False, "gorenstein": False, "buchsbaum": True, "I_equals_IS": True}
    return Instance("ex4.6", spec, I, Q, exp, {"q": q}, flags)


_CATALOG = {
    "ex2.7": (_ex27, ()),
    "ex3.2.1": (_ex32(1), ()),
    "ex3.2.2": (_ex32(2), ()),
    "ex3.2.3": (_ex32(3), ()),
    "ex3.2.4": (_ex32(4), ()),
    "ex4.6": (_ex46, ("q",)),
}


def catalog_ids() -> List[str]:
    return list(_CATALOG)


def catalog_params(id: str) -> Tuple[str, ...]:
    if id not in _CATALOG:
        raise CatalogError(f"unknown catalog id {id!r}")
    return _CATALOG[id][1]


def catalog(id: str, params: Optional[Dict[str, int]] = None, characteristic: int = 32003) -> Instance:
    if id not in _CATALOG:
        raise CatalogError(f"unknown catalog id {id!r}; known: {', '.join(_CATALOG)}")
    build, names = _CATALOG[id]
    params = dict(params or {})
    unknown = set(params) - set(names)
    if unknown:
        raise CatalogError(f"{id} takes no parameter(s) {', '.join(sorted(unknown))}")
    try:
        return build(params, characteristic)
    except LengthError as exc:
        raise CatalogError(str(exc)) from exc
