"""Exact multivariate polynomials over a prime field or the rationals.

Monomials are exponent tuples. A :class:`PolyRing` fixes the variable names,
the coefficient characteristic and the active :class:`MonomialOrder`;
:class:`Polynomial` values are immutable and carry their ring.
"""
from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Sequence, Tuple, Union

DEFAULT_CHARACTERISTIC = 32003
# bits per exponent field in packed monomial keys; the top bit is a guard bit
FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]

LT, EQ, GT = -1, 0, 1


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RingMismatchError(PolyError):
    pass


class ExponentOverflowError(PolyError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialOrder:
    """A global monomial order.

    ``kind`` is ``"degrevlex"``, ``"lex"`` or ``"elimination"``; the
    elimination order with ``block = k`` compares the total degree in the
    first ``k`` variables first and breaks ties by degrevlex, so any monomial
    involving one of those variables beats every monomial free of them.
    """

    kind: str = "degrevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex", "elimination"):
            raise PolyError(f"unknown monomial order {self.kind!r}")
        if self.kind == "elimination" and self.block < 1:
            raise PolyError("elimination order needs a block size >= 1")
        if self.kind != "elimination" and self.block:
            raise PolyError("block size only applies to elimination orders")

    @property
    def name(self) -> str:
        if self.kind == "elimination":
            return f"elimination({self.block})"
        return self.kind

    def encoder(self, nvars: int) -> "KeyEncoder":
        return KeyEncoder(self, nvars)

    def key(self, m: Monomial):
        """Sort key: larger key means larger monomial."""
        return self.encoder(len(m)).encode(m)


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


def elimination(block: int) -> MonomialOrder:
    return MonomialOrder("elimination", block)


class KeyEncoder:
    """Linear integer encoding of monomials whose integer order is the
    monomial order.

    Because the encoding is linear in the exponent vector, the key of a
    product is the sum of the keys; the Groebner kernels rely on that.
    """

    def __init__(self, order: MonomialOrder, nvars: int):
        self.order = order
        self.nvars = nvars
        B = FIELD_BITS
        v = nvars
        if order.kind == "lex":
            self.weights = [1 << (B * (v - 1 - i)) for i in range(v)]
        else:
            # degrevlex via partial sums S_k = e_1 + ... + e_k, S_v on top
            w = [0] * v
            for k in range(1, v + 1):
                for i in range(k):
                    w[i] += 1 << (B * (k - 1))
            if order.kind == "elimination":
                top = 1 << (B * v)
                for i in range(min(order.block, v)):
                    w[i] += top
            self.weights = w
        self._mask = (1 << B) - 1

    def encode(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    def decode(self, key: int) -> Monomial:
        B, v, mask = FIELD_BITS, self.nvars, self._mask
        if self.order.kind == "lex":
            return tuple((key >> (B * (v - 1 - i))) & mask for i in range(v))
        sums = [(key >> (B * k)) & mask for k in range(v)]
        out = [sums[0]]
        for k in range(1, v):
            out.append(sums[k] - sums[k - 1])
        return tuple(out)


def compare_monomials(m1: Monomial, m2: Monomial, order: MonomialOrder = DEGREVLEX) -> int:
    """Return LT, EQ or GT."""
    if len(m1) != len(m2):
        raise PolyError("monomials of different lengths")
    enc = order.encoder(len(m1))
    k1, k2 = enc.encode(m1), enc.encode(m2)
    return (k1 > k2) - (k1 < k2)


def pack(m: Monomial) -> int:
    """Pack exponents into fields with guard bits (see :func:`divides_packed`)."""
    return sum(e << (FIELD_BITS * i) for i, e in enumerate(m))


def guard_mask(nvars: int) -> int:
    return sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(nvars))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(map(max, a, b))


# ---------------------------------------------------------------------------
# rings and coefficients
# ---------------------------------------------------------------------------

class PolyRing:
    """Polynomial ring k[x_1..x_v] with k = F_p (p odd prime) or Q (p = 0)."""

    def __init__(self, variables: Sequence[str], characteristic: int = DEFAULT_CHARACTERISTIC,
                 order: MonomialOrder = DEGREVLEX):
        variables = tuple(variables)
        if not variables:
            raise PolyError("at least one variable is required")
        for name in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise PolyError(f"bad variable name {name!r}")
        if len(set(variables)) != len(variables):
            raise PolyError("duplicate variable names")
        if characteristic != 0 and not (_is_prime(characteristic) and characteristic > 2):
            raise PolyError("characteristic must be 0 or an odd prime")
        self.variables = variables
        self.characteristic = characteristic
        self.order = order
        self.nvars = len(variables)
        self._encoder = order.encoder(self.nvars)
        self._index = {v: i for i, v in enumerate(variables)}

    # equality by value so that rings rebuilt from the same data interoperate
    def _ident(self):
        return (self.variables, self.characteristic, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        field = f"F_{self.characteristic}" if self.characteristic else "Q"
        return f"PolyRing({field}[{','.join(self.variables)}], {self.order.name})"

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        if order == self.order:
            return self
        return PolyRing(self.variables, self.characteristic, order)

    def with_variables(self, variables: Sequence[str]) -> "PolyRing":
        return PolyRing(variables, self.characteristic, self.order)

    # -- coefficients --
    def coerce(self, c) -> Coefficient:
        p = self.characteristic
        if p:
            if isinstance(c, Fraction):
                return (c.numerator * pow(c.denominator, -1, p)) % p
            return int(c) % p
        return Fraction(c)

    def inverse(self, c: Coefficient) -> Coefficient:
        if not c:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p:
            return pow(c, -1, p)
        return 1 / Fraction(c)

    def key(self, m: Monomial) -> int:
        return self._encoder.encode(m)

    # -- constructors --
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): c})

    def gen(self, name: str) -> "Polynomial":
        if name not in self._index:
            raise PolyError(f"unknown variable {name!r}")
        e = [0] * self.nvars
        e[self._index[name]] = 1
        return self.monomial(e)

    def gens(self) -> List["Polynomial"]:
        return [self.gen(v) for v in self.variables]

    def parse(self, text: str) -> "Polynomial":
        return parse_poly(text, self)


class Polynomial:
    """Immutable polynomial; ``terms`` lists (coefficient, monomial) pairs in
    strictly descending order for the ring's monomial order."""

    __slots__ = ("ring", "_d", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, data: Dict[Monomial, Coefficient], _clean: bool = False):
        self.ring = ring
        if not _clean:
            clean = {}
            for m, c in data.items():
                m = tuple(m)
                if len(m) != ring.nvars:
                    raise PolyError("monomial length does not match the ring")
                if any(e < 0 for e in m):
                    raise PolyError("negative exponent")
                if any(e > MAX_EXPONENT for e in m):
                    raise ExponentOverflowError(f"exponent exceeds {MAX_EXPONENT}")
                c = ring.coerce(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
            p = ring.characteristic
            data = {m: (c % p if p else c) for m, c in clean.items()}
            data = {m: c for m, c in data.items() if c}
        self._d = data
        self._sorted = None
        self._hash = None

    # -- views --
    @property
    def terms(self) -> List[Tuple[Coefficient, Monomial]]:
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(((c, m) for m, c in self._d.items()),
                                  key=lambda t: key(t[1]), reverse=True)
        return self._sorted

    def as_dict(self) -> Dict[Monomial, Coefficient]:
        return dict(self._d)

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def is_zero(self) -> bool:
        return not self._d

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._d)

    def coefficient(self, m: Monomial) -> Coefficient:
        return self._d.get(tuple(m), 0)

    def leading_monomial(self) -> Monomial:
        return self.terms[0][1]

    def leading_coefficient(self) -> Coefficient:
        return self.terms[0][0]

    def total_degree(self) -> int:
        """Largest total degree of a term; -1 for the zero polynomial."""
        return max((sum(m) for m in self._d), default=-1)

    def order(self) -> int:
        """Smallest total degree of a term (the m-adic order); -1 for zero."""
        return min((sum(m) for m in self._d), default=-1)

    def monic(self) -> "Polynomial":
        if not self._d:
            return self
        return self * self.ring.inverse(self.leading_coefficient())

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        if ring.nvars != self.ring.nvars or ring.characteristic != self.ring.characteristic:
            raise RingMismatchError("incompatible rings")
        return Polynomial(ring, self._d, _clean=True)

    # -- arithmetic --
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring!r} vs {other.ring!r}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def _combine(self, other: "Polynomial", sign: int) -> "Polynomial":
        p = self.ring.characteristic
        out = dict(self._d)
        for m, c in other._d.items():
            v = out.get(m, 0) + (c if sign > 0 else -c)
            if p:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _clean=True)

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        return self.ring.zero()._combine(self, -1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.ring.coerce(other)
            if not c:
                return self.ring.zero()
            p = self.ring.characteristic
            return Polynomial(self.ring, {m: (a * c % p if p else a * c) for m, a in self._d.items()},
                              _clean=True)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.characteristic
        out: Dict[Monomial, Coefficient] = {}
        add = operator.add
        for m1, c1 in self._d.items():
            for m2, c2 in other._d.items():
                m = tuple(map(add, m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        if p:
            out = {m: c % p for m, c in out.items()}
        out = {m: c for m, c in out.items() if c}
        if out and max(max(m) for m in out) > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent exceeds {MAX_EXPONENT}")
        return Polynomial(self.ring, out, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return poly_power(self, n)

    def mul_monomial(self, m: Monomial, c=1) -> "Polynomial":
        c = self.ring.coerce(c)
        p = self.ring.characteristic
        add = operator.add
        out = {tuple(map(add, k, m)): (a * c % p if p else a * c) for k, a in self._d.items()}
        return Polynomial(self.ring, {k: v for k, v in out.items() if v}, _clean=True)

    def divide(self, g: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        """Division by a single polynomial: returns (quotient, remainder)."""
        self._check(g)
        if not g:
            raise ZeroDivisionError("division by the zero polynomial")
        lm, lc = g.leading_monomial(), g.leading_coefficient()
        inv = self.ring.inverse(lc)
        q: Dict[Monomial, Coefficient] = {}
        r = self.ring.zero()
        f = self
        while f:
            c, m = f.terms[0]
            if divides(lm, m):
                t = tuple(a - b for a, b in zip(m, lm))
                coef = self.ring.coerce(c * inv)
                q[t] = coef
                f = f - g.mul_monomial(t, coef)
            else:
                lead = Polynomial(self.ring, {m: c}, _clean=True)
                r = r + lead
                f = f - lead
        return Polynomial(self.ring, q), r

    def exact_div(self, g: "Polynomial") -> "Polynomial":
        q, r = self.divide(g)
        if r:
            raise PolyError("inexact division")
        return q

    def evaluate(self, point: Sequence) -> Coefficient:
        p = self.ring.characteristic
        total = 0
        for m, c in self._d.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * x ** e
            total += t
        return total % p if p else total

    # -- comparison / hashing --
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._d.items())))
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    ops: Dict[str, Callable] = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}
    if op not in ops:
        raise PolyError(f"unknown operation {op!r}")
    f._check(g)
    return ops[op](f, g)


def poly_power(f: Polynomial, n: int) -> Polynomial:
    if n < 0:
        raise PolyError("negative exponent")
    result = f.ring.one()
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


# ---------------------------------------------------------------------------
# printing and parsing
# ---------------------------------------------------------------------------

def _format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    """Canonical text: descending terms, F_p coefficients as residues in [0, p)."""
    if not f:
        return "0"
    names = f.ring.variables
    pieces = []
    for c, m in f.terms:
        mono = _format_monomial(m, names)
        if isinstance(c, Fraction):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            num = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        else:
            sign, num = "+", str(c)
        if not mono:
            body = num
        elif num == "1":
            body = mono
        else:
            body = f"{num}*{mono}"
        pieces.append((sign, body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None:
            break
        start = mt.start(mt.lastindex) if mt.lastindex else pos
        if mt.group(1) is not None:
            tokens.append(("int", int(mt.group(1)), start))
        elif mt.group(2) is not None:
            tokens.append(("name", mt.group(2), start))
        elif mt.group(3) is not None:
            ch = mt.group(3)
            if ch not in "+-*^()/":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = mt.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    # expr := term (('+'|'-') term)*
    # term := factor ('*' factor)*
    # factor := ('-'|'+') factor | power
    # power := atom ('^' INT)?
    # atom := INT ('/' INT)? | NAME | '(' expr ')'
    def __init__(self, text: str, ring: PolyRing):
        self.ring = ring
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, ch):
        tok = self.take()
        if tok[0] != "op" or tok[1] != ch:
            raise ParseError(f"expected {ch!r}", tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        f = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return f

    def expr(self):
        f = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self):
        f = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            f = f * self.factor()
        return f

    def factor(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            f = self.factor()
            return -f if tok[1] == "-" else f
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise ParseError("exponent must be a non-negative integer", tok[2])
            if tok[1] > MAX_EXPONENT:
                raise ParseError(f"exponent overflow (max {MAX_EXPONENT})", tok[2])
            try:
                return poly_power(base, tok[1])
            except ExponentOverflowError as exc:
                raise ParseError(str(exc), tok[2]) from None
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int" or den[1] == 0:
                    raise ParseError("bad rational literal", den[2])
                try:
                    return self.ring.constant(Fraction(val, den[1]))
                except (ZeroDivisionError, ValueError):
                    raise ParseError("denominator vanishes in the coefficient field", den[2]) from None
            return self.ring.constant(val)
        if kind == "name":
            if val not in self.ring._index:
                raise ParseError(f"unknown identifier {val!r}", pos)
            return self.ring.gen(val)
        if kind == "op" and val == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, ring) -> Polynomial:
    """Parse ``text`` in ``ring`` (a :class:`PolyRing` or anything with a
    ``.ring`` attribute)."""
    if not isinstance(ring, PolyRing):
        ring = ring.ring
    return _Parser(text, ring).parse()


def parse_list(text: str, ring) -> List[Polynomial]:
    """Comma separated polynomials; an empty string gives an empty list."""
    text = text.strip()
    if not text:
        return []
    return [parse_poly(part, ring) for part in text.split(",")]


def polys_in(ring: PolyRing, items: Iterable) -> List[Polynomial]:
    out = []
    for it in items:
        out.append(parse_poly(it, ring) if isinstance(it, str) else it)
    return out
