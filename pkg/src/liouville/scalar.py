"""Exact real scalars in a computable subfield K of R.

Three kinds of field are supported:

* ``rational``        -- Q itself;
* ``multi-quadratic`` -- Q(sqrt d_1, ..., sqrt d_m), stored on the basis of
  subset products of the square roots;
* ``transcendental``  -- Q(t_1, ..., t_k), rational functions in symbols the
  user asserts to be algebraically independent over Q.  Each symbol carries
  a decimal enclosure used for sign determination.

Every representation is canonical, so equality of values is equality of
representations and ``is_zero`` is decidable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.fields import FracField

from .errors import (
    BadEnclosure,
    DependentRadicands,
    DivisionByZeroScalar,
    DuplicateSymbol,
    FieldError,
    FieldMismatch,
    InsufficientPrecision,
    NonSquarefreeRadicand,
    ScalarSyntaxError,
    UnknownToken,
)

RATIONAL = "rational"
MULTI_QUADRATIC = "multi-quadratic"
TRANSCENDENTAL = "transcendental"

SIGN_START_BITS = 64
SIGN_MAX_BITS = 4096
MAX_ENCLOSURE_WIDTH = Fraction(1, 10**30)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_SQRT = re.compile(r"sqrt([0-9]+)\Z")


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str = RATIONAL
    radicands: tuple[int, ...] = ()
    symbols: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "radicands", tuple(int(r) for r in self.radicands))
        object.__setattr__(self, "symbols", tuple((str(n), str(e)) for n, e in self.symbols))


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def __add__(self, other: Interval) -> Interval:
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: Interval) -> Interval:
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    def scale(self, q: Fraction) -> Interval:
        a, b = self.lo * q, self.hi * q
        return Interval(min(a, b), max(a, b))


def _is_squarefree(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _round_out(iv: Interval, bits: int) -> Interval:
    scale = 1 << bits
    lo = Fraction(math.floor(iv.lo * scale), scale)
    hi = Fraction(math.ceil(iv.hi * scale), scale)
    return Interval(lo, hi)


def parse_enclosure(text: str) -> Interval:
    """Parse ``"[lo, hi]"``, ``"x +- r"`` or a bare decimal.

    A bare decimal with k fractional digits is read as correctly rounded,
    i.e. the interval of radius 10^-k / 2 around it.
    """
    s = text.strip().replace("±", "+-")
    try:
        if s.startswith("[") and s.endswith("]"):
            lo, hi = (Fraction(p.strip()) for p in s[1:-1].split(","))
        elif "+-" in s:
            mid, rad = (Fraction(p.strip()) for p in s.split("+-"))
            if rad < 0:
                raise BadEnclosure(f"negative radius in {text!r}")
            lo, hi = mid - rad, mid + rad
        else:
            if not re.fullmatch(r"[+-]?[0-9]+(\.[0-9]*)?", s):
                raise BadEnclosure(f"not a decimal enclosure: {text!r}")
            digits = len(s.split(".")[1]) if "." in s else 0
            mid = Fraction(s)
            rad = Fraction(1, 2 * 10**digits)
            lo, hi = mid - rad, mid + rad
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, BadEnclosure):
            raise
        raise BadEnclosure(f"cannot parse enclosure {text!r}") from exc
    if lo > hi:
        raise BadEnclosure(f"empty enclosure {text!r}")
    if hi - lo > MAX_ENCLOSURE_WIDTH:
        raise BadEnclosure(f"enclosure {text!r} is wider than 1e-30")
    return Interval(lo, hi)


class Field:
    """Handle for a scalar field; construct with :func:`make_field`."""

    kind: str

    def __init__(self, desc: FieldDescriptor):
        self.desc = desc

    def __eq__(self, other):
        return isinstance(other, Field) and self.desc == other.desc

    def __hash__(self):
        return hash(self.desc)

    def __repr__(self):
        return f"{type(self).__name__}({self.desc!r})"

    # scalar constructors

    def scalar(self, value) -> Scalar:
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field} vs {self}")
            return value
        if isinstance(value, str):
            return parse_scalar(value, self)
        return Scalar(self, self._from_rational(Fraction(value)))

    def zero(self) -> Scalar:
        return self.scalar(0)

    def one(self) -> Scalar:
        return self.scalar(1)

    def vector(self, entries: Iterable) -> tuple[Scalar, ...]:
        return tuple(self.scalar(e) for e in entries)

    @property
    def assertions(self) -> list[str]:
        return []

    # raw-data hooks implemented per kind

    def _from_rational(self, q: Fraction): ...
    def _add(self, a, b): ...
    def _neg(self, a): ...
    def _mul(self, a, b): ...
    def _inv(self, a): ...
    def _is_zero(self, a) -> bool: ...
    def _rational(self, a) -> Fraction | None: ...
    def _enclose(self, a, bits: int) -> Interval: ...
    def _format(self, a) -> str: ...
    def _atom(self, token: str): ...


class RationalField(Field):
    kind = RATIONAL

    def _from_rational(self, q):
        return q

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        return 1 / a

    def _is_zero(self, a):
        return a == 0

    def _rational(self, a):
        return a

    def _enclose(self, a, bits):
        if a.denominator & (a.denominator - 1) == 0:
            return Interval(a, a)
        return _round_out(Interval(a, a), bits)

    def _format(self, a):
        return _fmt_q(a)

    def _atom(self, token):
        m = _SQRT.match(token)
        if m and int(m.group(1)) == 1:
            return Fraction(1)
        raise UnknownToken(f"unknown token {token!r} in the rational field")


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class MultiQuadraticField(Field):
    """Q(sqrt d_1, ..., sqrt d_m) on the basis {prod_{i in S} sqrt d_i}.

    Basis element S is indexed by the bitmask of S; its square is D_S, the
    product of the radicands in S.
    """

    kind = MULTI_QUADRATIC

    def __init__(self, desc):
        super().__init__(desc)
        rads = desc.radicands
        if not rads:
            raise FieldError("a multi-quadratic field needs at least one radicand")
        for r in rads:
            if not _is_squarefree(r):
                raise NonSquarefreeRadicand(f"radicand {r} is not a squarefree integer >= 2")
        if len(set(rads)) != len(rads):
            raise NonSquarefreeRadicand(f"radicands {rads} are not distinct")
        self.radicands = rads
        self.m = len(rads)
        self.size = 1 << self.m
        self.products = [math.prod(rads[i] for i in range(self.m) if S >> i & 1) for S in range(self.size)]
        for S in range(1, self.size):
            if _is_square(self.products[S]):
                raise DependentRadicands(f"product {self.products[S]} of radicands is a square")
        # product of basis elements S and T is factor * basis[S ^ T]
        self.table = [[(math.prod(rads[i] for i in range(self.m) if (S & T) >> i & 1), S ^ T)
                       for T in range(self.size)] for S in range(self.size)]
        self._mask_of = {p: S for S, p in enumerate(self.products)}

    @property
    def basis_labels(self) -> list[str]:
        return ["1" if S == 0 else f"sqrt{self.products[S]}" for S in range(self.size)]

    def _from_rational(self, q):
        return (q,) + (Fraction(0),) * (self.size - 1)

    def _add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(-x for x in a)

    def _mul(self, a, b):
        return self._mul_n(a, b, len(a))

    def _mul_n(self, a, b, n):
        out = [Fraction(0)] * n
        for S in range(n):
            x = a[S]
            if not x:
                continue
            row = self.table[S]
            for T in range(n):
                y = b[T]
                if y:
                    f, U = row[T]
                    out[U] += f * x * y
        return tuple(out)

    def _inv(self, a):
        return self._inv_n(a, len(a))

    def _inv_n(self, a, n):
        if n == 1:
            return (1 / a[0],)
        half = n // 2
        d = self.radicands[half.bit_length() - 1]
        a0, a1 = a[:half], a[half:]
        norm = tuple(x - d * y for x, y in zip(self._mul_n(a0, a0, half), self._mul_n(a1, a1, half)))
        ninv = self._inv_n(norm, half)
        return self._mul_n(a0, ninv, half) + tuple(-x for x in self._mul_n(a1, ninv, half))

    def _is_zero(self, a):
        return not any(a)

    def _rational(self, a):
        return a[0] if not any(a[1:]) else None

    def _enclose(self, a, bits):
        weight = sum(abs(x) for x in a[1:])
        extra = (weight.numerator // weight.denominator + 1).bit_length()
        p = bits + extra + 2
        scale = 1 << p
        iv = Interval(a[0], a[0])
        for S in range(1, self.size):
            q = a[S]
            if q:
                r = math.isqrt(self.products[S] * scale * scale)
                iv = iv + Interval(Fraction(r, scale), Fraction(r + 1, scale)).scale(q)
        return _round_out(iv, bits + 2)

    def _format(self, a):
        parts = []
        for S, q in enumerate(a):
            if not q:
                continue
            if S == 0:
                body, neg = _fmt_q(abs(q)), q < 0
            else:
                root = f"sqrt{self.products[S]}"
                body = root if abs(q) == 1 else f"{_fmt_q(abs(q))}*{root}"
                neg = q < 0
            parts.append((neg, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def _atom(self, token):
        m = _SQRT.match(token)
        if m:
            S = self._mask_of.get(int(m.group(1)))
            if S is not None:
                v = [Fraction(0)] * self.size
                v[S] = Fraction(1)
                return tuple(v)
        raise UnknownToken(f"unknown token {token!r} in Q({', '.join(map(str, self.radicands))})")


class TranscendentalField(Field):
    """Q(t_1, ..., t_k) backed by sympy's sparse rational-function field."""

    kind = TRANSCENDENTAL

    def __init__(self, desc):
        super().__init__(desc)
        names = [n for n, _ in desc.symbols]
        if not names:
            raise FieldError("a transcendental field needs at least one symbol")
        for n in names:
            if not _IDENT.match(n) or _SQRT.match(n):
                raise FieldError(f"bad symbol name {n!r}")
        if len(set(names)) != len(names):
            raise DuplicateSymbol(f"duplicate symbol in {names}")
        self.names = tuple(names)
        self.enclosures = tuple(parse_enclosure(e) for _, e in desc.symbols)
        self.K = FracField(self.names, QQ)
        self.gens = dict(zip(self.names, self.K.gens))

    @property
    def assertions(self):
        return [f"the symbols {{{', '.join(self.names)}}} are asserted algebraically independent over Q; "
                "zero tests and Q-linear independence conclusions are conditional on this assertion"]

    def _from_rational(self, q):
        return self.K(QQ(q.numerator, q.denominator))

    def _add(self, a, b):
        return a + b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        return 1 / a

    def _is_zero(self, a):
        return not a.numer

    def _rational(self, a):
        if a.numer.is_ground and a.denom.is_ground:
            return _frac(a.numer.LC) / _frac(a.denom.LC) if a.numer else Fraction(0)
        return None

    def _poly_interval(self, poly) -> Interval:
        total = Interval(Fraction(0), Fraction(0))
        for monom, coeff in poly.terms():
            term = Interval(Fraction(1), Fraction(1))
            for iv, e in zip(self.enclosures, monom):
                for _ in range(e):
                    term = term * iv
            total = total + term.scale(_frac(coeff))
        return total

    def _num_den(self, a):
        return self._poly_interval(a.numer), self._poly_interval(a.denom)

    def _enclose(self, a, bits):
        num, den = self._num_den(a)
        if not den.excludes_zero():
            raise InsufficientPrecision("denominator enclosure contains 0")
        inv = Interval(1 / den.hi, 1 / den.lo)
        iv = _round_out(num * inv, bits + 2)
        if iv.width > Fraction(1, 1 << bits):
            raise InsufficientPrecision(
                f"symbol enclosures cannot deliver {bits} bits of precision")
        return iv

    def _format(self, a):
        num = _fmt_poly(a.numer, self.names)
        if a.denom == 1:
            return num
        return f"({num})/({_fmt_poly(a.denom, self.names)})"

    def _atom(self, token):
        if token in self.gens:
            return self.gens[token]
        m = _SQRT.match(token)
        if m and int(m.group(1)) == 1:
            return self.K.one
        raise UnknownToken(f"unknown token {token!r} in Q({', '.join(self.names)})")

    def midpoint_value(self, a) -> float:
        mids = [(iv.lo + iv.hi) / 2 for iv in self.enclosures]

        def ev(poly):
            total = Fraction(0)
            for monom, coeff in poly.terms():
                total += _frac(coeff) * math.prod(m**e for m, e in zip(mids, monom))
            return total

        return float(ev(a.numer) / ev(a.denom))


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _fmt_poly(poly, names) -> str:
    if not poly:
        return "0"
    parts = []
    for monom, coeff in sorted(poly.terms(), reverse=True):
        q = _frac(coeff)
        factors = [n for n, e in zip(names, monom) for _ in range(e)]
        if not factors:
            body = _fmt_q(abs(q))
        elif abs(q) == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_q(abs(q))] + factors)
        parts.append((q < 0, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


_FIELD_KINDS = {
    RATIONAL: RationalField,
    MULTI_QUADRATIC: MultiQuadraticField,
    TRANSCENDENTAL: TranscendentalField,
}


@lru_cache(maxsize=None)
def make_field(desc: FieldDescriptor) -> Field:
    try:
        cls = _FIELD_KINDS[desc.kind]
    except KeyError:
        raise FieldError(f"unknown field kind {desc.kind!r}; mixed towers are not supported") from None
    if desc.kind != MULTI_QUADRATIC and desc.radicands:
        raise FieldError(f"radicands are only allowed in a multi-quadratic field, not {desc.kind}")
    if desc.kind != TRANSCENDENTAL and desc.symbols:
        raise FieldError(f"symbols are only allowed in a transcendental field, not {desc.kind}")
    return cls(desc)


QQ_FIELD = make_field(FieldDescriptor(RATIONAL))


class Scalar:
    """Immutable exact real number in a :class:`Field`."""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data):
        self.field = field
        self.data = data

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(self.field, self.field._from_rational(Fraction(other)))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._add(self.data, o.data))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.field, self.field._neg(self.data))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.field._mul(self.data, o.data))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if self.is_zero():
            raise DivisionByZeroScalar("division by the zero scalar")
        return Scalar(self.field, self.field._inv(self.data))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        out = self.field.one()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (Scalar, int, Fraction)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.field._is_zero(self.field._add(self.data, self.field._neg(o.data)))

    def __hash__(self):
        q = self.rational_content()
        if q is not None:
            return hash(q)
        return hash((self.field, str(self)))

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        return self.field._is_zero(self.data)

    def rational_content(self) -> Fraction | None:
        return self.field._rational(self.data)

    def enclosure(self, bits: int) -> Interval:
        if bits < 1:
            raise ValueError("precision must be at least one bit")
        return self.field._enclose(self.data, bits)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        q = self.rational_content()
        if q is not None:
            return 1 if q > 0 else -1
        if isinstance(self.field, TranscendentalField):
            num, den = self.field._num_den(self.data)
            if not (num.excludes_zero() and den.excludes_zero()):
                raise InsufficientPrecision(f"cannot separate {self} from 0 with the given enclosures")
            return (1 if num.lo > 0 else -1) * (1 if den.lo > 0 else -1)
        bits = SIGN_START_BITS
        while bits <= SIGN_MAX_BITS:
            iv = self.enclosure(bits)
            if iv.excludes_zero():
                return 1 if iv.lo > 0 else -1
            bits *= 2
        raise InsufficientPrecision(f"sign of {self} undecided at {SIGN_MAX_BITS} bits")

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        q = self.rational_content()
        if q is not None:
            return float(q)
        if isinstance(self.field, TranscendentalField):
            return self.field.midpoint_value(self.data)
        iv = self.enclosure(64)
        return float((iv.lo + iv.hi) / 2)

    def __str__(self):
        return self.field._format(self.data)

    def __repr__(self):
        return f"Scalar({str(self)!r})"


# functional spellings of the arithmetic

def add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def div(a: Scalar, b: Scalar) -> Scalar:
    return a / b


def neg(a: Scalar) -> Scalar:
    return -a


def is_zero(a: Scalar) -> bool:
    return a.is_zero()


def sign(a: Scalar) -> int:
    return a.sign()


def rational_content(a: Scalar) -> Fraction | None:
    return a.rational_content()


def enclosure(a: Scalar, bits: int) -> Interval:
    return a.enclosure(bits)


# vectors over K are plain tuples of Scalars

KVector = tuple  # tuple[Scalar, ...]


def dot(u: Sequence[Scalar], v: Sequence) -> Scalar:
    if len(u) != len(v):
        raise ValueError("length mismatch")
    out = u[0].field.zero() if u else QQ_FIELD.zero()
    for x, y in zip(u, v):
        out = out + x * y
    return out


def norm2(v: Sequence[Scalar]) -> Scalar:
    return dot(v, v)


def vscale(c, v: Sequence[Scalar]) -> KVector:
    return tuple(c * x for x in v)


def vadd(u: Sequence[Scalar], v: Sequence[Scalar]) -> KVector:
    return tuple(x + y for x, y in zip(u, v))


def vsub(u: Sequence[Scalar], v: Sequence[Scalar]) -> KVector:
    return tuple(x - y for x, y in zip(u, v))


def is_zero_vector(v: Sequence[Scalar]) -> bool:
    return all(x.is_zero() for x in v)


def to_floats(v: Sequence[Scalar]) -> list[float]:
    return [float(x) for x in v]


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:([0-9]+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("int", num))
        elif ident is not None:
            tokens.append(("ident", ident))
        elif op in "+-*/()":
            tokens.append(("op", op))
        else:
            raise ScalarSyntaxError(f"unexpected character {op!r} in {text!r}")
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, field: Field):
        self.text = text
        self.field = field
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, what: str):
        raise ScalarSyntaxError(f"{what} in scalar expression {self.text!r}")

    def parse(self) -> Scalar:
        if not self.tokens:
            self.fail("empty input")
        value = self.expr()
        if self.i != len(self.tokens):
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise DivisionByZeroScalar(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def factor(self) -> Scalar:
        kind, tok = self.take()
        if kind == "int":
            return self.field.scalar(int(tok))
        if kind == "ident":
            return Scalar(self.field, self.field._atom(tok))
        if (kind, tok) == ("op", "-"):
            return -self.factor()
        if (kind, tok) == ("op", "("):
            value = self.expr()
            if self.take() != ("op", ")"):
                self.fail("missing ')'")
            return value
        self.fail("unexpected end of input" if kind is None else f"unexpected {tok!r}")


def parse_scalar(text: str, field: Field) -> Scalar:
    """Parse a scalar expression.

    Grammar::

        expr   := term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := INT | 'sqrt' INT | SYMBOL | '(' expr ')' | '-' factor
    """
    if not isinstance(text, str):
        raise ScalarSyntaxError(f"scalar must be a string, got {type(text).__name__}")
    return _Parser(text, field).parse()
