"""Laurent polynomials in r = q^(1/2) with rational coefficients, and coefficient rings.

Everything symbolic in the package bottoms out in :class:`QScalar`.  Elements of the
quantum algebras carry their coefficients in one of three rings:

* :data:`SYMBOLIC` -- coefficients are ``QScalar`` (q stays a formal parameter),
* :class:`ExactRing` -- q = r**2 for a rational r, coefficients are ``Fraction``,
* :class:`FloatRing` -- floating point r, coefficients are ``float``/``complex``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


class DomainError(ValueError):
    """Raised when r (or q) lies outside the open interval (0, 1)."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class QScalar:
    """Immutable Laurent polynomial sum_k c_k r^k, r = q^(1/2), c_k rational."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                clean[int(e)] = c
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c: Number) -> "QScalar":
        return cls({0: c})

    @classmethod
    def rpow(cls, k: int, c: Number = 1) -> "QScalar":
        """c * r^k, i.e. c * q^(k/2)."""
        return cls({k: c})

    @classmethod
    def qpow(cls, e: Number, c: Number = 1) -> "QScalar":
        """c * q^e for integer or half-integer e."""
        k = Fraction(e) * 2
        if k.denominator != 1:
            raise ValueError(f"q-exponent {e} is not a half-integer")
        return cls({int(k): c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def constant(self) -> Fraction:
        return self._terms.get(0, Fraction(0))

    def degree_range(self) -> tuple[int, int]:
        if not self._terms:
            return (0, 0)
        return min(self._terms), max(self._terms)

    # ring structure
    @staticmethod
    def _lift(other) -> "QScalar":
        if isinstance(other, QScalar):
            return other
        return QScalar.const(_as_fraction(other))

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return QScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return QScalar({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return QScalar(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._terms) != 1:
                raise ZeroDivisionError("only monomials are invertible in the Laurent ring")
            (e, c), = self._terms.items()
            return QScalar({e * n: c ** n})
        out = QScalar.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, QScalar):
            return self.exact_div(other)
        try:
            d = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return QScalar({e: c / d for e, c in self._terms.items()})

    def exact_div(self, other: "QScalar") -> "QScalar":
        """Quotient in Q[r, 1/r]; raises ArithmeticError if the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero QScalar")
        if self.is_zero():
            return QScalar()
        lo_a, hi_a = self.degree_range()
        lo_b, hi_b = other.degree_range()
        # plain polynomials A(r), B(r) with nonzero constant terms
        num = [self._terms.get(lo_a + i, Fraction(0)) for i in range(hi_a - lo_a + 1)]
        den = [other._terms.get(lo_b + i, Fraction(0)) for i in range(hi_b - lo_b + 1)]
        if len(den) > len(num):
            raise ArithmeticError("inexact Laurent division")
        quot = [Fraction(0)] * (len(num) - len(den) + 1)
        rem = list(num)
        lead = den[-1]
        for s in range(len(quot) - 1, -1, -1):
            coeff = rem[s + len(den) - 1] / lead
            quot[s] = coeff
            if coeff:
                for t, d in enumerate(den):
                    rem[s + t] -= coeff * d
        if any(rem):
            raise ArithmeticError("inexact Laurent division")
        return QScalar({lo_a - lo_b + i: c for i, c in enumerate(quot)})

    def conjugate(self) -> "QScalar":
        # q is real and the coefficients are rational
        return self

    def __eq__(self, other):
        if isinstance(other, QScalar):
            return self._terms == other._terms
        try:
            return self._terms == QScalar.const(_as_fraction(other))._terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # evaluation
    def evaluate(self, r, exact: bool | None = None):
        """Substitute r = q^(1/2).

        With a rational ``r`` the result is an exact ``Fraction`` unless ``exact`` is
        False; a float ``r`` always gives a float.
        """
        _check_r(r)
        if exact is None:
            exact = isinstance(r, (int, Fraction))
        if exact:
            rr = _as_fraction(r)
            return sum((c * rr ** e for e, c in self._terms.items()), Fraction(0))
        rf = float(r)
        return math.fsum(float(c) * rf ** e for e, c in self._terms.items())

    # text
    def __str__(self):
        return format_qscalar(self)

    def __repr__(self):
        return f"QScalar({format_qscalar(self)!r})"


def _check_r(r) -> None:
    if not (0 < r < 1):
        raise DomainError(f"r = q^(1/2) must lie in (0, 1), got {r}")


def qint(s: int) -> QScalar:
    """The q-number [s] = (q^-s - q^s)/(q^-1 - q) = q^(1-s) + q^(3-s) + ... + q^(s-1)."""
    if s < 0:
        raise ValueError("q-number index must be nonnegative")
    return QScalar({2 * (s - 1 - 2 * t): 1 for t in range(s)})


@dataclass(frozen=True)
class NumericValue:
    value: complex | float | Fraction
    provenance: str  # "exact-evaluated" | "floating-computed"

    def __float__(self):
        return float(self.value)


def evaluate(x: QScalar, r, exact: bool | None = None) -> NumericValue:
    v = x.evaluate(r, exact)
    prov = "exact-evaluated" if isinstance(v, Fraction) else "floating-computed"
    return NumericValue(v, prov)


def _format_exponent(k: int) -> str:
    # k is the r-exponent; q-exponent is k/2
    e = Fraction(k, 2)
    if e == 1:
        return "q"
    if e.denominator == 1 and e > 0:
        return f"q^{e}"
    return f"q^({e})"


def format_qscalar(x: QScalar) -> str:
    if x.is_zero():
        return "0"
    parts = []
    for k, c in sorted(x._terms.items(), key=lambda t: t[0]):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        elif a == 1:
            body = _format_exponent(k)
        else:
            body = f"{a}*{_format_exponent(k)}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_qscalar(text: str) -> QScalar:
    from .parsing import parse_expression

    val = parse_expression(text, {})
    if isinstance(val, QScalar):
        return val
    return QScalar.const(val)


# ---------------------------------------------------------------------------
# coefficient rings


class SymbolicRing:
    kind = "symbolic"
    r = None

    def embed(self, x: QScalar) -> QScalar:
        return x

    def coerce(self, x) -> QScalar:
        if isinstance(x, QScalar):
            return x
        return QScalar.const(_as_fraction(x))

    @property
    def zero(self):
        return QScalar()

    @property
    def one(self):
        return QScalar.const(1)

    def is_zero(self, c) -> bool:
        return c.is_zero()

    def fmt(self, c: QScalar) -> str:
        return format_qscalar(c)

    def q_value(self):
        raise TypeError("the symbolic ring has no numeric value of q; specialize first")

    def to_complex(self, c) -> complex:
        raise TypeError("symbolic coefficients have no numeric value; specialize first")

    def describe(self) -> dict:
        return {"mode": "symbolic"}

    def __eq__(self, other):
        return isinstance(other, SymbolicRing)

    def __hash__(self):
        return hash("symbolic")

    def __repr__(self):
        return "SYMBOLIC"


SYMBOLIC = SymbolicRing()


@dataclass(frozen=True)
class ExactRing:
    """q = r**2 with rational r; all arithmetic in Fractions."""

    r: Fraction
    kind: str = field(default="exact", init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", _as_fraction(self.r))
        _check_r(self.r)

    def embed(self, x: QScalar) -> Fraction:
        return x.evaluate(self.r, exact=True)

    def coerce(self, x) -> Fraction:
        if isinstance(x, QScalar):
            return self.embed(x)
        return _as_fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def is_zero(self, c) -> bool:
        return c == 0

    def fmt(self, c) -> str:
        return str(c)

    def q_value(self) -> Fraction:
        return self.r * self.r

    def to_complex(self, c) -> complex:
        return complex(c)

    def numeric(self) -> "FloatRing":
        return FloatRing(float(self.r))

    def describe(self) -> dict:
        return {"mode": "exact", "r": str(self.r), "q": str(self.q_value())}


@dataclass(frozen=True)
class FloatRing:
    """Floating point specialization; coefficients may be complex."""

    r: float
    kind: str = field(default="float", init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        _check_r(self.r)

    @classmethod
    def from_q(cls, q: float) -> "FloatRing":
        if not (0 < q < 1):
            raise DomainError(f"q must lie in (0, 1), got {q}")
        return cls(math.sqrt(q))

    def embed(self, x: QScalar) -> float:
        return x.evaluate(self.r, exact=False)

    def coerce(self, x):
        if isinstance(x, QScalar):
            return self.embed(x)
        if isinstance(x, complex):
            return x
        return float(x)

    @property
    def zero(self):
        return 0.0

    @property
    def one(self):
        return 1.0

    def is_zero(self, c) -> bool:
        return c == 0

    def fmt(self, c) -> str:
        if isinstance(c, complex):
            if c.imag == 0:
                c = c.real
            else:
                return f"({c.real:.12g}{c.imag:+.12g}j)"
        return f"{c:.12g}"

    def q_value(self) -> float:
        return self.r * self.r

    def to_complex(self, c) -> complex:
        return complex(c)

    def numeric(self) -> "FloatRing":
        return self

    def describe(self) -> dict:
        return {"mode": "float", "r": self.r, "q": self.q_value()}


Ring = Union[SymbolicRing, ExactRing, FloatRing]


def ring_for(q=None, r=None) -> Ring:
    """Pick a ring from user input: rational r gives exact mode, float q float mode."""
    if q is not None and r is not None:
        raise ValueError("give q or r, not both")
    if r is not None:
        if isinstance(r, float):
            return FloatRing(r)
        return ExactRing(Fraction(r))
    if q is not None:
        return FloatRing.from_q(float(q))
    return SYMBOLIC


def integral_bound(q: float) -> float:
    """Upper bound 2 sqrt(1-q^2) / (1-q)^2 on the norm of the quantum integral."""
    if not (0 < q < 1):
        raise DomainError(f"q must lie in (0, 1), got {q}")
    return 2.0 * math.sqrt(1.0 - q * q) / (1.0 - q) ** 2


def sum_scalars(xs: Iterable[QScalar]) -> QScalar:
    out = QScalar()
    for x in xs:
        out = out + x
    return out
