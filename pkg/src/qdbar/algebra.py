"""The coordinate algebra O(SU_q(2)) in its normal-ordered monomial basis.

Basis monomials are ``a^i c^j cs^k`` (i >= 0) and ``as^i c^j cs^k`` (i >= 1), where
``as``/``cs`` denote a*/c*.  Products are brought to normal form with

    c a  = q^-1 a c      cs a  = q^-1 a cs     cs c = c cs
    c as = q as c        cs as = q as cs
    a as = 1 - q^2 c cs  as a  = 1 - c cs

Structure constants (products, actions, star, antipode of monomials) are computed
once with exact Laurent coefficients and cached; each coefficient ring then embeds
them on demand.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .scalars import SYMBOLIC, ExactRing, FloatRing, QScalar, Ring

GENERATORS = ("a", "as", "c", "cs")
_STAR_GEN = {"a": "as", "as": "a", "c": "cs", "cs": "c"}
_L_GRADE = {"a": -1, "as": 1, "c": -1, "cs": 1}
_M_GRADE = {"a": -1, "as": 1, "c": 1, "cs": -1}


class Mono(NamedTuple):
    """Normal monomial: (a or as)^i c^j cs^k; ``star`` selects the as-family (then i >= 1)."""

    star: bool
    i: int
    j: int
    k: int

    @property
    def length(self) -> int:
        return self.i + self.j + self.k

    @property
    def grade(self) -> int:
        """U(1) grade n with K|>x = q^(n/2) x."""
        return (self.i if self.star else -self.i) - self.j + self.k

    @property
    def mgrade(self) -> int:
        """Grade for the other U(1) action: d_K(x) = q^(-n/2) x."""
        return (self.i if self.star else -self.i) + self.j - self.k

    def word(self) -> list[str]:
        return ["as" if self.star else "a"] * self.i + ["c"] * self.j + ["cs"] * self.k

    def is_unit(self) -> bool:
        return self.i == 0 and self.j == 0 and self.k == 0

    def __str__(self):
        parts = []
        for name, e in (("as" if self.star else "a", self.i), ("c", self.j), ("cs", self.k)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


UNIT = Mono(False, 0, 0, 0)
GEN_MONO = {
    "a": Mono(False, 1, 0, 0),
    "as": Mono(True, 1, 0, 0),
    "c": Mono(False, 0, 1, 0),
    "cs": Mono(False, 0, 0, 1),
}


def mono(star: bool, i: int, j: int, k: int) -> Mono:
    if star and i == 0:
        star = False
    return Mono(star, i, j, k)


def _from_counts(na: int, nas: int, nc: int, ncs: int) -> Mono:
    assert not (na and nas)
    return mono(nas > 0, nas if nas else na, nc, ncs)


def _prefix_suffix(m: Mono, p: int) -> tuple[Mono, str, Mono]:
    """Split the normal word of m as prefix * letter * suffix with letter at position p."""
    w = m.word()
    pre, letter, suf = w[:p], w[p], w[p + 1:]

    def counts(ws):
        return _from_counts(ws.count("a"), ws.count("as"), ws.count("c"), ws.count("cs"))

    return counts(pre), letter, counts(suf)


def monomials(max_length: int, grade: int | None = None) -> list[Mono]:
    """All normal monomials of word length <= max_length (optionally of one grade)."""
    out = []
    for length in range(max_length + 1):
        for i in range(length + 1):
            for j in range(length - i + 1):
                k = length - i - j
                for star in ((False, True) if i > 0 else (False,)):
                    m = Mono(star, i, j, k)
                    if grade is None or m.grade == grade:
                        out.append(m)
    return out


# ---------------------------------------------------------------------------
# structure constants over Laurent polynomials

Terms = tuple  # tuple[tuple[Mono, QScalar], ...]


def _r(k: int, c=1) -> QScalar:
    return QScalar.rpow(k, c)


def _collect(pairs: Iterable[tuple[Mono, QScalar]]) -> Terms:
    acc: dict[Mono, QScalar] = {}
    for m, c in pairs:
        acc[m] = acc.get(m, QScalar()) + c
    return tuple((m, c) for m, c in acc.items() if not c.is_zero())


@lru_cache(maxsize=None)
def _mono_gen(m: Mono, g: str) -> Terms:
    """Normal form of m * g for a single generator g."""
    star, i, j, k = m
    if g == "cs":
        return ((Mono(star, i, j, k + 1), _r(0)),)
    if g == "c":
        return ((Mono(star, i, j + 1, k), _r(0)),)
    jk = j + k
    if not star:
        if g == "a":
            return ((Mono(False, i + 1, j, k), _r(-2 * jk)),)
        # g == "as": c^j cs^k as = q^(j+k) as c^j cs^k, then a as = 1 - q^2 c cs
        if i == 0:
            return ((Mono(True, 1, j, k), _r(2 * jk)),)
        return _collect([(Mono(False, i - 1, j, k), _r(2 * jk)),
                         (Mono(False, i - 1, j + 1, k + 1), _r(2 * jk + 4, -1))])
    if g == "as":
        return ((Mono(True, i + 1, j, k), _r(2 * jk)),)
    # g == "a": c^j cs^k a = q^-(j+k) a c^j cs^k, then as a = 1 - c cs
    return _collect([(mono(True, i - 1, j, k), _r(-2 * jk)),
                     (mono(True, i - 1, j + 1, k + 1), _r(-2 * jk, -1))])


def _times_word(terms: Terms, word: Iterable[str]) -> Terms:
    cur = dict(terms)
    for g in word:
        nxt: dict[Mono, QScalar] = {}
        for m, c in cur.items():
            for m2, c2 in _mono_gen(m, g):
                nxt[m2] = nxt.get(m2, QScalar()) + c * c2
        cur = {m: c for m, c in nxt.items() if not c.is_zero()}
    return tuple(cur.items())


@lru_cache(maxsize=None)
def _mono_mono(m1: Mono, m2: Mono) -> Terms:
    return _times_word(((m1, _r(0)),), m2.word())


def _word_product(word: list[str]) -> Terms:
    return _times_word(((UNIT, _r(0)),), word)


@lru_cache(maxsize=None)
def _star_mono(m: Mono) -> Terms:
    return _word_product([_STAR_GEN[g] for g in reversed(m.word())])


_ANTIPODE_GEN = {"a": ("as", 0, 1), "as": ("a", 0, 1), "c": ("c", 2, -1), "cs": ("cs", -2, -1)}


@lru_cache(maxsize=None)
def _antipode_mono(m: Mono) -> Terms:
    scale = _r(0)
    word = []
    for g in reversed(m.word()):
        g2, k, sign = _ANTIPODE_GEN[g]
        scale = scale * _r(k, sign)
        word.append(g2)
    return tuple((mm, scale * c) for mm, c in _word_product(word))


# base cases of the derivation-like actions on single generators
_BASE = {
    # left action |>
    "E": {"a": ((GEN_MONO["cs"], _r(2, -1)),), "c": ((GEN_MONO["as"], _r(0)),)},
    "F": {"as": ((GEN_MONO["c"], _r(0)),), "cs": ((GEN_MONO["a"], _r(-2, -1)),)},
    # the partial action d_g
    "dE": {"as": ((GEN_MONO["cs"], _r(0)),), "c": ((GEN_MONO["a"], _r(-2, -1)),)},
    "dF": {"a": ((GEN_MONO["c"], _r(2, -1)),), "cs": ((GEN_MONO["as"], _r(0)),)},
    # right action <|, from <h, x_(1)> x_(2) with Delta(U) = U (x) U
    "rE": {"as": ((GEN_MONO["cs"], _r(2, -1)),), "c": ((GEN_MONO["a"], _r(0)),)},
    "rF": {"a": ((GEN_MONO["c"], _r(0)),), "cs": ((GEN_MONO["as"], _r(-2, -1)),)},
}


@lru_cache(maxsize=None)
def _act_mono(op: str, m: Mono) -> Terms:
    """Twisted derivation: sum over letters of tw(prefix) * base(letter) * tw'(suffix).

    Left action:  E|>(xy) = (E|>x)(K|>y) + (K^-1|>x)(E|>y).
    d_g and <|:   (xy)<|E = (x<|E)(y<|K) + (x<|K^-1)(y<|E), d_E(xy) = d_E(x)d_K^-1(y) + d_K(x)d_E(y).
    """
    base = _BASE[op]
    left = op in ("E", "F")
    out: list[tuple[Mono, QScalar]] = []
    for p in range(m.length):
        pre, letter, suf = _prefix_suffix(m, p)
        if letter not in base:
            continue
        if left:
            tw = _r(-pre.grade + suf.grade)
        else:
            tw = _r(-pre.mgrade + suf.mgrade)
        for bm, bc in base[letter]:
            for pm, pc in _mono_mono(pre, bm):
                for sm, sc in _mono_mono(pm, suf):
                    out.append((sm, tw * bc * pc * sc))
    return _collect(out)


# ---------------------------------------------------------------------------
# embedding of structure constants into a coefficient ring

_EMBED: dict = defaultdict(dict)


def _embedded(ring: Ring, key, compute) -> tuple:
    cache = _EMBED[ring]
    hit = cache.get(key)
    if hit is None:
        hit = tuple((m, ring.embed(c)) for m, c in compute())
        cache[key] = hit
    return hit


def _rpow(ring: Ring, k: int):
    cache = _EMBED[ring]
    key = ("rpow", k)
    hit = cache.get(key)
    if hit is None:
        hit = ring.embed(QScalar.rpow(k))
        cache[key] = hit
    return hit


# ---------------------------------------------------------------------------


class AlgebraElement:
    """Finite linear combination of normal monomials with coefficients in ``ring``."""

    __slots__ = ("terms", "ring")

    def __init__(self, terms: dict | None = None, ring: Ring = SYMBOLIC):
        self.ring = ring
        self.terms = {m: c for m, c in (terms or {}).items() if not ring.is_zero(c)}

    # constructors
    @classmethod
    def zero(cls, ring: Ring = SYMBOLIC) -> "AlgebraElement":
        return cls({}, ring)

    @classmethod
    def scalar(cls, c, ring: Ring = SYMBOLIC) -> "AlgebraElement":
        return cls({UNIT: ring.coerce(c)}, ring)

    @classmethod
    def one(cls, ring: Ring = SYMBOLIC) -> "AlgebraElement":
        return cls.scalar(1, ring)

    @classmethod
    def gen(cls, name: str, ring: Ring = SYMBOLIC) -> "AlgebraElement":
        return cls({GEN_MONO[name]: ring.one}, ring)

    @classmethod
    def from_mono(cls, m: Mono, c=1, ring: Ring = SYMBOLIC) -> "AlgebraElement":
        return cls({m: ring.coerce(c)}, ring)

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Mono, object]]:
        return iter(sorted(self.terms.items(), key=lambda t: _sort_key(t[0])))

    def coefficient(self, m: Mono):
        return self.terms.get(m, self.ring.zero)

    def constant_term(self):
        return self.coefficient(UNIT)

    def word_length(self) -> int:
        return max((m.length for m in self.terms), default=0)

    def grades(self) -> set[int]:
        return {m.grade for m in self.terms}

    def is_homogeneous(self, grade: int | None = None) -> bool:
        gs = self.grades()
        if not gs:
            return True
        return len(gs) == 1 and (grade is None or gs == {grade})

    # arithmetic
    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        return AlgebraElement.scalar(other, self.ring)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return AlgebraElement(out, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement({m: -c for m, c in self.terms.items()}, self.ring)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "AlgebraElement":
        s = self.ring.coerce(s) if not isinstance(s, complex) else s
        return AlgebraElement({m: s * c for m, c in self.terms.items()}, self.ring)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(other, self)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = AlgebraElement.one(self.ring)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, QScalar, float, complex)):
            return self == AlgebraElement.scalar(other, self.ring)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # structural maps
    def star(self) -> "AlgebraElement":
        return star(self)

    def antipode(self) -> "AlgebraElement":
        return antipode(self)

    def specialize(self, ring: Ring) -> "AlgebraElement":
        """Move coefficients to another ring (symbolic -> exact/float, exact -> float)."""
        if ring == self.ring:
            return self
        src = self.ring
        if src.kind == "symbolic":
            conv = ring.embed
        elif src.kind == "exact" and ring.kind == "float":
            conv = ring.coerce
        else:
            raise ValueError(f"cannot specialize {src!r} to {ring!r}")
        return AlgebraElement({m: conv(c) for m, c in self.terms.items()}, ring)

    def truncate(self, cap: int) -> tuple["AlgebraElement", "AlgebraElement"]:
        """Split into (terms of word length <= cap, the rest)."""
        keep, drop = {}, {}
        for m, c in self.terms.items():
            (keep if m.length <= cap else drop)[m] = c
        return AlgebraElement(keep, self.ring), AlgebraElement(drop, self.ring)

    def chop(self, tol: float) -> "AlgebraElement":
        return AlgebraElement({m: c for m, c in self.terms.items() if abs(c) > tol}, self.ring)

    def l1(self) -> float:
        """Sum of |coefficients|; bounds the operator norm since every monomial is a contraction."""
        return float(sum(abs(self.ring.to_complex(c)) for c in self.terms.values()))

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"AlgebraElement({format_element(self)!r}, {self.ring!r})"


def _sort_key(m: Mono):
    return (m.length, m.star, -m.i, -m.j, -m.k)


def _map_terms(x: AlgebraElement, key_fn, compute_fn) -> AlgebraElement:
    ring = x.ring
    acc: dict[Mono, object] = {}
    for m, c in x.terms.items():
        for m2, s in _embedded(ring, key_fn(m), lambda m=m: compute_fn(m)):
            v = c * s
            acc[m2] = acc[m2] + v if m2 in acc else v
    return AlgebraElement(acc, ring)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.ring != y.ring:
        raise ValueError(f"ring mismatch: {x.ring!r} vs {y.ring!r}")
    ring = x.ring
    if not x.terms or not y.terms:
        return AlgebraElement.zero(ring)
    acc: dict[Mono, object] = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            c12 = c1 * c2
            for m, s in _embedded(ring, ("mul", m1, m2), lambda: _mono_mono(m1, m2)):
                v = c12 * s
                acc[m] = acc[m] + v if m in acc else v
    return AlgebraElement(acc, ring)


def star(x: AlgebraElement) -> AlgebraElement:
    """Anti-multiplicative involution, conjugating coefficients."""
    ring = x.ring
    acc: dict[Mono, object] = {}
    for m, c in x.terms.items():
        cc = c.conjugate()
        for m2, s in _embedded(ring, ("star", m), lambda m=m: _star_mono(m)):
            v = cc * s
            acc[m2] = acc[m2] + v if m2 in acc else v
    return AlgebraElement(acc, ring)


def antipode(x: AlgebraElement) -> AlgebraElement:
    return _map_terms(x, lambda m: ("S", m), _antipode_mono)


# ---------------------------------------------------------------------------
# U_q(su(2)) words and actions

_LETTERS = ("K", "Ki", "E", "F")


class UqWord:
    """Formal product of K, K^-1, E, F; adjacent K K^-1 pairs cancel."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[str] = ()):
        stack: list[str] = []
        for s in letters:
            if s not in _LETTERS:
                raise ValueError(f"unknown U_q(su(2)) generator {s!r}")
            if stack and {stack[-1], s} == {"K", "Ki"}:
                stack.pop()
            else:
                stack.append(s)
        self.letters = tuple(stack)

    @classmethod
    def parse(cls, text: str) -> "UqWord":
        t = text.replace(" ", "").replace("*", "")
        t = t.replace("K^-1", "k").replace("K^(-1)", "k").replace("Ki", "k").replace("Kinv", "k")
        letters = []
        for ch in t:
            if ch == "k":
                letters.append("Ki")
            elif ch in "KEF":
                letters.append(ch)
            elif ch == "1":
                continue
            else:
                raise ValueError(f"cannot parse U_q(su(2)) word {text!r}")
        return cls(letters)

    def __mul__(self, other: "UqWord") -> "UqWord":
        return UqWord(self.letters + other.letters)

    def __eq__(self, other):
        return isinstance(other, UqWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return "*".join("K^-1" if s == "Ki" else s for s in self.letters) or "1"

    def __repr__(self):
        return f"UqWord({str(self)!r})"


def _as_word(h) -> UqWord:
    if isinstance(h, UqWord):
        return h
    return UqWord.parse(h)


def _diag(x: AlgebraElement, sign: int, use_m: bool) -> AlgebraElement:
    ring = x.ring
    out = {}
    for m, c in x.terms.items():
        g = m.mgrade if use_m else m.grade
        out[m] = c * _rpow(ring, sign * g)
    return AlgebraElement(out, ring)


def _apply_letter(op_prefix: str, letter: str, x: AlgebraElement, use_m: bool,
                  k_sign: int) -> AlgebraElement:
    if x.is_zero():
        return x
    if letter == "K":
        return _diag(x, k_sign, use_m)
    if letter == "Ki":
        return _diag(x, -k_sign, use_m)
    op = op_prefix + letter
    return _map_terms(x, lambda m: ("act", op, m), lambda m: _act_mono(op, m))


def act_left(h, x: AlgebraElement) -> AlgebraElement:
    """Left module-algebra action h |> x (K|>a = q^-1/2 a, E|>c = as, F|>cs = -q^-1 a, ...)."""
    for letter in reversed(_as_word(h).letters):
        x = _apply_letter("", letter, x, use_m=False, k_sign=1)
    return x


def act_partial(g, x: AlgebraElement) -> AlgebraElement:
    """The action d_g(x) = x <| S^-1(g), implemented from its generator table."""
    # d_K(x) = q^(-n/2) x on the M-grade n component
    for letter in reversed(_as_word(g).letters):
        x = _apply_letter("d", letter, x, use_m=True, k_sign=-1)
    return x


def act_right(x: AlgebraElement, h) -> AlgebraElement:
    """Right module-algebra action x <| h; x <| K = q^(n/2) x on the M-grade n component."""
    for letter in _as_word(h).letters:
        x = _apply_letter("r", letter, x, use_m=True, k_sign=1)
    return x


def grade_decompose(x: AlgebraElement) -> dict[int, AlgebraElement]:
    parts: dict[int, dict] = defaultdict(dict)
    for m, c in x.terms.items():
        parts[m.grade][m] = c
    return {n: AlgebraElement(t, x.ring) for n, t in sorted(parts.items())}


def m_grade_decompose(x: AlgebraElement) -> dict[int, AlgebraElement]:
    parts: dict[int, dict] = defaultdict(dict)
    for m, c in x.terms.items():
        parts[m.mgrade][m] = c
    return {n: AlgebraElement(t, x.ring) for n, t in sorted(parts.items())}


def defining_matrix(ring: Ring = SYMBOLIC):
    """U = [[a, -q cs], [c, as]] as a 2x2 nested list of elements."""
    a, as_, c, cs = (AlgebraElement.gen(g, ring) for g in GENERATORS)
    q = ring.embed(QScalar.rpow(2))
    return [[a, cs * (-q)], [c, as_]]


def adjoint_matrix(u):
    return [[u[j][i].star() for j in range(2)] for i in range(2)]


def matmul2(u, v):
    return [[u[i][0] * v[0][j] + u[i][1] * v[1][j] for j in range(2)] for i in range(2)]


# ---------------------------------------------------------------------------
# text


def _format_coeff(ring: Ring, c) -> tuple[str, str]:
    """(sign, magnitude text); magnitude '1' means a bare unit coefficient."""
    if ring.kind == "symbolic":
        items = c.items()
        if len(items) == 1:
            (k, v), = items
            sign = "-" if v < 0 else "+"
            return sign, str(QScalar({k: abs(v)}))
        return "+", f"({c})"
    if ring.kind == "exact":
        return ("-" if c < 0 else "+"), str(abs(c))
    if isinstance(c, complex) and c.imag != 0:
        return "+", ring.fmt(c)
    v = c.real if isinstance(c, complex) else c
    return ("-" if v < 0 else "+"), ring.fmt(abs(v))


def format_element(x: AlgebraElement) -> str:
    if x.is_zero():
        return "0"
    pieces = []
    for m, c in x:
        sign, mag = _format_coeff(x.ring, c)
        if m.is_unit():
            body = mag
        elif mag == "1":
            body = str(m)
        else:
            body = f"{mag}*{m}"
        pieces.append((sign, body))
    s0, b0 = pieces[0]
    out = ("-" if s0 == "-" else "") + b0
    for s, b in pieces[1:]:
        out += f" {s} {b}"
    return out


def element_namespace() -> dict:
    from .podles import B0, Bm, Bp

    ns = {g: AlgebraElement.gen(g) for g in GENERATORS}
    ns.update({"B0": B0(), "Bp": Bp(), "Bm": Bm()})
    return ns


def parse_element(text: str, ring: Ring = SYMBOLIC) -> AlgebraElement:
    """Parse e.g. ``"2*a^2*c*cs^3 - q^(-1/2)*B0"``; ``as``/``cs`` are a*/c*."""
    from .parsing import parse_expression

    val = parse_expression(text, element_namespace())
    if not isinstance(val, AlgebraElement):
        val = AlgebraElement.scalar(val)
    return val.specialize(ring)


def word_product(word: list[str], ring: Ring = SYMBOLIC) -> AlgebraElement:
    """Normal form of an arbitrary generator word (independent route used by tests)."""
    return AlgebraElement({m: ring.embed(c) for m, c in _word_product(list(word))}, ring)


def cache_info() -> dict:
    return {
        "mono_gen": _mono_gen.cache_info()._asdict(),
        "mono_mono": _mono_mono.cache_info()._asdict(),
        "act": _act_mono.cache_info()._asdict(),
    }


__all__ = [
    "AlgebraElement", "Mono", "UNIT", "GEN_MONO", "GENERATORS", "UqWord", "monomials", "mono",
    "multiply", "star", "antipode", "act_left", "act_partial", "act_right", "grade_decompose",
    "m_grade_decompose", "defining_matrix", "adjoint_matrix", "matmul2", "parse_element",
    "format_element", "word_product", "ExactRing", "FloatRing",
]
