"""Free super-commutative Z-graded algebras over the rationals.

An algebra is declared by a list of homogeneous generators.  Odd-degree
generators anticommute and square to zero, even-degree generators are
polynomial variables.  Elements are sparse maps from monomials to exact
rationals and are always kept in normal form.

A monomial is stored as a tuple of exponents aligned with the generator
list; an odd generator carries exponent 0 or 1.  The monomial stands for
the product of its generators taken in declaration order.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class AlgebraMismatch(ValueError):
    """Raised when elements or operators from different algebras are combined."""

    def __init__(self, msg: str = "algebra mismatch"):
        super().__init__(msg)


class ParseError(ValueError):
    def __init__(self, msg: str, position: int, text: str):
        super().__init__(f"{msg} at position {position} in {text!r}")
        self.position = position
        self.text = text


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree % 2


class GradedAlgebra:
    """Free graded-commutative algebra on finitely many generators.

    Algebras compare by their generator list, so two independently built
    copies of the same algebra are interchangeable.
    """

    def __init__(self, generators: Iterable[Union[Generator, Tuple[str, int]]]):
        gens = []
        for g in generators:
            if not isinstance(g, Generator):
                g = Generator(*g)
            if not _NAME_RE.match(g.name):
                raise ValueError(f"invalid generator name {g.name!r}")
            if g.degree < 0:
                raise ValueError(f"generator {g.name!r} has negative degree")
            gens.append(g)
        self.generators: Tuple[Generator, ...] = tuple(gens)
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        if len(self._index) != len(self.generators):
            raise ValueError("generator names must be unique")
        self.ngens = len(self.generators)
        self.degrees = tuple(g.degree for g in self.generators)
        self.odd = tuple(i for i, g in enumerate(self.generators) if g.parity)
        self.even = tuple(i for i, g in enumerate(self.generators) if not g.parity)
        self._basis_cache: Dict[int, List[Monomial]] = {}

    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedAlgebra({inner})"

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None

    # -- elements ---------------------------------------------------------

    def zero(self) -> "Element":
        return Element(self, {})

    def one(self) -> "Element":
        return Element(self, {self.unit_monomial: Fraction(1)})

    def scalar(self, c: Scalar) -> "Element":
        return Element.from_terms(self, {self.unit_monomial: c})

    def gen(self, which: Union[str, int]) -> "Element":
        i = self.index(which) if isinstance(which, str) else which
        m = [0] * self.ngens
        m[i] = 1
        return Element(self, {tuple(m): Fraction(1)})

    def gens(self) -> List["Element"]:
        return [self.gen(i) for i in range(self.ngens)]

    def monomial(self, m: Monomial) -> "Element":
        return Element(self, {tuple(m): Fraction(1)})

    def parse(self, text: str) -> "Element":
        return parse_element(text, self)

    @cached_property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    # -- monomial arithmetic ----------------------------------------------

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomial_parity(self, m: Monomial) -> int:
        return sum(m[i] for i in self.odd) & 1

    def multiply_monomials(self, m1: Monomial, m2: Monomial) -> Tuple[int, Optional[Monomial]]:
        """Return ``(sign, m)`` with ``m1 * m2 = sign * m``; ``m`` is None when zero."""
        inversions = 0
        seen_after = 0
        # walk odd generators from the top: count odd factors of m1 above each odd factor of m2
        for i in reversed(self.odd):
            a, b = m1[i], m2[i]
            if a and b:
                return 0, None
            if b:
                inversions += seen_after
            if a:
                seen_after += 1
        m = tuple(x + y for x, y in zip(m1, m2))
        return (-1 if inversions & 1 else 1), m

    def monomial_sort_key(self, m: Monomial):
        return (tuple(i for i in self.odd if m[i]), tuple(m[i] for i in self.even))

    def basis_of_degree(self, k: int) -> List[Monomial]:
        """All normal-form monomials of total degree ``k`` in canonical order."""
        if k < 0:
            return []
        if k in self._basis_cache:
            return list(self._basis_cache[k])
        if any(self.degrees[i] == 0 for i in self.even):
            raise ValueError("degree components are infinite-dimensional (degree-0 generator)")
        out = []
        for r in range(len(self.odd) + 1):
            for subset in itertools.combinations(self.odd, r):
                rest = k - sum(self.degrees[i] for i in subset)
                if rest < 0:
                    continue
                for exps in _exponent_vectors([self.degrees[i] for i in self.even], rest):
                    m = [0] * self.ngens
                    for i in subset:
                        m[i] = 1
                    for i, e in zip(self.even, exps):
                        m[i] = e
                    out.append(tuple(m))
        out.sort(key=self.monomial_sort_key)
        self._basis_cache[k] = out
        return list(out)

    def render_monomial(self, m: Monomial) -> str:
        parts = []
        for i, e in enumerate(m):
            if e == 1:
                parts.append(self.generators[i].name)
            elif e > 1:
                parts.append(f"{self.generators[i].name}^{e}")
        return "*".join(parts) if parts else "1"


def _exponent_vectors(degrees: Sequence[int], total: int) -> Iterator[Tuple[int, ...]]:
    if not degrees:
        if total == 0:
            yield ()
        return
    d = degrees[0]
    for e in range(total // d + 1):
        for rest in _exponent_vectors(degrees[1:], total - e * d):
            yield (e,) + rest


class Element:
    """Sparse exact-rational linear combination of normal-form monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms: Dict[Monomial, Fraction]):
        # trusted constructor: terms already normal, coefficients nonzero Fractions
        self.algebra = algebra
        self.terms = terms

    @classmethod
    def from_terms(cls, algebra: GradedAlgebra, terms: Mapping[Monomial, Scalar]) -> "Element":
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != algebra.ngens:
                raise ValueError("monomial length does not match the algebra")
            if any(m[i] > 1 for i in algebra.odd):
                continue
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        return cls(algebra, clean)

    # -- comparison -------------------------------------------------------

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.algebra != self.algebra:
                raise AlgebraMismatch()
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- linear structure -------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Element(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Element":
        c = Fraction(c)
        if not c:
            return self.algebra.zero()
        return Element(self.algebra, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        mult = self.algebra.multiply_monomials
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = mult(m1, m2)
                if m is None:
                    continue
                v = out.get(m, 0) + (c1 * c2 if s > 0 else -c1 * c2)
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Element(self.algebra, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, c: Scalar):
        return self.scale(Fraction(1) / Fraction(c))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    # -- grading ----------------------------------------------------------

    def degrees(self) -> List[int]:
        return sorted({self.algebra.monomial_degree(m) for m in self.terms})

    def degree_component(self, k: int) -> "Element":
        deg = self.algebra.monomial_degree
        return Element(self.algebra, {m: c for m, c in self.terms.items() if deg(m) == k})

    def homogeneous_components(self) -> Dict[int, "Element"]:
        return {k: self.degree_component(k) for k in self.degrees()}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Degree of a homogeneous element; None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"element is not homogeneous: {self}")
        return ds[0]

    def grading_sign(self) -> "Element":
        """The s-grading operator: even components kept, odd components negated."""
        par = self.algebra.monomial_parity
        return Element(self.algebra, {m: (-c if par(m) else c) for m, c in self.terms.items()})

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient(self.algebra.unit_monomial)

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        key = self.algebra.monomial_sort_key
        deg = self.algebra.monomial_degree
        return sorted(self.terms.items(), key=lambda kv: (deg(kv[0]), key(kv[0])))

    def __repr__(self):
        return f"Element({render(self)!r})"

    def __str__(self):
        return render(self)


def multiply(a: Element, b: Element) -> Element:
    if a.algebra != b.algebra:
        raise AlgebraMismatch()
    return a * b


def add(a: Element, b: Element) -> Element:
    if a.algebra != b.algebra:
        raise AlgebraMismatch()
    return a + b


def scale(c: Scalar, a: Element) -> Element:
    return a.scale(c)


def degree_component(a: Element, k: int) -> Element:
    return a.degree_component(k)


def basis_of_degree(algebra: GradedAlgebra, k: int) -> List[Monomial]:
    return algebra.basis_of_degree(k)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render(a: Element) -> str:
    """Canonical text form; ``parse_element(render(a))`` gives back ``a``."""
    if not a.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(a.sorted_terms()):
        neg = c < 0
        mag = -c if neg else c
        body = a.algebra.render_monomial(m)
        if body == "1":
            piece = _fmt_coeff(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{_fmt_coeff(mag)}*{body}"
        if i == 0:
            out.append(("-" if neg else "") + piece)
        else:
            out.append((" - " if neg else " + ") + piece)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    text_len = len(text)
    while pos < text_len:
        if text[pos:].strip() == "":
            break
        mt = _TOKEN_RE.match(text, pos)
        if not mt:
            raise ParseError("unexpected character", pos, text)
        kind = mt.lastgroup
        toks.append((kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    return toks


def parse_element(text: str, algebra: GradedAlgebra) -> Element:
    """Parse a signed sum of rational-coefficient monomials.

    Grammar: ``element := [sign] term (sign term)*``,
    ``term := rational | [rational "*"] factor ("*" factor)*``,
    ``factor := name ["^" posint]``, ``rational := int ["/" posint]``.
    """
    toks = _tokenize(text)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "", len(text))

    def take(kind, value=None):
        nonlocal pos
        tk = peek()
        if tk[0] != kind or (value is not None and tk[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}", tk[2], text)
        pos += 1
        return tk

    def rational():
        num = int(take("int")[1])
        if peek()[:2] == ("op", "/"):
            take("op", "/")
            tk = take("int")
            den = int(tk[1])
            if den == 0:
                raise ParseError("zero denominator", tk[2], text)
            return Fraction(num, den)
        return Fraction(num)

    def factor():
        tk = take("name")
        try:
            g = algebra.gen(tk[1])
        except KeyError:
            raise ParseError(f"unknown generator {tk[1]!r}", tk[2], text) from None
        if peek()[:2] == ("op", "^"):
            take("op", "^")
            et = take("int")
            e = int(et[1])
            if e < 1:
                raise ParseError("exponent must be positive", et[2], text)
            return g ** e
        return g

    def term():
        coeff = Fraction(1)
        if peek()[0] == "int":
            coeff = rational()
            if peek()[:2] != ("op", "*"):
                return algebra.scalar(coeff)
            take("op", "*")
        value = factor()
        while peek()[:2] == ("op", "*"):
            take("op", "*")
            value = value * factor()
        return value.scale(coeff)

    if not toks:
        raise ParseError("empty element", 0, text)
    total = algebra.zero()
    sign = 1
    if peek()[:2] in (("op", "-"), ("op", "+")):
        sign = -1 if take("op")[1] == "-" else 1
    total = total + term().scale(sign)
    while pos < len(toks):
        tk = peek()
        if tk[0] != "op" or tk[1] not in "+-":
            raise ParseError("expected '+' or '-'", tk[2], text)
        pos += 1
        total = total + term().scale(-1 if tk[1] == "-" else 1)
    return total
