"""Divisor-class expressions and computation in a presentation.

Grammar (whitespace is insignificant)::

    expr := term (("+" | "-") term)*
    term := [int "*"] atom | int
    atom := "lambda" | "delta_irr" | "psi_" int | "delta(" int ";" [int ("," int)*] ")"

For universal-curve presentations the atoms ``omega`` and ``sigma_<i>`` are
accepted as well.  ``psi_i`` is expanded to ``-delta(0;i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DomainError, ParseError, PresentationMismatch
from .generators import boundary_name, canonicalize, mask_of, validate_pair
from .lattice import AbGroupStructure, IntMatrix, quotient_invariants
from .presentations import OMEGA, Presentation, build, sigma_name

__all__ = [
    "DivisorClass",
    "NormalForm",
    "parse_class",
    "format_class",
    "normal_form",
    "classes_equal",
    "subgroup_quotient",
    "reduce_class",
    "generator_class",
]


@dataclass(frozen=True)
class DivisorClass:
    presentation: Presentation
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.presentation.rank:
            raise PresentationMismatch(
                f"{len(self.coeffs)} coefficients for {self.presentation.rank} generators"
            )

    def _check(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if other.presentation != self.presentation:
            raise PresentationMismatch("classes belong to different presentations")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.presentation, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.presentation, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.presentation, tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return DivisorClass(self.presentation, tuple(k * a for a in self.coeffs))

    __mul__ = __rmul__

    def __str__(self):
        return format_class(self)


@dataclass(frozen=True)
class NormalForm:
    """Coordinates of a class in the quotient; ``moduli[i] == 0`` marks a free slot."""

    coords: tuple[int, ...]
    moduli: tuple[int, ...]

    def __add__(self, other: "NormalForm") -> "NormalForm":
        if self.moduli != other.moduli:
            raise PresentationMismatch("normal forms over different bases")
        return NormalForm(
            tuple((a + b) % d if d else a + b for a, b, d in zip(self.coords, other.coords, self.moduli)),
            self.moduli,
        )

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]+)|(?P<op>[-+*;,()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip():
                bad = pos + len(rest) - len(rest.lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", bad)
            break
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def integer(self):
        kind, text, pos = self.take()
        if kind != "int":
            raise ParseError(f"expected an integer, found {text or 'end of input'!r}", pos)
        return int(text)

    def expr(self):
        terms = []
        sign = 1
        kind, text, _ = self.peek()
        if text in "+-" and kind == "op":
            self.take()
            sign = -1 if text == "-" else 1
        terms.append(self.term(sign))
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in ("+", "-"):
                self.take()
                terms.append(self.term(-1 if text == "-" else 1))
            else:
                break
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return terms

    def term(self, sign):
        kind, text, pos = self.peek()
        # a signed integer literal may carry its own sign, e.g. "3*lambda + -2*delta_irr"
        if kind == "op" and text in "+-":
            self.take()
            sign *= -1 if text == "-" else 1
            kind, text, pos = self.peek()
        if kind == "int":
            coeff = self.integer()
            k2, t2, _ = self.peek()
            if k2 == "op" and t2 == "*":
                self.take()
                return sign * coeff, self.atom()
            if coeff != 0:
                raise ParseError("a bare integer term must be 0 (classes carry no constant part)", pos)
            return 0, None
        return sign, self.atom()

    def atom(self):
        kind, text, pos = self.take()
        if kind != "name":
            raise ParseError(f"expected a generator, found {text or 'end of input'!r}", pos)
        if text in ("lambda", "delta_irr", "omega"):
            return (text,), pos
        if text in ("psi_", "sigma_"):
            return (text[:-1], self.integer()), pos
        if text == "delta":
            self.expect("(")
            a = self.integer()
            self.expect(";")
            marks = []
            if self.peek()[0] == "int":
                marks.append(self.integer())
                while self.peek()[1] == ",":
                    self.take()
                    marks.append(self.integer())
            self.expect(")")
            return ("delta", a, tuple(marks)), pos
        raise ParseError(f"unknown symbol {text!r}", pos)


def _resolve(pres: Presentation, atom, pos) -> dict[int, int]:
    """Column expansion of one atom in ``pres``."""
    head = atom[0]
    g, n = pres.g, pres.n
    index = pres.index
    try:
        if pres.variant == "rpic":
            if head == "omega":
                return {index[OMEGA]: 1}
            if head == "sigma":
                _check_marking(atom[1], n, pos)
                return {index[sigma_name(atom[1])]: 1}
            raise ParseError(f"{head} is not a generator of the universal-curve presentation", pos)
        if head in ("omega", "sigma"):
            raise ParseError(f"{head} only exists in the universal-curve presentation", pos)
        if head == "lambda":
            return {index["lambda"]: 1}
        if head == "psi":
            _check_marking(atom[1], n, pos)
            return {j: -v for j, v in _resolve(pres, ("delta", 0, (atom[1],)), pos).items()}
        if head == "delta_irr":
            if "delta_irr" not in index:
                raise ParseError("delta_irr is not a generator of the open presentation", pos)
            return {index["delta_irr"]: 1}
        # boundary symbol
        a, marks = atom[1], atom[2]
        for i in marks:
            _check_marking(i, n, pos)
        if len(set(marks)) != len(marks):
            raise ParseError(f"repeated marking in delta({a};{','.join(map(str, marks))})", pos)
        mask = mask_of(marks, n)
        try:
            gid = canonicalize(g, a, mask, n)
        except DomainError as exc:
            raise ParseError(str(exc), pos) from None
        if pres.variant == "stable":
            return {index[gid.name]: 1}
        name = boundary_name(a, mask)
        if name not in index:
            raise ParseError(f"{name} is not a generator of the open presentation", pos)
        return {index[name]: 1}
    except KeyError as exc:
        raise ParseError(f"unknown generator {exc.args[0]!r}", pos) from None


def _check_marking(i, n, pos):
    if not 1 <= i <= n:
        raise ParseError(f"marking index {i} outside [1, {n}]", pos)


def parse_class(pres: Presentation, expr: str) -> DivisorClass:
    """Parse ``expr`` into a class of ``pres``.

    >>> from tautpic.presentations import build
    >>> parse_class(build(1, 1), "psi_1").coeffs
    (0, 0, -1)
    """
    coeffs = [0] * pres.rank
    for coeff, atom in _Parser(expr).expr():
        if atom is None:
            continue
        sym, pos = atom
        for j, v in _resolve(pres, sym, pos).items():
            coeffs[j] += coeff * v
    return DivisorClass(pres, tuple(coeffs))


def format_class(c: DivisorClass) -> str:
    """Canonical expression for ``c`` over the generator names; ``0`` for the zero vector."""
    parts = []
    for name, k in zip(c.presentation.generators, c.coeffs):
        if not k:
            continue
        mag = abs(k)
        body = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(body if k > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if k > 0 else '-'} {body}")
    return " ".join(parts) if parts else "0"


def generator_class(pres: Presentation, name: str) -> DivisorClass:
    coeffs = [0] * pres.rank
    coeffs[pres.index[name]] = 1
    return DivisorClass(pres, tuple(coeffs))


# ---------------------------------------------------------------------------
# computing in the quotient


def _own(pres, c):
    if c.presentation != pres:
        raise PresentationMismatch("class does not belong to this presentation")


def normal_form(pres: Presentation, c: DivisorClass) -> NormalForm:
    _own(pres, c)
    data = pres.basis_data
    return NormalForm(data.coordinates(c.coeffs), data.moduli)


def classes_equal(pres: Presentation, c1: DivisorClass, c2: DivisorClass) -> bool:
    return normal_form(pres, c1) == normal_form(pres, c2)


def reduce_class(pres: Presentation, c: DivisorClass) -> DivisorClass:
    """Canonical representative of the coset of ``c`` modulo the relations.

    Subtracts HNF rows pivot by pivot so each pivot coordinate lands in
    ``[0, pivot)``; two classes are equal iff their reductions coincide.
    """
    _own(pres, c)
    x = list(c.coeffs)
    for row in pres.relation_hnf.rows:
        p = next(j for j, v in enumerate(row) if v)
        q = x[p] // row[p]
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    return DivisorClass(pres, tuple(x))


def subgroup_quotient(pres: Presentation, gens) -> AbGroupStructure:
    """Structure of the presented group modulo the span of ``gens``."""
    rows = list(pres.relations.rows)
    for c in gens:
        _own(pres, c)
        rows.append(c.coeffs)
    return quotient_invariants(IntMatrix(rows, ncols=pres.rank), pres.rank)


def parse_in(g: int, n: int, expr: str, variant: str = "stable") -> DivisorClass:
    validate_pair(g, n, variant)
    return parse_class(build(g, n, variant), expr)
