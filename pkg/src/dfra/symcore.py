"""Exact noncommutative polynomial algebra over named generators.

Coefficients are Gaussian rationals (a + b*i with a, b exact fractions), so
every identity checked downstream is exact: no floating point enters this
module.  Words of generators are normal-ordered against a bracket table,
using ab = ba + [a, b] in commutator mode; in poisson (classical) mode words
are commutative monomials and are simply sorted.

Units are hbar = c = 1 throughout the toolkit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union


class SymError(Exception):
    """Base class for errors raised by the symbolic layer."""


class UnknownGeneratorError(SymError):
    """An expression mentions a generator outside the table's universe."""


class NormalizationError(SymError):
    """Internal consistency failure: the rewrite loop did not terminate."""


class ParseError(SymError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


# ---------------------------------------------------------------------------
# coefficients


class GaussRat:
    """Exact complex number a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(value: "Scalar") -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussRat(value)
        raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")

    @staticmethod
    def _cast(value):
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussRat(value)
        return None

    def __add__(self, other):
        other = GaussRat._cast(other)
        if other is None:
            return NotImplemented
        return GaussRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussRat._cast(other)
        if other is None:
            return NotImplemented
        return GaussRat(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = GaussRat._cast(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GaussRat._cast(other)
        if other is None:
            return NotImplemented
        return GaussRat(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRat._cast(other)
        if other is None:
            return NotImplemented
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRat(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = GaussRat._cast(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussRat(other)
        if not isinstance(other, GaussRat):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def __repr__(self):
        return f"GaussRat({self.re!r}, {self.im!r})"


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)

Scalar = Union[int, Fraction, GaussRat]


# ---------------------------------------------------------------------------
# generators

# Global generator order; reordering x*pi spawns a p word, which sorts
# earlier, so each rewrite strictly shrinks (length, inversions) and the
# normal-ordering loop terminates.
_NAME_RANK = {"X": 0, "x": 1, "p": 2, "theta": 3, "pi": 4, "Z": 5, "K": 6}

_NAME_KIND = {
    "X": "coordinate",
    "x": "coordinate",
    "p": "momentum",
    "theta": "theta",
    "pi": "theta-momentum",
    "Z": "auxiliary",
    "K": "auxiliary",
}


@dataclass(frozen=True)
class Generator:
    """Atomic symbol such as x^1, p_2, theta^{1,2}.

    Antisymmetric index pairs are stored with first index < second; the
    sign lives in the coefficient of the surrounding expression.
    """

    name: str
    indices: tuple[int, ...] = ()

    @property
    def kind(self) -> str:
        return _NAME_KIND.get(self.name, "auxiliary")

    @property
    def sort_key(self):
        return (_NAME_RANK.get(self.name, 99), self.name, self.indices)

    def __lt__(self, other: "Generator"):
        return self.sort_key < other.sort_key

    def __str__(self):
        if not self.indices:
            return self.name
        return f"{self.name}[{','.join(str(i) for i in self.indices)}]"


Word = tuple[Generator, ...]


# ---------------------------------------------------------------------------
# expressions


class Expression:
    """Finite linear combination of generator words with exact coefficients.

    Instances are immutable; arithmetic returns fresh expressions.  The empty
    word is the scalar unit, and an empty term map is the zero expression.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Scalar] | None = None):
        clean: dict[Word, GaussRat] = {}
        if terms:
            for word, coeff in terms.items():
                coeff = GaussRat.coerce(coeff)
                if coeff:
                    clean[tuple(word)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("Expression is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Expression":
        return Expression()

    @staticmethod
    def scalar(value: Scalar) -> "Expression":
        return Expression({(): GaussRat.coerce(value)})

    @staticmethod
    def generator(gen: Generator) -> "Expression":
        return Expression({(gen,): ONE})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(not w for w in self.terms)

    def scalar_part(self) -> GaussRat:
        return self.terms.get((), ZERO)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def generators(self) -> set[Generator]:
        return {g for word in self.terms for g in word}

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_expression(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            acc = terms.get(word, ZERO) + coeff
            if acc:
                terms[word] = acc
            else:
                terms.pop(word, None)
        return Expression(terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_expression(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_expression(other) - self

    def __neg__(self):
        return Expression({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            c = GaussRat.coerce(other)
            return Expression({w: cc * c for w, cc in self.terms.items()})
        if isinstance(other, Expression):
            terms: dict[Word, GaussRat] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    word = w1 + w2
                    acc = terms.get(word, ZERO) + c1 * c2
                    if acc:
                        terms[word] = acc
                    else:
                        terms.pop(word, None)
            return Expression(terms)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussRat)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        other = _as_expression(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Expression({format_expression(self)!r})"

    def __str__(self):
        return format_expression(self)


def _as_expression(value) -> "Expression":
    if isinstance(value, Expression):
        return value
    if isinstance(value, (int, Fraction, GaussRat)):
        return Expression.scalar(value)
    return NotImplemented


# ---------------------------------------------------------------------------
# bracket tables


class BracketTable:
    """Structure data [a, b] (or {a, b}) for ordered generator pairs.

    Entries are stored for pairs with a < b in the global generator order;
    the antisymmetric partner is produced on lookup.  Every entry must be a
    scalar-or-linear expression, which is what guarantees termination of the
    normal-ordering rewrite.
    """

    def __init__(
        self,
        dimension: int,
        universe: Iterable[Generator],
        entries: Mapping[tuple[Generator, Generator], Expression],
        mode: str = "commutator",
    ):
        if mode not in ("commutator", "poisson"):
            raise ValueError(f"unknown bracket mode {mode!r}")
        self.dimension = dimension
        self.mode = mode
        self.universe = frozenset(universe)
        self.entries: dict[tuple[Generator, Generator], Expression] = {}
        for (a, b), expr in entries.items():
            if a not in self.universe or b not in self.universe:
                raise UnknownGeneratorError(f"table entry ({a}, {b}) outside universe")
            if expr.degree() > 1:
                raise ValueError(f"bracket entry [{a}, {b}] has degree > 1")
            if expr.is_zero():
                continue
            if b < a:
                a, b, expr = b, a, -expr
            if a == b:
                raise ValueError(f"nonzero bracket [{a}, {a}] is inconsistent")
            self.entries[(a, b)] = expr

    def entry(self, a: Generator, b: Generator) -> Expression:
        """[a, b] for generators, with antisymmetry applied on lookup."""
        for g in (a, b):
            if g not in self.universe:
                raise UnknownGeneratorError(f"generator {g} not in table universe")
        if a == b:
            return Expression.zero()
        if b < a:
            return -self.entries.get((b, a), Expression.zero())
        return self.entries.get((a, b), Expression.zero())

    def check_expression(self, e: Expression) -> None:
        for g in e.generators():
            if g not in self.universe:
                raise UnknownGeneratorError(f"generator {g} not in table universe")

    def dump(self) -> str:
        """Text table `[<gen>, <gen>] = <expression>` of all nonzero entries."""
        left = "[{}, {}]" if self.mode == "commutator" else "{{{}, {}}}"
        lines = []
        for (a, b) in sorted(self.entries, key=lambda p: (p[0].sort_key, p[1].sort_key)):
            lines.append(f"{left.format(a, b)} = {format_expression(self.entries[(a, b)])}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# normal ordering

# Safety valve for the rewrite loop; generous since each step strictly
# decreases (word length, inversion count) lexicographically.
_MAX_REWRITE_FACTOR = 10_000


def normal_form(e: Expression, table: BracketTable) -> Expression:
    """Unique canonical representative of e modulo the table's relations."""
    table.check_expression(e)
    if table.mode == "poisson":
        terms: dict[Word, GaussRat] = {}
        for word, coeff in e.terms.items():
            key = tuple(sorted(word, key=lambda g: g.sort_key))
            acc = terms.get(key, ZERO) + coeff
            if acc:
                terms[key] = acc
            else:
                terms.pop(key, None)
        return Expression(terms)

    result: dict[Word, GaussRat] = {}
    pending: list[tuple[Word, GaussRat]] = list(e.terms.items())
    budget = _MAX_REWRITE_FACTOR * (1 + len(e.terms)) * (1 + e.degree()) ** 2
    steps = 0
    while pending:
        steps += 1
        if steps > budget:
            raise NormalizationError("rewrite did not terminate; inconsistent table")
        word, coeff = pending.pop()
        for k in range(len(word) - 1):
            if word[k + 1] < word[k]:
                break
        else:
            acc = result.get(word, ZERO) + coeff
            if acc:
                result[word] = acc
            else:
                result.pop(word, None)
            continue
        a, b = word[k], word[k + 1]
        pending.append((word[:k] + (b, a) + word[k + 2 :], coeff))
        for w2, c2 in table.entry(a, b).terms.items():
            pending.append((word[:k] + w2 + word[k + 2 :], coeff * c2))
    return Expression(result)


def _poisson_words(u: Word, v: Word, table: BracketTable) -> Expression:
    """{u, v} for monomial words by the Leibniz rule."""
    if not u or not v:
        return Expression.zero()
    if len(u) == 1 and len(v) == 1:
        return table.entry(u[0], v[0])
    if len(u) > 1:
        a, rest = (u[0],), u[1:]
        ea = Expression({a: ONE})
        erest = Expression({rest: ONE})
        return ea * _poisson_words(rest, v, table) + _poisson_words(a, v, table) * erest
    c, rest = (v[0],), v[1:]
    ec = Expression({c: ONE})
    erest = Expression({rest: ONE})
    return ec * _poisson_words(u, rest, table) + _poisson_words(u, c, table) * erest


def bracket(a: Expression, b: Expression, table: BracketTable) -> Expression:
    """[a, b] (commutator mode) or {a, b} (poisson mode), in normal form."""
    table.check_expression(a)
    table.check_expression(b)
    if table.mode == "commutator":
        return normal_form(a * b - b * a, table)
    out = Expression.zero()
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            out = out + _poisson_words(wa, wb, table) * (ca * cb)
    return normal_form(out, table)


def jacobi_residual(
    a: Expression, b: Expression, c: Expression, table: BracketTable
) -> Expression:
    """[[a,b],c] + [[b,c],a] + [[c,a],b]; the zero expression certifies it."""
    return normal_form(
        bracket(bracket(a, b, table), c, table)
        + bracket(bracket(b, c, table), a, table)
        + bracket(bracket(c, a, table), b, table),
        table,
    )


# ---------------------------------------------------------------------------
# text syntax
#
# Round-trips normal forms bit-exactly, e.g.  x[1]*p[1] - (1/2)i*theta[1,2]


def _format_rational(q: Fraction) -> str:
    return str(q) if q.denominator == 1 else f"({q})"


def _format_coeff(c: GaussRat) -> tuple[str, str]:
    """(sign, magnitude text) for a coefficient; '' magnitude means 1."""
    if c.im == 0:
        sign = "-" if c.re < 0 else "+"
        q = abs(c.re)
        return sign, ("" if q == 1 else _format_rational(q))
    if c.re == 0:
        sign = "-" if c.im < 0 else "+"
        q = abs(c.im)
        return sign, ("i" if q == 1 else _format_rational(q) + "i")
    im_sign = "-" if c.im < 0 else "+"
    im_q = abs(c.im)
    im_txt = "i" if im_q == 1 else _format_rational(im_q) + "i"
    return "+", f"({c.re} {im_sign} {im_txt})"


def format_expression(e: Expression) -> str:
    if e.is_zero():
        return "0"
    parts = []
    words = sorted(e.terms, key=lambda w: (-len(w), tuple(g.sort_key for g in w)))
    for word in words:
        sign, mag = _format_coeff(e.terms[word])
        body = "*".join(str(g) for g in word)
        if body and mag:
            text = f"{mag}*{body}"
        elif body:
            text = body
        else:
            text = mag if mag else "1"
        parts.append((sign, text))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, text in parts[1:]:
        out += f" {sign} {text}"
    return out


class _Lexer:
    _SYMBOLS = "+-*()[],"

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.cursor = 0

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in self._SYMBOLS:
                self.tokens.append((ch, ch, i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j < len(text) and text[j] == "/" and j + 1 < len(text) and text[j + 1].isdigit():
                    k = j + 1
                    while k < len(text) and text[k].isdigit():
                        k += 1
                    self.tokens.append(("number", text[i:k], i))
                    i = k
                else:
                    self.tokens.append(("number", text[i:j], i))
                    i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("name", text[i:j], i))
                i = j
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        self.tokens.append(("end", "", len(text)))

    def peek(self):
        return self.tokens[self.cursor]

    def next(self):
        tok = self.tokens[self.cursor]
        if tok[0] != "end":
            self.cursor += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok


class _Parser:
    """Recursive-descent parser for the test-fixture expression syntax.

    Grammar (juxtaposition multiplies, so `(1/2)i*p[2]` works):
        expr   := term (('+'|'-') term)*
        term   := factor (('*')? factor)*
        factor := ('-')* (number | 'i' | name '[' idx ']' | '(' expr ')'
                   | '[' expr ',' expr ']')
    Commutator/Poisson brackets `[a, b]` are evaluated against the table
    supplied to parse_expression, and require one.
    """

    _FACTOR_STARTS = {"number", "name", "(", "["}

    def __init__(self, lexer: _Lexer, table: BracketTable | None):
        self.lex = lexer
        self.table = table

    def parse(self) -> Expression:
        e = self.expr()
        tok = self.lex.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expression:
        e = self.term()
        while self.lex.peek()[0] in ("+", "-"):
            op = self.lex.next()[0]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expression:
        e = self.factor()
        while True:
            tok = self.lex.peek()
            if tok[0] == "*":
                self.lex.next()
                e = e * self.factor()
            elif tok[0] in self._FACTOR_STARTS:
                e = e * self.factor()
            else:
                return e

    def factor(self) -> Expression:
        tok = self.lex.peek()
        if tok[0] == "-":
            self.lex.next()
            return -self.factor()
        if tok[0] == "number":
            self.lex.next()
            try:
                return Expression.scalar(Fraction(tok[1]))
            except ZeroDivisionError:
                raise ParseError("zero denominator", tok[2]) from None
        if tok[0] == "name":
            self.lex.next()
            if tok[1] == "i":
                return Expression.scalar(I)
            if self.lex.peek()[0] != "[":
                raise ParseError(f"generator {tok[1]!r} needs [indices]", tok[2])
            self.lex.next()
            indices = [int(self.lex.expect("number")[1])]
            while self.lex.peek()[0] == ",":
                self.lex.next()
                indices.append(int(self.lex.expect("number")[1]))
            self.lex.expect("]")
            return self._generator(tok[1], tuple(indices), tok[2])
        if tok[0] == "(":
            self.lex.next()
            e = self.expr()
            self.lex.expect(")")
            return e
        if tok[0] == "[":
            self.lex.next()
            a = self.expr()
            self.lex.expect(",")
            b = self.expr()
            self.lex.expect("]")
            if self.table is None:
                raise ParseError("bracket [a, b] needs a bracket table", tok[2])
            return bracket(
                normal_form(a, self.table), normal_form(b, self.table), self.table
            )
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])

    def _generator(self, name: str, indices: tuple[int, ...], pos: int) -> Expression:
        if name in ("theta", "pi"):
            if len(indices) != 2 or indices[0] == indices[1]:
                raise ParseError(f"{name} needs two distinct indices", pos)
            i, j = indices
            if i > j:
                return -Expression.generator(Generator(name, (j, i)))
            return Expression.generator(Generator(name, (i, j)))
        if len(indices) != 1:
            raise ParseError(f"{name} takes one index", pos)
        return Expression.generator(Generator(name, indices))


def parse_expression(text: str, table: BracketTable | None = None) -> Expression:
    """Parse the textual syntax; brackets [a, b] evaluate against `table`."""
    return _Parser(_Lexer(text), table).parse()
