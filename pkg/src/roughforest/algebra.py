"""Exact rational linear algebra over graded bases: words, series, functionals.

Coefficients are `fractions.Fraction` throughout; floating point never enters
this layer.  Basis elements only need a `degree` attribute, a stable string
form and hashability, so the same series type serves words and forests.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable, Iterable, Iterator

Rational = Fraction

#: A letter is a base-alphabet index, or a sorted tuple of base indices for a
#: semigroup-sum ("contracted") letter.  Weight = number of base indices.
Letter = int | tuple[int, ...]

MAX_ALPHABET = 26  # letters render as 'a'..'z'


class AlgebraError(ValueError):
    pass


def letter_weight(a: Letter) -> int:
    return 1 if isinstance(a, int) else len(a)


def letter_indices(a: Letter) -> tuple[int, ...]:
    """Multiset of base indices carried by the letter."""
    return (a,) if isinstance(a, int) else a


def render_letter(a: Letter) -> str:
    if isinstance(a, int):
        if not 0 <= a < MAX_ALPHABET:
            raise AlgebraError(f"letter index {a} outside 'a'..'z'")
        return chr(ord("a") + a)
    return "[" + "+".join(chr(ord("a") + i) for i in a) + "]"


def check_letter(a: Letter, d: int) -> None:
    for i in letter_indices(a):
        if not 0 <= i < d:
            raise AlgebraError(f"letter {render_letter(a)} outside alphabet of size {d}")
    if not isinstance(a, int) and (len(a) < 2 or tuple(sorted(a)) != a):
        raise AlgebraError(f"malformed contracted letter {a!r}")


def sum_letters(a: Letter, b: Letter) -> Letter:
    """Free abelian semigroup sum: merge the base-index multisets."""
    return tuple(sorted(letter_indices(a) + letter_indices(b)))


class Semigroup:
    """Abelian semigroup on letters; `add` may raise on undefined sums."""

    def add(self, a: Letter, b: Letter) -> Letter:
        raise NotImplementedError


class FreeSemigroup(Semigroup):
    """Sums are multisets of base letters; always defined, weight-additive."""

    def add(self, a: Letter, b: Letter) -> Letter:
        return sum_letters(a, b)


class TableSemigroup(Semigroup):
    """Finite semigroup given by a table on base letters."""

    def __init__(self, table: dict[tuple[int, int], int]):
        self.table = dict(table)

    def add(self, a: Letter, b: Letter) -> Letter:
        if not (isinstance(a, int) and isinstance(b, int)):
            raise AlgebraError("table semigroup only sums base letters")
        try:
            return self.table[(a, b)] if (a, b) in self.table else self.table[(b, a)]
        except KeyError:
            raise AlgebraError(
                f"semigroup sum undefined for {render_letter(a)},{render_letter(b)}"
            ) from None


class Word:
    """A word over the alphabet; degree is the total letter weight."""

    __slots__ = ("letters", "degree", "_str", "_hash")

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters: tuple[Letter, ...] = tuple(letters)
        self.degree = sum(letter_weight(a) for a in self.letters)
        self._str = "".join(render_letter(a) for a in self.letters)
        self._hash = hash(("W", self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._str if self.letters else "1"

    def __repr__(self) -> str:
        return f"Word({self})"

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def reverse(self) -> "Word":
        return Word(tuple(reversed(self.letters)))

    @staticmethod
    def parse(text: str, d: int = MAX_ALPHABET) -> "Word":
        letters: list[Letter] = []
        i = 0
        while i < len(text):
            c = text[i]
            if c == "[":
                j = text.find("]", i)
                if j < 0:
                    raise AlgebraError(f"unbalanced '[' at position {i}")
                parts = text[i + 1 : j].split("+")
                idx = tuple(sorted(_char_index(p.strip(), i) for p in parts))
                if len(idx) < 2:
                    raise AlgebraError(f"contracted letter needs >=2 summands at {i}")
                letters.append(idx)
                i = j + 1
            else:
                letters.append(_char_index(c, i))
                i += 1
        w = Word(letters)
        for a in w:
            check_letter(a, d)
        return w


def _char_index(c: str, pos: int) -> int:
    if len(c) != 1 or not ("a" <= c <= "z"):
        raise AlgebraError(f"expected a letter 'a'..'z' at position {pos}, got {c!r}")
    return ord(c) - ord("a")


def word(text: str, d: int = MAX_ALPHABET) -> Word:
    return Word.parse(text, d)


def sort_key(elem) -> tuple[int, str]:
    return (elem.degree, str(elem))


class GradedSeries:
    """Finite linear combination of graded basis elements, exact coefficients.

    Never stores zero coefficients; supports +, -, scalar scaling, extraction
    of homogeneous components, and linear maps of the basis.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs: dict = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.coeffs[k] = v

    @staticmethod
    def term(elem, coeff=1) -> "GradedSeries":
        return GradedSeries({elem: Fraction(coeff)})

    @staticmethod
    def zero() -> "GradedSeries":
        return GradedSeries()

    def items(self) -> list:
        return sorted(self.coeffs.items(), key=lambda kv: sort_key(kv[0]))

    def support(self) -> list:
        return sorted(self.coeffs, key=sort_key)

    def coeff(self, elem) -> Fraction:
        return self.coeffs.get(elem, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        s = GradedSeries()
        s.coeffs = out
        return s

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        return self + other.scale(-1)

    def __neg__(self) -> "GradedSeries":
        return self.scale(-1)

    def scale(self, c) -> "GradedSeries":
        c = Fraction(c)
        if not c:
            return GradedSeries()
        s = GradedSeries()
        s.coeffs = {k: c * v for k, v in self.coeffs.items()}
        return s

    def add_term(self, elem, coeff) -> "GradedSeries":
        return self + GradedSeries.term(elem, coeff)

    def component(self, n: int) -> "GradedSeries":
        return GradedSeries({k: v for k, v in self.coeffs.items() if k.degree == n})

    def max_degree(self) -> int:
        return max((k.degree for k in self.coeffs), default=0)

    def map_basis(self, fn: Callable) -> "GradedSeries":
        """Linear extension of a basis map `fn: elem -> GradedSeries`."""
        out = GradedSeries()
        for k, v in self.coeffs.items():
            out = out + fn(k).scale(v)
        return out

    def total_mass(self) -> Fraction:
        return sum(self.coeffs.values(), Fraction(0))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for elem, c in self.items():
            body = str(elem)
            if c == 1:
                chunk = body
            elif c == -1:
                chunk = f"-{body}"
            else:
                chunk = f"{c}*{body}"
            if not parts:
                parts.append(chunk)
            elif chunk.startswith("-"):
                parts.append(f"- {chunk[1:]}")
            else:
                parts.append(f"+ {chunk}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"GradedSeries({self})"

    def to_json(self, basis: str) -> str:
        terms = [
            {"elem": str(k), "num": str(v.numerator), "den": str(v.denominator)}
            for k, v in self.items()
        ]
        return json.dumps({"basis": basis, "terms": terms})

    @staticmethod
    def from_json(text: str, parse_elem: Callable[[str], object]) -> "GradedSeries":
        data = json.loads(text)
        out = GradedSeries()
        for t in data["terms"]:
            c = Fraction(int(t["num"]), int(t["den"]))
            out = out + GradedSeries.term(parse_elem(t["elem"]), c)
        return out


class TensorSeries:
    """Finite linear combination of pairs (left, right) of basis elements."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs: dict = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v:
                    self.coeffs[k] = v

    @staticmethod
    def term(left, right, coeff=1) -> "TensorSeries":
        return TensorSeries({(left, right): Fraction(coeff)})

    def items(self) -> list:
        return sorted(
            self.coeffs.items(),
            key=lambda kv: (sort_key(kv[0][0]), sort_key(kv[0][1])),
        )

    def coeff(self, left, right) -> Fraction:
        return self.coeffs.get((left, right), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorSeries) and self.coeffs == other.coeffs

    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            w = out.get(k, 0) + v
            if w:
                out[k] = w
            else:
                out.pop(k, None)
        t = TensorSeries()
        t.coeffs = out
        return t

    def __sub__(self, other: "TensorSeries") -> "TensorSeries":
        return self + other.scale(-1)

    def scale(self, c) -> "TensorSeries":
        c = Fraction(c)
        t = TensorSeries()
        if c:
            t.coeffs = {k: c * v for k, v in self.coeffs.items()}
        return t

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = [
            (f"{c}*" if c != 1 else "") + f"{l} (x) {r}" for (l, r), c in self.items()
        ]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TensorSeries({self})"


class LinearFunctional:
    """Rule basis element -> value, defined up to a degree cap."""

    def __init__(self, fn: Callable, cap: int, name: str = ""):
        self._fn = fn
        self.cap = cap
        self.name = name

    def __call__(self, elem):
        if elem.degree > self.cap:
            raise AlgebraError(
                f"functional {self.name or '<anon>'} capped at degree {self.cap}, "
                f"got degree {elem.degree}"
            )
        return self._fn(elem)

    def pair(self, series: GradedSeries):
        """<phi, s> extended linearly; exact when values are Fractions."""
        total = 0
        for elem, c in series.coeffs.items():
            total = total + c * self(elem)
        return total


def pair(functional: LinearFunctional, series: GradedSeries):
    return functional.pair(series)
