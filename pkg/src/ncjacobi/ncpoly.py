"""Real polynomials in N non-commuting indeterminates.

A polynomial is a finitely supported map from words to real coefficients;
multiplication extends concatenation of words bilinearly, and ``adjoint``
reverses every word (real coefficients are untouched).  Terms are stored
grouped by degree so homogeneous components come out for free.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .words import Word


class NcPolynomial:
    """Immutable polynomial over words; zero coefficients are never stored."""

    __slots__ = ("alphabet", "_by_degree")

    def __init__(self, alphabet: int, terms: Mapping[Word, float] | None = None):
        if alphabet < 1:
            raise ValueError("alphabet size must be >= 1")
        by_degree: dict[int, dict[Word, float]] = {}
        if terms:
            for w, c in terms.items():
                if w.alphabet != alphabet:
                    raise ValueError("term word alphabet does not match polynomial")
                c = float(c)
                if c == 0.0:
                    continue
                by_degree.setdefault(len(w), {})[w] = c
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "_by_degree", by_degree)

    def __setattr__(self, name, value):
        raise AttributeError("NcPolynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: int) -> "NcPolynomial":
        return cls(alphabet)

    @classmethod
    def constant(cls, alphabet: int, value: float) -> "NcPolynomial":
        return cls(alphabet, {Word.empty(alphabet): float(value)})

    @classmethod
    def one(cls, alphabet: int) -> "NcPolynomial":
        return cls.constant(alphabet, 1.0)

    @classmethod
    def monomial(cls, word: Word, coeff: float = 1.0) -> "NcPolynomial":
        return cls(word.alphabet, {word: float(coeff)})

    @classmethod
    def variable(cls, alphabet: int, k: int) -> "NcPolynomial":
        """The generator X_k."""
        return cls.monomial(Word((k,), alphabet))

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._by_degree

    def degree(self) -> int:
        """Largest word length in the support; -1 for the zero polynomial."""
        if not self._by_degree:
            return -1
        return max(self._by_degree)

    def coefficient(self, word: Word) -> float:
        return self._by_degree.get(len(word), {}).get(word, 0.0)

    def support(self) -> list[Word]:
        return sorted(w for d in self._by_degree.values() for w in d)

    def terms(self) -> Iterator[tuple[Word, float]]:
        for w in self.support():
            yield w, self.coefficient(w)

    def homogeneous_part(self, degree: int) -> "NcPolynomial":
        return NcPolynomial(self.alphabet, self._by_degree.get(degree, {}))

    def max_abs_coefficient(self) -> float:
        return max(
            (abs(c) for d in self._by_degree.values() for c in d.values()),
            default=0.0,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return self.alphabet == other.alphabet and self._by_degree == other._by_degree

    def __hash__(self):
        return hash(
            (
                self.alphabet,
                frozenset((w, c) for d in self._by_degree.values() for w, c in d.items()),
            )
        )

    def __repr__(self) -> str:
        if self.is_zero():
            return "NcPolynomial(0)"
        bits = []
        for w, c in self.terms():
            mon = "" if w.is_empty else "X" + "X".join(str(ch) for ch in w.letters)
            bits.append(f"{c:g}{mon}" if mon else f"{c:g}")
        return "NcPolynomial(" + " + ".join(bits) + ")"

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "NcPolynomial"):
        if self.alphabet != other.alphabet:
            raise ValueError("polynomials live over different alphabets")

    def __add__(self, other) -> "NcPolynomial":
        if isinstance(other, (int, float)):
            other = NcPolynomial.constant(self.alphabet, other)
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        self._check(other)
        acc: dict[Word, float] = {}
        for poly in (self, other):
            for d in poly._by_degree.values():
                for w, c in d.items():
                    acc[w] = acc.get(w, 0.0) + c
        return NcPolynomial(self.alphabet, acc)

    __radd__ = __add__

    def __neg__(self) -> "NcPolynomial":
        return NcPolynomial(
            self.alphabet,
            {w: -c for d in self._by_degree.values() for w, c in d.items()},
        )

    def __sub__(self, other) -> "NcPolynomial":
        if isinstance(other, (int, float)):
            other = NcPolynomial.constant(self.alphabet, other)
        return self + (-other)

    def __rsub__(self, other) -> "NcPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "NcPolynomial":
        if isinstance(other, (int, float)):
            return self.scale(other)
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        self._check(other)
        acc: dict[Word, float] = {}
        for d1 in self._by_degree.values():
            for w1, c1 in d1.items():
                for d2 in other._by_degree.values():
                    for w2, c2 in d2.items():
                        w = w1.concat(w2)
                        acc[w] = acc.get(w, 0.0) + c1 * c2
        return NcPolynomial(self.alphabet, acc)

    def __rmul__(self, other) -> "NcPolynomial":
        if isinstance(other, (int, float)):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor: float) -> "NcPolynomial":
        factor = float(factor)
        return NcPolynomial(
            self.alphabet,
            {w: factor * c for d in self._by_degree.values() for w, c in d.items()},
        )

    def adjoint(self) -> "NcPolynomial":
        """Reverse every word in the support; an anti-automorphism of order 2."""
        return NcPolynomial(
            self.alphabet,
            {w.involute(): c for d in self._by_degree.values() for w, c in d.items()},
        )

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> list[dict]:
        return [{"word": list(w.letters), "coeff": c} for w, c in self.terms()]

    @classmethod
    def from_json_obj(cls, alphabet: int, obj: Iterable[Mapping]) -> "NcPolynomial":
        acc: dict[Word, float] = {}
        for entry in obj:
            w = Word(tuple(int(c) for c in entry["word"]), alphabet)
            acc[w] = acc.get(w, 0.0) + float(entry["coeff"])
        return cls(alphabet, acc)
