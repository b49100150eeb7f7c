"""Words over a finite alphabet {1..N}: the index set for everything else.

A word is a finite string of letters from {1..N}; the empty word is the
identity for concatenation.  Words are ordered graded-lexicographically
(shorter first, then letterwise), which is the order used for every matrix
row/column in this package.  ``rank``/``graded_rank`` turn that order into
array indices.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

#: refuse to materialize enumerations larger than this (override per call)
DEFAULT_ENUMERATION_CAP = 10**6


@functools.total_ordering
@dataclass(frozen=True)
class Word:
    """A word over the alphabet {1..alphabet}; ``letters`` may be empty."""

    letters: tuple[int, ...]
    alphabet: int

    def __post_init__(self):
        if self.alphabet < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.alphabet}")
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))
        for c in self.letters:
            if not (1 <= c <= self.alphabet):
                raise ValueError(f"letter {c} outside alphabet 1..{self.alphabet}")

    @classmethod
    def empty(cls, alphabet: int) -> "Word":
        return cls((), alphabet)

    @classmethod
    def of(cls, letters: Sequence[int], alphabet: int) -> "Word":
        return cls(tuple(letters), alphabet)

    def __len__(self) -> int:
        return len(self.letters)

    def __repr__(self) -> str:
        body = "".join(str(c) for c in self.letters) if self.letters else "e"
        return f"Word({body}; N={self.alphabet})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters and self.alphabet == other.alphabet

    def __hash__(self) -> int:
        return hash((self.letters, self.alphabet))

    def __lt__(self, other: "Word") -> bool:
        return compare(self, other) < 0

    @property
    def is_empty(self) -> bool:
        return not self.letters

    def concat(self, other: "Word") -> "Word":
        if self.alphabet != other.alphabet:
            raise ValueError("cannot concatenate words over different alphabets")
        return Word(self.letters + other.letters, self.alphabet)

    def involute(self) -> "Word":
        """Reverse the word: the involution I(i_1...i_l) = i_l...i_1."""
        return Word(self.letters[::-1], self.alphabet)

    def leading_run(self, k: int) -> int:
        """Length of the initial run of letter ``k`` (0 if the word starts otherwise)."""
        if not (1 <= k <= self.alphabet):
            raise ValueError(f"letter {k} outside alphabet 1..{self.alphabet}")
        p = 0
        for c in self.letters:
            if c != k:
                break
            p += 1
        return p

    def blocks(self) -> "BlockForm":
        return block_decompose(self)

    def rank(self) -> int:
        """0-based position of this word among all words of the same length."""
        r = 0
        for c in self.letters:
            r = r * self.alphabet + (c - 1)
        return r


@dataclass(frozen=True)
class BlockForm:
    """Maximal-run factorization w = k_1^{e_1} ... k_p^{e_p}, adjacent letters distinct."""

    blocks: tuple[tuple[int, int], ...]
    alphabet: int

    def __post_init__(self):
        for i, (letter, exp) in enumerate(self.blocks):
            if not (1 <= letter <= self.alphabet):
                raise ValueError(f"block letter {letter} outside alphabet")
            if exp < 1:
                raise ValueError(f"block exponent must be positive, got {exp}")
            if i > 0 and self.blocks[i - 1][0] == letter:
                raise ValueError("adjacent blocks must carry distinct letters")

    def __len__(self) -> int:
        return len(self.blocks)

    def expand(self) -> Word:
        letters: list[int] = []
        for letter, exp in self.blocks:
            letters.extend([letter] * exp)
        return Word(tuple(letters), self.alphabet)


def compare(a: Word, b: Word) -> int:
    """Graded lexicographic comparison: -1, 0, or +1.

    Shorter words come first; equal lengths are compared letterwise.
    """
    if a.alphabet != b.alphabet:
        raise ValueError(
            f"cannot compare words over different alphabets ({a.alphabet} vs {b.alphabet})"
        )
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    if a.letters == b.letters:
        return 0
    return -1 if a.letters < b.letters else 1


def enumerate_words(
    alphabet: int, length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[Word]:
    """All alphabet**length words of the given length, in graded-lex order."""
    if alphabet < 1:
        raise ValueError("alphabet size must be >= 1")
    if length < 0:
        raise ValueError("length must be >= 0")
    count = alphabet**length
    if count > cap:
        raise ValueError(
            f"enumeration of {count} words exceeds cap {cap}; raise `cap` to force"
        )
    return [
        Word(letters, alphabet)
        for letters in itertools.product(range(1, alphabet + 1), repeat=length)
    ]


def iter_words_up_to(
    alphabet: int, max_length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Word]:
    for n in range(max_length + 1):
        yield from enumerate_words(alphabet, n, cap=cap)


def words_up_to(
    alphabet: int, max_length: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[Word]:
    """All words of length <= max_length in graded-lex order."""
    total = sum(alphabet**n for n in range(max_length + 1))
    if total > cap:
        raise ValueError(
            f"enumeration of {total} words exceeds cap {cap}; raise `cap` to force"
        )
    return list(iter_words_up_to(alphabet, max_length, cap=cap))


def graded_rank(w: Word) -> int:
    """0-based position of ``w`` among all words, in graded-lex order."""
    offset = sum(w.alphabet**n for n in range(len(w)))
    return offset + w.rank()


def block_decompose(w: Word) -> BlockForm:
    """Unique factorization into maximal runs; rejects the empty word."""
    if w.is_empty:
        raise ValueError("the empty word has no block decomposition")
    blocks: list[tuple[int, int]] = []
    current = w.letters[0]
    count = 0
    for c in w.letters:
        if c == current:
            count += 1
        else:
            blocks.append((current, count))
            current, count = c, 1
    blocks.append((current, count))
    return BlockForm(tuple(blocks), w.alphabet)


def leading_run(w: Word, k: int) -> int:
    return w.leading_run(k)


def word_to_json(w: Word) -> list[int]:
    return list(w.letters)


def word_from_json(obj: Sequence[int], alphabet: int) -> Word:
    return Word(tuple(int(c) for c in obj), alphabet)
