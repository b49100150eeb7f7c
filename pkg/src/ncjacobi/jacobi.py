"""Admissible coefficient families and their block-tridiagonal operators.

A family holds, for each letter k, the blocks A_{n,k} (size N^n x N^{n-1})
and B_{n,k} (size N^n x N^n) of the three-term recurrence.  Admissibility:
every B block is symmetric and the per-level concatenation
[A_{n,1} ... A_{n,N}] is upper triangular with strictly positive diagonal
(rows and columns both indexed by length-n words in graded-lex order).

The letter operators J_k are symmetric block-tridiagonal; moments of the
induced functional are corner entries of operator products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .functional import MomentFunctional, NotStrictlyPositiveError
from .words import Word, enumerate_words

DEFAULT_VALIDATE_TOL = 1e-12


@dataclass(eq=False)
class AdmissibleFamily:
    """Blocks A[(n,k)] for n in 1..depth and B[(n,k)] for n in 0..depth."""

    alphabet: int
    depth: int
    A: dict[tuple[int, int], np.ndarray]
    B: dict[tuple[int, int], np.ndarray]

    def __post_init__(self):
        if self.alphabet < 1:
            raise ValueError("alphabet size must be >= 1")
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        N = self.alphabet
        A = {}
        for n in range(1, self.depth + 1):
            for k in range(1, N + 1):
                if (n, k) not in self.A:
                    raise ValueError(f"missing block A[{n},{k}]")
                m = np.asarray(self.A[(n, k)], dtype=float)
                if m.shape != (N**n, N ** (n - 1)):
                    raise ValueError(
                        f"A[{n},{k}] has shape {m.shape}, expected {(N**n, N**(n-1))}"
                    )
                A[(n, k)] = m
        B = {}
        for n in range(0, self.depth + 1):
            for k in range(1, N + 1):
                if (n, k) not in self.B:
                    raise ValueError(f"missing block B[{n},{k}]")
                m = np.asarray(self.B[(n, k)], dtype=float)
                if m.shape != (N**n, N**n):
                    raise ValueError(
                        f"B[{n},{k}] has shape {m.shape}, expected {(N**n, N**n)}"
                    )
                B[(n, k)] = m
        extra_a = set(self.A) - set(A)
        extra_b = set(self.B) - set(B)
        if extra_a or extra_b:
            raise ValueError(f"blocks outside depth range: {sorted(extra_a | extra_b)}")
        self.A = A
        self.B = B

    def concat_A(self, n: int) -> np.ndarray:
        """[A_{n,1} ... A_{n,N}]: square, with columns ordered like length-n words."""
        return np.hstack([self.A[(n, k)] for k in range(1, self.alphabet + 1)])

    def blocks_close(self, other: "AdmissibleFamily", depth: int | None = None) -> float:
        """Max absolute entrywise difference over all blocks up to ``depth``."""
        depth = min(self.depth, other.depth) if depth is None else depth
        worst = 0.0
        for n in range(1, depth + 1):
            for k in range(1, self.alphabet + 1):
                worst = max(worst, float(np.max(np.abs(self.A[(n, k)] - other.A[(n, k)]))))
        for n in range(0, depth + 1):
            for k in range(1, self.alphabet + 1):
                worst = max(worst, float(np.max(np.abs(self.B[(n, k)] - other.B[(n, k)]))))
        return worst

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "N": self.alphabet,
            "depth": self.depth,
            "A": [
                {"n": n, "k": k, "rows": self.A[(n, k)].tolist()}
                for n in range(1, self.depth + 1)
                for k in range(1, self.alphabet + 1)
            ],
            "B": [
                {"n": n, "k": k, "rows": self.B[(n, k)].tolist()}
                for n in range(0, self.depth + 1)
                for k in range(1, self.alphabet + 1)
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "AdmissibleFamily":
        N = int(obj["N"])
        depth = int(obj["depth"])
        A = {}
        for entry in obj["A"]:
            key = (int(entry["n"]), int(entry["k"]))
            if key in A:
                raise ValueError(f"duplicate A block for (n,k)={key}")
            A[key] = np.array(entry["rows"], dtype=float)
        B = {}
        for entry in obj["B"]:
            key = (int(entry["n"]), int(entry["k"]))
            if key in B:
                raise ValueError(f"duplicate B block for (n,k)={key}")
            B[key] = np.array(entry["rows"], dtype=float)
        return cls(N, depth, A, B)


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


@dataclass
class TruncatedOperator:
    """J_k cut after level L: symmetric, block-tridiagonal, dim = sum N^j, j<=L."""

    letter: int
    level: int
    matrix: np.ndarray


def validate(
    family: AdmissibleFamily, tol: float = DEFAULT_VALIDATE_TOL
) -> ValidationReport:
    """Check symmetry of B blocks and triangularity/positivity of each A_n."""
    violations: list[str] = []
    N = family.alphabet
    for n in range(0, family.depth + 1):
        for k in range(1, N + 1):
            b = family.B[(n, k)]
            if np.max(np.abs(b - b.T), initial=0.0) > tol:
                violations.append(f"B[{n},{k}] not symmetric")
    for n in range(1, family.depth + 1):
        a = family.concat_A(n)
        below = np.tril(a, k=-1)
        if np.max(np.abs(below), initial=0.0) > tol:
            violations.append(f"A_{n} = [A_{n},1 .. A_{n},{N}] not upper triangular")
        if np.min(np.diag(a)) <= tol:
            violations.append(f"A_{n} diagonal not strictly positive")
    return ValidationReport(ok=not violations, violations=violations)


def level_offsets(alphabet: int, level: int) -> list[int]:
    """Start index of each level block in the stacked coordinates, plus the total."""
    offs = [0]
    for j in range(level + 1):
        offs.append(offs[-1] + alphabet**j)
    return offs


def _truncation(family: AdmissibleFamily, k: int, level: int) -> np.ndarray:
    # families are immutable by convention, so sections are built once each
    cache = family.__dict__.setdefault("_section_cache", {})
    key = (k, level)
    if key in cache:
        return cache[key]
    offs = level_offsets(family.alphabet, level)
    dim = offs[-1]
    m = np.zeros((dim, dim))
    for n in range(level + 1):
        sl = slice(offs[n], offs[n + 1])
        m[sl, sl] = family.B[(n, k)]
    for n in range(1, level + 1):
        lo = slice(offs[n], offs[n + 1])
        hi = slice(offs[n - 1], offs[n])
        m[lo, hi] = family.A[(n, k)]
        m[hi, lo] = family.A[(n, k)].T
    cache[key] = m
    return m


def truncate(family: AdmissibleFamily, k: int, level: int) -> TruncatedOperator:
    """Finite section of J_k through level blocks 0..level."""
    if not (1 <= k <= family.alphabet):
        raise ValueError(f"letter {k} outside alphabet 1..{family.alphabet}")
    if level > family.depth:
        raise ValueError(f"level {level} exceeds family depth {family.depth}")
    if level < 0:
        raise ValueError("level must be >= 0")
    return TruncatedOperator(letter=k, level=level, matrix=_truncation(family, k, level))


def operator_moment(family: AdmissibleFamily, sigma: Word, level: int | None = None) -> float:
    """<J_sigma e0, e0> computed on a finite section.

    The section level defaults to min(floor(|sigma|/2) + 1, depth); any level
    >= floor(|sigma|/2) gives the exact value, since a product of |sigma|
    tridiagonal factors cannot return to level 0 from higher up.
    """
    if sigma.alphabet != family.alphabet:
        raise ValueError("word alphabet does not match family")
    n = len(sigma)
    if n == 0:
        return 1.0
    minimal = n // 2
    if level is None:
        level = min(minimal + 1, family.depth)
    if level < minimal:
        raise ValueError(
            f"section level {level} below exact bound {minimal} for |sigma|={n}"
        )
    if family.depth < level:
        raise ValueError(f"family depth {family.depth} insufficient for level {level}")
    dim = level_offsets(family.alphabet, level)[-1]
    v = np.zeros(dim)
    v[0] = 1.0
    for k in reversed(sigma.letters):
        v = _truncation(family, k, level) @ v
    return float(v[0])


def favard_moments(
    family: AdmissibleFamily,
    degree: int,
    tol: float = 1e-10,
    check_positive: bool = True,
) -> MomentFunctional:
    """Moment table of the functional determined by the family.

    Covers every word of length <= 2*degree + 1 (the odd top level is what the
    family's deepest diagonal-correction blocks show up in).  Word reversal
    symmetry holds exactly: each reversal orbit is evaluated once.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if family.depth < degree:
        raise ValueError(
            f"family depth {family.depth} cannot determine degree-{degree} moments"
        )
    table: dict[Word, float] = {Word.empty(family.alphabet): 1.0}
    for n in range(1, 2 * degree + 2):
        for w in enumerate_words(family.alphabet, n):
            if w in table:
                continue
            val = operator_moment(family, w)
            table[w] = val
            table[w.involute()] = val
    phi = MomentFunctional(family.alphabet, degree, table)
    if check_positive and not phi.is_strictly_positive(degree, tol=tol):
        raise NotStrictlyPositiveError(
            f"moments of an admissible family failed strict positivity at degree "
            f"{degree} (tol {tol}); the family data is inconsistent"
        )
    return phi


def random_admissible_family(
    alphabet: int, depth: int, seed: int | np.random.Generator = 0
) -> AdmissibleFamily:
    """Seeded random family: A_n upper triangular with diag in [0.5, 2] and
    strict upper part in [-1, 1]; B blocks S + S^T with S entries in [-1, 1]."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    N = alphabet
    A: dict[tuple[int, int], np.ndarray] = {}
    B: dict[tuple[int, int], np.ndarray] = {}
    for n in range(1, depth + 1):
        dim = N**n
        m = np.triu(rng.uniform(-1.0, 1.0, size=(dim, dim)), k=1)
        np.fill_diagonal(m, rng.uniform(0.5, 2.0, size=dim))
        cols = N ** (n - 1)
        for k in range(1, N + 1):
            A[(n, k)] = m[:, (k - 1) * cols : k * cols]
    for n in range(0, depth + 1):
        dim = N**n
        for k in range(1, N + 1):
            s = rng.uniform(-1.0, 1.0, size=(dim, dim))
            B[(n, k)] = s + s.T
    return AdmissibleFamily(alphabet, depth, A, B)
