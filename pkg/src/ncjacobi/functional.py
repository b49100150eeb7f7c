"""Moment functionals, the induced Hankel-type kernel, and Gram positivity.

A moment functional is a unital linear map on the polynomial algebra, stored
as a dense table s_w over all words up to a length bound.  The kernel
K(a, b) = s_{I(a)b} is of Hankel type: K(aw, t) = K(w, I(a)t) holds
identically.  Strict positivity is certified through the pivots of a
symmetric triangular factorization of the Gram matrix of monomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .ncpoly import NcPolynomial
from .words import Word, block_decompose, enumerate_words, graded_rank, words_up_to

DEFAULT_POSITIVITY_TOL = 1e-10
DEFAULT_SYMMETRY_TOL = 1e-12


class NotStrictlyPositiveError(ValueError):
    """A Gram pivot fell below tolerance where strict positivity was required."""


def upper_cholesky(mat: np.ndarray, tol: float = DEFAULT_POSITIVITY_TOL):
    """Factor a symmetric matrix as R^T R with R upper triangular, diag(R) > 0.

    Returns ``(R, pivots, completed)``.  ``pivots`` are the successive Schur
    complements of the diagonal (the LDL^T diagonal); the factorization stops
    at the first pivot <= tol, in which case ``R`` is None and ``completed``
    is False.
    """
    a = np.asarray(mat, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    r = np.zeros((n, n))
    pivots: list[float] = []
    for j in range(n):
        d = a[j, j] - r[:j, j] @ r[:j, j]
        pivots.append(float(d))
        if d <= tol:
            return None, pivots, False
        r[j, j] = math.sqrt(d)
        r[j, j + 1 :] = (a[j, j + 1 :] - r[:j, j] @ r[:j, j + 1 :]) / r[j, j]
    return r, pivots, True


@dataclass
class GramReport:
    """Gram matrix of monomials up to a degree, with its positivity verdict."""

    degree: int
    words: list[Word]
    gram: np.ndarray
    pivots: list[float]
    min_pivot: float
    positive: bool


@dataclass
class HankelReport:
    ok: bool
    violations: list[tuple[Word, Word, Word]] = field(default_factory=list)


class MomentFunctional:
    """Dense moment table s_w for all |w| <= 2*max_degree (+ optional odd top).

    The table must be unital (s_empty = 1) and symmetric under word reversal.
    A complete extra level of length 2*max_degree + 1 may be present; it is
    what makes the top diagonal-correction blocks recoverable from moments.
    """

    def __init__(
        self,
        alphabet: int,
        max_degree: int,
        moments: Mapping[Word, float],
        symmetry_tol: float = DEFAULT_SYMMETRY_TOL,
    ):
        if alphabet < 1:
            raise ValueError("alphabet size must be >= 1")
        if max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        self.alphabet = alphabet
        self.max_degree = max_degree
        table: dict[Word, float] = {}
        for w, v in moments.items():
            if w.alphabet != alphabet:
                raise ValueError(f"word {w} has alphabet {w.alphabet}, expected {alphabet}")
            table[w] = float(v)

        even_bound = 2 * max_degree
        for n in range(even_bound + 1):
            for w in enumerate_words(alphabet, n):
                if w not in table:
                    raise ValueError(f"moment table incomplete: missing word {w}")
        top = [w for w in table if len(w) > even_bound]
        if top:
            if any(len(w) != even_bound + 1 for w in top):
                raise ValueError(
                    f"moment table may extend at most one level past length {even_bound}"
                )
            expected = alphabet ** (even_bound + 1)
            if len(top) != expected:
                raise ValueError(
                    f"odd extension incomplete: {len(top)} of {expected} words of "
                    f"length {even_bound + 1} present"
                )
            self.word_bound = even_bound + 1
        else:
            self.word_bound = even_bound

        e = Word.empty(alphabet)
        if abs(table[e] - 1.0) > symmetry_tol:
            raise ValueError(f"functional is not unital: s_empty = {table[e]!r}")
        for w, v in table.items():
            rv = table[w.involute()]
            if abs(v - rv) > symmetry_tol * max(1.0, abs(v)):
                raise ValueError(
                    f"moment table not symmetric under reversal at {w}: {v} vs {rv}"
                )
        self._table = table

    # -- access ------------------------------------------------------------

    def moment(self, w: Word) -> float:
        try:
            return self._table[w]
        except KeyError:
            raise ValueError(
                f"word {w} of length {len(w)} beyond stored bound {self.word_bound}"
            ) from None

    def kernel_eval(self, alpha: Word, beta: Word) -> float:
        """K(alpha, beta) = s_{I(alpha) beta}."""
        if len(alpha) + len(beta) > self.word_bound:
            raise ValueError(
                f"kernel argument lengths {len(alpha)}+{len(beta)} exceed bound "
                f"{self.word_bound}"
            )
        return self.moment(alpha.involute().concat(beta))

    def apply(self, p: NcPolynomial) -> float:
        """Linear extension: sum of c_w * s_w over the support of p."""
        if p.alphabet != self.alphabet:
            raise ValueError("polynomial alphabet does not match functional")
        if p.degree() > self.word_bound:
            raise ValueError(
                f"polynomial degree {p.degree()} exceeds stored bound {self.word_bound}"
            )
        return float(sum(c * self._table[w] for w, c in p.terms()))

    def inner(self, p: NcPolynomial, q: NcPolynomial) -> float:
        """<p, q> = phi(q^+ p)."""
        return self.apply(q.adjoint() * p)

    # -- positivity --------------------------------------------------------

    def gram(self, degree: int, tol: float = DEFAULT_POSITIVITY_TOL) -> GramReport:
        """Gram matrix of all monomials of length <= degree, graded-lex order."""
        if degree > self.max_degree:
            raise ValueError(
                f"gram degree {degree} exceeds max_degree {self.max_degree}"
            )
        ws = words_up_to(self.alphabet, degree)
        m = len(ws)
        g = np.empty((m, m))
        for i, a in enumerate(ws):
            for j in range(i, m):
                b = ws[j]
                # <X_a, X_b> = s_{I(b) a}
                val = self.moment(b.involute().concat(a))
                g[i, j] = val
                g[j, i] = val
        _, pivots, completed = upper_cholesky(g, tol=tol)
        return GramReport(
            degree=degree,
            words=ws,
            gram=g,
            pivots=pivots,
            min_pivot=min(pivots),
            positive=completed,
        )

    def is_strictly_positive(
        self, degree: int, tol: float = DEFAULT_POSITIVITY_TOL
    ) -> bool:
        return self.gram(degree, tol=tol).positive

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> dict:
        entries = [
            {"word": list(w.letters), "value": v}
            for w, v in sorted(self._table.items(), key=lambda kv: graded_rank(kv[0]))
        ]
        return {
            "N": self.alphabet,
            "max_degree": self.max_degree,
            "moments": entries,
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "MomentFunctional":
        alphabet = int(obj["N"])
        max_degree = int(obj["max_degree"])
        table: dict[Word, float] = {}
        for entry in obj["moments"]:
            w = Word(tuple(int(c) for c in entry["word"]), alphabet)
            if w in table:
                raise ValueError(f"duplicate moment entry for word {w}")
            table[w] = float(entry["value"])
        return cls(alphabet, max_degree, table)


def hankel_check(
    raw: Mapping[tuple[Word, Word], float], alphabet: int, depth: int
) -> HankelReport:
    """Check K(aw, t) == K(w, I(a)t) exactly on a stored kernel table.

    ``raw`` must contain every pair with |first| + |second| <= depth.  Prefixes
    ``a`` run over single letters only: one-letter shifts generate the full
    invariance property by induction on |a|, and keep a planted defect from
    being reported more than once.  Violations are triples (a, w, t).
    """
    for la in range(depth + 1):
        for lb in range(depth + 1 - la):
            for a in enumerate_words(alphabet, la):
                for b in enumerate_words(alphabet, lb):
                    if (a, b) not in raw:
                        raise ValueError(f"kernel table incomplete: missing pair ({a}, {b})")
    violations: list[tuple[Word, Word, Word]] = []
    letters = enumerate_words(alphabet, 1)
    for ltot in range(1, depth + 1):
        for ls in range(ltot):
            lt = ltot - 1 - ls
            for alpha in letters:
                for sigma in enumerate_words(alphabet, ls):
                    for tau in enumerate_words(alphabet, lt):
                        lhs = raw[(alpha.concat(sigma), tau)]
                        rhs = raw[(sigma, alpha.involute().concat(tau))]
                        if lhs != rhs:
                            violations.append((alpha, sigma, tau))
    return HankelReport(ok=not violations, violations=violations)


def kernel_table(phi: MomentFunctional, depth: int) -> dict[tuple[Word, Word], float]:
    """Materialize K(a, b) for all pairs with |a| + |b| <= depth."""
    if depth > phi.word_bound:
        raise ValueError(f"depth {depth} exceeds stored bound {phi.word_bound}")
    out: dict[tuple[Word, Word], float] = {}
    for la in range(depth + 1):
        for lb in range(depth + 1 - la):
            for a in enumerate_words(phi.alphabet, la):
                for b in enumerate_words(phi.alphabet, lb):
                    out[(a, b)] = phi.kernel_eval(a, b)
    return out


def functional_free_product(
    parts: Sequence[MomentFunctional],
) -> MomentFunctional:
    """Free product of one-variable functionals, one per letter.

    On a word with maximal-run form k_1^{e_1}...k_p^{e_p} the moment is the
    product of the parts' moments part_{k_j}(X^{e_j}).  The result is unital
    and reversal-symmetric but in general not strictly positive.
    """
    if not parts:
        raise ValueError("free product needs at least one factor")
    for i, part in enumerate(parts):
        if part.alphabet != 1:
            raise ValueError(
                f"free product factors must be one-variable functionals; "
                f"factor {i + 1} has alphabet {part.alphabet}"
            )
    alphabet = len(parts)
    max_degree = min(part.max_degree for part in parts)
    bound = 2 * max_degree
    if all(part.word_bound >= bound + 1 for part in parts):
        bound += 1

    def part_moment(k: int, exp: int) -> float:
        return parts[k - 1].moment(Word((1,) * exp, 1))

    table: dict[Word, float] = {Word.empty(alphabet): 1.0}
    for n in range(1, bound + 1):
        for w in enumerate_words(alphabet, n):
            factors = sorted(block_decompose(w).blocks)
            val = 1.0
            for letter, exp in factors:
                val *= part_moment(letter, exp)
            table[w] = val
    return MomentFunctional(alphabet, max_degree, table)
