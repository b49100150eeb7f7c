"""Multivariable families assembled from one-variable recurrences.

Each letter gets a one-variable orthonormal recurrence x p_n = a_{n+1} p_{n+1}
+ b_n p_n + a_n p_{n-1}.  Multiplying the one-variable polynomials along the
maximal-run form of a word produces an orthonormal family in N non-commuting
variables, and its three-term blocks are explicit: per level, the diagonal
entry at word t of B_{n,k} is b at t's leading run of k, and A_{n,k} sends
column t to row kt with a at that run plus one.  The per-level concatenated
A matrix is diagonal with positive entries, so the family is admissible.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .jacobi import AdmissibleFamily
from .ncpoly import NcPolynomial
from .words import Word, block_decompose, enumerate_words


@dataclass(frozen=True)
class OneDimRecurrence:
    """Coefficients a_1..a_L (positive) and b_0..b_L of a one-variable recurrence."""

    label: str
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        if len(self.b) != len(self.a) + 1:
            raise ValueError(
                f"need one more b than a coefficients (b_0..b_L vs a_1..a_L); "
                f"got {len(self.a)} a's and {len(self.b)} b's"
            )
        for i, x in enumerate(self.a, start=1):
            if x <= 0.0:
                raise ValueError(f"off-diagonal coefficient a_{i} = {x} must be > 0")

    @property
    def length(self) -> int:
        return len(self.a)

    def a_at(self, n: int) -> float:
        if not (1 <= n <= self.length):
            raise ValueError(f"a_{n} unavailable (stored 1..{self.length})")
        return self.a[n - 1]

    def b_at(self, n: int) -> float:
        if not (0 <= n <= self.length):
            raise ValueError(f"b_{n} unavailable (stored 0..{self.length})")
        return self.b[n]

    @classmethod
    def from_json_obj(cls, obj: Mapping, label: str = "custom") -> "OneDimRecurrence":
        return cls(label=label, a=tuple(obj["a"]), b=tuple(obj["b"]))


CLASSICAL_KINDS = ("hermite", "chebyshev_t", "legendre", "laguerre")


def classical_coefficients(
    kind: str, n_max: int, alpha: float | None = None
) -> OneDimRecurrence:
    """Orthonormal recurrence coefficients of the classical one-variable families.

    hermite: standard normal weight, a_n = sqrt(n), b = 0.
    chebyshev_t: arcsine weight on (-1,1), a_1 = 1/sqrt(2), a_n = 1/2, b = 0.
    legendre: uniform weight on [-1,1], a_n = n / sqrt((2n-1)(2n+1)), b = 0.
    laguerre: weight x^alpha e^{-x} on (0,inf), a_n = sqrt(n(n+alpha)),
        b_n = 2n + 1 + alpha; requires alpha > -1 (default 0).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ns = range(1, n_max + 1)
    if kind == "hermite":
        a = [math.sqrt(n) for n in ns]
        b = [0.0] * (n_max + 1)
    elif kind == "chebyshev_t":
        a = [1.0 / math.sqrt(2.0)] + [0.5] * (n_max - 1)
        b = [0.0] * (n_max + 1)
    elif kind == "legendre":
        a = [n / math.sqrt((2 * n - 1) * (2 * n + 1)) for n in ns]
        b = [0.0] * (n_max + 1)
    elif kind == "laguerre":
        alpha = 0.0 if alpha is None else float(alpha)
        if alpha <= -1.0:
            raise ValueError(f"laguerre parameter must exceed -1, got {alpha}")
        a = [math.sqrt(n * (n + alpha)) for n in ns]
        b = [2.0 * n + 1.0 + alpha for n in range(n_max + 1)]
        return OneDimRecurrence(f"laguerre({alpha:g})", tuple(a), tuple(b))
    else:
        raise ValueError(f"unknown recurrence kind {kind!r}; known: {CLASSICAL_KINDS}")
    if alpha is not None:
        raise ValueError(f"kind {kind!r} takes no parameter")
    return OneDimRecurrence(kind, tuple(a), tuple(b))


_SPEC_TOKEN = re.compile(r"^(?P<kind>[a-z_]+)(?:\((?P<arg>[^()]*)\))?$")


def parse_recurrence_spec(spec: str, n_max: int) -> list[OneDimRecurrence]:
    """Parse a comma-separated recurrence list, e.g. ``hermite,laguerre(0.5)``.

    ``custom:FILE`` loads ``{"a": [...], "b": [...]}`` from a JSON file.
    """
    recs = []
    for token in spec.split(","):
        token = token.strip()
        if not token:
            raise ValueError("empty entry in recurrence list")
        if token.startswith("custom:"):
            path = token[len("custom:") :]
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
            recs.append(OneDimRecurrence.from_json_obj(obj, label=f"custom:{path}"))
            continue
        m = _SPEC_TOKEN.match(token)
        if not m:
            raise ValueError(f"cannot parse recurrence token {token!r}")
        arg = m.group("arg")
        recs.append(
            classical_coefficients(
                m.group("kind"), n_max, None if arg is None else float(arg)
            )
        )
    return recs


def build(recurrences: Sequence[OneDimRecurrence], depth: int) -> AdmissibleFamily:
    """Assemble the block family of the product construction.

    For a column word t of length n-1, A_{n,k} has its only entry at row kt,
    equal to a_{r+1} of letter k where r is t's leading run of k; B_{n,k} is
    diagonal with entry b_r at each length-n word.  The concatenated A_n is
    then diagonal with strictly positive entries.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    N = len(recurrences)
    if N < 1:
        raise ValueError("need at least one recurrence")
    for k, rec in enumerate(recurrences, start=1):
        if rec.length < depth:
            raise ValueError(
                f"recurrence {rec.label} for letter {k} stores {rec.length} levels, "
                f"need {depth}"
            )
    A: dict[tuple[int, int], np.ndarray] = {}
    B: dict[tuple[int, int], np.ndarray] = {}
    for n in range(1, depth + 1):
        cols = enumerate_words(N, n - 1)
        row_index = {w: i for i, w in enumerate(enumerate_words(N, n))}
        for k in range(1, N + 1):
            rec = recurrences[k - 1]
            m = np.zeros((N**n, N ** (n - 1)))
            for j, tau in enumerate(cols):
                run = tau.leading_run(k)
                row = row_index[Word((k,) + tau.letters, N)]
                m[row, j] = rec.a_at(run + 1)
            A[(n, k)] = m
    for n in range(0, depth + 1):
        diag_words = enumerate_words(N, n)
        for k in range(1, N + 1):
            rec = recurrences[k - 1]
            B[(n, k)] = np.diag([rec.b_at(w.leading_run(k)) for w in diag_words])
    return AdmissibleFamily(N, depth, A, B)


def _univariate_coeffs(rec: OneDimRecurrence, n: int) -> list[np.ndarray]:
    """Coefficient vectors (index = power) of p_0..p_n from the recurrence."""
    if n > rec.length:
        raise ValueError(f"recurrence {rec.label} too short for degree {n}")
    ps = [np.array([1.0])]
    for m in range(n):
        shifted = np.concatenate(([0.0], ps[m]))
        new = shifted.copy()
        new[: m + 1] -= rec.b_at(m) * ps[m]
        if m >= 1:
            new[:m] -= rec.a_at(m) * ps[m - 1]
        ps.append(new / rec.a_at(m + 1))
    return ps


def product_polynomial(
    recurrences: Sequence[OneDimRecurrence], sigma: Word
) -> NcPolynomial:
    """Product of one-variable orthonormal polynomials along the run form.

    A run of letter k with exponent e contributes p_e evaluated at X_k; the
    empty word gives the constant 1.
    """
    N = len(recurrences)
    if sigma.alphabet != N:
        raise ValueError(f"word alphabet {sigma.alphabet} does not match {N} recurrences")
    result = NcPolynomial.one(N)
    if sigma.is_empty:
        return result
    for letter, exp in block_decompose(sigma).blocks:
        coeffs = _univariate_coeffs(recurrences[letter - 1], exp)[exp]
        xk = NcPolynomial.variable(N, letter)
        factor = NcPolynomial.constant(N, coeffs[0])
        power = NcPolynomial.one(N)
        for c in coeffs[1:]:
            power = power * xk
            if c != 0.0:
                factor = factor + c * power
        result = result * factor
    return result


@dataclass
class ThreeTermReport:
    """Largest coefficientwise residual of the recurrence identity per level."""

    depth: int
    max_residual: float
    residuals: dict[tuple[int, int], float]
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tolerance


def verify_three_term(
    recurrences: Sequence[OneDimRecurrence],
    depth: int,
    tolerance: float = 1e-12,
) -> ThreeTermReport:
    """Check X_k Phi_n = Phi_{n+1} A_{n+1,k} + Phi_n B_{n,k} + Phi_{n-1} A*_{n,k}
    coefficientwise for all letters k and levels n < depth."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    N = len(recurrences)
    family = build(recurrences, depth)
    polys = {
        w: product_polynomial(recurrences, w)
        for n in range(depth + 1)
        for w in enumerate_words(N, n)
    }
    residuals: dict[tuple[int, int], float] = {}
    for n in range(depth):
        rows_up = enumerate_words(N, n + 1)
        rows_n = enumerate_words(N, n)
        rows_dn = enumerate_words(N, n - 1) if n >= 1 else []
        for k in range(1, N + 1):
            xk = NcPolynomial.variable(N, k)
            worst = 0.0
            for j, tau in enumerate(rows_n):
                resid = xk * polys[tau]
                for i, sigma in enumerate(rows_up):
                    resid = resid - family.A[(n + 1, k)][i, j] * polys[sigma]
                for i, sigma in enumerate(rows_n):
                    resid = resid - family.B[(n, k)][i, j] * polys[sigma]
                for i, sigma in enumerate(rows_dn):
                    resid = resid - family.A[(n, k)][j, i] * polys[sigma]
                worst = max(worst, resid.max_abs_coefficient())
            residuals[(n, k)] = worst
    max_residual = max(residuals.values(), default=0.0)
    return ThreeTermReport(
        depth=depth,
        max_residual=max_residual,
        residuals=residuals,
        tolerance=tolerance,
    )
