"""Colored Motzkin paths: the combinatorial side of the moment formula.

For a nonempty word the path set starts in the plane of the word's last
letter at height 0, consumes the maximal-run blocks right to left (advancing
steps are level/rise/fall; plane switches between blocks are free), and
returns to height 0 after |word| advancing steps.  Summing matrix-valued
step weights over all such paths reproduces the operator moments, and
removing the single maximal path isolates the top coefficient blocks, which
is what drives the moments -> coefficients direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .functional import MomentFunctional, NotStrictlyPositiveError, upper_cholesky
from .jacobi import AdmissibleFamily
from .words import Word, enumerate_words

STEP_KINDS = ("level", "switch", "rise", "fall")

#: explicit path lists are materialized only up to this word length by default
DEFAULT_PATH_CAP = 8


@dataclass(frozen=True)
class Step:
    """One step between points (t, plane, height); switches leave t unchanged."""

    kind: str
    frm: tuple[int, int, int]
    to: tuple[int, int, int]

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise ValueError(f"unknown step kind {self.kind!r}")
        t, k, m = self.frm
        t2, k2, m2 = self.to
        if m < 0 or m2 < 0:
            raise ValueError("path heights must stay nonnegative")
        shape_ok = {
            "level": (t2 == t + 1 and k2 == k and m2 == m),
            "switch": (t2 == t and k2 != k and m2 == m),
            "rise": (t2 == t + 1 and k2 == k and m2 == m + 1),
            "fall": (t2 == t + 1 and k2 == k and m2 == m - 1),
        }[self.kind]
        if not shape_ok:
            raise ValueError(f"{self.kind} step cannot go {self.frm} -> {self.to}")

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "from": list(self.frm), "to": list(self.to)}


@dataclass(frozen=True)
class LatticePath:
    steps: tuple[Step, ...]

    def __post_init__(self):
        for prev, nxt in zip(self.steps, self.steps[1:]):
            if prev.to != nxt.frm:
                raise ValueError(f"steps do not chain: {prev.to} then {nxt.frm}")

    def advancing(self) -> tuple[Step, ...]:
        return tuple(s for s in self.steps if s.kind != "switch")

    def max_height(self) -> int:
        return max((max(s.frm[2], s.to[2]) for s in self.steps), default=0)

    def to_json_obj(self) -> list[dict]:
        return [s.to_json_obj() for s in self.steps]


@lru_cache(maxsize=None)
def motzkin_number(n: int) -> int:
    """Number of level/rise/fall paths of length n from height 0 back to 0."""
    if n < 0:
        raise ValueError("length must be >= 0")
    if n <= 1:
        return 1
    return motzkin_number(n - 1) + sum(
        motzkin_number(j) * motzkin_number(n - 2 - j) for j in range(n - 1)
    )


def motzkin_binomial_sum(n: int) -> int:
    """The sum (1/n) * sum_k C(n,k) * C(n-k, k-1) for n >= 1.

    As written this evaluates to motzkin_number(n - 1): the index is shifted
    by one relative to the path count of length n.  Kept as a documented
    cross-check of that shift.
    """
    if n < 1:
        raise ValueError("defined for n >= 1")
    total = 0
    for k in range(0, n + 1):
        if k - 1 < 0 or k - 1 > n - k:
            continue
        total += math.comb(n, k) * math.comb(n - k, k - 1)
    if total % n:
        raise ArithmeticError(f"binomial sum {total} not divisible by {n}")
    return total // n


def _profiles(n: int) -> Iterator[tuple[int, ...]]:
    """All rise/level/fall profiles (+1/0/-1) of length n, nonnegative, ending at 0."""

    def rec(prefix: list[int], h: int):
        if len(prefix) == n:
            if h == 0:
                yield tuple(prefix)
            return
        remaining = n - len(prefix)
        for s in (1, 0, -1):
            nh = h + s
            if nh < 0 or nh > remaining - 1:
                continue
            prefix.append(s)
            yield from rec(prefix, nh)
            prefix.pop()

    yield from rec([], 0)


def _decorate(word: Word, profile: Sequence[int]) -> LatticePath:
    """Attach planes and switch steps to a height profile for ``word``."""
    planes = word.letters[::-1]
    steps: list[Step] = []
    h = 0
    for t, s in enumerate(profile):
        if t > 0 and planes[t] != planes[t - 1]:
            steps.append(Step("switch", (t, planes[t - 1], h), (t, planes[t], h)))
        if s == 1:
            steps.append(Step("rise", (t, planes[t], h), (t + 1, planes[t], h + 1)))
        elif s == -1:
            steps.append(Step("fall", (t, planes[t], h), (t + 1, planes[t], h - 1)))
        else:
            steps.append(Step("level", (t, planes[t], h), (t + 1, planes[t], h)))
        h += s
    return LatticePath(tuple(steps))


def enumerate_paths(word: Word, cap: int = DEFAULT_PATH_CAP) -> list[LatticePath]:
    """The full path set of a nonempty word, one path per height profile."""
    if word.is_empty:
        raise ValueError("the empty word has no paths")
    if len(word) > cap:
        raise ValueError(
            f"explicit path lists are capped at |word| = {cap} "
            f"({motzkin_number(len(word))} paths would be materialized); raise `cap`"
        )
    return [_decorate(word, prof) for prof in _profiles(len(word))]


def path_weight(family: AdmissibleFamily, path: LatticePath) -> float:
    """Matrix product of step weights, later steps multiplying from the left.

    Level at height m in plane k weighs B_{m,k}; a rise from m weighs
    A_{m+1,k}; a fall from m weighs A_{m,k}^T; switches are free.  For a path
    that starts and ends at height 0 the product is a scalar.
    """
    if path.max_height() > family.depth:
        raise ValueError(
            f"path reaches height {path.max_height()} above family depth {family.depth}"
        )
    v = np.array([1.0])
    for step in path.steps:
        if step.kind == "switch":
            continue
        _, k, m = step.frm
        if step.kind == "level":
            v = family.B[(m, k)] @ v
        elif step.kind == "rise":
            v = family.A[(m + 1, k)] @ v
        else:
            v = family.A[(m, k)].T @ v
    if v.shape != (1,):
        raise ValueError("path does not start and end at height 0")
    return float(v[0])


def _transfer_sum(
    A: Mapping[tuple[int, int], np.ndarray],
    B: Mapping[tuple[int, int], np.ndarray],
    word: Word,
    height_cap: int,
) -> float:
    """Weighted sum over all paths of ``word`` with heights <= height_cap.

    Dynamic program over (steps consumed, height); the state at height m is
    the vector sum of all partial path weights ending there.
    """
    state: dict[int, np.ndarray] = {0: np.array([1.0])}
    for k in reversed(word.letters):
        new: dict[int, np.ndarray] = {}
        for m, vec in state.items():
            contributions = (
                (m, B[(m, k)] @ vec),
                (m + 1, A[(m + 1, k)] @ vec if m + 1 <= height_cap else None),
                (m - 1, A[(m, k)].T @ vec if m >= 1 else None),
            )
            for hm, contrib in contributions:
                if contrib is None or hm > height_cap:
                    continue
                if hm in new:
                    new[hm] = new[hm] + contrib
                else:
                    new[hm] = contrib
        state = new
    vec0 = state.get(0)
    return float(vec0[0]) if vec0 is not None else 0.0


def moments_from_paths(
    family: AdmissibleFamily, word: Word, cap: int = DEFAULT_PATH_CAP
) -> float:
    """Moment of ``word`` as the weighted path sum; 1 for the empty word.

    Up to the cap the sum runs over explicitly enumerated paths; longer words
    fall back to the height-capped transfer recursion, which is exact because
    no path of length L exceeds height L//2.
    """
    if word.alphabet != family.alphabet:
        raise ValueError("word alphabet does not match family")
    if word.is_empty:
        return 1.0
    peak = len(word) // 2
    if family.depth < peak:
        raise ValueError(
            f"family depth {family.depth} insufficient for |word| = {len(word)} "
            f"(needs {peak} levels)"
        )
    if len(word) <= cap:
        return float(sum(path_weight(family, p) for p in enumerate_paths(word, cap)))
    return _transfer_sum(family.A, family.B, word, min(peak, family.depth))


WeightFactor = tuple[str, int, int]  # ("A" | "A*" | "B", level, letter)


def distinguished_path(word: Word) -> tuple[LatticePath, tuple[WeightFactor, ...]]:
    """The unique maximal path and its weight factors in product order.

    Even length 2q: q rises then q falls. Odd length 2q+1: q rises, one level
    step at height q, q falls.  Factors are listed as the weight product is
    written, i.e. last step first; the level factor of the odd case is the
    height-q diagonal block of the middle letter.
    """
    if word.is_empty:
        raise ValueError("the empty word has no distinguished path")
    n = len(word)
    q, odd = divmod(n, 2)
    profile = [1] * q + ([0] if odd else []) + [-1] * q
    path = _decorate(word, profile)
    factors: list[WeightFactor] = []
    planes = word.letters[::-1]
    for t in range(n - 1, -1, -1):  # product order: step n down to step 1
        s = profile[t]
        k = planes[t]
        if s == 1:
            factors.append(("A", t + 1, k))
        elif s == 0:
            factors.append(("B", q, k))
        else:
            factors.append(("A*", n - t, k))
    return path, tuple(factors)


def weight_factors_value(
    family: AdmissibleFamily, factors: Sequence[WeightFactor]
) -> float:
    """Evaluate a factor list (as returned by distinguished_path) to a scalar."""
    m = np.array([[1.0]])
    for kind, level, letter in factors:
        if kind == "A":
            blk = family.A[(level, letter)]
        elif kind == "A*":
            blk = family.A[(level, letter)].T
        else:
            blk = family.B[(level, letter)]
        m = m @ blk
    if m.shape != (1, 1):
        raise ValueError("weight factors do not contract to a scalar")
    return float(m[0, 0])


def _conjugate_by_inverse(p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(P^T)^{-1} Y P^{-1} for upper triangular P, via triangular solves."""
    z = solve_triangular(p.T, y, lower=True)
    return solve_triangular(p.T, z.T, lower=True).T


def jacobi_from_moments(
    phi: MomentFunctional, depth: int, tol: float = 1e-10
) -> AdmissibleFamily:
    """Recover the coefficient family of a strictly positive moment table.

    Level n works on the kernel matrix over length-n words minus the weighted
    sum over all non-maximal paths; conjugating by the accumulated product of
    earlier levels (block-replicated to size N^n) leaves A_n^T A_n, and A_n is
    its upper-triangular factor.  The same scheme with middle letter k and
    odd words of length 2n+1 yields B_{n,k}.  Requires moments for every word
    of length <= 2*depth + 1.
    """
    N = phi.alphabet
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth > phi.max_degree:
        raise ValueError(f"depth {depth} exceeds table degree {phi.max_degree}")
    if phi.word_bound < 2 * depth + 1:
        raise ValueError(
            f"moment table stores words up to length {phi.word_bound}, but the "
            f"depth-{depth} correction blocks need length {2 * depth + 1}"
        )
    A: dict[tuple[int, int], np.ndarray] = {}
    B: dict[tuple[int, int], np.ndarray] = {}
    for k in range(1, N + 1):
        B[(0, k)] = np.array([[phi.moment(Word((k,), N))]])
    atilde = np.array([[1.0]])
    for n in range(1, depth + 1):
        ws = enumerate_words(N, n)
        dim = len(ws)
        kmat = np.empty((dim, dim))
        star = np.empty((dim, dim))
        for i, sigma in enumerate(ws):
            rev = sigma.involute()
            for j, tau in enumerate(ws):
                w = rev.concat(tau)
                kmat[i, j] = phi.moment(w)
                star[i, j] = _transfer_sum(A, B, w, n - 1)
        p = np.kron(np.eye(N), atilde)
        m = _conjugate_by_inverse(p, kmat - star)
        m = (m + m.T) / 2.0
        r, pivots, completed = upper_cholesky(m, tol=tol)
        if not completed:
            raise NotStrictlyPositiveError(
                f"coefficient recovery at level {n} hit pivot {pivots[-1]:.3e} "
                f"<= {tol}; the moment table is not strictly positive there"
            )
        cols = N ** (n - 1)
        for k in range(1, N + 1):
            A[(n, k)] = r[:, (k - 1) * cols : k * cols]
        atilde = r @ p

        bwork = dict(B)
        for k in range(1, N + 1):
            bwork[(n, k)] = np.zeros((dim, dim))
        for k in range(1, N + 1):
            cmat = np.empty((dim, dim))
            sstar = np.empty((dim, dim))
            for i, sigma in enumerate(ws):
                rev_k = sigma.involute().concat(Word((k,), N))
                for j, tau in enumerate(ws):
                    w = rev_k.concat(tau)
                    cmat[i, j] = phi.moment(w)
                    sstar[i, j] = _transfer_sum(A, bwork, w, n)
            b = _conjugate_by_inverse(atilde, cmat - sstar)
            B[(n, k)] = (b + b.T) / 2.0
    return AdmissibleFamily(N, depth, A, B)
