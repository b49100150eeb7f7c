import math

import numpy as np
import pytest

from ncjacobi import (
    NotStrictlyPositiveError,
    Word,
    build_free_product,
    classical_coefficients,
    distinguished_path,
    enumerate_paths,
    enumerate_words,
    favard_moments,
    functional_free_product,
    jacobi_from_moments,
    moments_from_paths,
    motzkin_binomial_sum,
    motzkin_number,
    operator_moment,
    path_weight,
    random_admissible_family,
    weight_factors_value,
)
from ncjacobi.paths import _transfer_sum

from conftest import EXPONENTIAL_MOMENTS, GAUSSIAN_MOMENTS, one_dim_functional

SQRT2 = math.sqrt(2.0)

# frozen by exhaustive enumeration of level/rise/fall profiles (see
# test_motzkin_matches_naive_enumeration below)
MOTZKIN = (1, 1, 2, 4, 9, 21, 51, 127, 323)


def naive_profiles(n):
    """Independent reference enumeration of +1/0/-1 profiles."""
    if n == 0:
        return [()]
    out = []
    stack = [((), 0)]
    while stack:
        prefix, h = stack.pop()
        if len(prefix) == n:
            if h == 0:
                out.append(prefix)
            continue
        for s in (1, 0, -1):
            if h + s >= 0:
                stack.append((prefix + (s,), h + s))
    return out


def hermite_fam(n=1, depth=4):
    return build_free_product([classical_coefficients("hermite", depth + 1)] * n, depth)


def laguerre_fam(depth=4):
    return build_free_product([classical_coefficients("laguerre", depth + 1)], depth)


# -- counting -------------------------------------------------------------------


def test_motzkin_numbers_frozen():
    assert tuple(motzkin_number(n) for n in range(9)) == MOTZKIN


def test_motzkin_matches_naive_enumeration():
    for n in range(8):
        assert motzkin_number(n) == len(naive_profiles(n))


def test_binomial_sum_is_shifted_by_one():
    for n in range(1, 9):
        assert motzkin_binomial_sum(n) == motzkin_number(n - 1)
    assert motzkin_binomial_sum(5) == 9


def test_path_counts_equal_motzkin_numbers():
    for alphabet, max_len in [(2, 6), (3, 5)]:
        for n in range(1, max_len + 1):
            for w in enumerate_words(alphabet, n):
                assert len(enumerate_paths(w)) == motzkin_number(n)
    for w in enumerate_words(3, 6)[::31]:  # sampled: count depends only on length
        assert len(enumerate_paths(w)) == motzkin_number(6)


# -- enumeration structure ---------------------------------------------------------


def test_paths_for_double_letter():
    paths = enumerate_paths(Word((1, 1), 1))
    kinds = sorted(tuple(s.kind for s in p.steps) for p in paths)
    assert kinds == [("level", "level"), ("rise", "fall")]


def test_paths_consume_blocks_right_to_left():
    paths = enumerate_paths(Word((1, 2), 2))
    assert len(paths) == 2
    for p in paths:
        advancing = p.advancing()
        assert p.steps[0].frm == (0, 2, 0)  # starts in the plane of the last letter
        assert advancing[0].frm[1] == 2
        assert advancing[1].frm[1] == 1
        assert p.steps[-1].to == (2, 1, 0)
        switches = [s for s in p.steps if s.kind == "switch"]
        assert len(switches) == 1
        assert switches[0].frm[1] == 2 and switches[0].to[1] == 1


def test_paths_triple_letter_count():
    assert len(enumerate_paths(Word((1, 1, 1), 1))) == 4


def test_enumerate_paths_rejects_empty_and_capped():
    with pytest.raises(ValueError):
        enumerate_paths(Word((), 2))
    with pytest.raises(ValueError, match="cap"):
        enumerate_paths(Word((1,) * 9, 1))
    assert len(enumerate_paths(Word((1,) * 9, 1), cap=9)) == motzkin_number(9)


# -- weights --------------------------------------------------------------------


def test_path_weight_hermite_rise_fall():
    fam = hermite_fam()
    paths = {tuple(s.kind for s in p.steps): p for p in enumerate_paths(Word((1, 1), 1))}
    assert path_weight(fam, paths[("rise", "fall")]) == 1.0
    assert path_weight(fam, paths[("level", "level")]) == 0.0


def test_path_weight_laguerre_rise_level_fall():
    fam = laguerre_fam()
    paths = {tuple(s.kind for s in p.steps): p for p in enumerate_paths(Word((1, 1, 1), 1))}
    assert path_weight(fam, paths[("rise", "level", "fall")]) == 3.0
    by_kind = {
        ("rise", "level", "fall"): 3.0,
        ("rise", "fall", "level"): 1.0,
        ("level", "rise", "fall"): 1.0,
        ("level", "level", "level"): 1.0,
    }
    for kinds, expected in by_kind.items():
        assert path_weight(fam, paths[kinds]) == expected


def test_path_weight_depth_exceeded():
    fam = random_admissible_family(1, 1, seed=0)
    deep = [p for p in enumerate_paths(Word((1,) * 4, 1)) if p.max_height() == 2]
    with pytest.raises(ValueError, match="height"):
        path_weight(fam, deep[0])


# -- moment sums -----------------------------------------------------------------


def test_moments_from_paths_empty_word():
    fam = laguerre_fam()
    assert moments_from_paths(fam, Word((), 1)) == 1.0


def test_moments_from_paths_exponential_third_moment():
    # 6 = third moment of the unit exponential distribution
    fam = laguerre_fam()
    assert moments_from_paths(fam, Word((1, 1, 1), 1)) == EXPONENTIAL_MOMENTS[3]


def test_moments_from_paths_hermite_pair_words():
    fam = hermite_fam(n=2)
    assert moments_from_paths(fam, Word((1, 1, 2, 2), 2)) == pytest.approx(1.0, abs=1e-14)
    # the rise-rise-fall-fall profile hits a structural zero of A*_{2,2} A_{2,1},
    # and rise-fall-rise-fall contracts A*_{1,1} A_{1,2} = 0, so nothing survives
    assert moments_from_paths(fam, Word((1, 2, 1, 2), 2)) == pytest.approx(0.0, abs=1e-14)


def test_transfer_recursion_matches_explicit_enumeration():
    fam = random_admissible_family(2, 4, seed=17)
    for n in range(1, 8):
        for w in enumerate_words(2, n)[:: max(1, 2 ** (n - 3))]:
            explicit = sum(path_weight(fam, p) for p in enumerate_paths(w))
            dp = _transfer_sum(fam.A, fam.B, w, min(n // 2, fam.depth))
            assert dp == pytest.approx(explicit, abs=1e-10)
            assert moments_from_paths(fam, w, cap=0) == pytest.approx(explicit, abs=1e-10)


def test_moments_from_paths_agrees_with_operator():
    fam = random_admissible_family(3, 3, seed=5)
    for n in range(0, 5):
        for w in enumerate_words(3, n)[:: max(1, 3 ** (n - 2))]:
            assert moments_from_paths(fam, w) == pytest.approx(
                operator_moment(fam, w), abs=1e-10
            )


def test_moments_from_paths_insufficient_depth():
    fam = random_admissible_family(1, 1, seed=3)
    with pytest.raises(ValueError, match="depth"):
        moments_from_paths(fam, Word((1,) * 4, 1))


# -- distinguished path -------------------------------------------------------------


def test_distinguished_even_example():
    path, factors = distinguished_path(Word((1, 1, 1, 1), 1))
    assert factors == (("A*", 1, 1), ("A*", 2, 1), ("A", 2, 1), ("A", 1, 1))
    assert [s.kind for s in path.steps] == ["rise", "rise", "fall", "fall"]
    fam = hermite_fam()
    assert weight_factors_value(fam, factors) == pytest.approx(2.0, abs=1e-14)
    assert path_weight(fam, path) == pytest.approx(2.0, abs=1e-14)


def test_distinguished_two_letter_form():
    _, factors = distinguished_path(Word((1, 1), 1))
    assert factors == (("A*", 1, 1), ("A", 1, 1))


def test_distinguished_odd_level_weight():
    path, factors = distinguished_path(Word((1, 1, 1), 1))
    assert factors == (("A*", 1, 1), ("B", 1, 1), ("A", 1, 1))
    assert weight_factors_value(hermite_fam(), factors) == 0.0


def test_distinguished_middle_letter_of_mixed_word():
    # word 2 1 2: middle letter is 1, level step sits at height 1
    _, factors = distinguished_path(Word((2, 1, 2), 2))
    assert factors == (("A*", 1, 2), ("B", 1, 1), ("A", 1, 2))


def test_distinguished_rejects_empty():
    with pytest.raises(ValueError):
        distinguished_path(Word((), 2))


def test_partition_by_distinguished_path():
    fam = random_admissible_family(2, 3, seed=43)
    for n in range(1, 6):
        for w in enumerate_words(2, n)[:: max(1, 2 ** (n - 2))]:
            dist, factors = distinguished_path(w)
            paths = enumerate_paths(w)
            assert paths.count(dist) == 1
            rest = sum(path_weight(fam, p) for p in paths if p != dist)
            total = moments_from_paths(fam, w)
            assert rest + weight_factors_value(fam, factors) == pytest.approx(
                total, abs=1e-10
            )


def test_distinguished_is_unique_maximal_path():
    for letters in [(1, 2), (1, 1, 2), (2, 1, 1, 2), (1, 2, 1, 2, 1)]:
        w = Word(letters, 2)
        dist, _ = distinguished_path(w)
        peak = len(w) // 2
        assert dist.max_height() == peak
        others = [p for p in enumerate_paths(w) if p.max_height() == peak and p != dist]
        if len(w) % 2 == 0:
            assert not others
        else:
            # odd words: other peak-reaching paths exist but level off lower
            level_heights = {
                s.frm[2] for p in others for s in p.steps if s.kind == "level"
            }
            assert peak not in level_heights


# -- structural identity behind the inverse map ----------------------------------------


def maximal_weight_matrix(fam, n):
    ws = enumerate_words(fam.alphabet, n)
    m = np.empty((len(ws), len(ws)))
    for i, s in enumerate(ws):
        for j, t in enumerate(ws):
            _, factors = distinguished_path(s.involute().concat(t))
            m[i, j] = weight_factors_value(fam, factors)
    return m


def accumulated_product(fam, n):
    """A_n (I (x) A_{n-1}) ... block-replicated down to level 1."""
    N = fam.alphabet
    atilde = np.hstack([fam.A[(1, k)] for k in range(1, N + 1)])
    for m in range(2, n + 1):
        concat = np.hstack([fam.A[(m, k)] for k in range(1, N + 1)])
        atilde = concat @ np.kron(np.eye(N), atilde)
    return atilde


@pytest.mark.parametrize("zero_b", [True, False])
def test_kernel_minus_nonmaximal_paths_factors(zero_b):
    from ncjacobi import AdmissibleFamily

    fam = random_admissible_family(2, 3, seed=47)
    if zero_b:
        zeros = {key: np.zeros_like(block) for key, block in fam.B.items()}
        fam = AdmissibleFamily(fam.alphabet, fam.depth, fam.A, zeros)
    for n in (1, 2, 3):
        ws = enumerate_words(2, n)
        kernel = np.empty((len(ws), len(ws)))
        star = np.empty((len(ws), len(ws)))
        for i, s in enumerate(ws):
            for j, t in enumerate(ws):
                w = s.involute().concat(t)
                dist, factors = distinguished_path(w)
                kernel[i, j] = moments_from_paths(fam, w)
                star[i, j] = kernel[i, j] - weight_factors_value(fam, factors)
        atilde = accumulated_product(fam, n)
        assert np.allclose(kernel - star, atilde.T @ atilde, atol=1e-10)
        assert np.allclose(kernel - star, maximal_weight_matrix(fam, n), atol=1e-12)


# -- moments -> coefficients -------------------------------------------------------------


def test_recovery_sets_level_zero_to_first_moments():
    fam = random_admissible_family(2, 3, seed=53)
    phi = favard_moments(fam, 3)
    rec = jacobi_from_moments(phi, 3)
    for k in (1, 2):
        assert rec.B[(0, k)][0, 0] == phi.moment(Word((k,), 2))


def test_recovery_gaussian():
    phi = one_dim_functional(GAUSSIAN_MOMENTS[:6], 2)
    rec = jacobi_from_moments(phi, 2)
    assert rec.A[(1, 1)][0, 0] == pytest.approx(1.0, abs=1e-12)
    assert rec.A[(2, 1)][0, 0] == pytest.approx(SQRT2, abs=1e-12)
    assert rec.B[(0, 1)][0, 0] == 0.0
    assert rec.B[(1, 1)][0, 0] == pytest.approx(0.0, abs=1e-12)


def test_recovery_round_trip_random_families():
    for seed in (61, 62, 63):
        fam = random_admissible_family(2, 3, seed=seed)
        phi = favard_moments(fam, 3)
        rec = jacobi_from_moments(phi, 3)
        assert fam.blocks_close(rec) <= 1e-8


def test_recovery_needs_odd_word_data():
    phi = one_dim_functional(GAUSSIAN_MOMENTS[:5], 2)  # no length-5 level
    with pytest.raises(ValueError, match="length 5"):
        jacobi_from_moments(phi, 2)
    assert phi.word_bound == 4


def test_recovery_rejects_non_positive_table():
    g = one_dim_functional(GAUSSIAN_MOMENTS[:6], 2)
    e = one_dim_functional(EXPONENTIAL_MOMENTS[:6], 2)
    phi = functional_free_product([g, e])
    with pytest.raises(NotStrictlyPositiveError):
        jacobi_from_moments(phi, 2)
