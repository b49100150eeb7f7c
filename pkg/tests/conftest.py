import pytest

from ncjacobi import (
    MomentFunctional,
    Word,
    build_free_product,
    classical_coefficients,
    favard_moments,
    random_admissible_family,
)

# frozen one-variable moment sequences, checked against numerical quadrature
# of the defining weights in test_freeproduct.py
GAUSSIAN_MOMENTS = (1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0, 105.0)
EXPONENTIAL_MOMENTS = (1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0)
ARCSINE_MOMENTS = (1.0, 0.0, 0.5, 0.0, 0.375, 0.0, 0.3125)
UNIFORM_MOMENTS = (1.0, 0.0, 1 / 3, 0.0, 1 / 5, 0.0, 1 / 7)


def one_dim_functional(moments, max_degree):
    table = {Word((1,) * n, 1): m for n, m in enumerate(moments)}
    return MomentFunctional(1, max_degree, table)


@pytest.fixture
def gaussian_phi():
    """Standard normal moments to degree 2 plus the odd top level."""
    return one_dim_functional(GAUSSIAN_MOMENTS[:6], 2)


@pytest.fixture
def hermite_family():
    return build_free_product([classical_coefficients("hermite", 6)], 5)


@pytest.fixture
def hermite2_family():
    return build_free_product([classical_coefficients("hermite", 6)] * 2, 4)


@pytest.fixture
def laguerre_family():
    return build_free_product([classical_coefficients("laguerre", 6)], 5)


@pytest.fixture
def random_phi():
    """Strictly positive N=2 moment table from a seeded random family."""
    return favard_moments(random_admissible_family(2, 3, seed=11), 3)


def max_block_diff(fam_a, fam_b, depth=None):
    return fam_a.blocks_close(fam_b, depth=depth)


def random_polynomial(rng, alphabet=2, max_degree=3, n_terms=5):
    from ncjacobi import NcPolynomial

    terms = {}
    for _ in range(n_terms):
        length = int(rng.integers(0, max_degree + 1))
        letters = tuple(int(x) for x in rng.integers(1, alphabet + 1, size=length))
        terms[Word(letters, alphabet)] = float(rng.uniform(-2, 2))
    return NcPolynomial(alphabet, terms)
