import numpy as np
import pytest

from cubicpoints.polynomials import CubicPolynomial


def diag_cubic(n, const=0, coeffs=None):
    """Diagonal cubic sum c_i x_i^3 + const."""
    coeffs = coeffs or [1] * n
    terms = {tuple(3 if j == i else 0 for j in range(n)): c
             for i, c in enumerate(coeffs)}
    terms[(0,) * n] = const
    return CubicPolynomial.from_terms(n, terms)


def random_cubic(rng, n, span=3):
    """Random dense cubic polynomial with coefficients in [-span, span]."""
    from itertools import combinations_with_replacement

    terms = {}
    for deg in range(4):
        for idx in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in idx:
                e[i] += 1
            terms[tuple(e)] = int(rng.integers(-span, span + 1))
    return CubicPolynomial.from_terms(n, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def mixed2():
    """x1^3 + x2^3 + x1 x2 + 1: composite-friendly two-variable test case."""
    return CubicPolynomial.from_terms(
        2, {(3, 0): 1, (0, 3): 1, (1, 1): 1, (0, 0): 1})


@pytest.fixture
def seven_var_corpus():
    """Cubic part x1^3+...+x5^3 embedded in 7 variables with an affine tail."""
    n = 7
    terms = {tuple(3 if j == i else 0 for j in range(n)): 1 for i in range(5)}
    terms[tuple(1 if j == 5 else 0 for j in range(n))] = 1
    terms[tuple(1 if j == 6 else 0 for j in range(n))] = 2
    terms[(0,) * n] = 1
    return CubicPolynomial.from_terms(n, terms)
