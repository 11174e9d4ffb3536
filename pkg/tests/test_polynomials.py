import json

import numpy as np
import pytest

from conftest import diag_cubic, random_cubic
from cubicpoints.errors import DegenerateSliceError, InputError
from cubicpoints.polynomials import CubicPolynomial, watson_polynomial


def brute_eval(g, x):
    total = 0
    for e, c in g.terms():
        t = c
        for xi, ei in zip(x, e):
            t *= xi**ei
        total += t
    return total


def test_eval_matches_term_expansion(rng):
    for _ in range(20):
        n = int(rng.integers(1, 5))
        g = random_cubic(rng, n)
        x = [int(v) for v in rng.integers(-4, 5, size=n)]
        assert g.eval(x) == brute_eval(g, x)


def test_gradient_matches_finite_difference_structure(rng):
    # exact polynomial identity: g(x + t e_i) - g(x) agrees with the Taylor
    # expansion whose linear coefficient is the gradient entry
    for _ in range(10):
        n = int(rng.integers(1, 4))
        g = random_cubic(rng, n)
        x = [int(v) for v in rng.integers(-3, 4, size=n)]
        grad = g.gradient(x)
        for i in range(n):
            vals = []
            for t in (1, 2, 3):
                y = list(x)
                y[i] += t
                vals.append(g.eval(y))
            # cubic in t: g(x) + a t + b t^2 + c t^3; solve a from 3 samples
            g0 = g.eval(x)
            a = (18 * (vals[0] - g0) - 9 * (vals[1] - g0) + 2 * (vals[2] - g0)) // 6
            assert grad[i] == a


def test_hessian_symmetric_and_affine_in_point(rng):
    g = random_cubic(rng, 3)
    x = [1, -2, 3]
    H = g.hessian(x)
    E = H.entries
    for i in range(3):
        for j in range(3):
            assert E[i][j] == E[j][i]
            # entries split as (cubic part, linear in x) + (constant quad part)
            assert E[i][j] == H.m0[i][j] + H.m1[i][j]
    H2 = g.hessian([2 * v for v in x])
    for i in range(3):
        for j in range(3):
            assert H2.m0[i][j] == 2 * H.m0[i][j]
            assert H2.m1[i][j] == H.m1[i][j]


def test_transform_identity_and_composition(rng):
    g = random_cubic(rng, 3)
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert g.transform(I) == g
    A = [[1, 2, 0], [0, 1, 3], [0, 0, 1]]
    B = [[1, 0, 1], [1, 1, 0], [0, 0, 1]]
    AB = [[sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)]
          for i in range(3)]
    assert g.transform(A).transform(B) == g.transform(AB)


def test_transform_is_substitution(rng):
    g = random_cubic(rng, 2)
    M = [[2, 1], [1, 1]]
    h = g.transform(M)
    for _ in range(10):
        y = [int(v) for v in rng.integers(-3, 4, size=2)]
        My = [M[0][0] * y[0] + M[0][1] * y[1], M[1][0] * y[0] + M[1][1] * y[1]]
        assert h.eval(y) == g.eval(My)


def test_transform_rejects_non_unimodular():
    g = diag_cubic(2)
    with pytest.raises(InputError):
        g.transform([[2, 0], [0, 1]])


def test_homogenize_specializes_back(rng):
    g = random_cubic(rng, 3)
    H = g.homogenize()
    assert H.n == 4
    for _ in range(10):
        x = [int(v) for v in rng.integers(-3, 4, size=3)]
        assert H.eval([1] + x) == g.eval(x)
        t = int(rng.integers(-3, 4))
        assert H.eval([t * v for v in [1] + x]) == t**3 * H.eval([1] + x)


def test_slice_substitutes_first_variable(rng):
    g = random_cubic(rng, 3)
    for c in (-2, 0, 5):
        hc = g.slice_at(c)
        assert hc.n == 2
        for _ in range(5):
            x = [int(v) for v in rng.integers(-3, 4, size=2)]
            assert hc.eval(x) == g.eval([c] + x)


def test_slice_degenerate_when_cubic_part_dies():
    g = CubicPolynomial.from_terms(2, {(3, 0): 1, (0, 1): 1})
    with pytest.raises(DegenerateSliceError):
        g.slice_at(1)


def test_json_round_trip(rng):
    g = random_cubic(rng, 4)
    assert CubicPolynomial.from_json(g.to_json()) == g


def test_json_rejects_duplicate_exponents():
    blob = {"n": 1, "terms": [{"e": [3], "c": 1}, {"e": [3], "c": 2}]}
    with pytest.raises(InputError):
        CubicPolynomial.from_json_dict(blob)


def test_symmetric_tensor_is_symmetric(rng):
    g = random_cubic(rng, 3)
    for i in range(1, 4):
        for j in range(1, 4):
            for k in range(1, 4):
                v = g.symmetric_tensor(i, j, k)
                assert v == g.symmetric_tensor(j, i, k) == g.symmetric_tensor(k, j, i)


def test_watson_polynomial_closed_form(rng):
    for n in (2, 3, 4):
        w = watson_polynomial(n)
        assert w.n == n
        for _ in range(10):
            x = [int(v) for v in rng.integers(-4, 5, size=n)]
            expected = (2 * x[0] - 1) * (1 + sum(v * v for v in x)) + x[0] * x[1]
            assert w.eval(x) == expected
