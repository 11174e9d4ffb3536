import cmath
import math
from fractions import Fraction
from itertools import product

import pytest

from conftest import diag_cubic
from cubicpoints.padic import count_zeros_mod_pk, local_density
from cubicpoints.polynomials import CubicPolynomial
from cubicpoints.series import (positivity_certificate, s0_at_zero, s0_term,
                                series_partial)


def brute_s0(g, q):
    """sum over units a, points y of e_q(a g(y)): the (u,v)=(0,0) complete sum."""
    total = 0j
    for a in range(q):
        if math.gcd(a, q) != 1:
            continue
        for y in product(range(q), repeat=g.n):
            total += cmath.exp(2j * cmath.pi * a * g.eval(list(y)) / q)
    return total


def test_s0_term_is_exact_integer(mixed2):
    for q in range(1, 10):
        t = s0_term(mixed2, q)
        assert isinstance(t, int)
        assert abs(t - brute_s0(mixed2, q)) < 1e-6


def test_s0_multiplicative(mixed2):
    assert s0_term(mixed2, 6) == s0_term(mixed2, 2) * s0_term(mixed2, 3)
    assert s0_term(mixed2, 36) == s0_term(mixed2, 4) * s0_term(mixed2, 9)


def test_s0_both_paths_agree(mixed2):
    # the Ramanujan-histogram path and the counting-formula path must match
    for p, e in [(2, 2), (3, 2), (5, 1), (5, 2)]:
        hist = s0_at_zero(mixed2, p, e)
        # a budget below p^(e n) skips the histogram but still allows counting
        formula = s0_at_zero(mixed2, p, e, budget=p**mixed2.n)
        assert hist == formula


def test_density_identity(mixed2):
    # sum_{d<=k} p^{-dn} S_0(p^d;0) equals the solution density at level k
    n = mixed2.n
    for p in (2, 3, 5, 7):
        for k in (1, 2, 3):
            lhs = Fraction(1)
            for d in range(1, k + 1):
                lhs += Fraction(s0_at_zero(mixed2, p, d), p ** (d * n))
            assert lhs == local_density(mixed2, p, k)


def test_series_partial_structure(mixed2):
    rep = series_partial(mixed2, 12)
    assert rep.Qmax == 12
    assert set(rep.terms) == set(range(1, 13))
    assert rep.terms[1] == 1
    running = Fraction(0)
    for q in range(1, 13):
        running += rep.terms[q]
        assert rep.partial_sums[q] == pytest.approx(float(running))
    assert rep.total == pytest.approx(rep.partial_sums[12])


def test_positivity_failing_prime_blocks():
    bad = CubicPolynomial.from_terms(1, {(3,): 1, (0,): 49})
    verdict = positivity_certificate(bad, 10)
    assert verdict.status == "NOT_POSITIVE"
    assert 7 in verdict.blocking


def test_positivity_small_n_inconclusive():
    g = diag_cubic(4, const=2)
    verdict = positivity_certificate(g, 10)
    # every local factor is fine, but n = 4 cannot meet s < n - 9
    assert verdict.status == "INCONCLUSIVE"
