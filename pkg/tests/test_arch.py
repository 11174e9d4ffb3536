import math
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import diag_cubic
from cubicpoints.arch import (ArchContext, count_N, default_z_grid, find_x0,
                              main_term_report, osc_integral_batch,
                              osc_integral_I, singular_integral, weight)
from cubicpoints.errors import InputError
from cubicpoints.polynomials import CubicPolynomial


def test_context_normalizes_x0():
    ctx = ArchContext.create(8.0, (3.0, 4.0))
    assert np.isclose(np.hypot(*ctx.x0), 1.0)
    assert ctx.P0 == pytest.approx(8.0 / math.log(8.0) ** 2)
    with pytest.raises(InputError):
        ArchContext.create(2.0, (1.0, 0.0))
    with pytest.raises(InputError):
        ArchContext.create(8.0, (0.0, 0.0))


def test_weight_peaks_at_center():
    ctx = ArchContext.create(10.0, (1.0, 0.0))
    assert weight(ctx, ctx.center) == pytest.approx(1.0)
    assert weight(ctx, ctx.center + np.array([ctx.P0, 0.0])) == pytest.approx(
        math.exp(-1.0))
    far = ctx.center + np.array([ctx.truncation_radius + 1, 0.0])
    assert weight(ctx, far) == 0.0


def test_find_x0_lies_on_cone():
    g0 = diag_cubic(3).cubic_part()
    ctx = find_x0(g0, 16.0, seed=0)
    x0 = np.array(ctx.x0)
    assert np.isclose(np.linalg.norm(x0), 1.0)
    val = sum(v**3 for v in x0)
    assert abs(val) < 1e-8


def test_osc_integral_exact_at_zero():
    ctx = ArchContext.create(8.0, (1.0, -1.0, 0.0))
    g = diag_cubic(3)
    val, err = osc_integral_I(ctx, g, 0.0, (0.0, 0.0, 0.0))
    assert err == 0.0
    assert val == complex(math.pi ** 1.5 * ctx.P0**3)


def test_osc_separable_matches_monte_carlo():
    ctx = ArchContext.create(8.0, (1.0, -1.0))
    g = diag_cubic(2)
    z, beta = 1e-4, (0.01, -0.02)
    exact, err0 = osc_integral_I(ctx, g, z, beta, method="separable")
    assert err0 == 0.0
    mc, err = osc_integral_I(ctx, g, z, beta, method="mc", samples=200000)
    assert abs(mc - exact) < max(5 * err, 1e-3 * abs(exact))


def test_osc_batch_matches_single():
    ctx = ArchContext.create(8.0, (1.0, -1.0))
    g = diag_cubic(2)
    betas = [(0.0, 0.0), (0.25, 0.0), (0.1, -0.3)]
    batch = osc_integral_batch(ctx, g, 1e-4, betas)
    for b, got in zip(betas, batch):
        single, _ = osc_integral_I(ctx, g, 1e-4, b)
        assert abs(got - single) < 1e-9 * (1 + abs(single))


def test_count_N_matches_diagonal_oracle():
    # zeros of x1^3 - x2^3 are exactly the diagonal x1 = x2
    g = CubicPolynomial.from_terms(2, {(3, 0): 1, (0, 3): -1})
    ctx = ArchContext.create(8.0, (1.0, 1.0))
    expected = 0.0
    lo, hi = ctx.axis_ranges()[0]
    for t in range(lo, hi + 1):
        expected += weight(ctx, (t, t))
    assert count_N(g, ctx) == pytest.approx(expected, abs=0.0)


def test_count_N_bit_identical_across_thread_env(seven_var_corpus):
    code = (
        "from cubicpoints.arch import ArchContext, count_N\n"
        "from cubicpoints.polynomials import CubicPolynomial\n"
        "import struct\n"
        "g = CubicPolynomial.from_terms(2, {(3,0):1,(0,3):-1})\n"
        "ctx = ArchContext.create(8.0, (1.0, 1.0))\n"
        "print(struct.pack('<d', count_N(g, ctx)).hex())\n")
    outs = set()
    for threads in ("1", "4"):
        env = dict(os.environ, CUBIC_THREADS=threads)
        r = subprocess.run([sys.executable, "-c", code], env=env,
                           capture_output=True, text=True, check=True)
        outs.add(r.stdout.strip())
    assert len(outs) == 1


def test_default_z_grid_shape():
    grid = np.asarray(default_z_grid())
    assert (grid > 0).all()
    assert (np.diff(grid) > 0).all()
    assert grid.min() >= 1e-8 and grid.max() <= 1.0


def test_singular_integral_positive():
    g = diag_cubic(3, const=-2)
    ctx = find_x0(g.cubic_part(), 8.0, seed=0)
    est = singular_integral(ctx, g)
    assert est.value > 0
    assert est.stderr >= 0


def test_main_term_report_fields():
    g = diag_cubic(2, const=-2)
    summary = main_term_report(g, [8.0, 16.0], Qmax=6)
    assert len(summary.reports) == 2
    for rep in summary.reports:
        assert rep.caveat  # n = 2 < 10
        assert rep.series_partial == pytest.approx(summary.reports[0].series_partial)
    assert np.isfinite(summary.growth_exponent)
