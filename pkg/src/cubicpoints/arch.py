"""Archimedean side: Gaussian weights, lattice counts, oscillatory integrals.

All quantities live at a scale P with effective width P0 = P (log P)^{-2}
around a real base point x0 on the cone of the leading form.  The weight is

    w(x) = exp(-|x - P x0|^2 / P0^2),

and the oscillatory integral I(z; beta) integrates w(x) e(z g(x) + beta.x).
Monte-Carlo estimation exploits that w is itself an unnormalized Gaussian
density; separable polynomials get an exact-to-quadrature product path that
stays usable where Monte-Carlo variance explodes.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import BudgetExceededError, InputError, SearchFailureError
from .polynomials import CubicPolynomial, _second_partial

DEFAULT_LATTICE_BUDGET = 20_000_000
_TAIL = 1e-12  # relative Gaussian mass allowed outside the truncation radius
_QUAD_MIN = 4096
_QUAD_MAX = 1 << 20


@dataclass(frozen=True)
class ArchContext:
    P: float
    P0: float
    x0: tuple  # unit vector; on the real cone of g0 unless on_cone is False
    hessian_rank: int
    truncation_radius: float
    on_cone: bool = True

    @classmethod
    def create(cls, P, x0, hessian_rank=None, on_cone=True):
        x0 = np.asarray(x0, dtype=float)
        nrm = float(np.linalg.norm(x0))
        if nrm == 0:
            raise InputError("x0 must be non-zero")
        x0 = x0 / nrm
        P = float(P)
        if P <= math.e:
            raise InputError("P must exceed e so that P0 > 0 is meaningful")
        P0 = P / math.log(P) ** 2
        R = P0 * math.sqrt(-math.log(_TAIL) + 4.0)
        return cls(P, P0, tuple(float(v) for v in x0),
                   hessian_rank if hessian_rank is not None else len(x0), R, on_cone)

    @property
    def center(self):
        return np.array(self.x0) * self.P

    def weight_vec(self, X):
        d2 = np.sum((np.asarray(X, dtype=float) - self.center) ** 2, axis=-1)
        w = np.exp(-d2 / self.P0**2)
        w[d2 > self.truncation_radius**2] = 0.0
        return w

    def axis_ranges(self):
        c = self.center
        R = self.truncation_radius
        return [(math.ceil(ci - R), math.floor(ci + R)) for ci in c]

    def lattice_points(self, n, budget=DEFAULT_LATTICE_BUDGET):
        """All integer points of the truncation box with their weights."""
        if n != len(self.x0):
            raise InputError("dimension mismatch with x0")
        ranges = self.axis_ranges()
        total = 1
        for lo, hi in ranges:
            total *= max(hi - lo + 1, 0)
        if total > budget:
            raise BudgetExceededError(total, budget, "lattice box enumeration")
        axes = [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in ranges]
        grids = np.meshgrid(*axes, indexing="ij")
        X = np.stack([grid.ravel() for grid in grids], axis=1)
        return X, self.weight_vec(X)


def weight(ctx, x):
    """The Gaussian weight at a single point."""
    return float(ctx.weight_vec(np.asarray(x, dtype=float)[None, :])[0])


def _real_hessian(g0, x):
    cub = g0.as_cubic() if hasattr(g0, "as_cubic") else g0.cubic_part().as_cubic()
    n = cub.n
    H = np.zeros((n, n))
    for key, c in cub.cubic.items():
        for a in range(1, n + 1):
            for b in range(a, n + 1):
                val = _second_partial(key, c, a, b, list(x))
                H[a - 1][b - 1] += val
                if a != b:
                    H[b - 1][a - 1] += val
    return H


def _real_eval(g0, x):
    total = 0.0
    cub = g0.cubic if hasattr(g0, "cubic") else g0
    for (i, j, k), c in cub.items():
        total += c * x[i - 1] * x[j - 1] * x[k - 1]
    return total


def find_x0(g0, P, seed=0, trials=500, rank_tol=1e-8):
    """A unit real point on g0 = 0 with Hessian rank >= n - 1, as a context.

    Searches random lines a + t b, solving the 1-variable cubic for t; the
    accepted point is re-verified (|g0(x0)| small, rank condition) before use.
    """
    n = g0.n
    rng = np.random.default_rng((seed, 0xA12C))
    for _ in range(trials):
        a = rng.standard_normal(n)
        b = rng.standard_normal(n)
        # coefficients of g0(a + t b) in t
        coeffs = np.zeros(4)
        for (i, j, k), c in g0.cubic.items():
            tri = [(a[i - 1], b[i - 1]), (a[j - 1], b[j - 1]), (a[k - 1], b[k - 1])]
            for picks in product(range(2), repeat=3):
                coeffs[sum(picks)] += c * math.prod(t[p] for t, p in zip(tri, picks))
        poly = coeffs[::-1]
        if abs(poly[0]) < 1e-12:
            continue
        for t in np.roots(poly):
            if abs(t.imag) > 1e-10:
                continue
            x = a + t.real * b
            nrm = np.linalg.norm(x)
            if nrm < 1e-8:
                continue
            x = x / nrm
            if abs(_real_eval(g0, x)) > 1e-10:
                # polish with one Newton step along the gradient
                grad = _real_grad(g0, x)
                gn = np.dot(grad, grad)
                if gn < 1e-12:
                    continue
                x = x - _real_eval(g0, x) * grad / gn
                x = x / np.linalg.norm(x)
            if abs(_real_eval(g0, x)) > 1e-10:
                continue
            H = _real_hessian(g0, x)
            sv = np.linalg.svd(H, compute_uv=False)
            rank = int(np.sum(sv > rank_tol * max(sv[0], 1e-30)))
            if rank >= n - 1:
                return ArchContext.create(P, x, hessian_rank=rank)
    raise SearchFailureError(f"no real cone point with Hessian rank >= {n - 1} "
                             f"found in {trials} trials")


def _real_grad(g0, x):
    n = g0.n
    grad = np.zeros(n)
    for key, c in g0.cubic.items():
        for m in set(key):
            rest = list(key)
            rest.remove(m)
            grad[m - 1] += c * key.count(m) * x[rest[0] - 1] * x[rest[1] - 1]
    return grad


# -- weighted lattice count N(g; P) ----------------------------------------


def count_N(g, ctx, budget=DEFAULT_LATTICE_BUDGET):
    """N(g; P) = sum of w(x) over integer zeros of g in the truncation box.

    The last coordinate is solved exactly (integer roots of a 1-variable
    cubic), so enumeration only runs over the first n - 1 coordinates.
    Summation order is lexicographic in the prefix, hence deterministic.
    """
    n = g.n
    ranges = ctx.axis_ranges()
    prefix_total = 1
    for lo, hi in ranges[:-1]:
        prefix_total *= max(hi - lo + 1, 0)
    if prefix_total > budget:
        raise BudgetExceededError(prefix_total, budget, "zero enumeration")
    # split g by the exponent of the last variable
    layers = [{} for _ in range(4)]  # degree d -> {prefix exponent: coeff}
    for e, c in g.to_generic().terms.items():
        layers[e[-1]][e[:-1]] = layers[e[-1]].get(e[:-1], 0) + c
    lo_n, hi_n = ranges[-1]
    total = 0.0
    for prefix in product(*(range(lo, hi + 1) for lo, hi in ranges[:-1])):
        coeffs = [_eval_terms(layers[d], prefix) for d in range(4)]
        for root in _integer_cubic_roots(coeffs, lo_n, hi_n):
            x = prefix + (root,)
            total += weight(ctx, x)
    return total


def _eval_terms(terms, prefix):
    total = 0
    for e, c in terms.items():
        v = c
        for xi, ei in zip(prefix, e):
            if ei:
                v *= xi**ei
        total += v
    return total


def _integer_cubic_roots(coeffs, lo, hi):
    """Integer roots of c0 + c1 t + c2 t^2 + c3 t^3 in [lo, hi], exactly."""
    c0, c1, c2, c3 = coeffs
    if c3 == 0 and c2 == 0 and c1 == 0:
        return list(range(lo, hi + 1)) if c0 == 0 else []
    poly = [c3, c2, c1, c0]
    while poly[0] == 0:
        poly.pop(0)
    roots = set()
    for r in np.roots([float(c) for c in poly]):
        if abs(r.imag) > 1e-6:
            continue
        for cand in (math.floor(r.real), round(r.real), math.ceil(r.real)):
            if lo <= cand <= hi and c0 + c1 * cand + c2 * cand**2 + c3 * cand**3 == 0:
                roots.add(int(cand))
    return sorted(roots)


# -- oscillatory integrals --------------------------------------------------


def osc_integral_I(ctx, g, z, beta, samples=20000, seed=0, method="auto"):
    """I(z; beta) = integral of w(x) e(z g(x) + beta.x) dx, with error estimate.

    method "mc": importance sampling from the Gaussian w itself.
    method "separable": exact product of 1-D quadratures (g separable only);
    "auto" picks the separable path whenever available.
    """
    n = g.n
    beta = tuple(float(b) for b in beta)
    if len(beta) != n:
        raise InputError("beta has wrong length")
    z = float(z)
    mass = math.pi ** (n / 2) * ctx.P0**n
    if z == 0.0 and all(b == 0.0 for b in beta):
        return complex(mass), 0.0  # integrand is exactly 1 against the weight
    gen = g.to_generic()
    if method in ("auto", "separable") and gen.is_separable():
        return _osc_separable(ctx, gen, z, beta), 0.0
    if method == "separable":
        raise InputError("polynomial is not separable")
    rng = np.random.default_rng((seed, 0x05C1))
    c = ctx.center
    X = rng.normal(loc=c, scale=ctx.P0 / math.sqrt(2.0), size=(samples, n))
    phase = z * _eval_real_poly(gen, X) + X @ np.asarray(beta)
    vals = np.exp(2j * np.pi * phase)
    mean = vals.mean()
    var = np.mean(np.abs(vals - mean) ** 2)
    stderr = mass * math.sqrt(var / samples)
    return complex(mass * mean), stderr


def _eval_real_poly(gen, X):
    acc = np.zeros(X.shape[0])
    for e, c in gen.terms.items():
        term = np.full(X.shape[0], float(c))
        for i, ei in enumerate(e):
            if ei:
                term = term * X[:, i] ** ei
        acc += term
    return acc


def _quad_points(R, maxfreq):
    m = int(2 * R * 16 * (maxfreq + 1.0))
    return min(max(m, _QUAD_MIN), _QUAD_MAX)


def _osc_axis(ctx, cmap, ci, z, beta, npts=None):
    """1-D quadrature of exp(-(x-ci)^2/P0^2) e(z q(x) + beta x) by midpoints."""
    R = ctx.truncation_radius
    lo, hi = ci - R, ci + R
    slope = 0.0
    for d, c in cmap.items():
        slope += abs(c) * d * max(abs(lo), abs(hi)) ** (d - 1)
    if npts is None:
        npts = _quad_points(R, abs(z) * slope + abs(beta))
    h = (hi - lo) / npts
    x = lo + (np.arange(npts) + 0.5) * h
    val = np.zeros(npts)
    for d, c in cmap.items():
        val += float(c) * x**d
    integrand = np.exp(-((x - ci) ** 2) / ctx.P0**2) * np.exp(2j * np.pi * (z * val + beta * x))
    return complex(integrand.sum() * h)


def _osc_separable(ctx, gen, z, beta):
    const, per_var = gen.single_variable_pieces()
    c = ctx.center
    out = complex(np.exp(2j * np.pi * z * const))
    for i, cmap in enumerate(per_var):
        out *= _osc_axis(ctx, cmap, c[i], z, beta[i])
    return out


def osc_integral_batch(ctx, g, z, betas, budget=DEFAULT_LATTICE_BUDGET):
    """Deterministic I(z; beta) for many betas sharing one evaluation grid.

    Separable polynomials factor through per-axis 1-D quadratures with the
    distinct beta components cached; otherwise a full tensor midpoint grid is
    contracted axis by axis (n <= 3).
    """
    n = g.n
    betas = [tuple(float(x) for x in b) for b in betas]
    gen = g.to_generic()
    if gen.is_separable():
        const, per_var = gen.single_variable_pieces()
        c = ctx.center
        axis_cache = [dict() for _ in range(n)]
        base = complex(np.exp(2j * np.pi * z * const))
        out = []
        for b in betas:
            val = base
            for i in range(n):
                if b[i] not in axis_cache[i]:
                    axis_cache[i][b[i]] = _osc_axis(ctx, per_var[i], c[i], z, b[i])
                val *= axis_cache[i][b[i]]
            out.append(val)
        return np.array(out)
    if n > 3:
        raise BudgetExceededError(n, 3, "tensor-grid oscillatory integral")
    bmax = max((max(abs(x) for x in b) for b in betas), default=0.0)
    R = ctx.truncation_radius
    c = ctx.center
    span = float(np.max(np.abs(c)) + R)
    slope = abs(z) * _grad_bound(gen, span)
    m = _quad_points(R, slope + bmax)
    if m**n > budget:
        m = int(budget ** (1 / n))
    axes = [c[i] - R + (np.arange(m) + 0.5) * (2 * R / m) for i in range(n)]
    h = 2 * R / m
    grids = np.meshgrid(*axes, indexing="ij")
    X = np.stack([grid.ravel() for grid in grids], axis=1)
    F = (np.exp(-np.sum((X - c) ** 2, axis=1) / ctx.P0**2)
         * np.exp(2j * np.pi * z * _eval_real_poly(gen, X))).reshape((m,) * n)
    out = []
    phase_cache = {}

    def axis_phase(i, b):
        if (i, b) not in phase_cache:
            phase_cache[i, b] = np.exp(2j * np.pi * b * axes[i])
        return phase_cache[i, b]

    contract_cache = {}
    for b in betas:
        if n == 1:
            val = F @ axis_phase(0, b[0])
        elif n == 2:
            if b[1] not in contract_cache:
                contract_cache[b[1]] = F @ axis_phase(1, b[1])
            val = contract_cache[b[1]] @ axis_phase(0, b[0])
        else:
            if b[1:] not in contract_cache:
                contract_cache[b[1:]] = (F @ axis_phase(2, b[2])) @ axis_phase(1, b[1])
            val = contract_cache[b[1:]] @ axis_phase(0, b[0])
        out.append(complex(val * h**n))
    return np.array(out)


def _grad_bound(gen, span):
    total = 0.0
    for e, c in gen.terms.items():
        d = sum(e)
        if d:
            total += abs(c) * d * span ** (d - 1)
    return total


# -- the singular integral and the main-term comparison ---------------------


def default_z_grid(levels=10, per_level=6, floor=1e-8):
    """Geometric refinement of (floor, 1] toward 0; z >= 0 only (symmetry)."""
    edges = np.geomspace(floor, 1.0, levels * per_level + 1)
    return edges


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    stderr: float

    def to_json_dict(self):
        return {"value": self.value, "stderr": self.stderr}


def singular_integral(ctx, g, z_grid=None, samples=20000, seed=0, use_cubic_part=False):
    """J(g; P) = integral over |z| <= 1 of I(z; 0), by refined trapezoid.

    Only z >= 0 is evaluated: I(-z; 0) is the conjugate of I(z; 0), so the
    two-sided integral is 2 * Re of the one-sided one.  The region below the
    grid floor contributes at most 2 * floor * pi^{n/2} P0^n, which is folded
    into the error bar.
    """
    poly = g.cubic_part().as_cubic() if use_cubic_part else g
    n = poly.n
    grid = np.asarray(default_z_grid() if z_grid is None else z_grid, dtype=float)
    grid = np.sort(np.unique(np.abs(grid[grid != 0])))
    vals = np.empty(grid.shape[0])
    errs = np.empty(grid.shape[0])
    for idx, z in enumerate(grid):
        v, s = osc_integral_I(ctx, poly, z, (0.0,) * n, samples=samples, seed=seed + idx)
        vals[idx] = v.real
        errs[idx] = s
    mass = math.pi ** (n / 2) * ctx.P0**n
    inner = 2.0 * grid[0] * mass  # |I| <= mass on the unevaluated core
    trapezoid = getattr(np, "trapezoid", np.trapz)
    total = 2.0 * (trapezoid(vals, grid) + grid[0] * vals[0])
    err = 2.0 * trapezoid(errs, grid) + inner
    return IntegralEstimate(float(total), float(err))


@dataclass(frozen=True)
class CountReport:
    P: float
    N_weighted: float
    series_partial: float
    integral_estimate: IntegralEstimate
    main_term: float
    ratio: float
    caveat: bool  # True when n is below the theorem's range; diagnostic only

    def to_json_dict(self):
        return {
            "P": self.P,
            "N_weighted": self.N_weighted,
            "series_partial": self.series_partial,
            "integral": self.integral_estimate.to_json_dict(),
            "main_term": self.main_term,
            "ratio": self.ratio,
            "caveat": self.caveat,
        }


@dataclass(frozen=True)
class MainTermSummary:
    reports: tuple
    growth_exponent: float  # fitted from J(g;P) (log P)^{2n-2} across the P list

    def to_json_dict(self):
        return {
            "reports": [r.to_json_dict() for r in self.reports],
            "growth_exponent": self.growth_exponent,
        }


def main_term_report(g, P_list, Qmax=20, samples=20000, seed=0,
                     budget=DEFAULT_LATTICE_BUDGET):
    """Per-P comparison of the weighted count against series x integral.

    The asymptotic identity only holds for n >= 10; smaller n carries a
    caveat flag and the numbers are diagnostic.  The growth exponent is the
    slope of log(J (log P)^{2n-2}) against log P, i.e. the measured power of
    P once the weight's logarithmic factors are divided out (expected n - 3).
    """
    from .series import series_partial

    n = g.n
    if not P_list:
        return MainTermSummary((), float("nan"))
    sp = series_partial(g, Qmax).total
    reports = []
    js = []
    for P in P_list:
        ctx = find_x0(g.cubic_part(), P, seed=seed)
        N = count_N(g, ctx, budget)
        J = singular_integral(ctx, g, samples=samples, seed=seed)
        main = sp * J.value
        reports.append(CountReport(
            P=float(P), N_weighted=N, series_partial=sp, integral_estimate=J,
            main_term=main, ratio=(N / main if main != 0 else float("inf")),
            caveat=n < 10))
        js.append(J.value)
    if len(P_list) >= 2:
        xs = np.log(np.asarray(P_list, dtype=float))
        ys = np.log(np.maximum(np.abs(js), 1e-300)) + (2 * n - 2) * np.log(np.log(np.asarray(P_list, dtype=float)))
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = float("nan")
    return MainTermSummary(tuple(reports), slope)
