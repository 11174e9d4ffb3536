"""Hypersurface geometry over finite fields: singular loci, smoothness, fibers.

Dimension estimates are heuristic certificates over the tested fields only;
every report records which (p, j) were actually checked.
"""

from dataclasses import dataclass, field as dc_field
from math import log

import numpy as np

from .errors import AmbiguityError, BudgetExceededError, InputError
from .finitefield import (
    DEFAULT_POINT_BUDGET,
    ExtField,
    _TABLE_CAP,
    count_affine_zeros,
    count_zeros_system,
    projective_from_affine,
)
from .generic import Poly


@dataclass(frozen=True)
class LocusDimReport:
    p: int
    counts: dict  # j -> affine point count of the locus over F_{p^j}
    projective_counts: dict
    dim_estimate: int
    certified_nonsingular: bool

    def to_json_dict(self):
        return {
            "p": self.p,
            "affine_counts": {str(j): c for j, c in self.counts.items()},
            "projective_counts": {str(j): c for j, c in self.projective_counts.items()},
            "dim_estimate": self.dim_estimate,
            "certified_nonsingular": self.certified_nonsingular,
        }


def _gradient_system(g0):
    f = g0.to_generic()
    return [g for g in f.gradient_polys()]


def singular_locus_dim_mod_p(g0, p, jmax=3, budget=DEFAULT_POINT_BUDGET):
    """Estimate s_p(g0): the dimension of the singular locus of g0 = 0 over F_p.

    Counts projective solutions of grad(g0) = 0 over F_{p^j} for each feasible
    j <= jmax and fits the exponent d with count ~ p^{jd}; d = -1 iff every
    tested extension had only the trivial zero.
    """
    n = g0.n
    system = _gradient_system(g0)
    active_vars = len({v for f in system for v in f.variables_used()})
    counts, proj = {}, {}
    for j in range(1, jmax + 1):
        q = p**j
        if q**active_vars > budget or (j > 1 and q > _TABLE_CAP):
            break
        fld = ExtField(p, j)
        affine = count_zeros_system(system, fld, budget)
        counts[j] = affine
        proj[j] = projective_from_affine(affine, q)
    if not counts:
        raise BudgetExceededError(p**active_vars, budget, "singular locus enumeration")
    positive = {j: c for j, c in proj.items() if c > 0}
    if not positive:
        dim = -1
    else:
        best, best_err = 0, None
        for d in range(0, max(n - 2, 0) + 1):
            err = sum((log(c, p) - j * d) ** 2 for j, c in positive.items())
            if best_err is None or err < best_err:
                best, best_err = d, err
        dim = best
    return LocusDimReport(
        p=p,
        counts=counts,
        projective_counts=proj,
        dim_estimate=dim,
        certified_nonsingular=(dim == -1),
    )


def singular_locus_dim_Q(g0, primes=(5, 7, 11), jmax=3, budget=DEFAULT_POINT_BUDGET):
    """Heuristic s(g0) over Q: minimum of s_p over the sampled primes.

    Raises AmbiguityError when no two sampled primes agree.
    """
    from math import gcd

    content = 0
    for c in g0.cubic.values():
        content = gcd(content, c)
    for p in primes:
        if p < 5:
            raise InputError("sampled primes must be >= 5")
        if content % p == 0:
            raise InputError(f"prime {p} divides the content of the cubic part")
    per_prime = {p: singular_locus_dim_mod_p(g0, p, jmax, budget).dim_estimate for p in primes}
    values = list(per_prime.values())
    if len(primes) > 1 and len(set(values)) == len(values):
        raise AmbiguityError(per_prime)
    return min(values)


def section_smooth(g0, v, p, budget=DEFAULT_POINT_BUDGET):
    """True iff {g0 = 0, v.x = 0} is smooth as a projective intersection over F_p.

    Checked by enumerating all F_p-points of the cone and requiring the
    2 x (n) Jacobian [grad g0(x); v] to have rank 2 at each non-zero point.
    """
    n = g0.n
    v = [int(x) % p for x in v]
    if all(x == 0 for x in v):
        raise InputError("v must be non-zero modulo p")
    if p**n > budget:
        raise BudgetExceededError(p**n, budget, "section smoothness scan")
    fld = ExtField(p, 1)
    f = g0.to_generic()
    lin = Poly(n, {tuple(1 if i == k else 0 for i in range(n)): v[k] for k in range(n)})
    grads = f.gradient_polys()
    for X in fld.point_chunks(n):
        mask = (fld.eval_poly_vec(f, X) == 0) & (fld.eval_poly_vec(lin, X) == 0)
        mask &= ~np.all(X == 0, axis=1)
        if not mask.any():
            continue
        pts = X[np.flatnonzero(mask)]
        gvals = np.stack([fld.eval_poly_vec(g, pts) for g in grads])  # (n, N)
        ok = np.zeros(pts.shape[0], dtype=bool)
        for i in range(n):
            for j in range(i + 1, n):
                minor = (gvals[i] * v[j] - gvals[j] * v[i]) % p
                ok |= minor != 0
        if not ok.all():
            return False
    return True


def fiber_counts(F, G, fld, budget=DEFAULT_POINT_BUDGET):
    """Exact fiber counts #{x : G(x)=0, F(x)=tau} for every tau in F_{p^j}.

    Returns a map from element index of tau to the count.
    """
    F = F if isinstance(F, Poly) else F.to_generic()
    G = G if isinstance(G, Poly) else G.to_generic()
    if F.n != G.n:
        raise InputError("F and G must share the variable count")
    m = F.n
    if fld.q**m > budget:
        raise BudgetExceededError(fld.q**m, budget, "fiber enumeration")
    hist = np.zeros(fld.q, dtype=np.int64)
    for X in fld.point_chunks(m):
        if G.is_zero():
            vals = fld.eval_poly_vec(F, X)
        else:
            mask = fld.eval_poly_vec(G, X) == 0
            if not mask.any():
                continue
            vals = fld.eval_poly_vec(F, X[np.flatnonzero(mask)])
        hist += np.bincount(vals, minlength=fld.q)
    return {tau: int(hist[tau]) for tau in range(fld.q)}


def katz_reference(fld, n):
    """Reference fiber size (q - 1) q^{n-1} used in the square-deviation check."""
    return (fld.q - 1) * fld.q ** (n - 1)


def fiber_square_deviation(counts, fld, reference):
    """Sum over tau of |N(tau) - reference|^2, including empty fibers."""
    return sum((counts.get(tau, 0) - reference) ** 2 for tau in range(fld.q))


def deligne_defect(F, p, j, s, budget=DEFAULT_POINT_BUDGET):
    """|count - q^{m-1}| / q^{(m+1+s)/2} for a form F of degree coprime to p."""
    f = F if isinstance(F, Poly) else F.to_generic()
    if not f.is_homogeneous() or f.is_zero():
        raise InputError("F must be a non-zero form")
    d = f.degree()
    if d % p == 0:
        raise InputError(f"p={p} divides the degree {d}")
    fld = ExtField(p, j)
    q = fld.q
    m = f.n
    count = count_affine_zeros(f, fld, budget)
    return abs(count - q ** (m - 1)) / q ** ((m + 1 + s) / 2)
