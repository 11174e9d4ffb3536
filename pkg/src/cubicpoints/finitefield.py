"""Finite fields F_{p^j} with vectorized point enumeration.

Field elements are encoded as integer indices 0..q-1: the element
sum_i d_i t^i (with t the class of the generator of F_p[t]/(modulus)) has
index sum_i d_i p^i.  The additive zero has index 0 and integer constants
c embed as index c mod p.  For j >= 2 the field carries dense add/mul
lookup tables, so polynomial evaluation over large point sets is numpy
fancy-indexing; for j = 1 plain modular arithmetic is used.

The canonical modulus for each (p, j) is the lexicographically first monic
irreducible polynomial, so counts are reproducible across runs.
"""

from functools import lru_cache
from itertools import product
from math import prod

import numpy as np

from .errors import BudgetExceededError, InputError
from .generic import Poly

DEFAULT_POINT_BUDGET = 50_000_000
_TABLE_CAP = 2500
_CHUNK = 1 << 20


def is_prime(m):
    if m < 2:
        return False
    for d in range(2, int(m**0.5) + 1):
        if m % d == 0:
            return False
    return True


def primes_upto(bound):
    return [p for p in range(2, bound + 1) if is_prime(p)]


# -- polynomial arithmetic over F_p (coefficient lists, used only to find moduli)


def _polmulmod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _polrem(res, mod, p)


def _polrem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for k in range(dm + 1):
                a[i - dm + k] = (a[i - dm + k] - c * mod[k]) % p
    a = a[:dm]
    while a and a[-1] == 0:
        a.pop()
    return a


def _polpow_x(e, mod, p):
    """x^e mod (mod), binary powering."""
    result = [1]
    base = _polrem([0, 1], mod, p)
    while e:
        if e & 1:
            result = _polmulmod(result, base, mod, p)
        e >>= 1
        base = _polmulmod(base, base, mod, p)
    return result


def _polgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        # a mod b with b made monic
        inv = pow(b[-1], -1, p)
        bm = [(c * inv) % p for c in b]
        a = _polrem(a, bm, p)
        a, b = b, a
    return a


def _is_irreducible(mod, p):
    j = len(mod) - 1
    # Rabin: x^{p^j} == x mod f, and gcd(x^{p^{j/r}} - x, f) = 1 for prime r | j
    xq = _polpow_x(p**j, mod, p)
    if xq != [0, 1]:
        return False
    for r in {r for r in range(2, j + 1) if j % r == 0 and is_prime(r)}:
        xr = _polpow_x(p ** (j // r), mod, p)
        diff = list(xr) + [0] * (2 - len(xr))
        diff[1] = (diff[1] - 1) % p
        while diff and diff[-1] == 0:
            diff.pop()
        g = _polgcd(mod, diff, p)
        if len(g) - 1 > 0:
            return False
    return True


@lru_cache(maxsize=None)
def canonical_modulus(p, j):
    """Lexicographically first monic irreducible of degree j over F_p."""
    if j == 1:
        return (0, 1)
    for tail in product(range(p), repeat=j):
        mod = list(reversed(tail)) + [1]  # low coefficients vary fastest, lex on (c0..c_{j-1})
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class ExtField:
    """The canonical field F_{p^j} with table-backed vector arithmetic."""

    def __init__(self, p, j=1, modulus=None):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        if j < 1:
            raise InputError("extension degree must be >= 1")
        self.p = int(p)
        self.j = int(j)
        self.q = p**j
        self.modulus = tuple(modulus) if modulus is not None else canonical_modulus(p, j)
        if len(self.modulus) != j + 1 or self.modulus[-1] % p != 1:
            raise InputError("modulus must be monic of degree j")
        if modulus is not None and j > 1 and not _is_irreducible(list(self.modulus), p):
            raise InputError("modulus is not irreducible over F_p")
        if self.j > 1:
            if self.q > _TABLE_CAP:
                raise BudgetExceededError(self.q, _TABLE_CAP, "extension field table size")
            self._build_tables()

    def __repr__(self):
        return f"ExtField(p={self.p}, j={self.j})"

    def _build_tables(self):
        p, j, q = self.p, self.j, self.q
        idx = np.arange(q)
        digits = np.empty((q, j), dtype=np.int64)
        rem = idx.copy()
        for i in range(j):
            digits[:, i] = rem % p
            rem //= p
        # powers of t reduced mod the modulus, up to degree 2j-2
        tp = {0: [1]}
        cur = [1]
        for m in range(1, 2 * j - 1):
            cur = _polmulmod(cur, [0, 1], list(self.modulus), p)
            tp[m] = cur
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for d in range(j):
            add += ((digits[:, None, d] + digits[None, :, d]) % p) * p**d
            w = np.zeros((j, j), dtype=np.int64)
            for i in range(j):
                for k in range(j):
                    poly = tp[i + k]
                    w[i, k] = poly[d] if d < len(poly) else 0
            mul += ((digits @ w @ digits.T) % p) * p**d
        self._digits = digits
        self._add = add.astype(np.int32)
        self._mul = mul.astype(np.int32)
        self._pow2 = self._mul[idx, idx].copy()
        self._pow3 = self._mul[idx, self._pow2].copy()
        self._neg = np.zeros(q, dtype=np.int32)
        neg_digits = (-digits) % p
        for d in range(j):
            self._neg += (neg_digits[:, d] * p**d).astype(np.int32)

    # -- scalar helpers ---------------------------------------------------

    def embed(self, c):
        return int(c) % self.p

    def element_digits(self, idx):
        """Coefficients (d_0, ..., d_{j-1}) of the element with this index."""
        out = []
        idx = int(idx)
        for _ in range(self.j):
            out.append(idx % self.p)
            idx //= self.p
        return tuple(out)

    def neg_idx(self, idx):
        if self.j == 1:
            if np.isscalar(idx) or np.ndim(idx) == 0:
                return (-int(idx)) % self.p
            return (-np.asarray(idx)) % self.p
        return self._neg[idx]

    # -- vector ops (numpy arrays of element indices) ---------------------

    def vadd(self, a, b):
        if self.j == 1:
            return (a + b) % self.p
        return self._add[a, b]

    def vmul(self, a, b):
        if self.j == 1:
            return (a * b) % self.p
        return self._mul[a, b]

    def vpow(self, a, e):
        if e == 0:
            return np.zeros_like(a) + 1
        if self.j == 1:
            return pow_mod_vec(a, e, self.p)
        if e == 1:
            return a
        if e == 2:
            return self._pow2[a]
        if e == 3:
            return self._pow3[a]
        out = a
        for _ in range(e - 1):
            out = self._mul[out, a]
        return out

    def vscale(self, c, a):
        c = self.embed(c)
        if c == 1:
            return a
        if self.j == 1:
            return (c * a) % self.p
        return self._mul[c, a]

    def eval_poly_vec(self, poly, X):
        """Evaluate a Poly at points X (array of shape (N, m) of element indices)."""
        N = X.shape[0]
        acc = np.zeros(N, dtype=np.int64 if self.j == 1 else np.int32)
        for e, c in poly.terms.items():
            term = None
            for i, ei in enumerate(e):
                if ei:
                    f = self.vpow(X[:, i], ei)
                    term = f if term is None else self.vmul(term, f)
            if term is None:
                term = np.full(N, self.embed(c), dtype=acc.dtype)
            else:
                term = self.vscale(c, term)
            acc = self.vadd(acc, term)
        return acc

    def point_chunks(self, m, chunk=_CHUNK):
        """Yield arrays of shape (N, m) covering F_q^m in lexicographic order."""
        q = self.q
        total = q**m
        inner = m
        while inner > 0 and q**inner > chunk:
            inner -= 1
        inner_count = q**inner
        grid = np.empty((inner_count, m), dtype=np.int32)
        rem = np.arange(inner_count)
        for i in range(inner - 1, -1, -1):
            grid[:, m - inner + i] = rem % q
            rem //= q
        if inner == m:
            yield grid
            return
        for outer in product(range(q), repeat=m - inner):
            block = grid.copy()
            for i, v in enumerate(outer):
                block[:, i] = v
            yield block
        assert total == inner_count * q ** (m - inner)


def pow_mod_vec(a, e, p):
    out = a % p
    for _ in range(e - 1):
        out = (out * (a % p)) % p
    return out


def _as_generic(F):
    if isinstance(F, Poly):
        return F
    return F.to_generic()


def _restrict_to_used(polys, m):
    """Drop variables that appear in none of the polynomials.

    Returns (restricted polys, number of active variables, number dropped).
    """
    used = sorted({v for f in polys for v in f.variables_used()})
    if len(used) == m:
        return polys, m, 0
    remap = {v: i + 1 for i, v in enumerate(used)}
    out = []
    for f in polys:
        terms = {}
        for e, c in f.terms.items():
            e2 = [0] * len(used)
            for i, x in enumerate(e):
                if x:
                    e2[remap[i + 1] - 1] = x
            terms[tuple(e2)] = terms.get(tuple(e2), 0) + c
        out.append(Poly(len(used), terms))
    return out, len(used), m - len(used)


def count_zeros_system(polys, field, budget=DEFAULT_POINT_BUDGET):
    """Exact #{x in F_q^m : all polys vanish}, by (vectorized) enumeration.

    Variables absent from every polynomial are factored out analytically.
    """
    polys = [_as_generic(f) for f in polys]
    m = polys[0].n
    if any(f.n != m for f in polys):
        raise InputError("polynomials live in different variable counts")
    active = [f for f in polys if not f.is_zero()]
    if not active:
        return field.q**m
    reduced, mact, dropped = _restrict_to_used(active, m)
    needed = field.q**mact
    if needed > budget:
        raise BudgetExceededError(needed, budget, "affine point enumeration")
    count = 0
    for X in field.point_chunks(mact):
        mask = field.eval_poly_vec(reduced[0], X) == 0
        for f in reduced[1:]:
            if not mask.any():
                break
            sub = np.flatnonzero(mask)
            vals = field.eval_poly_vec(f, X[sub])
            mask[sub[vals != 0]] = False
        count += int(mask.sum())
    return count * field.q**dropped


def count_affine_zeros(F, field, budget=DEFAULT_POINT_BUDGET):
    """Exact #{x in F_q^m : F(x) = 0}.

    Separable polynomials (every monomial univariate) are counted by value
    histogram convolution, so diagonal forms stay cheap at large q^m; anything
    else is enumerated within the budget.
    """
    F = _as_generic(F)
    if F.is_zero():
        return field.q**F.n
    if F.is_separable():
        return _count_separable(F, field)
    return count_zeros_system([F], field, budget)


def value_histogram_univariate(field, coeff_map):
    """Histogram over F_q of sum_d c_d x^d as x runs over the field."""
    x = np.arange(field.q, dtype=np.int32)
    acc = np.zeros(field.q, dtype=np.int64 if field.j == 1 else np.int32)
    for d, c in coeff_map.items():
        acc = field.vadd(acc, field.vscale(c, field.vpow(x, d)))
    return np.bincount(acc, minlength=field.q).astype(np.int64)


def additive_convolve(field, h1, h2):
    """Cyclic convolution of histograms over the additive group of the field."""
    q = field.q
    out = np.zeros(q, dtype=np.int64)
    if field.j == 1:
        for b in range(q):
            if h2[b]:
                out += np.roll(h1, b) * int(h2[b])
        return out
    for b in range(q):
        if h2[b]:
            out[field._add[:, b]] += h1 * int(h2[b])
    return out


def _count_separable(F, field):
    const, per_var = F.single_variable_pieces()
    hist = None
    unused = 0
    for cmap in per_var:
        if not cmap:
            unused += 1
            continue
        h = value_histogram_univariate(field, cmap)
        hist = h if hist is None else additive_convolve(field, hist, h)
    if hist is None:
        return 0  # non-zero constant, no variables: no zeros (const==0 handled above)
    target = field.neg_idx(field.embed(const))
    return int(hist[target]) * field.q**unused


def projective_from_affine(affine_count, q):
    """Projective count for a cone: (affine - 1)/(q - 1), exactly."""
    num = affine_count - 1
    assert num % (q - 1) == 0, "affine count of a cone must be 1 mod (q-1)"
    return num // (q - 1)
