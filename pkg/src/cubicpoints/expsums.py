"""Complete exponential sums for cubic polynomials and related counts.

The central object is

    S_u(q; v) = sum over a coprime to q of e_q(a^{-1} u)
                * sum over y mod q of e_q(a g(y) - v.y),

kept exact as a length-q histogram of phase residues (the sum equals
sum_r hist[r] e_q(r)); the complex value is one final contraction against
precomputed q-th roots of unity.  A CRT fast path splits composite moduli
into prime-power pieces.  The module also carries the auxiliary counting
quantities used alongside these sums: the kernel-count N~(q), the lifting
counts M(p^f; k) with their telescoping identity, and the square-full
decomposition q = q1^2 q2 of a modulus.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, log

import numpy as np

from .arith import euler_phi, factorize, is_squarefull, omega, ramanujan_prime_power
from .errors import BudgetExceededError, InputError
from .intlinalg import smith_diagonal

DEFAULT_TERM_BUDGET = 10**9
_CHUNK = 1 << 20


@dataclass(frozen=True)
class ExpSumSpec:
    """Parameters (g, u, q, v) of a complete sum; u and v stored reduced mod q."""

    g: object
    u: int
    q: int
    v: tuple

    def __post_init__(self):
        if self.q < 1:
            raise InputError("modulus must be >= 1")
        if len(self.v) != self.g.n:
            raise InputError(f"v has length {len(self.v)}, expected {self.g.n}")
        object.__setattr__(self, "u", int(self.u) % self.q)
        object.__setattr__(self, "v", tuple(int(x) % self.q for x in self.v))

    def to_json_dict(self):
        return {"n": self.g.n, "u": self.u, "q": self.q, "v": list(self.v)}


@dataclass(frozen=True)
class ExpSum:
    spec: ExpSumSpec
    histogram: tuple  # None on the CRT path
    value: complex
    method: str
    terms: int

    def to_json_dict(self, with_histogram=False):
        out = {
            "spec": self.spec.to_json_dict(),
            "value": {"re": self.value.real, "im": self.value.imag},
            "abs": abs(self.value),
            "method": self.method,
            "terms": self.terms,
        }
        if with_histogram and self.histogram is not None:
            out["histogram"] = list(self.histogram)
        return out


@lru_cache(maxsize=64)
def _roots_of_unity(q):
    return np.exp(2j * np.pi * np.arange(q) / q)


def _units(q):
    return [a for a in range(1, q + 1) if gcd(a, q) == 1] if q > 1 else [1]


def residue_chunks(q, m, chunk=_CHUNK):
    """Yield int64 arrays of shape (N, m) covering (Z/q)^m lexicographically."""
    from itertools import product

    inner = m
    while inner > 0 and q**inner > chunk:
        inner -= 1
    inner_count = q**inner
    grid = np.empty((inner_count, m), dtype=np.int64)
    rem = np.arange(inner_count)
    for i in range(inner - 1, -1, -1):
        grid[:, m - inner + i] = rem % q
        rem //= q
    if inner == m:
        yield grid
        return
    for outer in product(range(q), repeat=m - inner):
        block = grid.copy()
        for i, val in enumerate(outer):
            block[:, i] = val
        yield block


def eval_mod_vec(g, X, q):
    """g(X) mod q for a CubicPolynomial g at rows of X (entries reduced mod q)."""
    N = X.shape[0]
    acc = np.full(N, g.const % q, dtype=np.int64)
    for i, c in enumerate(g.lin):
        if c % q:
            acc = (acc + (c % q) * X[:, i]) % q
    for (i, j), c in g.quad.items():
        if c % q:
            acc = (acc + (c % q) * (X[:, i - 1] * X[:, j - 1] % q)) % q
    for (i, j, k), c in g.cubic.items():
        if c % q:
            acc = (acc + (c % q) * (X[:, i - 1] * X[:, j - 1] % q * X[:, k - 1] % q)) % q
    return acc


def _joint_histogram(spec, chunk=_CHUNK):
    """J[s, t] = #{y mod q : g(y) = s, v.y = t (mod q)}, times q^(dropped vars)."""
    g, q, v = spec.g, spec.q, spec.v
    n = g.n
    used = set()
    for key in g.cubic:
        used.update(key)
    for key in g.quad:
        used.update(key)
    for i, c in enumerate(g.lin):
        if c % q:
            used.add(i + 1)
    for i, c in enumerate(v):
        if c % q:
            used.add(i + 1)
    cols = sorted(i - 1 for i in used)
    dropped = n - len(cols)
    J = np.zeros(q * q, dtype=np.int64)
    if not cols:
        J[(g.const % q) * q] = 1
        return (J * q**dropped).reshape(q, q)
    # relabel to the active variables only
    sub = {i + 1: a + 1 for a, i in enumerate(cols)}
    from .polynomials import CubicPolynomial

    gm = len(cols)
    cub = {tuple(sorted(sub[i] for i in key)): c for key, c in g.cubic.items()}
    qd = {tuple(sorted(sub[i] for i in key)): c for key, c in g.quad.items()}
    lin = [0] * gm
    for i, c in enumerate(g.lin):
        if i + 1 in sub:
            lin[sub[i + 1] - 1] = c
    gr = CubicPolynomial(gm, cub, qd, lin, g.const)
    vr = np.array([v[i] for i in cols], dtype=np.int64)
    for X in residue_chunks(q, gm, chunk):
        s = eval_mod_vec(gr, X, q)
        t = (X @ vr) % q
        J += np.bincount(s * q + t, minlength=q * q)
    return (J * q**dropped).reshape(q, q)


def complete_sum(spec, budget=DEFAULT_TERM_BUDGET):
    """Exact S_u(q; v) by direct evaluation; deterministic histogram."""
    g, u, q = spec.g, spec.u, spec.q
    n = g.n
    phi = euler_phi(q)
    terms = phi * q**n
    if q == 1:
        return ExpSum(spec, (1,), complex(1.0), "direct", 1)
    if terms > budget:
        raise BudgetExceededError(terms, budget, "complete exponential sum")
    J = _joint_histogram(spec)
    hist = np.zeros(q, dtype=np.int64)
    s_idx = np.arange(q, dtype=np.int64)[:, None]
    t_idx = np.arange(q, dtype=np.int64)[None, :]
    for a in _units(q):
        abar = pow(a, -1, q)
        r = (abar * u + a * s_idx - t_idx) % q
        hist += np.bincount(r.ravel(), weights=J.ravel(), minlength=q).astype(np.int64)
    assert int(hist.sum()) == terms, "histogram mass must equal phi(q) q^n"
    value = complex(np.dot(hist, _roots_of_unity(q)))
    return ExpSum(spec, tuple(int(x) for x in hist), value, "direct", terms)


def crt_sum(spec, budget=DEFAULT_TERM_BUDGET):
    """S_u(q; v) via the multiplicative splitting over prime-power factors.

    Uses S_u(rs; v) = S_{s_bar^2 u}(r; s_bar v) * S_{r_bar^2 u}(s; r_bar v)
    with r r_bar + s s_bar = 1; returns the complex value only.
    """
    g, q = spec.g, spec.q
    factors = factorize(q) if q > 1 else {}
    value = complex(1.0)
    terms = 0
    u, v = spec.u, spec.v
    rest = q
    for p, e in factors.items():
        r = p**e
        s = rest // r
        if s == 1:
            part = complete_sum(ExpSumSpec(g, u, r, v), budget)
        else:
            sbar = pow(s, -1, r)
            rbar = (1 - s * sbar) // r
            part = complete_sum(
                ExpSumSpec(g, sbar * sbar * u, r, tuple(sbar * x for x in v)), budget
            )
            u = rbar * rbar * u % s
            v = tuple(rbar * x % s for x in v)
        value *= part.value
        terms += part.terms
        rest = s
    return ExpSum(spec, None, value, "crt", max(terms, 1))


def expsum_auto(spec, budget=DEFAULT_TERM_BUDGET):
    """Direct path for prime powers, CRT path otherwise."""
    if spec.q > 1 and len(factorize(spec.q)) > 1:
        return crt_sum(spec, budget)
    return complete_sum(spec, budget)


# -- weighted sums and the rational-point side of Poisson summation --------


def weighted_sum_S(g, alpha, ctx, budget=DEFAULT_TERM_BUDGET):
    """S(alpha) = sum over integer x of w(x) e(alpha g(x)), truncated box."""
    X, w = ctx.lattice_points(g.n, budget)
    gv = _eval_int_vec(g, X)
    frac = float(alpha) % 1.0  # g is integer-valued, so e(alpha g) has period 1
    return complex(np.sum(w * np.exp(2j * np.pi * frac * gv)))


def su_qz(g, u, q, z, ctx, budget=DEFAULT_TERM_BUDGET):
    """S_u(q; z) = sum over a coprime to q of e_q(a^{-1} u) S(a/q + z)."""
    if q < 1:
        raise InputError("modulus must be >= 1")
    X, w = ctx.lattice_points(g.n, budget)
    gv = _eval_int_vec(g, X)
    base = w * np.exp(2j * np.pi * float(z) * gv)
    roots = _roots_of_unity(q)
    gmod = gv % q
    total = complex(0.0)
    for a in _units(q):
        abar = pow(a, -1, q)
        inner = np.sum(base * roots[(a * gmod) % q])
        total += roots[(abar * (u % q)) % q] * inner
    return total


def _eval_int_vec(g, X):
    """Exact integer g(X) on int64 rows (coordinates small enough not to overflow)."""
    N = X.shape[0]
    acc = np.full(N, g.const, dtype=np.int64)
    for i, c in enumerate(g.lin):
        if c:
            acc += c * X[:, i]
    for (i, j), c in g.quad.items():
        acc += c * X[:, i - 1] * X[:, j - 1]
    for (i, j, k), c in g.cubic.items():
        acc += c * X[:, i - 1] * X[:, j - 1] * X[:, k - 1]
    return acc


# -- kernel counts N~(q) and the Hessian-pencil machinery -------------------


def kernel_count(M, q):
    """#{j mod q : M j = 0 mod q}, from the integer Smith form (no enumeration)."""
    if q < 1:
        raise InputError("modulus must be >= 1")
    if q == 1:
        return 1
    n = len(M)
    diag = smith_diagonal(M)
    count = 1
    rank = 0
    for d in diag:
        if d != 0:
            count *= gcd(abs(d), q)
            rank += 1
    return count * q ** (n - rank)


def _hessian_pencil(g):
    """Matrices (M1, [B_1..B_n]) with hessian(h) = M1 + sum h_i B_i."""
    n = g.n
    zero = g.hessian([0] * n)
    M1 = [list(r) for r in zero.m1]
    basis = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        basis.append([list(r) for r in g.hessian(e).m0])
    return M1, basis


def ntilde(g, q, budget=DEFAULT_TERM_BUDGET):
    """N~(q) = #{h, j mod q : q | (1/6) M(h) j} for gcd(q, 6) = 1.

    Since 6 is then a unit, the condition is q | M(h) j, counted as a sum of
    kernel sizes of the Hessian pencil over all h mod q.
    """
    if gcd(q, 6) != 1:
        raise InputError("N~ requires gcd(q, 6) = 1")
    n = g.n
    if q == 1:
        return 1
    factors = factorize(q)
    if len(factors) > 1:
        # multiplicative over coprime parts
        total = 1
        for p, e in factors.items():
            total *= ntilde(g, p**e, budget)
        return total
    M1, basis = _hessian_pencil(g)
    if list(factors.values())[0] == 1 and n <= 3:
        if q**n > budget:
            raise BudgetExceededError(q**n, budget, "kernel-count sum")
        return _ntilde_prime_vec(M1, basis, q, n)
    if q ** (2 * n) > budget:
        raise BudgetExceededError(q ** (2 * n), budget, "kernel-count sum")
    total = 0
    for X in residue_chunks(q, n, chunk=1 << 14):
        for row in X:
            M = [[M1[a][b] + sum(int(row[i]) * basis[i][a][b] for i in range(n)) for b in range(n)] for a in range(n)]
            total += kernel_count(M, q)
    return total


def _ntilde_prime_vec(M1, basis, p, n):
    """Vectorized kernel-count sum over h mod p via minor ranks (n <= 3)."""
    total = 0
    for Hs in residue_chunks(p, n):
        E = {}
        for a in range(n):
            for b in range(n):
                acc = np.full(Hs.shape[0], M1[a][b], dtype=np.int64)
                for i in range(n):
                    acc += Hs[:, i] * basis[i][a][b]
                E[a, b] = acc % p
        if n == 1:
            rank = (E[0, 0] != 0).astype(np.int64)
        elif n == 2:
            det = (E[0, 0] * E[1, 1] - E[0, 1] * E[1, 0]) % p
            any_entry = (E[0, 0] != 0) | (E[0, 1] != 0) | (E[1, 0] != 0) | (E[1, 1] != 0)
            rank = any_entry.astype(np.int64) + (det != 0)
        else:
            det = np.zeros(Hs.shape[0], dtype=np.int64)
            for (i, j, k), sign in (
                ((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                ((2, 1, 0), -1), ((0, 2, 1), -1), ((1, 0, 2), -1),
            ):
                det += sign * (E[0, i] * E[1, j] % p) * E[2, k]
            det %= p
            any_entry = np.zeros(Hs.shape[0], dtype=bool)
            minor2 = np.zeros(Hs.shape[0], dtype=bool)
            for a in range(3):
                for b in range(3):
                    any_entry |= E[a, b] != 0
            for a in range(3):
                for b in range(a + 1, 3):
                    for c in range(3):
                        for d in range(c + 1, 3):
                            m = (E[a, c] * E[b, d] - E[a, d] * E[b, c]) % p
                            minor2 |= m != 0
            rank = any_entry.astype(np.int64) + minor2 + (det != 0)
        total += int(np.sum(np.int64(p) ** (n - rank)))
    return total


# -- lifting counts M(p^f; k) ----------------------------------------------


def count_M(g, p, f, k, budget=DEFAULT_TERM_BUDGET):
    """M(p^f; k) = #{h mod p^f : p | h - k, p^f | g(h)}."""
    n = g.n
    if f < 1:
        raise InputError("f must be >= 1")
    if len(k) != n:
        raise InputError("k has wrong length")
    k = [int(x) % p for x in k]
    points = p ** ((f - 1) * n)
    if points > budget:
        raise BudgetExceededError(points, budget, "lifting-count enumeration")
    q = p**f
    kvec = np.array(k, dtype=np.int64)
    total = 0
    for T in residue_chunks(p ** (f - 1), n):
        H = (kvec[None, :] + p * T) % q
        total += int(np.count_nonzero(eval_mod_vec(g, H, q) == 0))
    return total


@dataclass(frozen=True)
class MSplitReport:
    p: int
    f: int
    ell: int
    k: tuple
    telescoped: int
    expsum_side: Fraction
    difference: Fraction

    def to_json_dict(self):
        return {
            "p": self.p, "f": self.f, "ell": self.ell, "k": list(self.k),
            "telescoped": self.telescoped,
            "expsum_side": str(self.expsum_side),
            "difference": str(self.difference),
        }


def M_split_identity_check(g, p, f, k, ell, budget=DEFAULT_TERM_BUDGET):
    """Check the telescoping identity for the small-divisor part M1(p^f).

    M1(p^f) = p^{-f} sum_{0<=e<=ell} sum_{h = k mod p, h mod p^f} c_{p^e}(g(h))
            = p^{f(n-1)} p^{ell(1-n)} M(p^ell; k),

    where c_{p^e} is the Ramanujan sum.  Both sides are computed exactly.
    """
    n = g.n
    if not 1 <= ell <= f:
        raise InputError("need 1 <= ell <= f")
    k = tuple(int(x) % p for x in k)
    telescoped = p ** ((f - ell) * (n - 1)) * count_M(g, p, ell, k, budget)
    points = p ** ((f - 1) * n)
    if points > budget:
        raise BudgetExceededError(points, budget, "M-split enumeration")
    # valuation histogram of g(h) mod p^ell over the congruence class of k
    qell = p**ell
    kvec = np.array(k, dtype=np.int64)
    val_hist = np.zeros(ell + 1, dtype=np.int64)  # valuation capped at ell
    qf = p**f
    for T in residue_chunks(p ** (f - 1), n):
        H = (kvec[None, :] + p * T) % qf
        r = eval_mod_vec(g, H, qell)
        v = np.zeros(r.shape[0], dtype=np.int64)
        cur = r.copy()
        for _ in range(ell):
            step = cur % p == 0
            v += step
            cur = np.where(step, cur // p, cur)
        # cur = 0 reduced mod p^ell ends at exactly v = ell, the cap
        val_hist += np.bincount(v, minlength=ell + 1)
    total = 0
    for e in range(0, ell + 1):
        for v in range(ell + 1):
            cnt = int(val_hist[v])
            if cnt:
                total += cnt * ramanujan_prime_power(p, e, 0 if v >= ell else p**v)
    expside = Fraction(total, p**f)
    return MSplitReport(p, f, ell, k, telescoped, expside, expside - telescoped)


# -- square-full decomposition ---------------------------------------------


@dataclass(frozen=True)
class SquarefullParts:
    q: int
    q1: int
    q2: int
    q4: int
    thetas: dict  # p -> theta_p(e) for p^e || q

    def to_json_dict(self):
        return {"q": self.q, "q1": self.q1, "q2": self.q2, "q4": self.q4,
                "thetas": {str(p): t for p, t in self.thetas.items()}}


def theta_p(e):
    """1 exactly when e = 2f + 1 with f >= 6, i.e. odd e >= 13."""
    return 1 if (e % 2 == 1 and e >= 13) else 0


def squarefull_parts(q):
    """q1 = prod p^[u/2], q2 = prod over odd u of p, q4 = prod over odd u >= 13."""
    if q < 1:
        raise InputError("q must be >= 1")
    q1 = q2 = q4 = 1
    thetas = {}
    for p, u in factorize(q).items():
        q1 *= p ** (u // 2)
        if u % 2 == 1:
            q2 *= p
            if u >= 13:
                q4 *= p
        thetas[p] = theta_p(u)
    parts = SquarefullParts(q, q1, q2, q4, thetas)
    assert parts.q1**2 * parts.q2 == q
    return parts


# -- square-full box-sum diagnostic ----------------------------------------


@dataclass(frozen=True)
class BoxSumReport:
    q: int
    u: int
    v0: tuple
    V: int
    total: float
    envelope: float
    ratio: float
    A: float

    def to_json_dict(self):
        return {"q": self.q, "u": self.u, "v0": list(self.v0), "V": self.V,
                "total": self.total, "envelope": self.envelope,
                "ratio": self.ratio, "A": self.A}


def box_sum_diagnostic(g, u, q, v0, V, A=1.0, budget=DEFAULT_TERM_BUDGET):
    """Sum of |S_u(q; v)| over |v - v0|_inf <= V against its growth envelope.

    The envelope A^omega(q) (log(q+1))^{2n} q^{n/2+1} (V^n + q^{n/3}) has a
    non-effective constant A; it is reported, never asserted.
    """
    from itertools import product as iproduct

    if not is_squarefull(q):
        raise InputError("box-sum diagnostic requires a square-full modulus")
    n = g.n
    if len(v0) != n:
        raise InputError("v0 has wrong length")
    cache = {}
    total = 0.0
    count = 0
    for offs in iproduct(range(-V, V + 1), repeat=n):
        v = tuple((int(v0[i]) + offs[i]) % q for i in range(n))
        if v not in cache:
            cache[v] = abs(complete_sum(ExpSumSpec(g, u, q, v), budget).value)
        total += cache[v]
        count += 1
    envelope = A ** omega(q) * log(q + 1) ** (2 * n) * q ** (n / 2 + 1) * (V**n + q ** (n / 3))
    return BoxSumReport(q, u % q, tuple(int(x) for x in v0), V, total, envelope,
                        total / envelope, A)
