"""p-adic solubility: Hensel lifting, zero searches, densities, the decider.

A `PAdicWitness` pins down a residue vector x mod p^k with g(x) = 0 mod p^k
and records the minimum valuation of the gradient there.  The classical
margin k >= 2*grad_val + 1 makes such a witness liftable to every higher
precision, so a witness is a complete, replayable certificate of a
non-singular p-adic zero.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, InputError, NonLiftableError
from .expsums import eval_mod_vec, residue_chunks
from .finitefield import ExtField, count_affine_zeros, is_prime, primes_upto
from .generic import Poly
from .polynomials import CubicPolynomial

DEFAULT_ENUM_BUDGET = 2_000_000
DEFAULT_BRANCH_BUDGET = 200_000
_LINE_TRIALS = 64


@dataclass(frozen=True)
class PAdicWitness:
    p: int
    k: int
    x: tuple
    grad_val: int
    grad_prime_val: int = None  # min valuation over components 2..n, when tracked

    def to_json_dict(self):
        return {"p": self.p, "k": self.k, "x": list(self.x),
                "grad_val": self.grad_val, "grad_prime_val": self.grad_prime_val}

    def verify(self, g):
        """Re-evaluate the recorded facts; True iff everything checks out."""
        p, k = self.p, self.k
        if g.eval(self.x) % p**k != 0:
            return False
        gv = _min_valuation(g.gradient(self.x), p, cap=k)
        if gv != self.grad_val or not gv * 2 + 1 <= k:
            return False
        if self.grad_prime_val is not None:
            gpv = _min_valuation(g.gradient(self.x)[1:], p, cap=k)
            if gpv != self.grad_prime_val:
                return False
        return True


@dataclass(frozen=True)
class SearchResult:
    status: str  # FOUND | FAILS | UNKNOWN
    witness: object = None
    fail_k: int = None  # precision at which no zero at all exists
    detail: str = ""

    def to_json_dict(self):
        out = {"status": self.status, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness.to_json_dict()
        if self.fail_k is not None:
            out["fail_k"] = self.fail_k
        return out


@dataclass(frozen=True)
class CongruenceVerdict:
    overall: str  # HOLDS | FAILS | UNKNOWN
    pmax: int
    kmax: int
    per_prime: dict  # p -> SearchResult
    witnesses: tuple

    def to_json_dict(self):
        return {
            "overall": self.overall,
            "pmax": self.pmax,
            "kmax": self.kmax,
            "per_prime": {str(p): r.to_json_dict() for p, r in self.per_prime.items()},
        }


def _min_valuation(vals, p, cap):
    """min_i val_p(vals[i]), capped at `cap` (and for the zero vector)."""
    best = cap
    for v in vals:
        v = int(v)
        if v == 0:
            continue
        c = 0
        while v % p == 0 and c < cap:
            v //= p
            c += 1
        best = min(best, c)
        if best == 0:
            return 0
    return best


def hensel_lift(g, w, target_k):
    """Lift a witness to precision target_k along a minimum-valuation coordinate.

    Requires the margin k >= 2*grad_val + 1; the lifted x agrees with the old
    one mod p^{k - grad_val} and grad_val is unchanged.
    """
    p, k, delta = w.p, w.k, w.grad_val
    if target_k < k:
        raise InputError("target precision below current precision")
    if k < 2 * delta + 1:
        raise NonLiftableError(f"margin violated: k={k} < 2*{delta}+1")
    x = [int(c) for c in w.x]
    if g.eval(x) % p**k != 0:
        raise NonLiftableError("witness does not satisfy its own congruence")
    grad = g.gradient(x)
    i = min(range(len(x)), key=lambda i: _min_valuation([grad[i]], p, cap=k))
    while k < target_k:
        gv = g.eval(x)
        assert gv % p**k == 0
        grad_i = g.gradient(x)[i]
        unit = grad_i // p**delta
        t = (-(gv // p**k) * pow(unit % p, -1, p)) % p
        x[i] += t * p ** (k - delta)
        k += 1
        x = [c % p**target_k for c in x]
    assert g.eval(x) % p**target_k == 0
    return PAdicWitness(p, target_k, tuple(c % p**target_k for c in x),
                        w.grad_val, w.grad_prime_val)


def _zeros_mod_p(g, p, budget):
    """All zeros of g mod p as an int64 array, or None if p^n exceeds the budget."""
    n = g.n
    if p**n > budget:
        return None
    out = []
    for X in residue_chunks(p, n):
        vals = eval_mod_vec(g, X, p)
        out.append(X[vals == 0])
    return np.concatenate(out) if out else np.empty((0, n), dtype=np.int64)


def _grad_vals_mod_p(g, Z, p):
    """Boolean mask of rows of Z where the gradient is non-zero mod p."""
    n = g.n
    nonsing = np.zeros(Z.shape[0], dtype=bool)
    gen = g.to_generic()
    for i in range(1, n + 1):
        d = gen.partial(i)
        acc = np.zeros(Z.shape[0], dtype=np.int64)
        for e, c in d.terms.items():
            term = np.full(Z.shape[0], c % p, dtype=np.int64)
            for a, ea in enumerate(e):
                for _ in range(ea):
                    term = term * Z[:, a] % p
            acc = (acc + term) % p
        nonsing |= acc != 0
    return nonsing


def _line_search(g, p, seed, trials=_LINE_TRIALS):
    """Randomized search for a nonsingular zero mod p when p^n is unenumerable.

    Varies x_1 over a full residue system on seeded random lines; deterministic
    for a fixed seed.  Can only ever answer FOUND or UNKNOWN.
    """
    rng = np.random.default_rng((seed, p, 0x5EED))
    n = g.n
    for _ in range(trials):
        tail = rng.integers(0, p, size=n - 1)
        X = np.empty((p, n), dtype=np.int64)
        X[:, 0] = np.arange(p)
        X[:, 1:] = tail[None, :]
        vals = eval_mod_vec(g, X, p)
        Z = X[vals == 0]
        if Z.shape[0] == 0:
            continue
        ok = _grad_vals_mod_p(g, Z, p)
        if ok.any():
            x = tuple(int(c) for c in Z[np.flatnonzero(ok)[0]])
            return PAdicWitness(p, 1, x, 0)
    return None


def nonsingular_zero_search(g, p, kmax, budget=DEFAULT_ENUM_BUDGET,
                            branch_budget=DEFAULT_BRANCH_BUDGET, seed=0):
    """Search for a liftable p-adic zero, deepening precision up to kmax.

    FOUND: witness with margin k >= 2*grad_val + 1 (hence a p-adic zero).
    FAILS: no zero at all exists mod p^{fail_k} (full scan, replayable).
    UNKNOWN: zeros exist but all remain too singular within the budget.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    n = g.n
    Z = _zeros_mod_p(g, p, budget)
    if Z is None:
        w = _line_search(g, p, seed)
        if w is not None:
            return SearchResult("FOUND", witness=w)
        return SearchResult("UNKNOWN", detail="enumeration over budget; line search found no nonsingular zero")
    if Z.shape[0] == 0:
        return SearchResult("FAILS", fail_k=1, detail=f"no zeros mod {p}")
    ok = _grad_vals_mod_p(g, Z, p)
    if ok.any():
        x = tuple(int(c) for c in Z[np.flatnonzero(ok)[0]])
        return SearchResult("FOUND", witness=PAdicWitness(p, 1, x, 0))
    # all residues singular mod p: deepen digit by digit
    for k in range(1, kmax):
        q_next = p ** (k + 1)
        if Z.shape[0] * p**n > branch_budget:
            return SearchResult("UNKNOWN", detail=f"branching over budget at precision {k}")
        D = next(residue_chunks(p, n, chunk=p**n))
        cand = (Z[:, None, :] + p**k * D[None, :, :]).reshape(-1, n)
        cand = cand[eval_mod_vec(g, cand, q_next) == 0]
        if cand.shape[0] == 0:
            return SearchResult("FAILS", fail_k=k + 1,
                                detail=f"no zeros mod {p}^{k + 1}")
        # a candidate is good once its gradient valuation fits the margin
        order = np.lexsort(cand.T[::-1])
        cand = cand[order]
        for row in cand:
            x = [int(c) for c in row]
            gv = _min_valuation(g.gradient(x), p, cap=k + 1)
            if k + 1 >= 2 * gv + 1:
                return SearchResult("FOUND", witness=PAdicWitness(p, k + 1, tuple(x), gv))
        Z = cand
    return SearchResult("UNKNOWN", detail=f"zeros persist to precision {kmax} but stay singular")


def congruence_condition(g, pmax, kmax=6, budget=DEFAULT_ENUM_BUDGET, seed=0):
    """Decide solubility of g = 0 over Z_p for every prime p <= pmax.

    HOLDS requires a liftable witness at every tested prime; a single FAILS
    is decisive for insolubility; UNKNOWN taints the overall verdict only.
    """
    per_prime = {}
    witnesses = []
    overall = "HOLDS"
    for p in primes_upto(pmax):
        res = nonsingular_zero_search(g, p, kmax, budget=budget, seed=seed)
        per_prime[p] = res
        if res.status == "FOUND":
            witnesses.append(res.witness)
        elif res.status == "FAILS":
            overall = "FAILS"
        elif overall != "FAILS":
            overall = "UNKNOWN"
    return CongruenceVerdict(overall, pmax, kmax, per_prime, tuple(witnesses))


# -- exact zero counting modulo prime powers --------------------------------


def count_zeros_mod_pk(g, p, k, budget=DEFAULT_ENUM_BUDGET, _depth=0):
    """Exact #{x mod p^k : g(x) = 0 mod p^k} for a polynomial of degree <= 3.

    Dispatch: direct enumeration when p^{kn} is affordable; histogram
    convolution for separable polynomials; otherwise the lifting recursion
    splitting zeros mod p into non-singular ones (each carrying
    p^{(k-1)(n-1)} lifts) and singular ones, handled by the exact
    substitution x = x0 + p y and division by p^2.
    """
    gen = g.to_generic() if isinstance(g, CubicPolynomial) else g
    n = gen.n
    if k <= 0:
        return 1
    # factor out the p-content of the coefficients
    vals = [c for c in gen.terms.values()]
    if gen.is_zero():
        return p ** (k * n)
    content_val = _min_valuation(vals, p, cap=k)
    if content_val >= k:
        return p ** (k * n)
    if content_val > 0:
        reduced = Poly(n, {e: c // p**content_val for e, c in gen.terms.items()})
        return p ** (n * content_val) * count_zeros_mod_pk(reduced, p, k - content_val, budget)
    if p ** (k * n) <= min(budget, 1 << 22):
        return _count_direct(gen, p, k)
    if gen.is_separable() and p**n > budget:
        return _count_separable_mod_pk(gen, p, k, budget)
    return _count_recursive(gen, p, k, budget, _depth)


def _count_direct(gen, p, k):
    q = p**k
    total = 0
    for X in residue_chunks(q, gen.n):
        total += int(np.count_nonzero(_eval_generic_mod(gen, X, q) == 0))
    return total


def _eval_generic_mod(gen, X, q):
    acc = np.zeros(X.shape[0], dtype=np.int64)
    for e, c in gen.terms.items():
        term = np.full(X.shape[0], c % q, dtype=np.int64)
        for a, ea in enumerate(e):
            for _ in range(ea):
                term = term * X[:, a] % q
        acc = (acc + term) % q
    return acc


def _count_separable_mod_pk(gen, p, k, budget):
    """Value-histogram convolution over Z/p^k for sums of univariate pieces."""
    q = p**k
    const, per_var = gen.single_variable_pieces()
    if q * q > 10**9:  # convolution work is q^2 per variable
        raise BudgetExceededError(q * q, 10**9, "histogram convolution")
    x = np.arange(q, dtype=np.int64)
    hist = None
    unused = 0
    for cmap in per_var:
        if not cmap:
            unused += 1
            continue
        acc = np.zeros(q, dtype=np.int64)
        for d, c in cmap.items():
            term = np.full(q, c % q, dtype=np.int64)
            for _ in range(d):
                term = term * x % q
            acc = (acc + term) % q
        h = np.bincount(acc, minlength=q)
        hist = h if hist is None else _cyclic_convolve(hist, h, q)
    if hist is None:
        return 0
    return int(hist[(-const) % q]) * p ** (k * (gen.n - len([c for c in per_var if c])))


def _cyclic_convolve(h1, h2, q):
    out = np.zeros(q, dtype=np.int64)
    for b in range(q):
        if h2[b]:
            out += np.roll(h1, b) * int(h2[b])
    return out


def _count_recursive(gen, p, k, budget, depth):
    n = gen.n
    if p**n > budget:
        raise BudgetExceededError(p**n, budget, "zero classification mod p")
    if depth > k:
        raise AssertionError("lifting recursion failed to terminate")
    Z = _zeros_mod_p_generic(gen, p)
    if Z.shape[0] == 0:
        return 0
    if k == 1:
        return Z.shape[0]
    grads = [gen.partial(i) for i in range(1, n + 1)]
    nonsing = np.zeros(Z.shape[0], dtype=bool)
    for d in grads:
        nonsing |= _eval_generic_mod(d, Z, p) != 0
    total = int(np.count_nonzero(nonsing)) * p ** ((k - 1) * (n - 1))
    for row in Z[~nonsing]:
        x0 = [int(c) for c in row]
        if gen.eval(x0) % p**2 != 0:
            continue
        if k == 2:
            total += p**n
            continue
        h = gen.shift_scale(x0, p).divide_exact(p**2)
        total += p**n * count_zeros_mod_pk(h, p, k - 2, budget, depth + 1)
    return total


def _zeros_mod_p_generic(gen, p):
    out = []
    for X in residue_chunks(p, gen.n):
        out.append(X[_eval_generic_mod(gen, X, p) == 0])
    return np.concatenate(out)


def local_density(g, p, k, budget=DEFAULT_ENUM_BUDGET):
    """Exact rational p^{-k(n-1)} #{x mod p^k : g(x) = 0 mod p^k}."""
    n = g.n
    return Fraction(count_zeros_mod_pk(g, p, k, budget), p ** (k * (n - 1)))


# -- restricted-gradient witnesses for the slicing step ---------------------


def grad_prime_zero_search(h, p, kmax=4, budget=DEFAULT_ENUM_BUDGET, seed=0):
    """Witness y with h(y) = 0 mod p^{2k+1} and partials 2..n of valuation k.

    k = grad_prime_val is minimized by breadth-first deepening; the overall
    gradient margin is tracked as well so the witness stays liftable.
    """
    n = h.n
    if n < 2:
        raise InputError("restricted gradient needs n >= 2")
    h0keys = h.cubic
    if all(1 in key for key in h0keys):
        raise InputError("cubic part divisible by the sliced variable (reducible section)")
    gen = h.to_generic()
    Z = _zeros_mod_p(h, p, budget)
    if Z is None:
        # large p^n: random lines; nearly always a k=0 witness exists
        rng = np.random.default_rng((seed, p, 0xACE))
        for _ in range(_LINE_TRIALS):
            tail = rng.integers(0, p, size=n - 1)
            X = np.empty((p, n), dtype=np.int64)
            X[:, 0] = np.arange(p)
            X[:, 1:] = tail[None, :]
            cand = X[eval_mod_vec(h, X, p) == 0]
            w = _pick_grad_prime(h, cand, p, level=1)
            if w is not None:
                return w
        raise BudgetExceededError(p**n, budget, "restricted-gradient witness search")
    level = 1
    while True:
        if Z.shape[0] == 0:
            raise InputError(f"h has no zeros mod {p}^{level} (no p-adic zero exists)")
        w = _pick_grad_prime(h, Z, p, level)
        if w is not None:
            return w
        if level > 2 * kmax + 1:
            raise BudgetExceededError(level, 2 * kmax + 1,
                                      "restricted-gradient precision deepening")
        if Z.shape[0] * p**n > DEFAULT_BRANCH_BUDGET:
            raise BudgetExceededError(Z.shape[0] * p**n, DEFAULT_BRANCH_BUDGET,
                                      "restricted-gradient branching")
        D = next(residue_chunks(p, n, chunk=p**n))
        cand = (Z[:, None, :] + p**level * D[None, :, :]).reshape(-1, n)
        Z = cand[eval_mod_vec(h, cand, p ** (level + 1)) == 0]
        level += 1


def _pick_grad_prime(h, cand, p, level):
    """First candidate (lexicographically) usable at this precision level."""
    if cand.shape[0] == 0:
        return None
    order = np.lexsort(cand.T[::-1])
    for row in cand[order]:
        x = [int(c) for c in row]
        grad = h.gradient(x)
        kp = _min_valuation(grad[1:], p, cap=level)
        gv = _min_valuation(grad, p, cap=level)
        if 2 * kp + 1 <= level and 2 * gv + 1 <= level:
            return PAdicWitness(p, level, tuple(x), gv, grad_prime_val=kp)
    return None
