"""Deciding local solubility with replayable witnesses.

A cubic polynomial has p-adic zeros for every prime exactly when, for each p,
some zero mod p^k lifts indefinitely.  A witness with gradient valuation
delta at precision k >= 2*delta + 1 lifts forever (Hensel); a modulus with no
zeros at all is a finite, replayable proof of insolubility.
"""

from cubicpoints import CubicPolynomial, congruence_condition, watson_polynomial

soluble = CubicPolynomial.from_terms(2, {(3, 0): 1, (0, 3): 1, (1, 0): 1,
                                         (0, 0): 4})
verdict = congruence_condition(soluble, 30)
print(f"x^3 + y^3 + x + 4 : {verdict.overall}")
for p, res in sorted(verdict.per_prime.items()):
    w = res.witness
    print(f"  p={p:2d}: witness x={w.x} with grad valuation {w.grad_val}")

insoluble = CubicPolynomial.from_terms(1, {(3,): 1, (0,): 49})
verdict = congruence_condition(insoluble, 10)
print(f"\nx^3 + 49 : {verdict.overall}")
res = verdict.per_prime[7]
print(f"  p=7 fails at precision {res.fail_k}: no zero mod 7^{res.fail_k}")
print(f"  replay: {sum(1 for x in range(343) if (x**3 + 49) % 343 == 0)}"
      " zeros found by full scan")

# the classical example that is locally soluble everywhere yet has no
# integer zero: local analysis alone cannot expose it
w = watson_polynomial(2)
print(f"\n(2x-1)(1+x^2+y^2)+xy : {congruence_condition(w, 50).overall}"
      " at every p <= 50 (yet it has no integer zeros)")
