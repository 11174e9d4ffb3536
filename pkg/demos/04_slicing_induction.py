"""One step of the hyperplane-slicing induction, with a replayable certificate.

If the cubic part g0 has a singular locus of projective dimension s >= 0,
restricting to a well-chosen hyperplane x.a = c produces a polynomial in one
variable fewer whose cubic part has singular dimension s - 1.  The choice of
(a, c) is recorded as a certificate that any third party can replay.
"""

import json

from cubicpoints import CubicPolynomial, slice_step, verify_certificate
from cubicpoints.slicing import slice_count_identity

n = 7
terms = {tuple(3 if j == i else 0 for j in range(n)): 1 for i in range(5)}
terms[tuple(1 if j == 5 else 0 for j in range(n))] = 1
terms[tuple(1 if j == 6 else 0 for j in range(n))] = 2
terms[(0,) * n] = 1
g = CubicPolynomial.from_terms(n, terms)
print("polynomial: x1^3+...+x5^3 + x6 + 2 x7 + 1   (7 variables)\n")

cert = slice_step(g, primes=(5, 7, 11), pmax=20, kmax=4, seed=0)
print(f"hyperplane  a = {list(cert.a)}")
print(f"offset      c = {cert.c}")
print(f"singular dimension: {cert.s_before} -> {cert.s_after}")
for p, data in sorted(cert.per_prime.items()):
    print(f"  p={p:2d}: witness precision k={data.k}, c fixed mod {data.modulus}")

print(f"\nreplay: verify_certificate -> {bool(verify_certificate(cert, g))}")

blob = json.loads(json.dumps(cert.to_json_dict()))
blob["c"] += 1
from cubicpoints import SliceCertificate

tampered = SliceCertificate.from_json_dict(blob)
res = verify_certificate(tampered, g)
print(f"tampered c: verify -> {bool(res)}  ({'; '.join(res.reasons)})")

print("\nexact counting identity on the sliced polynomial:")
rep = slice_count_identity(cert.result, 7)
print(f"  p=7: N={rep.N}, N1={rep.N1}, N2={rep.N2},"
      f"  N*(p-1) == N1 - N2 -> {rep.ok}")
