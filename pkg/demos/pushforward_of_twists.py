"""Walking O(d) through every case of the pushforward along a projectivization.

σ = (x, y, 0)^T has rank r = 2, so d >= 0 gives Sym^d, d = -1 gives zero and
d <= -2 gives a shifted twisted dual. diag(x, y) has r = 0 and lands in the
fiber-sequence case at d = 0.

Run:  python demos/pushforward_of_twists.py
"""

from derproj import QQ, PolynomialRing, generalized_serre_check, serre_bundle_pushforward, two_term
from derproj.koszul import en_duality_check

R = PolynomialRing(QQ, ["x", "y"])
xy0 = two_term(R, [["x"], ["y"], ["0"]])

print("σ = (x, y, 0)^T")
for d in range(-4, 3):
    rec = generalized_serre_check(xy0.sigma, d, 5)
    nz = {f"H{n}[{e}]": v for (n, e), v in sorted(rec.table.nonzero().items())}
    print(f"  d={d:+d}  {rec.case.case:17s} {'consistent' if rec.passed else 'MISMATCH':10s} {nz}")

print("\nEN duality (EN_d twisted by det against the dual of EN_{-r-d}):")
print("  ", [(d, en_duality_check(xy0, d).ok) for d in range(-5, 4)])

diag = two_term(R, [["x", "0"], ["0", "y"]])
rec = generalized_serre_check(diag.sigma, 0, 6)
print("\ndiag(x, y), d = 0:", rec.case.description)
for v in rec.verdicts:
    print(f"  {v.name:45s} {v.passed}")

print("\nfree bundle of rank 3 (a point base):")
for d in range(-5, 3):
    a = serre_bundle_pushforward(3, d)
    print(f"  d={d:+d}  {a.case:17s} rank {a.rank} in degree {a.homological_degree}")
