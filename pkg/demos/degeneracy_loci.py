"""Degeneracy loci and what they say about classicality.

Run:  python demos/degeneracy_loci.py
"""

from derproj import QQ, Field, PolynomialRing, classicality_report, sym_classicality, two_term

# A generic symmetric 3x3 matrix. Its rank-<=2 locus is a hypersurface (the
# determinant), rank <=1 is the Veronese cone of codimension 3, and rank 0 is the origin.
R = PolynomialRing(Field(32003), list("abcdef"))
sym3 = two_term(R, [["a", "b", "c"], ["b", "d", "e"], ["c", "e", "f"]]).sigma
rep = classicality_report(sym3)
print("symmetric 3x3  codims:", rep.profile.codims)
print("  conditions:", rep.to_json()["conditions"])

# Three small maps over Q[x, y]; each one switches a different condition off.
S = PolynomialRing(QQ, ["x", "y"])
for label, rows in [("(x, y, 0)^T", [["x"], ["y"], ["0"]]),
                    ("(x, x)^T", [["x"], ["x"]]),
                    ("diag(x, y)", [["x", "0"], ["0", "y"]])]:
    s = two_term(S, rows).sigma
    j = classicality_report(s).to_json()
    print(f"\n{label}: r = {j['rank']}, codims {j['codims']}")
    for k, v in j["predictions"].items():
        print(f"  {k:40s} {v}")

# The predictions are about derived symmetric powers; compare them with the
# actual higher homology of the Koszul strand, degree by degree.
s = two_term(S, [["x"], ["x"]]).sigma
print("\n(x, x)^T, Sym^d on both sides (internal degrees <= 6):")
for side in ("F", "dual"):
    for d in range(4):
        c = sym_classicality(s, d, side, 6)
        print(f"  {side:4s} d={d}  predicted classical={c.predicted_classical!s:5s}  "
              f"H_>0 vanishes={c.observed_vanishing!s:5s}  {'ok' if c.consistent else 'MISMATCH'}")
