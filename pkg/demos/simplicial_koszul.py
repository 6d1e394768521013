"""A simplicial Koszul object and its normalized chains.

For a regular sequence (x, y) the homotopy is the residue field in degree 0;
for (x, x) the repeated element leaves a nonzero π_1. The chain-level Koszul
complex gives the same numbers, and Dold–Kan takes it back and forth.

Run:  python demos/simplicial_koszul.py
"""

from derproj import QQ, PolynomialRing, homology_dims
from derproj.koszul import cosection, cosection_koszul
from derproj.simplicial import SimplicialDegreeWindow, dold_kan, homotopy_dims, normalize, simplicial_koszul

R = PolynomialRing(QQ, ["x", "y"])
window = SimplicialDegreeWindow(D=3, E=4, N=3)

for elems in (["x", "y"], ["x", "x"]):
    S = simplicial_koszul(R, elems, window)
    H = homotopy_dims(S, 4, 0)
    K = cosection_koszul(cosection(R, elems))
    C = homology_dims(K, 4, 0)
    print(f"Kos_Δ{tuple(elems)}  level ranks {S.level_ranks()}  (valid up to π_{S.valid_up_to})")
    for n in range(S.valid_up_to + 1):
        print(f"  π_{n} = {H.row(n)}   chain H_{n} = {C.row(n)}")

K = cosection_koszul(cosection(R, ["x", "y"]))
S = dold_kan(K, 4)
print("\nDold–Kan of the Koszul complex: level ranks", S.level_ranks())
print("simplicial identities:", bool(S.check_identities()), "  normalize recovers it:", normalize(S) == K)
