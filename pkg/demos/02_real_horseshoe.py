"""Real dynamics: certify hyperbolicity, then count periodic points.

At (a, c) = (1, -10) the real map is a full horseshoe.  At (1, -5.4) some
orbits have been pruned away, and the certified counts of real periodic points
line up with a subshift that forbids two words.  Takes about a minute.

    python3 demos/02_real_horseshoe.py
"""
from horseshoe.henon import REAL, Param, in_DN, in_EMP
from horseshoe.hyperbolicity import verify_quasi_hyperbolic
from horseshoe.periodic import count_real, crosscheck_pruning
from horseshoe.shift import PAPER_COLUMNS

for c in (-10, "-5.4"):
    p = Param.make(1, c)
    print(f"(1, {c}): in DN {in_DN(p).name}, in EMP {in_EMP(p).name}")
    rep = verify_quasi_hyperbolic(p, REAL)
    print("  ", rep.summary())

# Krawczyk boxes prove each periodic point exists and is unique in its box;
# nonreal ones are kept too, so the real count is pinned from both sides.
p = Param.make(1, "-5.4")
for n in (3, 4, 5):
    rep = count_real(p, n)
    print(f"  {rep.line()}  ({len(rep.certificates)} certificates)")

chk = crosscheck_pruning(p, PAPER_COLUMNS["L_p"], range(3, 6))
print("pruning cross-check:", chk.verdict)
for row in chk.rows:
    print("  ", row)
