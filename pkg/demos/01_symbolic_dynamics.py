"""Symbolic side of the story: marker automorphisms, their fixed sets, and counts.

Everything here is exact and runs in a couple of seconds.

    python3 demos/01_symbolic_dynamics.py
"""
from horseshoe.shift import (
    FLIP, PSI, BlockSwap, PeriodicSeq, apply, apply_periodic, fix_to_sft, format_table,
    hedlund_orbit, hedlund_x, table,
)

# A block swap exchanges two words that differ in one place.  It only acts
# where one of them occurs, so most windows pass through unchanged.
swap = BlockSwap("0010", "0110")
print("swap:", swap)
for w in ("0001000", "0011000", "1111111"):
    print(f"  {w} -> {apply(swap, w)}  (outer {swap.left}+{swap.right} symbols are consumed)")

# On periodic points the swap is easy to test for fixedness: a periodic word is
# fixed exactly when neither swapped word ever appears in it.
sft = fix_to_sft(swap)
for w in ("01", "0010", "011"):
    x = PeriodicSeq(w)
    print(f"  ({w})^inf fixed: {apply_periodic(swap, x) == x}, allowed by {sft}: "
          f"{sft.allows_periodic(w)}")

# Counting fixed points of the shift power inside each subshift gives the
# table of real periodic points the dynamics should exhibit.
print()
print(format_table(table()))

# Composing the swap with the symbol flip gives an automorphism of infinite
# order.  Iterating it on one carefully chosen point shows the orbit never closes.
v = hedlund_orbit(64)
print()
print(f"psi = {PSI}; follows the predicted pattern: {v.matches_pattern}, "
      f"64 iterates distinct: {v.all_distinct}")
for n in range(3):
    print(f"  x({n}) = {hedlund_x(n)}")
print("flip twice is the identity:", apply(FLIP, apply(FLIP, "0110")) == "0110")
