"""Monodromy: carry the coding of the horseshoe around a loop of parameters.

The shipped loop ``gamma_s`` lives in the slice a = -0.375 and goes around a
stretch of the real axis where the real horseshoe breaks.  Following the two
halves of the invariant set around it and back, the coding comes back with two
words swapped.

Which words depends on how the coding at the loop's basepoint is tied to the
standard one at (1, -10).  The reference path fixes that: it moves a around
the unit circle, drops to (-0.375, -5) and then goes once around |c| = 5,
which changes the coding by the flip.

The full computation takes about twenty minutes on one core, so by default
this script only runs a tiny constant loop and describes the shipped one.
Pass ``--full`` for the real thing.

    python3 demos/04_monodromy.py [--full]
"""
import sys

from horseshoe.cli import resolve_loop
from horseshoe.monodromy import (
    ParamLoop, compute_monodromy, continue_partition, identify_swapped_blocks, monodromy_of,
)

# a loop that does not move changes nothing
tr = continue_partition(ParamLoop.constant(1, -10), 2, 6)
print("constant loop:", identify_swapped_blocks(tr, 4))

loop, ref = resolve_loop("gamma_s")
print(f"gamma_s: {len(loop.vertices)} vertices, based at {tuple(map(float, loop.basepoint))}")
print(f"coding is transported from {tuple(map(float, ref.basepoint))} along {ref.name}")

if "--full" in sys.argv:
    def log(e):
        print(f"  {e['path']}: n={e['n_steps']} depth={e['depth']} {e['outcome']} "
              f"({e['seconds']}s)", flush=True)
    track, swaps, _ = compute_monodromy(loop, 64, 8, reference=ref, log=log)
    print("swapped blocks:", swaps, " automorphism:", monodromy_of(swaps))
