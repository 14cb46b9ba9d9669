"""Complex mode: the same certificate in C^2, with a tangent grid over C^2 too.

Certifying a single parameter takes a few minutes on one core; pass ``--sweep``
to also cover a small rectangle of complex c (much longer).

    python3 demos/03_complex_hyperbolicity.py [--sweep]
"""
import sys

from horseshoe.henon import COMPLEX, Param
from horseshoe.hyperbolicity import sweep_params, verify_quasi_hyperbolic

rep = verify_quasi_hyperbolic(Param.make(1, -10), COMPLEX)
print(rep.summary())
for a in rep.attempts:
    print("  ", a)

if "--sweep" in sys.argv:
    box = Param.make(1, [("-10.25", "-9.75"), ("0.25", "0.75")], COMPLEX)
    res = sweep_params([box], COMPLEX)
    print(f"certified {len(res.certified)} boxes, unknown {len(res.unknown)}")
