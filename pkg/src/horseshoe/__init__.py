"""Computer-assisted study of horseshoe loci in the Hénon family.

Modules
-------
interval
    Outward-rounded interval arithmetic on scalars, arrays and boxes.
henon
    The family ``(x, y) -> (x**2 + c - a*y, x)`` as rigorous box maps.
cubical
    Dyadic cubical sets, transition graphs and invariant-set enclosures.
hyperbolicity
    Quasi-hyperbolicity certificates and parameter sweeps.
periodic
    Krawczyk-certified periodic points and real counts.
shift
    Symbolic dynamics: block swaps, automorphisms, SFT counting.
monodromy
    Continuation of the coding along parameter loops.
cli
    The ``horseshoe`` command.
"""
from .henon import COMPLEX, REAL, Param
from .interval import Interval, IntervalBox

__version__ = "0.1.0"

__all__ = ["COMPLEX", "REAL", "Param", "Interval", "IntervalBox", "__version__"]
