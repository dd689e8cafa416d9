"""Hand-checkable residue integrands with known values.

Each is the coefficient integrand of one ``z``-monomial at ``x = y = 0``,
written out directly rather than built by :mod:`qkahler.polyd`.  The
``1/t_i`` weights are supplied by the residue functional.
"""
from __future__ import annotations

from fractions import Fraction as F
from typing import Dict, Tuple

from .exact import LinearForm
from .residue import OwnedFactor, RatExpr

__all__ = ["reference_integrands"]


def _lf(**coeffs) -> LinearForm:
    return LinearForm.make(0, {int(k[1:]): v for k, v in coeffs.items()})


def reference_integrands() -> Dict[str, Tuple[RatExpr, F]]:
    """``{label: (integrand, expected constant term)}``."""
    d5 = RatExpr.build(
        1,
        [(_lf(t1=F(3, 4), t4=F(1, 2)), 1), (_lf(t1=F(1, 2), t4=F(3, 4)), 1)],
        [OwnedFactor(_lf(t1=1, t4=F(1, 4)), 1), OwnedFactor(_lf(t4=1, t1=F(1, 4)), 4)],
    )
    d6 = RatExpr.build(
        1,
        [
            (_lf(t1=F(3, 5), t2=F(3, 4)), 1),
            (_lf(t1=F(2, 5), t2=F(2, 4)), 1),
            (_lf(t1=F(1, 5), t2=F(1, 4)), 1),
        ],
        [OwnedFactor(_lf(t1=1, t2=F(1, 2)), 1, 2), OwnedFactor(_lf(t2=1, t1=F(4, 5)), 2)],
    )
    d7 = RatExpr.build(
        1,
        [
            (_lf(t1=F(3, 6), t2=F(3, 5), t3=F(3, 4)), 1),
            (_lf(t1=F(2, 6), t2=F(2, 5), t3=F(2, 4)), 1),
            (_lf(t1=F(1, 6), t2=F(1, 5), t3=F(1, 4)), 1),
        ],
        [
            OwnedFactor(_lf(t1=1, t2=F(1, 2), t3=F(1, 3)), 1),
            OwnedFactor(_lf(t1=F(5, 6), t2=1, t3=F(2, 3)), 2),
            OwnedFactor(_lf(t1=F(4, 6), t2=F(4, 5), t3=1), 3),
        ],
    )
    return {
        "d5 z1^2 z4^2": (d5, F(2, 3)),
        "d6 z1^3 z2^2": (d6, F(3, 50)),
        "d7 z1^2 z2^2 z3^2": (d7, F(1, 20)),
    }
