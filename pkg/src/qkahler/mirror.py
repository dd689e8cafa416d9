"""Truncated series in ``e^u``, the mirror map, and the Calabi-Yau checks.

Virtual constants at ``N = k`` are packaged as ``L~_n(e^x) = 1 + sum_d L~_n^{k,k,d} e^{dx}``.
The mirror map is ``t = x + R(e^x)`` with ``R`` read off from ``L~_1``; its
inverse ``x = t + S(e^t)`` is found by fixed-point iteration, and the
transformed constants are ``L~_m(e^{x(t)}) / L~_1(e^{x(t)})``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, List, Optional

from .exact import as_fraction, format_fraction
from .gw import StructureEngine

__all__ = [
    "QSeries",
    "mirror_map",
    "invert_map",
    "compose_exp",
    "generating_function",
    "mirror_transform",
    "hypergeom_a",
    "hypergeom_b",
    "closed_form_mirror_map",
    "hypergeom_check",
]


@dataclass(frozen=True)
class QSeries:
    """``sum_{d=0}^{order} coeffs[d] * e^{d u}``; everything past ``order`` is unknown."""

    coeffs: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        cs = tuple(as_fraction(c) for c in self.coeffs[: self.order + 1])
        cs = cs + (Fraction(0),) * (self.order + 1 - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, coeffs: Iterable, order: Optional[int] = None) -> "QSeries":
        cs = list(coeffs)
        return cls(tuple(cs), len(cs) - 1 if order is None else order)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls((Fraction(1),), order)

    @classmethod
    def q(cls, order: int) -> "QSeries":
        return cls((Fraction(0), Fraction(1)), order)

    def __getitem__(self, d: int) -> Fraction:
        return self.coeffs[d] if 0 <= d <= self.order else Fraction(0)

    def truncate(self, order: int) -> "QSeries":
        return QSeries(self.coeffs, min(order, self.order))

    def __add__(self, other: "QSeries") -> "QSeries":
        D = min(self.order, other.order)
        return QSeries(tuple(self[d] + other[d] for d in range(D + 1)), D)

    def __neg__(self) -> "QSeries":
        return QSeries(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + (-other)

    def scale(self, c) -> "QSeries":
        c = as_fraction(c)
        return QSeries(tuple(c * a for a in self.coeffs), self.order)

    def __mul__(self, other: "QSeries") -> "QSeries":
        D = min(self.order, other.order)
        out = [Fraction(0)] * (D + 1)
        for i in range(D + 1):
            a = self[i]
            if a:
                for j in range(D + 1 - i):
                    out[i + j] += a * other[j]
        return QSeries(tuple(out), D)

    def __truediv__(self, other: "QSeries") -> "QSeries":
        if not other[0]:
            raise ZeroDivisionError("series division needs a nonzero constant term")
        D = min(self.order, other.order)
        inv0 = 1 / other[0]
        out: List[Fraction] = []
        for n in range(D + 1):
            acc = self[n] - sum(out[i] * other[n - i] for i in range(n))
            out.append(acc * inv0)
        return QSeries(tuple(out), D)

    def shift(self) -> "QSeries":
        """Multiply by ``e^u``."""
        return QSeries((Fraction(0),) + self.coeffs[:-1], self.order)

    def exp(self) -> "QSeries":
        """``exp`` of a series without constant term, via ``n E_n = sum k a_k E_{n-k}``."""
        if self[0]:
            raise ValueError("exp needs a zero constant term")
        E = [Fraction(1)]
        for n in range(1, self.order + 1):
            E.append(sum(k * self[k] * E[n - k] for k in range(1, n + 1)) / n)
        return QSeries(tuple(E), self.order)

    def derivative(self) -> "QSeries":
        """``d/du``."""
        return QSeries(tuple(d * c for d, c in enumerate(self.coeffs)), self.order)

    def substitute(self, inner: "QSeries") -> "QSeries":
        """``sum_d c_d inner^d`` for ``inner`` with zero constant term."""
        if inner[0]:
            raise ValueError("substitution needs an inner series with zero constant term")
        D = min(self.order, inner.order)
        acc = QSeries((self[0],), D)
        power = QSeries.one(D)
        for d in range(1, D + 1):
            power = power * inner
            acc = acc + power.scale(self[d])
        return acc

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_fraction(c) for c in self.coeffs]}


def generating_function(k: int, n: int, D: int, engine: Optional[StructureEngine] = None) -> QSeries:
    """``L~_n^{k,k}(e^x) = 1 + sum_{d=1}^{D} L~_n^{k,k,d} e^{dx}``."""
    engine = engine or StructureEngine("virtual")
    return QSeries((Fraction(1),) + tuple(engine.compute(k, k, d, n) for d in range(1, D + 1)), D)


def mirror_map(k: int, D: int, engine: Optional[StructureEngine] = None) -> QSeries:
    """``t(x) - x`` as a series in ``e^x``: coefficient ``L~_1^{k,k,d} / d``."""
    engine = engine or StructureEngine("virtual")
    return QSeries((Fraction(0),) + tuple(engine.compute(k, k, d, 1) / d for d in range(1, D + 1)), D)


def invert_map(tmx: QSeries, D: Optional[int] = None) -> QSeries:
    """Given ``t = x + R(e^x)`` return ``S`` with ``x = t + S(e^t)``.

    ``S = -R(e^t exp(S))`` gains one correct order per pass.
    """
    if tmx[0]:
        raise ValueError("t(x) - x must have zero constant term")
    D = tmx.order if D is None else min(D, tmx.order)
    R = tmx.truncate(D)
    S = QSeries((), D)
    for _ in range(D):
        S = -R.substitute(compose_exp(S))
    return S


def compose_exp(S: QSeries) -> QSeries:
    """``e^{x(t)} = e^t exp(S(e^t))`` as a series in ``e^t``."""
    return S.exp().shift()


def mirror_transform(k: int, m: int, D: int, engine: Optional[StructureEngine] = None) -> QSeries:
    """``L_m^{k,k}(e^t) = L~_m(e^{x(t)}) / L~_1(e^{x(t)})``."""
    if not 2 <= m <= k - 3:
        raise ValueError(f"m must lie in 2..{k - 3}")
    engine = engine or StructureEngine("virtual")
    inner = compose_exp(invert_map(mirror_map(k, D, engine)))
    num = generating_function(k, m, D, engine).substitute(inner)
    den = generating_function(k, 1, D, engine).substitute(inner)
    return num / den


def hypergeom_a(k: int, d: int) -> Fraction:
    return Fraction(factorial(k * d), factorial(d) ** k)


def hypergeom_b(k: int, d: int) -> Fraction:
    h = sum(Fraction(m, i * (k * i - m)) for i in range(1, d + 1) for m in range(1, k))
    return hypergeom_a(k, d) * h


def closed_form_mirror_map(k: int, D: int) -> QSeries:
    """``t(x) - x = w_1 / w_0`` with the hypergeometric ``w_0, w_1``."""
    w0 = QSeries.of([hypergeom_a(k, d) for d in range(D + 1)])
    w1 = QSeries.of([Fraction(0)] + [hypergeom_b(k, d) for d in range(1, D + 1)])
    return w1 / w0


def hypergeom_check(k: int, d_max: int, engine: Optional[StructureEngine] = None) -> List[dict]:
    """Rows ``{k, d, a_ok, b_ok, lhs, rhs}`` comparing virtual constants with ``a_d, b_d``.

    ``lhs``/``rhs`` carry the ``b_d`` comparison, the stronger of the two.
    """
    engine = engine or StructureEngine("virtual")
    L0 = {d: engine.compute(k, k, d, 0) for d in range(1, d_max + 1)}
    L1 = {d: engine.compute(k, k, d, 1) for d in range(1, d_max + 1)}
    rows = []
    for d in range(1, d_max + 1):
        a = hypergeom_a(k, d)
        lhs = L1[d] / d + sum(L1[m] * L0[d - m] / m for m in range(1, d))
        rhs = hypergeom_b(k, d)
        rows.append(
            {
                "k": k,
                "d": d,
                "a_ok": L0[d] == a,
                "b_ok": lhs == rhs,
                "lhs": format_fraction(lhs),
                "rhs": format_fraction(rhs),
            }
        )
    return rows
