"""From ``Poly_d`` to the degree-d recursion for structure constants.

A monomial ``x^a z_{i_1}^{e_1} ... z_{i_m}^{e_m} y^b`` of ``Poly_d`` is read as a
comb ``0 = i_0 < i_1 < ... < i_m < i_{m+1} = d`` and becomes the product

    prod_{j=1}^{m+1} L^{N+1,k, i_j - i_{j-1}}_{n + shift_j}

where each shift is affine in ``N - k``.  Shifts are kept symbolic so one
formula serves every ``(N, k)``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Dict, Iterable, Mapping, Tuple

from .exact import as_fraction, format_fraction
from .polyd import PolyD, ZMonomial

__all__ = [
    "CombType",
    "Factor",
    "RecursionTerm",
    "RecursionFormula",
    "comb_of",
    "delta_of",
    "phi_map",
    "golden_recursion",
    "CONJECTURAL_FROM",
]

FORMAT = "recursion/1"
# Degrees from which the formula is not backed by an independently derived table.
CONJECTURAL_FROM = 6


@dataclass(frozen=True)
class CombType:
    d: int
    breakpoints: Tuple[int, ...]  # i_0 = 0, ..., i_{m+1} = d
    exponents: Tuple[int, ...]  # d_{i_0}, ..., d_{i_{m+1}}

    @property
    def m(self) -> int:
        return len(self.breakpoints) - 2


@dataclass(frozen=True, order=True)
class Factor:
    """``L^{deg}_{n + shift_const + shift_Nk * (N - k)}``."""

    deg: int
    shift_const: int
    shift_Nk: int

    def index(self, n: int, n_minus_k: int) -> int:
        return n + self.shift_const + self.shift_Nk * n_minus_k


@dataclass(frozen=True)
class RecursionTerm:
    coefficient: Fraction
    factors: Tuple[Factor, ...]

    def sort_key(self):
        return (tuple(f.deg for f in self.factors), tuple((f.shift_Nk, f.shift_const) for f in self.factors))


@dataclass(frozen=True)
class RecursionFormula:
    d: int
    terms: Tuple[RecursionTerm, ...]

    @classmethod
    def collect(cls, d: int, terms: Iterable[RecursionTerm]) -> "RecursionFormula":
        acc: Dict[Tuple[Factor, ...], Fraction] = {}
        for term in terms:
            acc[term.factors] = acc.get(term.factors, Fraction(0)) + term.coefficient
        out = [RecursionTerm(c, f) for f, c in acc.items() if c]
        out.sort(key=RecursionTerm.sort_key)
        return cls(d, tuple(out))

    @property
    def conjectural(self) -> bool:
        return self.d >= CONJECTURAL_FROM

    def as_dict(self) -> Dict[Tuple[Factor, ...], Fraction]:
        return {t.factors: t.coefficient for t in self.terms}

    def content_hash(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def to_json(self) -> dict:
        return {
            "format": FORMAT,
            "d": self.d,
            "conjectural": self.conjectural,
            "terms": [
                {
                    "coeff": format_fraction(t.coefficient),
                    "factors": [
                        {"deg": f.deg, "shift_const": f.shift_const, "shift_Nk": f.shift_Nk}
                        for f in t.factors
                    ],
                }
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RecursionFormula":
        if data.get("format", FORMAT) != FORMAT:
            raise ValueError(f"unsupported recursion format {data.get('format')!r}")
        terms = [
            RecursionTerm(
                as_fraction(t["coeff"]),
                tuple(Factor(f["deg"], f["shift_const"], f["shift_Nk"]) for f in t["factors"]),
            )
            for t in data["terms"]
        ]
        return cls.collect(int(data["d"]), terms)

    def render(self) -> str:
        """Text in the usual ``L^{N,k,d}_m = ...`` notation."""
        lhs = f"L^{{N,k,{self.d}}}_m"
        parts = []
        for t in self.terms:
            c = t.coefficient
            coef = "" if c == 1 else (f"{c.numerator}" if c.denominator == 1 else f"{c.numerator}/{c.denominator}") + "*"
            prod = "*".join(f"L^{{N+1,k,{f.deg}}}_{_render_shift(f)}" for f in t.factors)
            parts.append(coef + prod)
        return f"{lhs} = " + "\n    + ".join(parts)


def _render_shift(f: Factor) -> str:
    s = "m"
    if f.shift_const:
        s += f"{f.shift_const:+d}"
    if f.shift_Nk == 1:
        s += "+(N-k)"
    elif f.shift_Nk:
        s += f"+{f.shift_Nk}(N-k)"
    return s if s == "m" else "{" + s + "}"


def comb_of(m: ZMonomial, d_0: int, d_d: int) -> CombType:
    d = len(m) + 1
    if d_0 < 0 or d_d < 0 or any(e < 0 for e in m):
        raise ValueError("negative exponent")
    if d_0 + sum(m) + d_d != d - 1:
        raise ValueError(f"exponents of x^{d_0} y^{d_d} z^{m} do not sum to {d - 1}")
    interior = [j for j, e in enumerate(m, start=1) if e > 0]
    return CombType(d, (0, *interior, d), (d_0, *(m[j - 1] for j in interior), d_d))


def delta_of(c: CombType) -> Tuple[Factor, ...]:
    """Factor degrees and shifts for one comb.

    shift_j = (m+1-d) + (i_{j-1} - (j-1)) + sum_{l=j}^{m} (d_{i_l} - 1) + d_{i_{m+1}}
    with ``i_{j-1}`` copies of ``N - k``.
    """
    m, d, br, ex = c.m, c.d, c.breakpoints, c.exponents
    out = []
    for j in range(1, m + 2):
        const = (m + 1 - d) + (br[j - 1] - (j - 1)) + sum(ex[l] - 1 for l in range(j, m + 1)) + ex[m + 1]
        out.append(Factor(br[j] - br[j - 1], const, br[j - 1]))
    return tuple(out)


def phi_map(p: PolyD) -> RecursionFormula:
    terms = []
    for xe, ye, m, coeff in p.monomials():
        terms.append(RecursionTerm(coeff, delta_of(comb_of(m, xe, ye))))
    return RecursionFormula.collect(p.d, terms)


def golden_recursion(d: int) -> RecursionFormula:
    """Shipped reference recursion (d <= 5)."""
    try:
        text = resources.files("qkahler.data").joinpath(f"recursion{d}.json").read_text()
    except FileNotFoundError:
        raise KeyError(f"no reference recursion for d={d}") from None
    return RecursionFormula.from_json(json.loads(text))
