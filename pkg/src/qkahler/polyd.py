"""Construction of ``Poly_d(x, y, z_1, ..., z_{d-1})``.

``Poly_d`` is the ``t``-constant part of ``prod_i p_i`` where

    p_i = t_i + phi_i + sum_{n >= 1} z_i^n (t_i + phi_i)^(1 - n)

and ``phi_i`` is the affine form built by :func:`phi_form`.  The coefficient of
a fixed ``z``-monomial is therefore a finite product of affine factors, and its
constant term is an iterated residue.  The ``(x, y)`` dependence is recovered
by specialising ``(x, y) = (1, s)`` and interpolating the homogeneous result.
"""
from __future__ import annotations

import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, Iterator, List, Mapping, Tuple

from .exact import (
    LinearForm,
    SparsePoly,
    X,
    XYPoly,
    Y,
    as_fraction,
    format_fraction,
    interpolate_homogeneous,
    z,
)
from .residue import DegenerateResidue, OwnedFactor, RatExpr, iterated_residue

__all__ = [
    "PhiForm",
    "phi_form",
    "ZMonomial",
    "PolyD",
    "integrand_for",
    "zmonomials",
    "coefficient_values",
    "poly_d",
    "golden_poly",
    "SAMPLE_OFFSETS",
]

log = logging.getLogger(__name__)

ZMonomial = Tuple[int, ...]

# Offsets tried, in order, for the sample abscissae s when a residue degenerates.
SAMPLE_OFFSETS = (0, 101, 211)


@dataclass(frozen=True)
class PhiForm:
    d: int
    i: int
    x_coeff: Fraction
    y_coeff: Fraction
    t_coeffs: Tuple[Tuple[int, Fraction], ...]

    def at(self, x_val, y_val) -> LinearForm:
        const = self.x_coeff * as_fraction(x_val) + self.y_coeff * as_fraction(y_val)
        return LinearForm.make(const, dict(self.t_coeffs))

    def to_poly(self) -> SparsePoly:
        """Symbolic form in x, y and the t-variables."""
        return (
            SparsePoly.var(X, self.x_coeff)
            + SparsePoly.var(Y, self.y_coeff)
            + LinearForm.make(0, dict(self.t_coeffs)).to_poly()
        )


def phi_form(d: int, i: int) -> PhiForm:
    if d < 2 or not 1 <= i <= d - 1:
        raise ValueError(f"phi_form needs d >= 2 and 1 <= i <= d-1, got d={d}, i={i}")
    coeffs = []
    for j in range(1, d):
        if j < i:
            coeffs.append((j, Fraction(d - i, d - j)))
        elif j > i:
            coeffs.append((j, Fraction(i, j)))
    return PhiForm(d, i, Fraction(d - i, d), Fraction(i, d), tuple(coeffs))


def zmonomials(d: int) -> Iterator[ZMonomial]:
    """All exponent vectors ``(m_1..m_{d-1})`` with ``|m| <= d - 1``."""
    n = d - 1
    for m in itertools.product(range(n + 1), repeat=n):
        if sum(m) <= n:
            yield m


def integrand_for(d: int, m: ZMonomial, x_val, y_val) -> RatExpr:
    """The t-integrand of the z-monomial ``m`` with x, y specialised."""
    if len(m) != d - 1 or sum(m) > d - 1 or min(m, default=0) < 0:
        raise ValueError(f"bad z-monomial {m} for d={d}")
    numerators = []
    denominators = []
    for j, mj in enumerate(m, start=1):
        form = LinearForm.var(j) + phi_form(d, j).at(x_val, y_val)
        if mj == 0:
            numerators.append((form, 1))
        elif mj >= 2:
            denominators.append(OwnedFactor(form, j, mj - 1))
    return RatExpr.build(1, numerators, denominators)


def residue_order(m: ZMonomial) -> List[int]:
    """Integrate the variables without an owned pole first, then the rest."""
    free = [j for j, mj in enumerate(m, start=1) if mj < 2]
    owned = [j for j, mj in enumerate(m, start=1) if mj >= 2]
    return free + owned


def coefficient_values(d: int, m: ZMonomial) -> XYPoly:
    """The homogeneous (x, y)-coefficient of ``z^m`` in ``Poly_d``."""
    r = d - 1 - sum(m)
    order = residue_order(m)
    for offset in SAMPLE_OFFSETS:
        try:
            samples = []
            for s in range(r + 1):
                s = Fraction(s + offset)
                samples.append((s, iterated_residue(integrand_for(d, m, 1, s), order)))
        except DegenerateResidue as exc:
            log.debug("d=%d m=%s offset=%d degenerate: %s", d, m, offset, exc)
            continue
        return interpolate_homogeneous(samples, r)
    raise DegenerateResidue(f"sample ladder exhausted for d={d}, m={m}")


def _job(args):
    d, m = args
    return m, coefficient_values(d, m)


@dataclass
class PolyD:
    """``Poly_d`` as ``{z-exponents: homogeneous (x, y)-coefficient}``.

    An entry ``{a: c}`` under ``m`` stands for ``c * x^(r-a) * y^a * z^m`` with
    ``r = d - 1 - |m|``.
    """

    d: int
    entries: Dict[ZMonomial, XYPoly] = field(default_factory=dict)

    def degree_of(self, m: ZMonomial) -> int:
        return self.d - 1 - sum(m)

    def monomials(self) -> Iterator[Tuple[int, int, ZMonomial, Fraction]]:
        """Yield ``(x-exponent, y-exponent, z-exponents, coefficient)``."""
        for m in sorted(self.entries, key=lambda m: (sum(m), tuple(-e for e in m))):
            r = self.degree_of(m)
            for a, c in sorted(self.entries[m].items()):
                yield r - a, a, m, c

    def coefficient(self, x_exp: int, y_exp: int, m: ZMonomial) -> Fraction:
        if x_exp + y_exp != self.degree_of(m):
            return Fraction(0)
        return self.entries.get(tuple(m), {}).get(y_exp, Fraction(0))

    def to_poly(self) -> SparsePoly:
        terms = {}
        for xe, ye, m, c in self.monomials():
            mono = [(X, xe), (Y, ye)] + [(z(j), e) for j, e in enumerate(m, start=1)]
            terms[tuple(mono)] = c
        return SparsePoly(terms)

    def reversed(self) -> "PolyD":
        """Image under x <-> y, z_i <-> z_{d-i}."""
        out = {}
        for m, xy in self.entries.items():
            r = self.degree_of(m)
            out[tuple(reversed(m))] = {r - a: c for a, c in xy.items()}
        return PolyD(self.d, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyD):
            return NotImplemented
        return self.d == other.d and _strip(self.entries) == _strip(other.entries)

    # serialisation
    def to_json(self) -> dict:
        return {
            "format": "polyd-monomials/1",
            "d": self.d,
            "monomials": [
                {"x": xe, "y": ye, "z": list(m), "coeff": format_fraction(c)}
                for xe, ye, m, c in self.monomials()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PolyD":
        d = int(data["d"])
        entries: Dict[ZMonomial, XYPoly] = {}
        for row in data["monomials"]:
            m = tuple(row["z"]) if d > 1 else ()
            if len(m) != d - 1:
                raise ValueError(f"z-exponent vector {m} has wrong length for d={d}")
            if row["x"] + row["y"] + sum(m) != d - 1:
                raise ValueError(f"monomial {row} is not of degree {d - 1}")
            c = as_fraction(row["coeff"])
            if c:
                entries.setdefault(m, {})[row["y"]] = entries.get(m, {}).get(row["y"], 0) + c
        return cls(d, _strip(entries))

    def render(self, multiline: bool = False) -> str:
        """Grouped by z-support, as ``(xy-part)*z-monomial`` sums; one line per group if ``multiline``."""
        if self.d == 1:
            return render_group(self, ())
        groups: Dict[Tuple[int, ...], List[ZMonomial]] = {}
        for m in self.entries:
            support = tuple(j for j, e in enumerate(m, start=1) if e)
            groups.setdefault(support, []).append(m)
        order = sorted(groups, key=lambda s: (len(s), s))
        lines = []
        for support in order:
            body = " + ".join(render_group(self, m) for m in sorted(groups[support], key=lambda m: (sum(m), tuple(-e for e in m))))
            lines.append(body)
        return ("\n+ " if multiline else " + ").join(lines)


def _strip(entries: Mapping[ZMonomial, XYPoly]) -> Dict[ZMonomial, XYPoly]:
    out = {}
    for m, xy in entries.items():
        xy = {a: c for a, c in xy.items() if c}
        if xy:
            out[tuple(m)] = xy
    return out


def _render_xy(xy: XYPoly, r: int) -> str:
    if r == 0:
        c = xy.get(0, Fraction(0))
        return str(c)
    # common denominator first, so x/2 + y/2 renders as (x+y)/2
    from math import lcm

    den = 1
    for c in xy.values():
        den = lcm(den, c.denominator)
    parts = []
    for a in range(r + 1):
        c = xy.get(a)
        if not c:
            continue
        n = c * den
        mono = "*".join(
            p for p in (
                ("x" if r - a == 1 else f"x^{r - a}") if r - a else "",
                ("y" if a == 1 else f"y^{a}") if a else "",
            ) if p
        )
        coef = "" if abs(n) == 1 else f"{abs(n.numerator)}*"
        parts.append(("-" if n < 0 else "+", coef + mono))
    body = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, p in parts[1:]:
        body += f"{sign}{p}"
    if den == 1:
        return body if len(parts) == 1 else f"({body})"
    return f"({body})/{den}"


def render_group(p: PolyD, m: ZMonomial) -> str:
    r = p.degree_of(m)
    xy = p.entries.get(m, {})
    zpart = "*".join(
        f"z_{j}" if e == 1 else f"z_{j}^{e}" for j, e in enumerate(m, start=1) if e
    )
    coeff = _render_xy(xy, r)
    if not zpart:
        return coeff
    if coeff == "1":
        return zpart
    return f"{coeff}*{zpart}"


def poly_d(d: int, jobs: int = 1) -> PolyD:
    """Compute ``Poly_d`` exactly; ``jobs > 1`` spreads z-monomials over processes."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    if d == 1:
        return PolyD(1, {(): {0: Fraction(1)}})
    monos = list(zmonomials(d))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_job, [(d, m) for m in monos], chunksize=4))
    else:
        results = [_job((d, m)) for m in monos]
    return PolyD(d, _strip(dict(results)))


def golden_poly(d: int) -> PolyD:
    """A shipped reference table (d in 1, 2, 3, 4, 6)."""
    try:
        text = resources.files("qkahler.data").joinpath(f"poly{d}.json").read_text()
    except FileNotFoundError:
        raise KeyError(f"no reference table for d={d}") from None
    return PolyD.from_json(json.loads(text))
