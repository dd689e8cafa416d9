"""Iterated constant-term extraction by residues over owner-tagged poles.

An integrand is a polynomial prefactor over a product of affine forms in the
``t``-variables.  Each denominator factor carries an *owner*: the ``t``-index
whose geometric expansion produced it.  Integrating ``dt_i / t_i`` picks up
the poles at ``t_i = 0`` and at the roots of factors owned by ``i``; roots of
factors owned by other variables lie outside the contour.

The inside set is shared by all terms of a sum.  Factors that sit at the same
inside location merge into one higher-order pole.  Factors owned by variables
already integrated out are removable singularities of the sum, so they join an
inside pole when they land on one.  A factor owned by a variable still to be
integrated whose root is inside is a pinch and raises
:class:`DegenerateResidue`; the caller then re-samples the (x, y) point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, List, Sequence, Tuple, Union

from .exact import LinearForm, SparsePoly, t

__all__ = [
    "DegenerateResidue",
    "OwnedFactor",
    "RatExpr",
    "differentiate",
    "residue_in_var",
    "iterated_residue",
]


class DegenerateResidue(ArithmeticError):
    """A pole configuration the residue rule cannot resolve at this sample."""


@dataclass(frozen=True)
class OwnedFactor:
    """Denominator factor ``form ** multiplicity`` owned by ``t_owner``."""

    form: LinearForm
    owner: int
    multiplicity: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        if self.form.is_zero():
            raise DegenerateResidue("identically zero denominator factor")


@dataclass(frozen=True)
class RatExpr:
    """``prefactor / prod(f.form ** f.multiplicity for f in factors)``."""

    prefactor: SparsePoly
    factors: Tuple[OwnedFactor, ...] = ()

    @classmethod
    def build(
        cls,
        prefactor: SparsePoly | int | Fraction = 1,
        numerators: Iterable[Tuple[LinearForm, int]] = (),
        denominators: Iterable[OwnedFactor] = (),
    ) -> "RatExpr":
        p = prefactor if isinstance(prefactor, SparsePoly) else SparsePoly.const(prefactor)
        for form, mult in numerators:
            p = p * form.to_poly() ** mult
        return cls(p, ()).with_factors(denominators)

    def with_factors(self, extra: Iterable[OwnedFactor]) -> "RatExpr":
        """Attach factors, merging equal (form, owner) pairs and folding constants."""
        merged: dict = {}
        order: List[Tuple[LinearForm, int]] = []
        pre = self.prefactor
        for f in list(self.factors) + list(extra):
            if f.form.is_constant():
                pre = pre.scale(Fraction(1) / f.form.const ** f.multiplicity)
                continue
            key = (f.form, f.owner)
            if key not in merged:
                merged[key] = 0
                order.append(key)
            merged[key] += f.multiplicity
        return RatExpr(pre, tuple(OwnedFactor(k[0], k[1], merged[k]) for k in order))

    def scale(self, c: Fraction) -> "RatExpr":
        return RatExpr(self.prefactor.scale(c), self.factors)

    def t_indices(self) -> set:
        out = {v.index for v in self.prefactor.variables() if v.kind == "t"}
        for f in self.factors:
            out.update(f.form.indices())
        return out

    def is_zero(self) -> bool:
        return self.prefactor.is_zero()

    def value(self) -> Fraction:
        """Scalar value of a fully integrated expression."""
        if self.factors or not self.prefactor.is_constant():
            raise ValueError("expression still depends on t-variables")
        return self.prefactor.constant_term()

    def evaluate(self, point: dict) -> Fraction:
        """Numeric value at ``{index: value}`` (testing aid)."""
        num = self.prefactor.subs({t(i): Fraction(v) for i, v in point.items()})
        val = num.constant_term()
        for f in self.factors:
            fv = f.form.const + sum(c * Fraction(point[i]) for i, c in f.form.coeffs)
            val /= fv ** f.multiplicity
        return val


Integrand = Union[RatExpr, Sequence[RatExpr]]


def differentiate(e: RatExpr, i: int) -> RatExpr:
    """Exact ``d/dt_i`` keeping the denominator factored.

    Every factor involving ``t_i`` gains one power; the numerator becomes
    ``P' * prod(L) - P * sum(m_k c_k prod_{l != k} L)``.
    """
    v = t(i)
    active = [f for f in e.factors if f.form.coeff(i)]
    passive = [f for f in e.factors if not f.form.coeff(i)]
    if not active:
        return RatExpr(e.prefactor.diff(v), e.factors)
    polys = [f.form.to_poly() for f in active]
    full = SparsePoly.const(1)
    for p in polys:
        full = full * p
    num = e.prefactor.diff(v) * full
    for k, f in enumerate(active):
        others = SparsePoly.const(f.multiplicity * f.form.coeff(i))
        for l, p in enumerate(polys):
            if l != k:
                others = others * p
        num = num - e.prefactor * others
    bumped = [OwnedFactor(f.form, f.owner, f.multiplicity + 1) for f in active]
    return RatExpr(num, tuple(passive + bumped))


def _substitute(e: RatExpr, i: int, root: LinearForm) -> RatExpr:
    num = e.prefactor.subs({t(i): root})
    out = RatExpr(num, ())
    new = []
    for f in e.factors:
        form = f.form.substitute(i, root)
        if form.is_zero():
            raise DegenerateResidue(f"factor owned by t_{f.owner} vanishes at t_{i} = {root}")
        new.append(OwnedFactor(form, f.owner, f.multiplicity))
    return out.with_factors(new)


def _residue_term(e: RatExpr, i: int, inside: Sequence[LinearForm], done: set) -> List[RatExpr]:
    if e.is_zero():
        return []
    factors = list(e.factors) + [OwnedFactor(LinearForm.var(i), i, 1)]
    passive = [f for f in factors if not f.form.coeff(i)]
    active = [(f, f.form.root(i)) for f in factors if f.form.coeff(i)]
    for f, r in active:
        if f.owner != i and f.owner not in done and r in inside:
            raise DegenerateResidue(f"pole of t_{f.owner}-owned factor pinches an inside pole of t_{i}")

    out: List[RatExpr] = []
    for root in inside:
        at_root = [f for f, r in active if r == root]
        if not at_root:
            continue
        rest = [f for f, r in active if r != root]
        mu = sum(f.multiplicity for f in at_root)
        lead = Fraction(1)
        for f in at_root:
            lead *= f.form.coeff(i) ** f.multiplicity
        g = RatExpr(e.prefactor.scale(1 / lead), tuple(rest))
        for _ in range(mu - 1):
            g = differentiate(g, i)
        if mu > 1:
            g = g.scale(Fraction(1, factorial(mu - 1)))
        g = _substitute(g, i, root)
        if not g.is_zero():
            out.append(RatExpr(g.prefactor, ()).with_factors(passive + list(g.factors)))
    return out


def _integrated_owners(terms: Sequence[RatExpr]) -> set:
    present = set()
    owners = set()
    for term in terms:
        present |= term.t_indices()
        owners.update(f.owner for f in term.factors)
    return owners - present


def residue_in_var(e: Integrand, i: int) -> List[RatExpr]:
    """Sum over inside poles of ``Res_{t_i}(e / t_i)``, as a list of terms.

    The inside set is ``t_i = 0`` plus every root of a factor owned by ``t_i``,
    taken over all terms at once.  Factors owned by variables integrated
    earlier only carry removable singularities of the sum; they join a pole
    when they sit at an inside location and are skipped otherwise.
    """
    terms = [e] if isinstance(e, RatExpr) else list(e)
    inside: List[LinearForm] = [LinearForm()]
    for term in terms:
        for f in term.factors:
            if f.owner == i and f.form.coeff(i):
                r = f.form.root(i)
                if r not in inside:
                    inside.append(r)
    done = _integrated_owners(terms)
    out: List[RatExpr] = []
    for term in terms:
        out.extend(_residue_term(term, i, inside, done))
    return out


def iterated_residue(e: Integrand, order: Sequence[int] | None = None) -> Fraction:
    """Constant term in all ``t``-variables, integrating in the given order."""
    terms = [e] if isinstance(e, RatExpr) else list(e)
    if order is None:
        idx = set()
        for term in terms:
            idx |= term.t_indices()
        order = sorted(idx)
    for i in order:
        terms = residue_in_var(terms, i)
    total = Fraction(0)
    for term in terms:
        total += term.value()
    return total
