"""Exact rational scalars, sparse multivariate polynomials and affine forms.

Scalars are :class:`fractions.Fraction` throughout.  Polynomials live over the
alphabet ``x, y, z_1.., t_1..`` and are stored sparsely: a monomial is a tuple
of ``(Var, exponent)`` pairs sorted by variable, so structural equality is
polynomial equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Sequence, Tuple, Union

__all__ = [
    "Var",
    "X",
    "Y",
    "z",
    "t",
    "SparsePoly",
    "LinearForm",
    "as_fraction",
    "eval_xy",
    "interpolate_homogeneous",
    "XYPoly",
    "format_fraction",
    "parse_fraction",
]

Scalar = Union[int, Fraction]

_KIND_ORDER = {"x": 0, "y": 1, "z": 2, "t": 3}


class Var(NamedTuple):
    kind: str
    index: int = 0

    def sort_key(self) -> Tuple[int, int]:
        return _KIND_ORDER[self.kind], self.index

    def __str__(self) -> str:
        if self.kind in ("x", "y"):
            return self.kind
        return f"{self.kind}_{self.index}"


X = Var("x")
Y = Var("y")


def z(i: int) -> Var:
    return Var("z", i)


def t(i: int) -> Var:
    return Var("t", i)


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return parse_fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


Monomial = Tuple[Tuple[Var, int], ...]


def _mono_key(m: Monomial):
    return tuple((v.sort_key(), e) for v, e in m)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: Dict[Var, int] = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda p: p[0].sort_key()))


class SparsePoly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    m = tuple(sorted(((v, e) for v, e in m if e), key=lambda p: p[0].sort_key()))
                    clean[m] = clean.get(m, Fraction(0)) + as_fraction(c)
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "SparsePoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: Scalar) -> "SparsePoly":
        c = as_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, v: Var, coeff: Scalar = 1) -> "SparsePoly":
        return cls({((v, 1),): coeff})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree(self, v: Var | None = None) -> int:
        if not self._terms:
            return -1
        if v is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(v, 0) for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e for _, e in m) for m in self._terms}) <= 1

    # arithmetic
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, LinearForm):
            return other.to_poly()
        return SparsePoly.const(other)

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SparsePoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) - self

    def scale(self, c: Scalar) -> "SparsePoly":
        c = as_fraction(c)
        if not c:
            return SparsePoly()
        return SparsePoly._raw({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                m = _mono_mul(ma, mb)
                s = out.get(m, 0) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return SparsePoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def coefficient(self, mono: Mapping[Var, int] | Monomial) -> Fraction:
        if isinstance(mono, Mapping):
            mono = tuple(sorted(((v, e) for v, e in mono.items() if e), key=lambda p: p[0].sort_key()))
        return self._terms.get(tuple(mono), Fraction(0))

    def coefficients_in(self, v: Var) -> Dict[int, "SparsePoly"]:
        """Split as ``sum_j P_j * v**j``; returns ``{j: P_j}``."""
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            e = 0
            rest = []
            for w, k in m:
                if w == v:
                    e = k
                else:
                    rest.append((w, k))
            out.setdefault(e, {})[tuple(rest)] = c
        return {e: SparsePoly._raw(terms) for e, terms in out.items()}

    def subs(self, values: Mapping[Var, "SparsePoly | LinearForm | Scalar"]) -> "SparsePoly":
        """Substitute polynomials (or scalars) for variables."""
        subst = {v: self._coerce(p) for v, p in values.items()}
        powers: Dict[Tuple[Var, int], SparsePoly] = {}

        def power(v: Var, e: int) -> SparsePoly:
            key = (v, e)
            if key not in powers:
                powers[key] = subst[v] if e == 1 else power(v, e - 1) * subst[v]
            return powers[key]

        acc: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            kept = tuple((v, e) for v, e in m if v not in subst)
            term = SparsePoly._raw({kept: c})
            for v, e in m:
                if v in subst:
                    term = term * power(v, e)
                    if term.is_zero():
                        break
            for mm, cc in term._terms.items():
                s = acc.get(mm, 0) + cc
                if s:
                    acc[mm] = s
                else:
                    acc.pop(mm, None)
        return SparsePoly._raw(acc)

    def diff(self, v: Var) -> "SparsePoly":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            mm = tuple(sorted(d.items(), key=lambda p: p[0].sort_key()))
            out[mm] = out.get(mm, 0) + c * e
        return SparsePoly._raw({m: c for m, c in out.items() if c})

    def sorted_terms(self) -> Iterator[Tuple[Monomial, Fraction]]:
        """Terms in canonical order: descending total degree, then x, y, z_1.., t_1.. lexicographic."""
        def key(item):
            m, _ = item
            deg = sum(e for _, e in m)
            lex = []
            exps = dict(m)
            for v in sorted(exps, key=Var.sort_key):
                lex.append((v.sort_key(), -exps[v]))
            return (-deg, lex)

        return iter(sorted(self._terms.items(), key=key))

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"SparsePoly({render_poly(self)!r})"


def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_monomial(m: Monomial) -> str:
    return "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in m)


def render_poly(p: SparsePoly) -> str:
    """Canonical text form, e.g. ``5/324*x^5 + 29/216*x^4*y``."""
    if p.is_zero():
        return "0"
    parts = []
    for m, c in p.sorted_terms():
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if not m:
            body = _render_coeff(a)
        elif a == 1:
            body = render_monomial(m)
        else:
            body = f"{_render_coeff(a)}*{render_monomial(m)}"
        parts.append((sign, body))
    out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class LinearForm:
    """``const + sum_i coeffs[i] * t_i`` with exact coefficients."""

    const: Fraction = Fraction(0)
    coeffs: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def make(cls, const: Scalar = 0, coeffs: Mapping[int, Scalar] | None = None) -> "LinearForm":
        items = tuple(sorted((i, as_fraction(c)) for i, c in (coeffs or {}).items() if c))
        return cls(as_fraction(const), items)

    @classmethod
    def var(cls, i: int, coeff: Scalar = 1) -> "LinearForm":
        return cls.make(0, {i: coeff})

    def coeff(self, i: int) -> Fraction:
        for j, c in self.coeffs:
            if j == i:
                return c
        return Fraction(0)

    def indices(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.coeffs)

    def is_zero(self) -> bool:
        return not self.const and not self.coeffs

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LinearForm") -> "LinearForm":
        d = dict(self.coeffs)
        for i, c in other.coeffs:
            d[i] = d.get(i, 0) + c
        return LinearForm.make(self.const + other.const, d)

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.const, tuple((i, -c) for i, c in self.coeffs))

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, c: Scalar) -> "LinearForm":
        c = as_fraction(c)
        if not c:
            return LinearForm()
        return LinearForm(self.const * c, tuple((i, v * c) for i, v in self.coeffs))

    def drop(self, i: int) -> "LinearForm":
        return LinearForm(self.const, tuple((j, c) for j, c in self.coeffs if j != i))

    def substitute(self, i: int, form: "LinearForm") -> "LinearForm":
        """Replace ``t_i`` by ``form``."""
        c = self.coeff(i)
        if not c:
            return self
        return self.drop(i) + form.scale(c)

    def root(self, i: int) -> "LinearForm":
        """The value of ``t_i`` on which this form vanishes."""
        c = self.coeff(i)
        if not c:
            raise ZeroDivisionError(f"form does not involve t_{i}")
        return self.drop(i).scale(-1 / c)

    def to_poly(self) -> SparsePoly:
        terms: Dict[Monomial, Fraction] = {}
        if self.const:
            terms[()] = self.const
        for i, c in self.coeffs:
            terms[((t(i), 1),)] = c
        return SparsePoly._raw(terms)

    def __str__(self) -> str:
        return render_poly(self.to_poly())


# --- (x, y) specialisation and homogeneous interpolation -------------------

XYPoly = Dict[int, Fraction]
"""Homogeneous (x, y)-polynomial of a known degree r: ``{a: c}`` means ``c*x^(r-a)*y^a``."""


def eval_xy(p: SparsePoly, x_val: Scalar, y_val: Scalar) -> SparsePoly:
    if any(v.kind == "t" for v in p.variables()):
        raise ValueError("eval_xy expects a polynomial free of t-variables")
    return p.subs({X: as_fraction(x_val), Y: as_fraction(y_val)})


def interpolate_homogeneous(values: Sequence[Tuple[Scalar, Scalar]], degree: int) -> XYPoly:
    """Recover homogeneous ``P`` of the given degree from samples ``(s, P(1, s))``.

    Solved as a Vandermonde system in ``s`` by Newton divided differences,
    then converted to monomial coefficients.
    """
    r = degree
    if len(values) != r + 1:
        raise ValueError(f"need {r + 1} samples for degree {r}, got {len(values)}")
    xs = [as_fraction(s) for s, _ in values]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate interpolation sample points")
    ys = [as_fraction(v) for _, v in values]
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    # Horner expansion of the Newton form into monomial coefficients in s.
    poly = [Fraction(0)] * n
    poly[0] = coef[n - 1]
    size = 1
    for i in range(n - 2, -1, -1):
        new = [Fraction(0)] * n
        for a in range(size):
            new[a + 1] += poly[a]
            new[a] -= poly[a] * xs[i]
        new[0] += coef[i]
        poly = new
        size += 1
    return {a: c for a, c in enumerate(poly) if c}


def xy_to_poly(coeffs: Mapping[int, Fraction], degree: int) -> SparsePoly:
    return SparsePoly({((X, degree - a), (Y, a)): c for a, c in coeffs.items()})


def poly_to_xy(p: SparsePoly, degree: int) -> XYPoly:
    out: XYPoly = {}
    for m, c in p.items():
        d = dict(m)
        if set(d) - {X, Y} or d.get(X, 0) + d.get(Y, 0) != degree:
            raise ValueError("not a homogeneous (x, y)-polynomial of the stated degree")
        out[d.get(Y, 0)] = c
    return out


def product(items: Iterable[SparsePoly]) -> SparsePoly:
    acc = SparsePoly.const(1)
    for p in items:
        acc = acc * p
    return acc
