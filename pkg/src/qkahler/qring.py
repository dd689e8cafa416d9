"""The sub-ring generated by ``O_e`` as an explicit multiplication table."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

from .exact import format_fraction
from .gw import StructureEngine, selection_range

__all__ = ["RingElement", "MultiplicationTable", "mul_by_e", "q_truncation", "relation_check"]

Cell = Tuple[int, int]  # (basis index m of e^m, q-power j)


@dataclass
class RingElement:
    """``sum c_{m,j} q^j O_{e^m}`` with ``0 <= m <= N-2`` and ``j <= q_order``."""

    N: int
    q_order: int
    coeffs: Dict[Cell, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        for m, j in self.coeffs:
            self._check(m, j)
        self.coeffs = {c: Fraction(v) for c, v in self.coeffs.items() if v}

    def _check(self, m: int, j: int) -> None:
        if not 0 <= m <= self.N - 2:
            raise ValueError(f"basis index {m} outside 0..{self.N - 2}")
        if not 0 <= j:
            raise ValueError("negative q-power")

    @classmethod
    def one(cls, N: int, q_order: int) -> "RingElement":
        return cls(N, q_order, {(0, 0): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "RingElement") -> "RingElement":
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            out[c] = out.get(c, 0) + v
        return RingElement(self.N, min(self.q_order, other.q_order), out)

    def scale(self, c) -> "RingElement":
        return RingElement(self.N, self.q_order, {k: v * c for k, v in self.coeffs.items()})

    def q_shift(self, j: int) -> "RingElement":
        """Multiply by ``q^j``, dropping terms beyond the truncation."""
        return RingElement(
            self.N, self.q_order, {(m, p + j): v for (m, p), v in self.coeffs.items() if p + j <= self.q_order}
        )

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return isinstance(other, RingElement) and self.N == other.N and self.coeffs == other.coeffs

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "q_order": self.q_order,
            "terms": [{"m": m, "q": j, "coeff": format_fraction(v)} for (m, j), v in sorted(self.coeffs.items())],
        }


@dataclass
class MultiplicationTable:
    """``L_m^{N,k,d}`` for every ``m`` and ``d <= d_max`` in the selection range."""

    N: int
    k: int
    d_max: int
    entries: Dict[Tuple[int, int], Fraction]

    @classmethod
    def build(cls, N: int, k: int, d_max: int, engine: Optional[StructureEngine] = None) -> "MultiplicationTable":
        if N <= k:
            raise ValueError("multiplication tables need N > k")
        engine = engine or StructureEngine("fano")
        return cls(N, k, d_max, engine.table(N, k, d_max))

    def get(self, m: int, d: int) -> Fraction:
        if d > self.d_max:
            if selection_range(self.N, self.k, d) is None:
                return Fraction(0)
            raise ValueError(f"table depth {self.d_max} does not reach d={d}")
        return self.entries.get((d, m), Fraction(0))

    def rows(self) -> Dict[int, List[Tuple[int, Fraction]]]:
        """For each ``m``, the nonzero ``(d, L_m^{N,k,d})`` pairs."""
        out: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (d, m), v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            if v:
                out.setdefault(m, []).append((d, v))
        return out

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "k": self.k,
            "d_max": self.d_max,
            "rows": [
                {"m": m, "entries": [{"d": d, "value": format_fraction(v)} for d, v in pairs]}
                for m, pairs in self.rows().items()
            ],
        }

    def render(self) -> str:
        lines = []
        for m, pairs in self.rows().items():
            cells = "  ".join(f"d={d}: {v}" for d, v in pairs)
            lines.append(f"m={m:<3d} {cells}")
        return "\n".join(lines)


def mul_by_e(el: RingElement, table: MultiplicationTable) -> RingElement:
    """Quantum product ``O_e * el``.

    ``O_e O_{e^p} = O_{e^{p+1}} + sum_d L_{N-2-p}^{N,k,d} q^d O_{e^{p+1-(N-k)d}}``,
    and ``O_{e^{N-1}}`` vanishes classically.
    """
    N, c = table.N, table.N - table.k
    if el.N != N:
        raise ValueError("element and table disagree on N")
    out: Dict[Cell, Fraction] = {}
    for (p, j), v in el.coeffs.items():
        if p + 1 <= N - 2:
            out[(p + 1, j)] = out.get((p + 1, j), 0) + v
        for d in range(1, el.q_order - j + 1):
            L = table.get(N - 2 - p, d)
            if not L:
                continue
            target = p + 1 - c * d
            if not 0 <= target <= N - 2:
                raise ValueError(f"malformed table: L_{N - 2 - p}^{{{N},{table.k},{d}}} maps outside the basis")
            out[(target, j + d)] = out.get((target, j + d), 0) + v * L
    return RingElement(N, el.q_order, out)


def q_truncation(N: int, k: int) -> int:
    """``ceil((N-1)/(N-k))``: no degree beyond this has a nonempty selection range."""
    return -(-(N - 1) // (N - k))


def _powers(N: int, table: MultiplicationTable, top: int, q_order: int) -> List[RingElement]:
    el = RingElement.one(N, q_order)
    out = [el]
    for _ in range(top):
        el = mul_by_e(el, table)
        out.append(el)
    return out


def relation_check(
    N: int, k: int, table: Optional[MultiplicationTable] = None, engine: Optional[StructureEngine] = None
) -> Tuple[bool, RingElement]:
    """Evaluate the ring relation on ``1`` and return ``(residual is zero, residual)``.

    ``N - k >= 2``: ``O_e^{N-1} - k^k q O_e^{k-1}``.
    ``N - k == 1``: ``(O_e + k! q)^{N-1} - k^k q (O_e + k! q)^{k-1}``.
    """
    if N <= k:
        raise ValueError("relation_check is defined only for N > k")
    D = q_truncation(N, k)
    if table is None:
        table = MultiplicationTable.build(N, k, D, engine)
    elif table.d_max < D:
        raise ValueError(f"table depth {table.d_max} below the needed q-truncation {D}")
    q_order = D
    pw = _powers(N, table, N - 1, q_order)
    kk = Fraction(k) ** k
    if N - k >= 2:
        res = pw[N - 1] - pw[k - 1].q_shift(1).scale(kk)
    else:
        a = factorial(k)

        def binom_power(n: int) -> RingElement:
            acc = RingElement(N, q_order)
            for i in range(n + 1):
                acc = acc + pw[i].q_shift(n - i).scale(comb(n, i) * Fraction(a) ** (n - i))
            return acc

        res = binom_power(N - 1) - binom_power(k - 1).q_shift(1).scale(kk)
    return res.is_zero(), res
