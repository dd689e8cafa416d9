"""Structure constants ``L_n^{N,k,d}`` by descending recursion in ``N``.

Rows with ``N >= 2k`` are initial data: the degree-one constants are the
coefficients of ``k * prod_{j=1}^{k-1} (j w + k - j)`` and every higher degree
vanishes.  Each lower row follows from the row above through the degree-d
recursion formulas.

Two modes are supported.  ``fano`` gives the true constants for ``N > k``: it
zeroes indices outside the dimension selection range and applies the
degree-one correction at ``N - k = 1``.  ``virtual`` iterates the bare
recursion all the way down to ``N = k``.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple

from .comb import RecursionFormula, phi_map
from .exact import format_fraction, parse_fraction
from .polyd import PolyD, poly_d

__all__ = [
    "StructKey",
    "beauville_init",
    "selection_range",
    "StructureEngine",
    "FormulaBook",
    "PersistentCache",
    "virtual_constants",
    "CACHE_ENV",
]

log = logging.getLogger(__name__)

CACHE_ENV = "QKAHLER_CACHE"
CACHE_FORMAT = "qkahler-cache/1"
MODES = ("fano", "virtual")


@dataclass(frozen=True, order=True)
class StructKey:
    N: int
    k: int
    d: int
    n: int


def beauville_init(k: int) -> List[Fraction]:
    """Coefficients of ``k * prod_{j=1}^{k-1} (j*w + (k-j))``, lowest power first."""
    if k < 2:
        raise ValueError("k must be at least 2")
    poly = [Fraction(k)]
    for j in range(1, k):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for a, c in enumerate(poly):
            nxt[a] += c * (k - j)
            nxt[a + 1] += c * j
        poly = nxt
    return poly


def selection_range(N: int, k: int, d: int) -> Optional[Tuple[int, int]]:
    """Inclusive ``(lo, hi)`` range of ``m`` with possibly nonzero ``L_m^{N,k,d}``."""
    c = N - k
    if c >= 2:
        lo, hi = 0, (N - 1) - c * d
    elif c == 1 and d == 1:
        lo, hi = 1, N - 3
    elif c == 1:
        lo, hi = 0, N - 1 - c * d
    else:
        lo, hi = 2 + (k - N) * d, N - 3
    return (lo, hi) if lo <= hi else None


class PersistentCache:
    """JSON file of computed values, written atomically.

    Entries are keyed by a namespace string (mode plus formula hash for
    structure constants) and ``N,k,d,n``.
    """

    def __init__(self, path: os.PathLike | str):
        self.path = Path(path)
        self._data: Dict[str, Dict[str, str]] = {}
        self._polys: Dict[str, dict] = {}
        self._dirty = False
        if self.path.exists():
            raw = json.loads(self.path.read_text())
            if raw.get("format") != CACHE_FORMAT:
                log.warning("ignoring cache %s with format %r", self.path, raw.get("format"))
            else:
                for e in raw.get("entries", []):
                    ns = f"{e['mode']}:{e['formula_hash']}"
                    self._data.setdefault(ns, {})[f"{e['N']},{e['k']},{e['d']},{e['n']}"] = e["value"]
                self._polys = raw.get("polys", {})

    @classmethod
    def default(cls) -> Optional["PersistentCache"]:
        root = os.environ.get(CACHE_ENV)
        if not root:
            return None
        return cls(Path(root) / "qkahler-cache.json")

    def get(self, ns: str, key: StructKey) -> Optional[Fraction]:
        v = self._data.get(ns, {}).get(f"{key.N},{key.k},{key.d},{key.n}")
        return None if v is None else parse_fraction(v)

    def put(self, ns: str, key: StructKey, value: Fraction) -> None:
        self._data.setdefault(ns, {})[f"{key.N},{key.k},{key.d},{key.n}"] = format_fraction(value)
        self._dirty = True

    def get_poly(self, d: int) -> Optional[PolyD]:
        data = self._polys.get(str(d))
        return None if data is None else PolyD.from_json(data)

    def put_poly(self, p: PolyD) -> None:
        self._polys[str(p.d)] = p.to_json()
        self._dirty = True

    def save(self) -> None:
        if not self._dirty:
            return
        entries = []
        for ns, table in sorted(self._data.items()):
            mode, fhash = ns.split(":", 1)
            for key, value in sorted(table.items()):
                N, k, d, n = (int(v) for v in key.split(","))
                entries.append({"mode": mode, "N": N, "k": k, "d": d, "n": n, "value": value, "formula_hash": fhash})
        payload = {"format": CACHE_FORMAT, "entries": entries, "polys": self._polys}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, prefix=".qkahler-", suffix=".json")
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh)
        os.replace(tmp, self.path)
        self._dirty = False


class FormulaBook:
    """Recursion formulas by degree, built on demand from ``Poly_d``."""

    def __init__(self, cache: Optional[PersistentCache] = None, jobs: int = 1):
        self.cache = cache
        self.jobs = jobs
        self._formulas: Dict[int, RecursionFormula] = {}

    def poly(self, d: int) -> PolyD:
        if self.cache is not None:
            hit = self.cache.get_poly(d)
            if hit is not None:
                return hit
        p = poly_d(d, jobs=self.jobs)
        if self.cache is not None:
            self.cache.put_poly(p)
        return p

    def __getitem__(self, d: int) -> RecursionFormula:
        if d not in self._formulas:
            self._formulas[d] = phi_map(self.poly(d))
        return self._formulas[d]

    def set(self, formula: RecursionFormula) -> None:
        self._formulas[formula.d] = formula

    def hash(self, d_max: int) -> str:
        h = hashlib.sha256()
        for d in range(1, d_max + 1):
            h.update(self[d].content_hash().encode())
        return h.hexdigest()[:16]


class StructureEngine:
    """Memoised evaluation of ``L_n^{N,k,d}`` in one mode."""

    def __init__(
        self,
        mode: str = "fano",
        formulas: Optional[FormulaBook] = None,
        cache: Optional[PersistentCache] = None,
    ):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.mode = mode
        self.formulas = formulas if formulas is not None else FormulaBook(cache)
        self.cache = cache
        self._memo: Dict[StructKey, Fraction] = {}
        self._init: Dict[int, List[Fraction]] = {}
        self._ns: Dict[int, str] = {}

    def _namespace(self, d: int) -> str:
        if d not in self._ns:
            self._ns[d] = f"{self.mode}:{self.formulas.hash(d)}"
        return self._ns[d]

    def _beauville(self, k: int, n: int) -> Fraction:
        if k not in self._init:
            self._init[k] = beauville_init(k)
        row = self._init[k]
        return row[n] if 0 <= n < len(row) else Fraction(0)

    def __call__(self, N: int, k: int, d: int, n: int) -> Fraction:
        return self.compute(N, k, d, n)

    def compute(self, N: int, k: int, d: int, n: int) -> Fraction:
        if k < 2 or d < 1:
            raise ValueError("need k >= 2 and d >= 1")
        if self.mode == "fano" and N <= k:
            raise ValueError("fano mode requires N > k; use virtual mode for N = k")
        if N < k:
            raise ValueError("rows below N = k are not defined")
        key = StructKey(N, k, d, n)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if self.cache is not None and N < 2 * k:
            cached = self.cache.get(self._namespace(d), key)
            if cached is not None:
                self._memo[key] = cached
                return cached
        value = self._evaluate(N, k, d, n)
        self._memo[key] = value
        if self.cache is not None and N < 2 * k:
            self.cache.put(self._namespace(d), key, value)
        return value

    def _evaluate(self, N: int, k: int, d: int, n: int) -> Fraction:
        if self.mode == "fano":
            rng = selection_range(N, k, d)
            if rng is None or not rng[0] <= n <= rng[1]:
                return Fraction(0)
        if N >= 2 * k:
            return self._beauville(k, n) if d == 1 else Fraction(0)
        if self.mode == "fano" and d == 1 and N - k == 1:
            return self.compute(N + 1, k, 1, n) - self.compute(N + 1, k, 1, 0)
        c = N - k
        total = Fraction(0)
        for term in self.formulas[d].terms:
            prod = term.coefficient
            for f in term.factors:
                v = self.compute(N + 1, k, f.deg, f.index(n, c))
                if not v:
                    prod = 0
                    break
                prod *= v
            if prod:
                total += prod
        return total

    def row(self, N: int, k: int, d: int, ns: Iterable[int]) -> Dict[int, Fraction]:
        return {n: self.compute(N, k, d, n) for n in ns}

    def table(self, N: int, k: int, d_max: int) -> Dict[Tuple[int, int], Fraction]:
        """All constants in the selection range, keyed by ``(d, m)``."""
        out = {}
        for d in range(1, d_max + 1):
            rng = selection_range(N, k, d) if self.mode == "fano" else (0, k - 1)
            if rng is None:
                continue
            for m in range(rng[0], rng[1] + 1):
                out[(d, m)] = self.compute(N, k, d, m)
        return out

    def save(self) -> None:
        if self.cache is not None:
            self.cache.save()


def virtual_constants(
    k: int, d_max: int, engine: Optional[StructureEngine] = None
) -> Dict[Tuple[int, int], Fraction]:
    """``{(d, n): L~_n^{k,k,d}}`` for ``n = 0..k-1`` and ``d = 1..d_max``."""
    if engine is None:
        engine = StructureEngine("virtual")
    elif engine.mode != "virtual":
        raise ValueError("virtual_constants needs a virtual-mode engine")
    return {(d, n): engine.compute(k, k, d, n) for d in range(1, d_max + 1) for n in range(k)}
