"""Sparse linear maps between basis-indexed modules, with validity windows.

A :class:`LinMap` stores its matrix column-wise over :class:`~qborel.cas.Scalar`
entries together with ``safe_cols``: the set of source basis indices on which
the stored column provably equals the column of the true (untruncated) map.
Composition pulls windows back: a column of ``A @ B`` is safe when it is safe
for ``B`` and the support of ``B``'s column lies inside ``A``'s window.
"""

from __future__ import annotations

from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .cas import Scalar

Cols = Dict[int, Dict[int, Scalar]]


class WindowMismatch(ValueError):
    """Raised when maps with incompatible source/target spaces are combined."""


class LinMap:
    __slots__ = ("source", "target", "cols", "safe_cols")

    def __init__(self, source, target, cols: Cols, safe_cols: Optional[Iterable[int]] = None):
        self.source = source
        self.target = target
        self.cols: Cols = {
            c: {r: v for r, v in col.items() if not v.is_zero()}
            for c, col in cols.items()
        }
        self.cols = {c: col for c, col in self.cols.items() if col}
        if safe_cols is None:
            safe_cols = range(source.dim) if source is not None else ()
        self.safe_cols: FrozenSet[int] = frozenset(safe_cols)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def identity(module) -> "LinMap":
        one = Scalar.one()
        return LinMap(module, module, {i: {i: one} for i in range(module.dim)})

    @staticmethod
    def zero(source, target) -> "LinMap":
        return LinMap(source, target, {})

    @staticmethod
    def diagonal(module, entries) -> "LinMap":
        cols = {i: {i: s} for i, s in enumerate(entries)}
        return LinMap(module, module, cols)

    # -- basic queries ---------------------------------------------------------

    def entry(self, row: int, col: int) -> Scalar:
        return self.cols.get(col, {}).get(row, Scalar.zero())

    def column(self, col: int) -> Dict[int, Scalar]:
        return dict(self.cols.get(col, {}))

    def support(self, col: int) -> FrozenSet[int]:
        return frozenset(self.cols.get(col, {}))

    def entries(self) -> Iterable[Tuple[int, int, Scalar]]:
        for c in sorted(self.cols):
            col = self.cols[c]
            for r in sorted(col):
                yield r, c, col[r]

    # -- algebra -----------------------------------------------------------------

    def __matmul__(self, other: "LinMap") -> "LinMap":
        """self after other, with the pulled-back safety window."""
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise WindowMismatch("composition over mismatched spaces")
        cols: Cols = {}
        for c, col in other.cols.items():
            out: Dict[int, Scalar] = {}
            for mid, v in col.items():
                inner = self.cols.get(mid)
                if not inner:
                    continue
                for r, w in inner.items():
                    s = out.get(r)
                    out[r] = v * w if s is None else s + v * w
            cols[c] = out
        safe = {
            c
            for c in other.safe_cols
            if all(mid in self.safe_cols for mid in other.cols.get(c, {}))
        }
        return LinMap(other.source, self.target, cols, safe)

    def __add__(self, other: "LinMap") -> "LinMap":
        cols: Cols = {}
        for c in set(self.cols) | set(other.cols):
            out = dict(self.cols.get(c, {}))
            for r, v in other.cols.get(c, {}).items():
                s = out.get(r)
                out[r] = v if s is None else s + v
            cols[c] = out
        return LinMap(self.source, self.target, cols, self.safe_cols & other.safe_cols)

    def __sub__(self, other: "LinMap") -> "LinMap":
        return self + other.scale(Scalar.from_rational(-1))

    def scale(self, s: Scalar) -> "LinMap":
        cols = {c: {r: v * s for r, v in col.items()} for c, col in self.cols.items()}
        return LinMap(self.source, self.target, cols, self.safe_cols)

    def scale_rows(self, row_scalars) -> "LinMap":
        cols = {
            c: {r: v * row_scalars[r] for r, v in col.items()}
            for c, col in self.cols.items()
        }
        return LinMap(self.source, self.target, cols, self.safe_cols)

    def map_scalars(self, fn) -> "LinMap":
        cols = {c: {r: fn(v) for r, v in col.items()} for c, col in self.cols.items()}
        return LinMap(self.source, self.target, cols, self.safe_cols)

    def restrict(self, window: Iterable[int]) -> "LinMap":
        return LinMap(self.source, self.target, self.cols, self.safe_cols & set(window))

    def with_spaces(self, source, target) -> "LinMap":
        return LinMap(source, target, self.cols, self.safe_cols)

    # -- comparisons --------------------------------------------------------------

    def equal_on(self, other: "LinMap", window: Optional[Iterable[int]] = None) -> bool:
        cols = self.safe_cols & other.safe_cols if window is None else frozenset(window)
        for c in cols:
            a = self.cols.get(c, {})
            b = other.cols.get(c, {})
            for r in set(a) | set(b):
                va = a.get(r, Scalar.zero())
                vb = b.get(r, Scalar.zero())
                if not (va == vb):
                    return False
        return True

    def first_difference(self, other: "LinMap", window: Optional[Iterable[int]] = None):
        cols = self.safe_cols & other.safe_cols if window is None else frozenset(window)
        for c in sorted(cols):
            a = self.cols.get(c, {})
            b = other.cols.get(c, {})
            for r in sorted(set(a) | set(b)):
                va = a.get(r, Scalar.zero())
                vb = b.get(r, Scalar.zero())
                if not (va == vb):
                    return (r, c, va, vb)
        return None

    def is_zero_on(self, window: Optional[Iterable[int]] = None) -> bool:
        cols = self.safe_cols if window is None else frozenset(window)
        return all(not self.cols.get(c) for c in cols)

    def __repr__(self) -> str:
        nnz = sum(len(col) for col in self.cols.values())
        return (
            f"LinMap({self.source.label} -> {self.target.label}, "
            f"{self.target.dim}x{self.source.dim}, nnz={nnz}, "
            f"safe={len(self.safe_cols)})"
        )

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "source": self.source.label,
            "target": self.target.label,
            "shape": [self.target.dim, self.source.dim],
            "safe_cols": sorted(self.safe_cols),
            "entries": [
                [r, c, s.to_json()] for r, c, s in self.entries()
            ],
        }

    def inverse_dense(self) -> "LinMap":
        """Matrix inverse by Gauss-Jordan over the scalar field (small maps)."""
        n = self.source.dim
        if self.target.dim != n:
            raise WindowMismatch("inverse of a non-square map")
        zero, one = Scalar.zero(), Scalar.one()
        a = [[self.entry(r, c) for c in range(n)] for r in range(n)]
        inv = [[one if r == c else zero for c in range(n)] for r in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
            if piv is None:
                raise ZeroDivisionError("singular map")
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
            scale = a[col][col].inv()
            a[col] = [v * scale for v in a[col]]
            inv[col] = [v * scale for v in inv[col]]
            for r in range(n):
                if r == col or a[r][col].is_zero():
                    continue
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
                inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
        cols: Cols = {}
        for c in range(n):
            col = {r: inv[r][c] for r in range(n) if not inv[r][c].is_zero()}
            cols[c] = col
        return LinMap(self.target, self.source, cols)
