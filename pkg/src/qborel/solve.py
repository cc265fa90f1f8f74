"""Exact and specialized solvers for the intertwiner equations T g_A = g_B T.

The unknown matrix T is restricted by the K1-weight grading (an intertwiner
preserves weights), so unknowns live on weight-matched entry positions.  On
truncated models, a column enters the system only when the target weight
block is provably complete and the generator columns involved are safe, so
every imposed equation is satisfied by the restriction of a genuine
intertwiner of the untruncated modules.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cas import PoleAtPoint, Scalar
from .linmap import LinMap
from .repmod import ModuleModel


class AllPointsSingular(RuntimeError):
    """The random specialization pool was exhausted without a usable point."""


# ---------------------------------------------------------------------------
# Sparse reduced row echelon form over a field
# ---------------------------------------------------------------------------


def rref_nullspace(
    rows: Sequence[Dict[int, object]], ncols: int, inv, one
) -> List[Dict[int, object]]:
    """Nullspace basis of a sparse row system over a field.

    `rows` hold {column: coefficient}; `inv` inverts a coefficient.  Entries
    must support +, -, * and be falsy exactly when zero.
    """
    pivots: Dict[int, Dict[int, object]] = {}

    def reduce_row(row: Dict[int, object]) -> Dict[int, object]:
        row = dict(row)
        for col in sorted(set(row) & set(pivots)):
            coeff = row.pop(col, None)
            if not coeff:
                continue
            for c2, v2 in pivots[col].items():
                cur = row.get(c2)
                nxt = (cur - coeff * v2) if cur is not None else -(coeff * v2)
                if nxt:
                    row[c2] = nxt
                else:
                    row.pop(c2, None)
        return row

    for raw in rows:
        row = reduce_row(raw)
        if not row:
            continue
        # Prefer the sparsest scalar as pivot for growth control.
        pcol = min(row, key=lambda c: _entry_size(row[c]))
        pinv = inv(row[pcol])
        norm = {c: v * pinv for c, v in row.items() if c != pcol}
        # Eliminate the new pivot column from existing pivot rows.
        for col, prow in pivots.items():
            coeff = prow.pop(pcol, None)
            if coeff:
                for c2, v2 in norm.items():
                    cur = prow.get(c2)
                    nxt = (cur - coeff * v2) if cur is not None else -(coeff * v2)
                    if nxt:
                        prow[c2] = nxt
                    else:
                        prow.pop(c2, None)
        pivots[pcol] = norm
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec: Dict[int, object] = {f: one}
        for pcol, prow in pivots.items():
            v = prow.get(f)
            if v:
                vec[pcol] = -v
        basis.append(vec)
    return basis


def _entry_size(v) -> int:
    if isinstance(v, Scalar):
        return len(v.num) + len(v.den)
    return 1


def rref_nullspace_scalar(rows, ncols) -> List[Dict[int, Scalar]]:
    return rref_nullspace(rows, ncols, lambda s: s.inv(), Scalar.one())


def rref_nullspace_fraction(rows, ncols) -> List[Dict[int, Fraction]]:
    return rref_nullspace(rows, ncols, lambda x: 1 / x, Fraction(1))


# ---------------------------------------------------------------------------
# Intertwiner systems
# ---------------------------------------------------------------------------


@dataclass
class IntertwinerSystem:
    source: ModuleModel
    target: ModuleModel
    columns: List[int]
    unknowns: List[Tuple[int, int]]  # (target row, source column)
    index: Dict[Tuple[int, int], int]
    rows: List[Dict[int, Scalar]]


def build_intertwiner_system(
    a: ModuleModel, b: ModuleModel, columns: Optional[Sequence[int]] = None
) -> IntertwinerSystem:
    if a.quantum_sign != b.quantum_sign:
        raise ValueError("intertwiner system needs matching quantum signs")
    blocks_b = b.weight_blocks()
    if columns is None:
        columns = [
            c
            for c in range(a.dim)
            if b.weight_block_complete(a.khalf[c]) and a.weight_block_complete(a.khalf[c])
        ]
    columns = list(columns)
    colset = set(columns)
    unknowns: List[Tuple[int, int]] = []
    for c in columns:
        for r in blocks_b.get(a.khalf[c], ()):
            unknowns.append((r, c))
    index = {rc: i for i, rc in enumerate(unknowns)}
    rows: List[Dict[int, Scalar]] = []
    for g_a, g_b in ((a.e0, b.e0), (a.e1, b.e1)):
        for c in columns:
            if c not in g_a.safe_cols:
                continue
            support = g_a.cols.get(c, {})
            if any(s not in colset for s in support):
                continue
            block_c = blocks_b.get(a.khalf[c], ())
            if any(s not in g_b.safe_cols for s in block_c):
                continue
            # (T g_A)e_c - (g_B T)e_c = 0, one equation per target row.
            eq: Dict[int, Dict[int, Scalar]] = {}
            for s, v in support.items():
                for r in blocks_b.get(a.khalf[s], ()):
                    eq.setdefault(r, {})[index[(r, s)]] = v
            for s in block_c:
                for r, w in g_b.cols.get(s, {}).items():
                    slot = eq.setdefault(r, {})
                    k = index[(s, c)]
                    slot[k] = slot.get(k, Scalar.zero()) - w
            for r, coeffs in eq.items():
                coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
                if coeffs:
                    rows.append(coeffs)
    return IntertwinerSystem(a, b, columns, unknowns, index, rows)


@dataclass
class IntertwinerSolution:
    basis: Optional[List[LinMap]]
    nullity: int
    dims_at_points: Optional[List[int]] = None
    columns: Optional[List[int]] = None
    unknown_count: int = 0


SPECIALIZATION_QHALF = (
    Fraction(2),
    Fraction(3),
    Fraction(5, 2),
    Fraction(7, 3),
)


def draw_specialization(rng: random.Random) -> Tuple[Fraction, Fraction, Fraction]:
    """A random (q^(1/2), u, a) triple avoiding q-power collisions up to exp 40."""
    while True:
        qhalf = rng.choice(SPECIALIZATION_QHALF)
        u = Fraction(rng.randint(2, 13), rng.randint(1, 7))
        av = Fraction(rng.randint(2, 13), rng.randint(1, 7))
        powers = {qhalf**s for s in range(-40, 41)}
        if u in powers or av in powers or u * av in powers or u / av in powers:
            continue
        return qhalf, u, av


def solve_intertwiners(
    a: ModuleModel,
    b: ModuleModel,
    strategy: str = "exact",
    seed: int = 0,
    count: int = 3,
) -> IntertwinerSolution:
    """All T with T g_A = g_B T for g in {E0, E1, K1} on the safe window.

    strategy "exact" returns a nullspace basis of LinMaps over the function
    field; "specialized" solves at `count` random rational points and reports
    the generic nullspace dimension as the minimum over the points.
    """
    system = build_intertwiner_system(a, b)
    n = len(system.unknowns)
    if strategy == "exact":
        vecs = rref_nullspace_scalar(system.rows, n)
        basis = []
        for vec in vecs:
            cols: Dict[int, Dict[int, Scalar]] = {}
            for i, val in vec.items():
                r, c = system.unknowns[i]
                cols.setdefault(c, {})[r] = val
            basis.append(LinMap(a, b, cols, system.columns))
        return IntertwinerSolution(
            basis, len(basis), columns=system.columns, unknown_count=n
        )
    if strategy != "specialized":
        raise ValueError("strategy must be 'exact' or 'specialized'")
    rng = random.Random(seed)
    dims: List[int] = []
    attempts = 0
    while len(dims) < count:
        if attempts >= 10 * count:
            raise AllPointsSingular(
                f"no usable specialization after {attempts} attempts"
            )
        attempts += 1
        qhalf, u, av = draw_specialization(rng)
        try:
            rows = [
                {k: v.evaluate(qhalf, u, av) for k, v in row.items()}
                for row in system.rows
            ]
        except PoleAtPoint:
            continue
        vecs = rref_nullspace_fraction(rows, n)
        dims.append(len(vecs))
    return IntertwinerSolution(
        None,
        min(dims),
        dims_at_points=dims,
        columns=system.columns,
        unknown_count=n,
    )


# ---------------------------------------------------------------------------
# Nonexistence certificate via top-line annihilation
# ---------------------------------------------------------------------------


@dataclass
class CertificateReport:
    certified: bool
    depth_used: int
    unknowns: int
    nullity: int
    detail: str = ""


def top_annihilation_certificate(
    a: ModuleModel, b: ModuleModel, max_depth: Optional[int] = None
) -> CertificateReport:
    """Certify that every window intertwiner T: a -> b kills the top line.

    Works on growing weight-truncated subsystems: any solution of the full
    intertwiner system restricts to a solution of the subsystem, so if every
    subsystem solution has vanishing top coefficient the annihilation holds
    for all window intertwiners (and hence no isomorphism exists, since an
    isomorphism must be nonzero on the one-dimensional top weight line).
    """
    step = -4 * a.quantum_sign
    top_w = a.extreme_khalf()
    tops_a = [i for i, w in enumerate(a.khalf) if w == top_w]
    tops_b = [i for i, w in enumerate(b.khalf) if w == b.extreme_khalf()]
    if len(tops_a) != 1 or len(tops_b) != 1 or a.extreme_khalf() != b.extreme_khalf():
        raise ValueError("certificate needs matching one-dimensional top lines")
    full = build_intertwiner_system(a, b)
    top_unknown = full.index[(tops_b[0], tops_a[0])]
    depth_of = lambda c: (a.khalf[c] - top_w) // step  # noqa: E731
    if max_depth is None:
        max_depth = max(depth_of(c) for c in full.columns)
    for cutoff in range(1, max_depth + 1):
        allowed = {
            i for i, (r, c) in enumerate(full.unknowns) if depth_of(c) <= cutoff
        }
        sub_rows = [row for row in full.rows if set(row) <= allowed]
        vecs = rref_nullspace_scalar(sub_rows, len(full.unknowns))
        vecs = [v for v in vecs if set(v) <= allowed]
        if all(top_unknown not in v or v[top_unknown].is_zero() for v in vecs):
            return CertificateReport(
                True,
                cutoff,
                len(allowed),
                len(vecs),
                "every window intertwiner annihilates the top line",
            )
    return CertificateReport(
        False, max_depth, len(full.unknowns), -1, "top line not forced to zero"
    )
