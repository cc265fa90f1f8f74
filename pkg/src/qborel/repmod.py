"""Matrix models for Borel-subalgebra modules of the quantum loop algebra of
affine sl2, together with tensor/shift/twist constructors and the defining-
relation checker.

Every model carries the generator matrices E0, E1, K1 as windowed
:class:`~qborel.linmap.LinMap` objects.  A column of a generator matrix is
"safe" when it provably agrees with the action on the untruncated module, so
every identity asserted downstream is exact on its window.  Kirillov-
Reshetikhin and invertible models are exact; prefundamental models are
truncated to ``trunc + 1`` basis vectors.

Conventions: the model parameter is the formal symbol ``a`` shifted by integer
powers of q; ``sign = -1`` means the whole model is built at inverted quantum
parameter (q -> q^-1 applied to matrices, weights and ell-weights).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from .cas import (
    Scalar,
    a_power,
    q_factorial,
    q_number,
    q_power,
    rational,
    substitute,
    u_power,
)
from .linmap import LinMap
from .qchar import EllWeight

QDIFF = q_power(1) - q_power(-1)  # q - q^-1


class MissingDrinfeldData(RuntimeError):
    """The model does not expose the requested Drinfeld-generator data."""


class WindowTooSmall(ValueError):
    """The truncation leaves no basis vectors on which a check is exact."""


@dataclass
class DrinfeldData:
    """Loop-generator data: per-basis ell-weights and x^{+-}_{1,r} suppliers."""

    ell_weights: List[EllWeight]
    u_scale: int = 0
    xplus: Optional[Callable[[int], Optional[LinMap]]] = None
    xminus: Optional[Callable[[int], Optional[LinMap]]] = None


@dataclass
class ModuleModel:
    label: str
    dim: int
    exact: bool
    quantum_sign: int
    basis: List[object]
    khalf: List[int]  # K1 eigenvalue of basis vector j is q^(khalf[j]/2)
    e0: LinMap = field(repr=False)
    e1: LinMap = field(repr=False)
    k1: LinMap = field(repr=False)
    trunc: Optional[int] = None
    factors: Optional[Tuple["ModuleModel", "ModuleModel"]] = None
    drinfeld: Optional[DrinfeldData] = None
    f1: Optional[LinMap] = field(default=None, repr=False)
    f0: Optional[LinMap] = field(default=None, repr=False)
    u_exponent: int = 0  # accumulated spectral deformation of degree-1 generators

    # -- weight structure ------------------------------------------------------

    def k1_inv(self) -> LinMap:
        return LinMap.diagonal(self, [q_half_exp(-w) for w in self.khalf])

    def weight_blocks(self) -> Dict[int, List[int]]:
        blocks: Dict[int, List[int]] = {}
        for i, w in enumerate(self.khalf):
            blocks.setdefault(w, []).append(i)
        return blocks

    def extreme_khalf(self) -> int:
        """Highest weight at sign +1 (lowest at sign -1); weights step by -4*sign."""
        if self.factors is not None:
            return self.factors[0].extreme_khalf() + self.factors[1].extreme_khalf()
        step = -4 * self.quantum_sign
        return min(self.khalf, key=lambda w: w * step) if self.khalf else 0

    def true_weight_multiplicity(self, w: int) -> int:
        """Weight multiplicity of the untruncated module behind this model."""
        step = -4 * self.quantum_sign
        if self.factors is not None:
            m, n = self.factors
            base = m.extreme_khalf() + n.extreme_khalf()
            if (w - base) % step != 0:
                return 0
            total = (w - base) // step
            if total < 0:
                return 0
            return sum(
                m.true_weight_multiplicity(m.extreme_khalf() + step * j)
                * n.true_weight_multiplicity(n.extreme_khalf() + step * (total - j))
                for j in range(total + 1)
            )
        if self.exact:
            return sum(1 for x in self.khalf if x == w)
        # truncated prefundamental: one basis vector per weight, all j >= 0
        base = self.extreme_khalf()
        if (w - base) % step:
            return 0
        return 1 if (w - base) // step >= 0 else 0

    def weight_block_complete(self, w: int) -> bool:
        return sum(1 for x in self.khalf if x == w) == self.true_weight_multiplicity(w)

    # -- Drinfeld data ------------------------------------------------------------

    def xplus(self, r: int) -> LinMap:
        if self.drinfeld is None or self.drinfeld.xplus is None:
            raise MissingDrinfeldData(f"{self.label}: no x+ supplier")
        m = self.drinfeld.xplus(r)
        if m is None:
            raise MissingDrinfeldData(f"{self.label}: x+_{r} unavailable")
        return m

    def xminus(self, m_: int) -> LinMap:
        if self.drinfeld is None or self.drinfeld.xminus is None:
            raise MissingDrinfeldData(f"{self.label}: no x- supplier")
        m = self.drinfeld.xminus(m_)
        if m is None:
            raise MissingDrinfeldData(f"{self.label}: x-_{m_} unavailable")
        return m

    def ell_weight(self, j: int) -> EllWeight:
        if self.drinfeld is None:
            raise MissingDrinfeldData(f"{self.label}: no ell-weight data")
        return self.drinfeld.ell_weights[j]

    def phi_series(self, j: int, order: int) -> List[Scalar]:
        """z-series of the phi^+ eigenvalue on basis vector j, u-scale applied."""
        if self.drinfeld is None:
            raise MissingDrinfeldData(f"{self.label}: no ell-weight data")
        coeffs = self.drinfeld.ell_weights[j].z_series(order)
        scale = self.drinfeld.u_scale
        return [c * u_power(r * scale) for r, c in enumerate(coeffs)]

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "dim": self.dim,
            "exact": self.exact,
            "quantum_sign": self.quantum_sign,
            "basis": [str(b) for b in self.basis],
            "weight_exponents": [Fraction(w, 2).__str__() for w in self.khalf],
            "E0": self.e0.to_json(),
            "E1": self.e1.to_json(),
            "K1": self.k1.to_json(),
        }


def q_half_exp(e: int) -> Scalar:
    """q^(e/2) as a Scalar."""
    return Scalar.monomial(1, e)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _finish(model: ModuleModel, sign: int) -> ModuleModel:
    """Apply the global q -> q^-1 substitution when sign is -1."""
    if sign == 1:
        return model
    if sign != -1:
        raise ValueError("sign must be +1 or -1")
    inv = lambda s: substitute(s, "q")  # noqa: E731
    model.e0 = model.e0.map_scalars(inv)
    model.e1 = model.e1.map_scalars(inv)
    model.k1 = model.k1.map_scalars(inv)
    if model.f1 is not None:
        model.f1 = model.f1.map_scalars(inv)
    if model.f0 is not None:
        model.f0 = model.f0.map_scalars(inv)
    model.khalf = [-w for w in model.khalf]
    model.quantum_sign = -1
    if model.drinfeld is not None:
        dd = model.drinfeld
        xp, xm = dd.xplus, dd.xminus
        dd.ell_weights = [w.invert_q() for w in dd.ell_weights]
        if xp is not None:
            dd.xplus = lambda r: (lambda m: m and m.map_scalars(inv))(xp(r))
        if xm is not None:
            dd.xminus = lambda r: (lambda m: m and m.map_scalars(inv))(xm(r))
    model.label += "@q^-1"
    return model


def kr_module(k: int, shift_exp: int = 0, sign: int = 1) -> ModuleModel:
    """Kirillov-Reshetikhin module on basis v_0..v_k with parameter a*q^shift.

    Actions (at sign +1, writing b = a q^shift):
      k1 v_j = q^(k-2j) v_j,   e1 v_j = v_{j-1},
      e0 v_j = b q^(2-k) [j+1]_q [k-j]_q v_{j+1},
      f1 v_j = [j+1]_q [k-j]_q v_{j+1},   f0 v_j = b^-1 q^(k-2) v_{j-1},
      x+_r v_j = b^r q^(2r(1-j)) v_{j-1},
      x-_r v_j = b^r q^(-2jr) [j+1]_q [k-j]_q v_{j+1}  (all r in Z).
    """
    if k < 1:
        raise ValueError("kr_module needs k >= 1")
    dim = k + 1
    model = ModuleModel(
        label=f"kr(k={k},shift={shift_exp})",
        dim=dim,
        exact=True,
        quantum_sign=1,
        basis=list(range(dim)),
        khalf=[2 * (k - 2 * j) for j in range(dim)],
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
    )
    b_pow = lambda r: a_power(r) * q_power(r * shift_exp)  # noqa: E731
    lower = {j: {j - 1: Scalar.one()} for j in range(1, dim)}
    model.e1 = LinMap(model, model, lower)
    raise_coeff = [q_number(j + 1) * q_number(k - j) for j in range(k)]
    model.e0 = LinMap(
        model,
        model,
        {j: {j + 1: b_pow(1) * q_power(2 - k) * raise_coeff[j]} for j in range(k)},
    )
    model.k1 = LinMap.diagonal(model, [q_half_exp(w) for w in model.khalf])
    model.f1 = LinMap(model, model, {j: {j + 1: raise_coeff[j]} for j in range(k)})
    model.f0 = LinMap(
        model, model, {j: {j - 1: b_pow(-1) * q_power(k - 2)} for j in range(1, dim)}
    )

    def xplus(r: int) -> LinMap:
        return LinMap(
            model,
            model,
            {j: {j - 1: b_pow(r) * q_power(2 * r * (1 - j))} for j in range(1, dim)},
        )

    def xminus(r: int) -> LinMap:
        return LinMap(
            model,
            model,
            {j: {j + 1: b_pow(r) * q_power(-2 * j * r) * raise_coeff[j]} for j in range(k)},
        )

    ells = [
        EllWeight(
            2 * (k - 2 * j),
            (
                (shift_exp - 2 * k, 1),
                (shift_exp + 2, 1),
                (shift_exp + 2 - 2 * j, -1),
                (shift_exp - 2 * j, -1),
            ),
        )
        for j in range(dim)
    ]
    model.drinfeld = DrinfeldData(ell_weights=ells, xplus=xplus, xminus=xminus)
    return _finish(model, sign)


def prefund_minus(shift_exp: int = 0, trunc: int = 8, sign: int = 1) -> ModuleModel:
    """Truncated negative prefundamental module on z_0..z_trunc.

    Actions (sign +1, b = a q^shift):
      k1 z_j = q^(-2j) z_j,   e1 z_j = z_{j-1},
      e0 z_j = b q^(2-j) [j+1]_q / (q - q^-1) z_{j+1},
      x+_r z_j = b^r q^(2r(1-j)) z_{j-1},
      x-_m z_j = b^m q^(-(2m+1)j) [j+1]_q / (q - q^-1) z_{j+1}  (m > 0).
    """
    if trunc < 1:
        raise ValueError("prefund_minus needs trunc >= 1")
    dim = trunc + 1
    model = ModuleModel(
        label=f"L-(shift={shift_exp},trunc={trunc})",
        dim=dim,
        exact=False,
        quantum_sign=1,
        basis=list(range(dim)),
        khalf=[-4 * j for j in range(dim)],
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
        trunc=trunc,
    )
    b_pow = lambda r: a_power(r) * q_power(r * shift_exp)  # noqa: E731
    model.e1 = LinMap(model, model, {j: {j - 1: Scalar.one()} for j in range(1, dim)})
    model.e0 = LinMap(
        model,
        model,
        {j: {j + 1: b_pow(1) * q_power(2 - j) * q_number(j + 1) / QDIFF} for j in range(trunc)},
        safe_cols=range(trunc),
    )
    model.k1 = LinMap.diagonal(model, [q_half_exp(w) for w in model.khalf])

    def xplus(r: int) -> LinMap:
        return LinMap(
            model,
            model,
            {j: {j - 1: b_pow(r) * q_power(2 * r * (1 - j))} for j in range(1, dim)},
        )

    def xminus(m: int) -> Optional[LinMap]:
        if m < 1:
            return None
        return LinMap(
            model,
            model,
            {
                j: {j + 1: b_pow(m) * q_power(-(2 * m + 1) * j) * q_number(j + 1) / QDIFF}
                for j in range(trunc)
            },
            safe_cols=range(trunc),
        )

    ells = [
        EllWeight(
            -4 * j,
            ((shift_exp + 2, 1), (shift_exp + 2 - 2 * j, -1), (shift_exp - 2 * j, -1)),
        )
        for j in range(dim)
    ]
    model.drinfeld = DrinfeldData(ell_weights=ells, xplus=xplus, xminus=xminus)
    return _finish(model, sign)


def prefund_plus(shift_exp: int = 0, trunc: int = 8, sign: int = 1) -> ModuleModel:
    """Truncated positive prefundamental module on w_0..w_trunc.

    Actions (sign +1, b = a q^shift):
      k1 w_j = q^(-2j) w_j,   e1 w_j = w_{j-1},
      e0 w_j = -b q^(2+j) [j+1]_q / (q - q^-1) w_{j+1},
      x+_r w_j = delta_{r,0} w_{j-1},
      x-_1 w_j = -b q^(-j) [j+1]_q / (q - q^-1) w_{j+1}; higher modes unavailable.
    """
    if trunc < 1:
        raise ValueError("prefund_plus needs trunc >= 1")
    dim = trunc + 1
    model = ModuleModel(
        label=f"L+(shift={shift_exp},trunc={trunc})",
        dim=dim,
        exact=False,
        quantum_sign=1,
        basis=list(range(dim)),
        khalf=[-4 * j for j in range(dim)],
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
        trunc=trunc,
    )
    b_pow = lambda r: a_power(r) * q_power(r * shift_exp)  # noqa: E731
    model.e1 = LinMap(model, model, {j: {j - 1: Scalar.one()} for j in range(1, dim)})
    model.e0 = LinMap(
        model,
        model,
        {
            j: {j + 1: -b_pow(1) * q_power(2 + j) * q_number(j + 1) / QDIFF}
            for j in range(trunc)
        },
        safe_cols=range(trunc),
    )
    model.k1 = LinMap.diagonal(model, [q_half_exp(w) for w in model.khalf])

    def xplus(r: int) -> LinMap:
        if r == 0:
            return LinMap(
                model, model, {j: {j - 1: Scalar.one()} for j in range(1, dim)}
            )
        return LinMap.zero(model, model)

    def xminus(m: int) -> Optional[LinMap]:
        if m != 1:
            return None
        return LinMap(
            model,
            model,
            {
                j: {j + 1: -b_pow(1) * q_power(-j) * q_number(j + 1) / QDIFF}
                for j in range(trunc)
            },
            safe_cols=range(trunc),
        )

    ells = [EllWeight(-4 * j, ((shift_exp, 1),)) for j in range(dim)]
    model.drinfeld = DrinfeldData(ell_weights=ells, xplus=xplus, xminus=xminus)
    return _finish(model, sign)


def invertible_module(weight_exp) -> ModuleModel:
    """One-dimensional module with K1 = q^weight_exp and trivial E0, E1."""
    khalf = Fraction(weight_exp) * 2
    if khalf.denominator != 1:
        raise ValueError("weight_exp must be a half-integer")
    khalf = int(khalf)
    model = ModuleModel(
        label=f"[q^{weight_exp}]",
        dim=1,
        exact=True,
        quantum_sign=1,
        basis=[0],
        khalf=[khalf],
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
    )
    model.e0 = LinMap.zero(model, model)
    model.e1 = LinMap.zero(model, model)
    model.k1 = LinMap.diagonal(model, [q_half_exp(khalf)])
    model.drinfeld = DrinfeldData(
        ell_weights=[EllWeight(khalf, ())],
        xplus=lambda r: LinMap.zero(model, model),
        xminus=lambda m: LinMap.zero(model, model),
    )
    return model


# ---------------------------------------------------------------------------
# Constructors on models
# ---------------------------------------------------------------------------


def tensor(m: ModuleModel, n: ModuleModel) -> ModuleModel:
    """Tensor product with Delta(e_i) = e_i x 1 + k_i x e_i (k_0 = k_1^-1)."""
    if m.quantum_sign != n.quantum_sign:
        raise ValueError("tensor factors must share the quantum sign")
    dim = m.dim * n.dim
    idx = lambda i, j: i * n.dim + j  # noqa: E731
    model = ModuleModel(
        label=f"({m.label})(x)({n.label})",
        dim=dim,
        exact=m.exact and n.exact,
        quantum_sign=m.quantum_sign,
        basis=[(bi, bj) for bi in m.basis for bj in n.basis],
        khalf=[m.khalf[i] + n.khalf[j] for i in range(m.dim) for j in range(n.dim)],
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
        factors=(m, n),
    )

    def coproduct(g_m: LinMap, g_n: LinMap, k_diag: List[Scalar]) -> LinMap:
        cols = {}
        for i in range(m.dim):
            gi = g_m.cols.get(i, {})
            for j in range(n.dim):
                col: Dict[int, Scalar] = {}
                for r, v in gi.items():
                    col[idx(r, j)] = v
                for r, v in g_n.cols.get(j, {}).items():
                    key = idx(i, r)
                    w = k_diag[i] * v
                    col[key] = col[key] + w if key in col else w
                if col:
                    cols[idx(i, j)] = col
        safe = {
            idx(i, j)
            for i in g_m.safe_cols
            for j in g_n.safe_cols
        }
        return LinMap(model, model, cols, safe)

    k_plus = [q_half_exp(w) for w in m.khalf]
    k_minus = [q_half_exp(-w) for w in m.khalf]
    model.e1 = coproduct(m.e1, n.e1, k_plus)
    model.e0 = coproduct(m.e0, n.e0, k_minus)
    model.k1 = LinMap.diagonal(model, [q_half_exp(w) for w in model.khalf])
    return model


def spectral_deform(m: ModuleModel, exponent: int = 1) -> ModuleModel:
    """Twist by the degree grading: generators of loop-degree d pick up u^(d*exponent)."""
    u = u_power(exponent)
    model = ModuleModel(
        label=f"{m.label}(u^{exponent})" if exponent != 1 else f"{m.label}(u)",
        dim=m.dim,
        exact=m.exact,
        quantum_sign=m.quantum_sign,
        basis=list(m.basis),
        khalf=list(m.khalf),
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
        trunc=m.trunc,
        factors=m.factors,
        u_exponent=m.u_exponent + exponent,
    )
    model.e0 = m.e0.scale(u).with_spaces(model, model)
    model.e1 = m.e1.with_spaces(model, model)
    model.k1 = m.k1.with_spaces(model, model)
    if m.f1 is not None:
        model.f1 = m.f1.with_spaces(model, model)
    if m.f0 is not None:
        model.f0 = m.f0.scale(u_power(-exponent)).with_spaces(model, model)
    if m.drinfeld is not None:
        dd = m.drinfeld
        xp, xm = dd.xplus, dd.xminus

        def deform_supplier(supplier, r):
            mat = supplier(r)
            if mat is None:
                return None
            return mat.scale(u_power(r * exponent)).with_spaces(model, model)

        model.drinfeld = DrinfeldData(
            ell_weights=list(dd.ell_weights),
            u_scale=dd.u_scale + exponent,
            xplus=(lambda r: deform_supplier(xp, r)) if xp else None,
            xminus=(lambda r: deform_supplier(xm, r)) if xm else None,
        )
    return model


def twist(m: ModuleModel) -> ModuleModel:
    """Pullback along sigma(e_i) = -k_i^-1 e_i, sigma(k_i) = k_i^-1.

    Takes a model at q^s to one at q^-s on the same basis; E1' = -K1^-1 E1,
    E0' = -K1 E0 (k_0 = k_1^-1 for affine sl2), K1' = K1^-1.  Twisting twice
    restores the original matrices.  Drinfeld data does not transport and is
    dropped.
    """
    model = ModuleModel(
        label=f"twist({m.label})",
        dim=m.dim,
        exact=m.exact,
        quantum_sign=-m.quantum_sign,
        basis=list(m.basis),
        khalf=[-w for w in m.khalf],
        e0=LinMap(None, None, {}),
        e1=LinMap(None, None, {}),
        k1=LinMap(None, None, {}),
        trunc=m.trunc,
        factors=None,
        u_exponent=m.u_exponent,
    )
    minus_k_inv = [-q_half_exp(-w) for w in m.khalf]
    minus_k = [-q_half_exp(w) for w in m.khalf]
    model.e1 = m.e1.scale_rows(minus_k_inv).with_spaces(model, model)
    model.e0 = m.e0.scale_rows(minus_k).with_spaces(model, model)
    model.k1 = LinMap.diagonal(model, [q_half_exp(w) for w in model.khalf])
    return model


def flip_map(src: ModuleModel, dst: ModuleModel) -> LinMap:
    """The permutation (v x w) -> (w x v) between two tensor models."""
    if src.factors is None or dst.factors is None:
        raise ValueError("flip_map needs tensor models")
    m, n = src.factors
    if (dst.factors[0].dim, dst.factors[1].dim) != (n.dim, m.dim):
        raise ValueError("flip_map target has incompatible factor dimensions")
    one = Scalar.one()
    cols = {
        i * n.dim + j: {j * m.dim + i: one} for i in range(m.dim) for j in range(n.dim)
    }
    return LinMap(src, dst, cols)


def twist_transport_diagonal(dim: int) -> List[Scalar]:
    """The diagonal basis change d_j = (-1)^j q^(j(j-1)) taking the twisted
    negative-prefundamental basis to the positive-prefundamental one."""
    return [rational((-1) ** j) * q_power(j * (j - 1)) for j in range(dim)]


def conjugate_by_diagonal(m: LinMap, diag: List[Scalar]) -> LinMap:
    """D^-1 m D for an invertible diagonal D given by its entries."""
    cols = {
        c: {r: diag[c] * v / diag[r] for r, v in col.items()}
        for c, col in m.cols.items()
    }
    return LinMap(m.source, m.target, cols, m.safe_cols)


# ---------------------------------------------------------------------------
# Defining-relation checker
# ---------------------------------------------------------------------------


@dataclass
class RelationCheck:
    name: str
    ok: bool
    window: int
    detail: str = ""


def _divided_power(e: LinMap, r: int) -> LinMap:
    out = LinMap.identity(e.source)
    for _ in range(r):
        out = e @ out
    return out.scale(q_factorial(r).inv())


def check_relations(m: ModuleModel) -> List[RelationCheck]:
    """Verify K-E commutation and both q-Serre relations on safe windows."""
    results: List[RelationCheck] = []
    k_inv = m.k1_inv()

    # k_i e_j k_i^-1 = q^(C_ij) e_j with C = [[2,-2],[-2,2]]: e1 scales by q^2,
    # e0 by q^-2 (exponents flip with the quantum sign).
    s = m.quantum_sign
    for name, gen, cexp in (("k-e1-commutation", m.e1, 2 * s), ("k-e0-commutation", m.e0, -2 * s)):
        lhs = m.k1 @ gen @ k_inv
        rhs = gen.scale(q_power(cexp))
        window = lhs.safe_cols & rhs.safe_cols
        diff = lhs.first_difference(rhs, window)
        results.append(
            RelationCheck(name, diff is None, len(window), _fmt_diff(m, diff))
        )

    # q-Serre: sum_{r=0}^{3} (-1)^r e_i^{(3-r)} e_j e_i^{(r)} = 0 (C_ij = -2).
    for name, ei, ej in (("serre-e1-e0", m.e1, m.e0), ("serre-e0-e1", m.e0, m.e1)):
        total: Optional[LinMap] = None
        for r in range(4):
            term = _divided_power(ei, 3 - r) @ ej @ _divided_power(ei, r)
            if r % 2:
                term = term.scale(rational(-1))
            total = term if total is None else total + term
        assert total is not None
        window = total.safe_cols
        if not window:
            raise WindowTooSmall(f"{m.label}: no safe basis vectors for {name}")
        zero = LinMap.zero(m, m)
        diff = total.first_difference(zero, window)
        results.append(
            RelationCheck(name, diff is None, len(window), _fmt_diff(m, diff))
        )
    return results


def _fmt_diff(m: ModuleModel, diff) -> str:
    if diff is None:
        return ""
    r, c, va, vb = diff
    return f"basis {m.basis[c]} -> {m.basis[r]}: {va.text()} != {vb.text()}"


def relations_ok(m: ModuleModel) -> bool:
    return all(c.ok for c in check_relations(m))


# ---------------------------------------------------------------------------
# Cartan-Drinfeld data derived from the matrices
# ---------------------------------------------------------------------------


def h_eigenvalues(m: ModuleModel, j: int, order: int) -> List[Scalar]:
    """Eigenvalues of h_{1,1}..h_{1,order} on basis vector j.

    Read off from the stored ell-weight: the z^r coefficient of
    log(Psi_j(z)/Psi_j(0)) divided by (q_s - q_s^-1), times the u-scale.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if m.drinfeld is None:
        raise MissingDrinfeldData(f"{m.label}: no ell-weight data")
    s = m.quantum_sign
    qdiff = q_power(s) - q_power(-s)
    ell = m.drinfeld.ell_weights[j]
    scale = m.drinfeld.u_scale
    out = []
    for r in range(1, order + 1):
        acc = Scalar.zero()
        for shift, mult in ell.factors:
            base = Scalar.monomial(1, r * shift, 0, -r if ell.inverted_marker else r)
            acc = acc + rational(mult) * base
        out.append(-acc / (rational(r) * qdiff) * u_power(r * scale))
    return out


def h_eigenvalues_negative(m: ModuleModel, j: int, order: int) -> List[Scalar]:
    """Eigenvalues of h_{1,-1}..h_{1,-order} (finite exact models only)."""
    if m.drinfeld is None:
        raise MissingDrinfeldData(f"{m.label}: no ell-weight data")
    if not m.exact:
        raise MissingDrinfeldData(f"{m.label}: negative modes need an exact model")
    s = m.quantum_sign
    qdiff = q_power(s) - q_power(-s)
    ell = m.drinfeld.ell_weights[j]
    scale = m.drinfeld.u_scale
    out = []
    for r in range(1, order + 1):
        acc = Scalar.zero()
        for shift, mult in ell.factors:
            base = Scalar.monomial(1, -r * shift, 0, r if ell.inverted_marker else -r)
            acc = acc + rational(mult) * base
        out.append(acc / (rational(r) * qdiff) * u_power(-r * scale))
    return out


def phi_matrices(m: ModuleModel, order: int) -> List[LinMap]:
    """Matrices of phi^+_{1,1}..phi^+_{1,order} built from E0, E1, K1.

    Uses x^-_{1,1} = k_1 e_0, phi^+_{1,r} = (q_s - q_s^-1)[e_1, x^-_{1,r}],
    h_{1,1} = k_1^-1 phi^+_{1,1}/(q_s - q_s^-1) and the ladder
    x^-_{1,r+1} = -[h_{1,1}, x^-_{1,r}]/[2]_q, so it works on any model,
    including tensor products, with windows tracked by composition.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    s = m.quantum_sign
    qdiff = q_power(s) - q_power(-s)
    k_inv = m.k1_inv()
    x = m.k1 @ m.e0
    phis = [(m.e1 @ x - x @ m.e1).scale(qdiff)]
    if order > 1:
        h1 = (k_inv @ phis[0]).scale(qdiff.inv())
        inv2 = q_number(2).inv()
        for _ in range(order - 1):
            x = (h1 @ x - x @ h1).scale(-inv2)
            phis.append((m.e1 @ x - x @ m.e1).scale(qdiff))
    return phis
