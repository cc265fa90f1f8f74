"""The ell-weight monoid and truncated q-character series engine for affine sl2.

An :class:`EllWeight` is q^(c/2) * prod_s (1 - a q^s z)^(m_s) with an integer
half-exponent c, a finitely supported integer multiplicity map, and a marker
flag that replaces a by a^-1 (used by the parameter-inversion involution).
A :class:`QCharSeries` is a multiset of ell-weights graded by weight-drop
depth: each ladder step divides the constant part by q^2, so the depth of a
term is (c_top - c)/4 in half-exponent units.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Dict, Iterable, List, Optional, Tuple

from .cas import Scalar, rational

Factors = Tuple[Tuple[int, int], ...]


def _merge_factors(items: Iterable[Tuple[int, int]]) -> Factors:
    acc: Dict[int, int] = {}
    for s, m in items:
        acc[s] = acc.get(s, 0) + m
        if not acc[s]:
            del acc[s]
    return tuple(sorted(acc.items()))


@dataclass(frozen=True)
class EllWeight:
    """q^(chalf/2) * prod (1 - a q^shift z)^mult, with optional a -> a^-1 marker."""

    chalf: int
    factors: Factors = ()
    inverted_marker: bool = False

    def __post_init__(self):
        object.__setattr__(self, "factors", _merge_factors(self.factors))

    def __mul__(self, other: "EllWeight") -> "EllWeight":
        if self.inverted_marker != other.inverted_marker:
            raise ValueError("cannot multiply ell-weights with mixed markers")
        return EllWeight(
            self.chalf + other.chalf,
            self.factors + other.factors,
            self.inverted_marker,
        )

    def inv(self) -> "EllWeight":
        return EllWeight(
            -self.chalf,
            tuple((s, -m) for s, m in self.factors),
            self.inverted_marker,
        )

    def __pow__(self, n: int) -> "EllWeight":
        if n < 0:
            return self.inv() ** (-n)
        out = EllWeight(0, (), self.inverted_marker)
        for _ in range(n):
            out = out * self
        return out

    def invert_q(self) -> "EllWeight":
        """q -> q^-1 on the whole weight (marker untouched)."""
        return EllWeight(
            -self.chalf,
            tuple((-s, m) for s, m in self.factors),
            self.inverted_marker,
        )

    def theta(self) -> "EllWeight":
        """Parameter inversion: a q^s -> a^-1 q^-s on factors, mu -> mu^-1."""
        return EllWeight(
            -self.chalf,
            tuple((-s, m) for s, m in self.factors),
            not self.inverted_marker,
        )

    def is_constant(self) -> bool:
        return not self.factors

    def z_series(self, order: int) -> List[Scalar]:
        """Power-series coefficients in z up to z^order, as exact Scalars."""
        series = [Scalar.zero()] * (order + 1)
        series[0] = Scalar.monomial(1, self.chalf)
        for shift, mult in self.factors:
            a_exp = -1 if self.inverted_marker else 1
            b = Scalar.monomial(1, shift * 2, 0, a_exp)
            fac = [Scalar.zero()] * (order + 1)
            if mult >= 0:
                for r in range(min(mult, order) + 1):
                    fac[r] = rational(comb(mult, r) * (-1) ** r) * b**r
            else:
                for r in range(order + 1):
                    fac[r] = rational(comb(r - mult - 1, r)) * b**r
            out = [Scalar.zero()] * (order + 1)
            for i in range(order + 1):
                if series[i].is_zero():
                    continue
                for j in range(order + 1 - i):
                    out[i + j] = out[i + j] + series[i] * fac[j]
            series = out
        return series

    def text(self) -> str:
        parts = []
        if self.chalf % 2 == 0:
            parts.append(f"q^{self.chalf // 2}")
        else:
            parts.append(f"q^{{{self.chalf}/2}}")
        sym = "a^-1" if self.inverted_marker else "a"
        for s, m in self.factors:
            parts.append(f"(1 - {sym} q^{s} z)^{m}")
        return " * ".join(parts)

    def to_json(self) -> dict:
        return {
            "constant_half_exponent": self.chalf,
            "factors": [[s, m] for s, m in self.factors],
            "inverted_marker": self.inverted_marker,
        }


IDENTITY = EllWeight(0)


def ellweight_basic(kind: str, shift: int = 0, power: int = 1) -> EllWeight:
    """Generators: Psi, Y, A at a q-shift, and the constants alpha-bar/omega-bar."""
    if kind == "psi":
        base = EllWeight(0, ((shift, 1),))
    elif kind == "y":
        base = EllWeight(2, ((shift - 1, 1), (shift + 1, -1)))
    elif kind == "a":
        base = EllWeight(4, ((shift - 2, 1), (shift + 2, -1)))
    elif kind == "alpha_bar":
        base = EllWeight(4)
    elif kind == "omega_bar":
        base = EllWeight(2)
    else:
        raise ValueError(f"unknown ell-weight kind {kind!r}")
    return base**power


# ---------------------------------------------------------------------------
# q-character series
# ---------------------------------------------------------------------------


@dataclass
class QCharSeries:
    terms: Dict[EllWeight, int]
    top: EllWeight
    depth_bound: int

    def __post_init__(self):
        self.terms = {w: m for w, m in self.terms.items() if m}

    def depth_of(self, w: EllWeight) -> int:
        diff = self.top.chalf - w.chalf
        if diff % 4:
            raise ValueError("term is not on the depth lattice of the series")
        return diff // 4

    def total_multiplicity(self) -> int:
        return sum(self.terms.values())

    def scaled(self, w: EllWeight) -> "QCharSeries":
        return QCharSeries(
            {t * w: m for t, m in self.terms.items()}, self.top * w, self.depth_bound
        )

    def to_json(self) -> dict:
        items = sorted(
            self.terms.items(), key=lambda kv: (-kv[0].chalf, kv[0].factors)
        )
        return {
            "depth_bound": self.depth_bound,
            "top": self.top.to_json(),
            "terms": [{"weight": w.to_json(), "mult": m} for w, m in items],
        }

    def text(self) -> str:
        items = sorted(
            self.terms.items(), key=lambda kv: (-kv[0].chalf, kv[0].factors)
        )
        return " + ".join(
            (f"{m}*[{w.text()}]" if m != 1 else f"[{w.text()}]") for w, m in items
        )


def series_identity(depth: int) -> QCharSeries:
    return QCharSeries({IDENTITY: 1}, IDENTITY, depth)


def series_mul(x: QCharSeries, y: QCharSeries, depth: Optional[int] = None) -> QCharSeries:
    """Convolution product, truncated by combined weight-drop depth."""
    if x.top.inverted_marker != y.top.inverted_marker:
        raise ValueError("cannot multiply series with mixed parameter markers")
    if depth is None:
        depth = min(x.depth_bound, y.depth_bound)
    top = x.top * y.top
    terms: Dict[EllWeight, int] = {}
    for wx, mx in x.terms.items():
        dx = x.depth_of(wx)
        if dx > depth:
            continue
        for wy, my in y.terms.items():
            if dx + y.depth_of(wy) > depth:
                continue
            w = wx * wy
            terms[w] = terms.get(w, 0) + mx * my
    return QCharSeries(terms, top, depth)


def qchar_kr(k: int, shift: int = 0, depth: int = 8) -> QCharSeries:
    """q-character of the KR model with parameter a q^shift (top times A-ladder)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    top = EllWeight(2 * k, ((shift - 2 * k, 1), (shift, -1)))
    terms: Dict[EllWeight, int] = {}
    w = top
    terms[w] = 1
    for d in range(1, min(k, depth) + 1):
        w = w * ellweight_basic("a", shift - 2 * (d - 1), -1)
        terms[w] = terms.get(w, 0) + 1
    return QCharSeries(terms, top, depth)


def qchar_prefund_plus(shift: int = 0, depth: int = 8) -> QCharSeries:
    """q-character of L+ at a q^shift: Psi times the geometric alpha-bar ladder."""
    top = ellweight_basic("psi", shift)
    terms = {top * EllWeight(-4 * j): 1 for j in range(depth + 1)}
    return QCharSeries(terms, top, depth)


def qchar_prefund_minus(shift: int = 0, depth: int = 8) -> QCharSeries:
    """q-character of L- at a q^shift: Psi^-1 times the telescoping A-ladder."""
    top = ellweight_basic("psi", shift, -1)
    terms: Dict[EllWeight, int] = {top: 1}
    w = top
    for d in range(1, depth + 1):
        w = w * ellweight_basic("a", shift - 2 * (d - 1), -1)
        terms[w] = terms.get(w, 0) + 1
    return QCharSeries(terms, top, depth)


def chi_plus_character(depth: int) -> QCharSeries:
    """The ordinary character of L+ embedded as constant ell-weights."""
    terms = {EllWeight(-4 * j): 1 for j in range(depth + 1)}
    return QCharSeries(terms, IDENTITY, depth)


def qchar_from_module(model, depth: int = 8) -> QCharSeries:
    """Collect the stored per-basis ell-weights of a module model."""
    if getattr(model, "drinfeld", None) is None:
        from .repmod import MissingDrinfeldData

        raise MissingDrinfeldData(f"{model.label}: no ell-weight data")
    ells = model.drinfeld.ell_weights
    top = max(ells, key=lambda w: w.chalf)
    terms: Dict[EllWeight, int] = {}
    for w in ells:
        if (top.chalf - w.chalf) // 4 <= depth:
            terms[w] = terms.get(w, 0) + 1
    return QCharSeries(terms, top, depth)


def iq_involution(x: QCharSeries) -> QCharSeries:
    """Apply the parameter-inversion involution termwise."""
    return QCharSeries(
        {w.theta(): m for w, m in x.terms.items()}, x.top.theta(), x.depth_bound
    )


# ---------------------------------------------------------------------------
# Grothendieck-ring identity checks
# ---------------------------------------------------------------------------


@dataclass
class IdentityReport:
    name: str
    ok: bool
    depth: int
    detail: str = ""


def _signed_combination(parts, depth: int) -> Dict[EllWeight, int]:
    """Sum of (coefficient, series) truncated at `depth` below the global top."""
    top_chalf = max(w.chalf for _, series in parts for w in series.terms)
    acc: Dict[EllWeight, int] = {}
    for coeff, series in parts:
        for w, m in series.terms.items():
            if (top_chalf - w.chalf) // 4 > depth:
                continue
            acc[w] = acc.get(w, 0) + coeff * m
            if not acc[w]:
                del acc[w]
    return acc


def _compare(name: str, lhs_parts, rhs_parts, depth: int) -> IdentityReport:
    diff = _signed_combination(
        [(c, s) for c, s in lhs_parts] + [(-c, s) for c, s in rhs_parts], depth
    )
    if not diff:
        return IdentityReport(name, True, depth)
    w, m = next(iter(sorted(diff.items(), key=lambda kv: -kv[0].chalf)))
    return IdentityReport(name, False, depth, f"excess {m} * [{w.text()}]")


def check_wronskian(depth: int = 8) -> IdentityReport:
    """Two-term bilinear identity between L+ and L- classes at shifted parameters."""
    first = series_mul(qchar_prefund_plus(-1, depth), qchar_prefund_minus(-1, depth))
    second = series_mul(
        qchar_prefund_plus(1, depth), qchar_prefund_minus(-3, depth)
    ).scaled(ellweight_basic("alpha_bar", 0, -1))
    lhs = [(1, first), (-1, second)]
    rhs = [(1, chi_plus_character(depth))]
    return _compare("wronskian", lhs, rhs, depth)


def check_qq_dual(depth: int = 8) -> IdentityReport:
    """The dual bilinear identity with the roles of the signs exchanged."""
    first = series_mul(qchar_prefund_minus(1, depth), qchar_prefund_plus(1, depth))
    second = series_mul(
        qchar_prefund_minus(-1, depth), qchar_prefund_plus(3, depth)
    ).scaled(ellweight_basic("alpha_bar", 0, -1))
    lhs = [(1, first), (-1, second)]
    rhs = [(1, chi_plus_character(depth))]
    return _compare("qq-dual", lhs, rhs, depth)


def check_baxter_qt(depth: int = 8) -> IdentityReport:
    """Fundamental-times-L+ equals the weighted sum of two shifted L+ classes."""
    lhs = [(1, series_mul(qchar_kr(1, 0, depth), qchar_prefund_plus(0, depth)))]
    rhs = [
        (1, qchar_prefund_plus(-2, depth).scaled(ellweight_basic("omega_bar"))),
        (1, qchar_prefund_plus(2, depth).scaled(ellweight_basic("omega_bar", 0, -1))),
    ]
    return _compare("baxter-qt", lhs, rhs, depth)


def inverted_kr_ladder(k: int, depth: int, shift: int = 0) -> QCharSeries:
    """Normalized KR q-character ladder at inverted parameter a^-1 q^shift."""
    top = EllWeight(0, (), True)
    terms: Dict[EllWeight, int] = {top: 1}
    w = top
    for d in range(1, min(k, depth) + 1):
        step = ellweight_basic("a", shift - 2 * (d - 1), -1)
        w = w * EllWeight(step.chalf, step.factors, True)
        terms[w] = terms.get(w, 0) + 1
    return QCharSeries(terms, top, depth)


def check_iq_kr(k: int, depth: int = 8) -> IdentityReport:
    """Parameter inversion sends the normalized KR character at q^-1 (read off
    a module model's stored ell-weights) to the closed-form ladder at q with
    the parameter replaced by its inverse."""
    from .repmod import kr_module

    model = kr_module(k, 0, sign=-1)
    ells = model.drinfeld.ell_weights
    top = ells[0]  # highest ell-weight line of the model
    terms: Dict[EllWeight, int] = {}
    for w in ells:
        nw = w * top.inv()
        terms[nw] = terms.get(nw, 0) + 1
    lhs = iq_involution(QCharSeries(terms, EllWeight(0), depth))
    rhs = inverted_kr_ladder(k, depth, 0)
    return _compare(f"iq-kr-{k}", [(1, lhs)], [(1, rhs)], depth)
