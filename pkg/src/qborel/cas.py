"""Exact scalar arithmetic over the rational-function field Q(q^(1/2), u, a).

A :class:`Scalar` is a reduced fraction of sparse Laurent polynomials in the
three symbols q^(1/2) (half-power of the quantum parameter), u (spectral
deformation variable) and a (module parameter), with arbitrary-precision
rational coefficients.  Monomials are keyed by integer exponent triples
``(e_qhalf, e_u, e_a)``; the q-slot counts powers of q^(1/2), so q itself is
``(2, 0, 0)``.  All operations are exact; nothing here touches floating point.

The module also provides the standard q-combinatorics built on these scalars:
q-numbers, q-factorials, Gaussian binomials, the spectral q-number
(q^x u - q^-x)/(q - q^-1) and truncated q-exponential coefficients.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd as _igcd
from typing import Dict, Iterator, List, Optional, Tuple

Key = Tuple[int, int, int]
Poly = Dict[Key, Fraction]

_ZERO_KEY: Key = (0, 0, 0)


class PoleAtPoint(ArithmeticError):
    """Raised when a Scalar is evaluated at a zero of its denominator."""


# ---------------------------------------------------------------------------
# Laurent polynomial helpers (dict arithmetic)
# ---------------------------------------------------------------------------


def _padd(f: Poly, g: Poly) -> Poly:
    out = dict(f)
    for k, c in g.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _pneg(f: Poly) -> Poly:
    return {k: -c for k, c in f.items()}


def _pmul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return {}
    if len(f) > len(g):
        f, g = g, f
    out: Poly = {}
    for (k0, k1, k2), c in f.items():
        for (l0, l1, l2), d in g.items():
            key = (k0 + l0, k1 + l1, k2 + l2)
            s = out.get(key, 0) + c * d
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def _pscale(f: Poly, c: Fraction) -> Poly:
    if not c:
        return {}
    return {k: v * c for k, v in f.items()}


def _pshift(f: Poly, mono: Key) -> Poly:
    if mono == _ZERO_KEY:
        return dict(f)
    m0, m1, m2 = mono
    return {(k0 + m0, k1 + m1, k2 + m2): c for (k0, k1, k2), c in f.items()}


def _min_exponents(f: Poly) -> Key:
    it = iter(f)
    e0, e1, e2 = next(it)
    for (k0, k1, k2) in it:
        if k0 < e0:
            e0 = k0
        if k1 < e1:
            e1 = k1
        if k2 < e2:
            e2 = k2
    return (e0, e1, e2)


def _lex_lead(f: Poly) -> Key:
    return max(f)


# -- integer-coefficient gcd machinery --------------------------------------
#
# The fraction reduction below works on primitive integer polynomials with
# nonnegative exponents.  gcds are computed by a primitive polynomial
# remainder sequence, recursing on the number of active variables.

IPoly = Dict[Key, int]


def _to_int_poly(f: Poly) -> Tuple[IPoly, Fraction]:
    """Return (primitive integer polynomial, content) with f = content * prim."""
    den_lcm = 1
    for c in f.values():
        den_lcm = den_lcm * c.denominator // _igcd(den_lcm, c.denominator)
    num_gcd = 0
    scaled = {}
    for k, c in f.items():
        v = c.numerator * (den_lcm // c.denominator)
        scaled[k] = v
        num_gcd = _igcd(num_gcd, v)
    if num_gcd == 0:
        return {}, Fraction(0)
    return {k: v // num_gcd for k, v in scaled.items()}, Fraction(num_gcd, den_lcm)


def _int_content(f: IPoly) -> int:
    g = 0
    for c in f.values():
        g = _igcd(g, c)
        if g == 1:
            break
    return g


def _iprimitive(f: IPoly) -> IPoly:
    g = _int_content(f)
    if g in (0, 1):
        return f
    return {k: c // g for k, c in f.items()}


def _ipmul(f: IPoly, g: IPoly) -> IPoly:
    if not f or not g:
        return {}
    if len(f) > len(g):
        f, g = g, f
    out: IPoly = {}
    for (k0, k1, k2), c in f.items():
        for (l0, l1, l2), d in g.items():
            key = (k0 + l0, k1 + l1, k2 + l2)
            s = out.get(key, 0) + c * d
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def _ipscale_sub(f: IPoly, c: int, g: IPoly, mono: Key, d: int) -> IPoly:
    """c*f - d*(mono * g), all integer."""
    out = {k: c * v for k, v in f.items()}
    m0, m1, m2 = mono
    for (k0, k1, k2), v in g.items():
        key = (k0 + m0, k1 + m1, k2 + m2)
        s = out.get(key, 0) - d * v
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _divexact(f: IPoly, g: IPoly) -> Optional[IPoly]:
    """Exact division of integer polynomials in lex order, or None."""
    if not f:
        return {}
    if not g:
        return None
    out: IPoly = {}
    rem = dict(f)
    glead = _lex_lead(g)
    gl = g[glead]
    while rem:
        flead = _lex_lead(rem)
        mono = (flead[0] - glead[0], flead[1] - glead[1], flead[2] - glead[2])
        if mono[0] < 0 or mono[1] < 0 or mono[2] < 0:
            return None
        c, r = divmod(rem[flead], gl)
        if r:
            return None
        out[mono] = c
        rem = _ipscale_sub(rem, 1, g, mono, c)
    return out


def _degree_in(f: IPoly, var: int) -> int:
    return max(k[var] for k in f) if f else -1


def _coeffs_in(f: IPoly, var: int) -> Dict[int, IPoly]:
    """Split f as a polynomial in variable `var` with IPoly coefficients."""
    out: Dict[int, IPoly] = {}
    for k, c in f.items():
        e = k[var]
        kk = list(k)
        kk[var] = 0
        out.setdefault(e, {})[tuple(kk)] = c  # type: ignore[index]
    return out


def _assemble_in(coeffs: Dict[int, IPoly], var: int) -> IPoly:
    out: IPoly = {}
    for e, poly in coeffs.items():
        for k, c in poly.items():
            kk = list(k)
            kk[var] += e
            out[tuple(kk)] = c  # type: ignore[index]
    return out


def _is_unit(f: IPoly) -> bool:
    return len(f) == 1 and _ZERO_KEY in f and abs(f[_ZERO_KEY]) == 1


def _ipoly_gcd(f: IPoly, g: IPoly) -> IPoly:
    """gcd of integer polynomials with nonnegative exponents (up to sign)."""
    if not f:
        return _iprimitive(dict(g))
    if not g:
        return _iprimitive(dict(f))
    if len(f) == 1 or len(g) == 1:
        # Monomial case: common monomial part times integer content.
        mf, mg = _min_exponents(f), _min_exponents(g)
        mono = (min(mf[0], mg[0]), min(mf[1], mg[1]), min(mf[2], mg[2]))
        c = _igcd(_int_content(f), _int_content(g))
        return {mono: c}
    # Quick outs: exact divisibility is the common case in our reductions.
    if _divexact(f, g) is not None:
        return _iprimitive(dict(g))
    if _divexact(g, f) is not None:
        return _iprimitive(dict(f))
    h = _heugcd(f, g)
    if h is not None:
        return h
    return _prs_gcd(f, g)


def _eval_var(f: IPoly, var: int, xi: int) -> IPoly:
    out: IPoly = {}
    for k, c in f.items():
        kk = list(k)
        e = kk[var]
        kk[var] = 0
        key = tuple(kk)
        s = out.get(key, 0) + c * xi**e
        if s:
            out[key] = s  # type: ignore[index]
        else:
            out.pop(key, None)  # type: ignore[arg-type]
    return out


def _lift_digits(gamma: IPoly, var: int, xi: int) -> IPoly:
    """Reconstruct a polynomial in `var` from its balanced base-xi value."""
    out: IPoly = {}
    e = 0
    half = xi // 2
    while gamma and e < 4000:
        nxt: IPoly = {}
        for k, c in gamma.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                kk = list(k)
                kk[var] = e
                out[tuple(kk)] = r  # type: ignore[index]
            rest = (c - r) // xi
            if rest:
                nxt[k] = rest
        gamma = nxt
        e += 1
    return out


def _heugcd(f: IPoly, g: IPoly, depth: int = 0) -> Optional[IPoly]:
    """Heuristic evaluation gcd with verification; None when it gives up.

    Returns the full gcd including its integer content (Gauss: the content of
    the gcd is the gcd of the contents), which the caller's digit lift relies
    on for value-exactness.
    """
    if not f:
        return dict(g)
    if not g:
        return dict(f)
    cf, cg = _int_content(f), _int_content(g)
    c = _igcd(cf, cg)
    fp = {k: v // cf for k, v in f.items()} if cf != 1 else f
    gp = {k: v // cg for k, v in g.items()} if cg != 1 else g
    fvars = [v for v in range(3) if _degree_in(fp, v) > 0 or _degree_in(gp, v) > 0]
    if not fvars:
        return {_ZERO_KEY: c}
    var = max(fvars, key=lambda v: max(_degree_in(fp, v), _degree_in(gp, v)))
    norm = min(max(abs(v) for v in fp.values()), max(abs(v) for v in gp.values()))
    xi = 2 * norm + 29
    for _ in range(6):
        fx = _eval_var(fp, var, xi)
        gx = _eval_var(gp, var, xi)
        if fx and gx:
            gamma = _heugcd(fx, gx, depth + 1)
            if gamma is not None:
                h = _iprimitive(_lift_digits(gamma, var, xi))
                if h and _divexact(fp, h) is not None and _divexact(gp, h) is not None:
                    if h[_lex_lead(h)] < 0:
                        h = {k: -v for k, v in h.items()}
                    return {k: c * v for k, v in h.items()} if c != 1 else h
        xi = xi * 73794 // 27011
    return None


def _prs_gcd(f: IPoly, g: IPoly) -> IPoly:
    """Subresultant PRS gcd (fallback path)."""
    shared = [v for v in range(3) if _degree_in(f, v) > 0 and _degree_in(g, v) > 0]
    if not shared:
        return {_ZERO_KEY: _igcd(_int_content(f), _int_content(g))}
    var = min(shared, key=lambda v: min(_degree_in(f, v), _degree_in(g, v)))
    cont_f: IPoly = {}
    for p in _coeffs_in(f, var).values():
        cont_f = _ipoly_gcd(cont_f, p)
        if _is_unit(cont_f):
            break
    cont_g: IPoly = {}
    for p in _coeffs_in(g, var).values():
        cont_g = _ipoly_gcd(cont_g, p)
        if _is_unit(cont_g):
            break
    pp_f = _divexact(f, cont_f)
    pp_g = _divexact(g, cont_g)
    assert pp_f is not None and pp_g is not None
    pp = _subresultant_prs(pp_f, pp_g, var)
    cont = _ipoly_gcd(cont_f, cont_g)
    return _iprimitive(_ipmul(cont, pp))


def _subresultant_prs(A: IPoly, B: IPoly, var: int) -> IPoly:
    """Primitive part of gcd(A, B) in `var` via the subresultant PRS.

    A and B are primitive in `var`; intermediate growth is controlled by the
    Brown-Traub division by g*h^delta at every step, with no gcd calls inside
    the loop.
    """
    if _degree_in(A, var) < _degree_in(B, var):
        A, B = B, A
    one: IPoly = {_ZERO_KEY: 1}
    g_, h_ = dict(one), dict(one)
    while True:
        da, db = _degree_in(A, var), _degree_in(B, var)
        delta = da - db
        R = _prem(A, B, var)
        if not R:
            break
        if _degree_in(R, var) == 0:
            # Nonzero remainder of degree 0: A, B are coprime in var.
            return dict(one)
        divisor = _ipmul(g_, _ipow(h_, delta))
        Rdiv = _divexact(R, divisor)
        assert Rdiv is not None
        A, B = B, Rdiv
        gc = _coeffs_in(A, var)
        g_ = gc[_degree_in(A, var)]
        if delta == 0:
            pass  # h unchanged
        elif delta == 1:
            h_ = dict(g_)
        else:
            h_new = _divexact(_ipow(g_, delta), _ipow(h_, delta - 1))
            assert h_new is not None
            h_ = h_new
    return _primitive_part(B, var)


def _ipow(f: IPoly, n: int) -> IPoly:
    out: IPoly = {_ZERO_KEY: 1}
    for _ in range(n):
        out = _ipmul(out, f)
    return out


def _primitive_part(f: IPoly, var: int) -> IPoly:
    if not f:
        return {}
    cont: IPoly = {}
    for p in _coeffs_in(f, var).values():
        cont = _ipoly_gcd(cont, p)
        if _is_unit(cont):
            return _iprimitive(dict(f))
    out = _divexact(f, cont)
    assert out is not None
    return out


def _prem(f: IPoly, g: IPoly, var: int) -> IPoly:
    """Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g in `var`."""
    dg = _degree_in(g, var)
    df = _degree_in(f, var)
    gc = _coeffs_in(g, var)
    glead = gc[dg]
    rem = dict(f)
    steps = 0
    while rem:
        dr = _degree_in(rem, var)
        if dr < dg:
            break
        steps += 1
        rc = _coeffs_in(rem, var)
        rlead = rc[dr]
        # rem <- glead*rem - rlead*x^(dr-dg)*g
        shift = [0, 0, 0]
        shift[var] = dr - dg
        rem_new = _ipmul(glead, rem)
        sub = _ipmul(_pshift(rlead, tuple(shift)), g)  # type: ignore[arg-type]
        for k, v in sub.items():
            s = rem_new.get(k, 0) - v
            if s:
                rem_new[k] = s
            else:
                rem_new.pop(k, None)
        rem = rem_new
    # The subresultant recurrences assume the full lc(g)^(df-dg+1) scaling.
    missing = df - dg + 1 - steps
    if rem and missing > 0:
        rem = _ipmul(rem, _ipow(glead, missing))
    return rem


def _poly_gcd(f: Poly, g: Poly) -> Poly:
    """gcd of two Laurent polynomials, up to a monomial unit."""
    if not f or not g:
        return {}
    sf = _min_exponents(f)
    sg = _min_exponents(g)
    fi, _ = _to_int_poly(_pshift(f, (-sf[0], -sf[1], -sf[2])))
    gi, _ = _to_int_poly(_pshift(g, (-sg[0], -sg[1], -sg[2])))
    h = _ipoly_gcd(fi, gi)
    return {k: Fraction(c) for k, c in h.items()}


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------


class Scalar:
    """A reduced element of Q(q^(1/2), u, a).

    Invariants maintained by the constructor: the denominator is a nonzero
    polynomial with minimum exponent 0 in each variable, its lex-leading
    coefficient is 1, and gcd(num, den) is a unit.  Zero has an empty
    numerator map.  Instances are immutable.
    """

    __slots__ = ("num", "den")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, num: Poly, den: Optional[Poly] = None, *, _reduced: bool = False):
        num = {k: Fraction(c) for k, c in num.items() if c}
        if den is None:
            den = {_ZERO_KEY: Fraction(1)}
        else:
            den = {k: Fraction(c) for k, c in den.items() if c}
        if not den:
            raise ZeroDivisionError("Scalar with zero denominator")
        if not num:
            self.num = {}
            self.den = {_ZERO_KEY: Fraction(1)}
            return
        if not _reduced:
            g = _poly_gcd(num, den)
            if g and not (len(g) == 1 and _ZERO_KEY in g and g[_ZERO_KEY] == 1):
                sn = _min_exponents(num)
                sd = _min_exponents(den)
                nn = _divexact_frac(_pshift(num, (-sn[0], -sn[1], -sn[2])), g)
                dd = _divexact_frac(_pshift(den, (-sd[0], -sd[1], -sd[2])), g)
                num = _pshift(nn, sn)
                den = _pshift(dd, sd)
        # Shift the denominator to minimum exponent 0 per variable.
        shift = _min_exponents(den)
        if shift != _ZERO_KEY:
            den = _pshift(den, (-shift[0], -shift[1], -shift[2]))
            num = _pshift(num, (-shift[0], -shift[1], -shift[2]))
        # Monic denominator at its lex-leading term.
        lead = den[_lex_lead(den)]
        if lead != 1:
            inv = 1 / lead
            den = _pscale(den, inv)
            num = _pscale(num, inv)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return Scalar({})

    @staticmethod
    def one() -> "Scalar":
        return Scalar({_ZERO_KEY: Fraction(1)})

    @staticmethod
    def from_rational(c) -> "Scalar":
        c = Fraction(c)
        return Scalar({_ZERO_KEY: c} if c else {})

    @staticmethod
    def monomial(c, e_qhalf: int = 0, e_u: int = 0, e_a: int = 0) -> "Scalar":
        c = Fraction(c)
        if not c:
            return Scalar({})
        return Scalar({(e_qhalf, e_u, e_a): c})

    # -- ring/field operations ----------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def __add__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return Scalar(_padd(self.num, other.num), dict(self.den))
        g = _poly_gcd(self.den, other.den)
        if len(g) == 1 and _ZERO_KEY in g and g[_ZERO_KEY] == 1:
            num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
            return Scalar(num, _pmul(self.den, other.den))
        d1 = _divexact_frac(self.den, g)
        d2 = _divexact_frac(other.den, g)
        num = _padd(_pmul(self.num, d2), _pmul(other.num, d1))
        return Scalar(num, _pmul(self.den, d2))

    def __neg__(self) -> "Scalar":
        s = Scalar.__new__(Scalar)
        s.num = _pneg(self.num)
        s.den = dict(self.den)
        return s

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        if not self.num or not other.num:
            return Scalar({})
        # Cross-reduce before multiplying to keep the final gcd trivial.
        g1 = _poly_gcd(self.num, other.den)
        g2 = _poly_gcd(other.num, self.den)
        n1, d2 = _cancel(self.num, other.den, g1)
        n2, d1 = _cancel(other.num, self.den, g2)
        return Scalar(_pmul(n1, n2), _pmul(d1, d2))

    def inv(self) -> "Scalar":
        if not self.num:
            raise ZeroDivisionError("inverting zero Scalar")
        return Scalar(dict(self.den), dict(self.num), _reduced=True)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inv()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inv() ** (-n)
        out = Scalar.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return _pmul(self.num, other.den) == _pmul(other.num, self.den)

    def __repr__(self) -> str:
        return f"Scalar({self.text()})"

    # -- structure queries ---------------------------------------------------

    def is_polynomial(self) -> bool:
        return self.den == {_ZERO_KEY: Fraction(1)}

    def has_integer_q_exponents(self) -> bool:
        """True when every monomial of num and den has an even q^(1/2)-exponent."""
        return all(k[0] % 2 == 0 for k in self.num) and all(
            k[0] % 2 == 0 for k in self.den
        )

    def depends_on(self, var: int) -> bool:
        return any(k[var] for k in self.num) or any(k[var] for k in self.den)

    # -- substitution and evaluation -----------------------------------------

    def substitute_monomial(self, image_q: Key, image_u: Key, image_a: Key) -> "Scalar":
        """Map q^(1/2), u, a to monomials (exponent-linear substitution)."""

        def sub(poly: Poly) -> Poly:
            out: Poly = {}
            for (i, j, k), c in poly.items():
                key = (
                    i * image_q[0] + j * image_u[0] + k * image_a[0],
                    i * image_q[1] + j * image_u[1] + k * image_a[1],
                    i * image_q[2] + j * image_u[2] + k * image_a[2],
                )
                s = out.get(key, 0) + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
            return out

        return Scalar(sub(self.num), sub(self.den))

    def evaluate(self, qhalf, u, a) -> Fraction:
        """Exact value at rational q^(1/2)=qhalf, u, a; raises PoleAtPoint."""
        qhalf, u, a = Fraction(qhalf), Fraction(u), Fraction(a)

        def ev(poly: Poly) -> Fraction:
            total = Fraction(0)
            for (i, j, k), c in poly.items():
                total += c * qhalf**i * u**j * a**k
            return total

        den = ev(self.den)
        if den == 0:
            raise PoleAtPoint(f"denominator vanishes at qhalf={qhalf}, u={u}, a={a}")
        return ev(self.num) / den

    def evaluate_at_q(self, q, u, a) -> Fraction:
        """Exact value at a rational q (needs integer q-exponents throughout)."""
        if not self.has_integer_q_exponents():
            raise ValueError("scalar has genuine half-integer q-exponents")
        q, u, a = Fraction(q), Fraction(u), Fraction(a)

        def ev(poly: Poly) -> Fraction:
            total = Fraction(0)
            for (i, j, k), c in poly.items():
                total += c * q ** (i // 2) * u**j * a**k
            return total

        den = ev(self.den)
        if den == 0:
            raise PoleAtPoint(f"denominator vanishes at q={q}, u={u}, a={a}")
        return ev(self.num) / den

    # -- u-power series --------------------------------------------------------

    def u_series(self, order: int) -> Dict[int, "Scalar"]:
        """Laurent expansion in u to degree <= order; coefficients are u-free."""
        num_by_u = _split_by_u(self.num)
        den_by_u = _split_by_u(self.den)
        v = min(den_by_u)
        lead = Scalar(den_by_u[v], _reduced=True)
        # den = u^v * lead * (1 + t(u)),   t = sum_{j>0} u^j den_{v+j}/lead
        tail = {j - v: Scalar(p) / lead for j, p in den_by_u.items() if j != v}
        out: Dict[int, Scalar] = {}
        if not num_by_u:
            return out
        nmin = min(num_by_u)
        inv_cache: Dict[int, Scalar] = {0: Scalar.one()}

        def inv_coeff(m: int) -> Scalar:
            # coefficient of u^m in 1/(1+t(u))
            if m in inv_cache:
                return inv_cache[m]
            acc = Scalar.zero()
            for j, tj in tail.items():
                if j <= m:
                    acc = acc + tj * inv_coeff(m - j)
            val = -acc
            inv_cache[m] = val
            return val

        for n in range(nmin - v, order + 1):
            acc = Scalar.zero()
            for j, p in num_by_u.items():
                m = n - (j - v)
                if m >= 0:
                    acc = acc + (Scalar(p) / lead) * inv_coeff(m)
            if acc:
                out[n] = acc
        return out

    def truncate_u(self, order: int) -> "Scalar":
        """Drop numerator monomials of u-degree > order (u-free denominator only)."""
        if any(k[1] for k in self.den):
            raise ValueError("truncate_u needs a u-free denominator")
        num = {k: c for k, c in self.num.items() if k[1] <= order}
        return Scalar(num, dict(self.den))

    # -- rendering -------------------------------------------------------------

    def text(self) -> str:
        n = _poly_text(self.num)
        if self.is_polynomial():
            return n
        return f"({n})/({_poly_text(self.den)})"

    def to_json(self) -> dict:
        return {"num": _poly_json(self.num), "den": _poly_json(self.den)}

    @staticmethod
    def from_json(data: dict) -> "Scalar":
        return Scalar(_poly_unjson(data["num"]), _poly_unjson(data["den"]))


def _cancel(f: Poly, g: Poly, gcd: Poly) -> Tuple[Poly, Poly]:
    if not gcd or (len(gcd) == 1 and _ZERO_KEY in gcd and gcd[_ZERO_KEY] == 1):
        return f, g
    sf, sg = _min_exponents(f), _min_exponents(g)
    ff = _pshift(_divexact_frac(_pshift(f, (-sf[0], -sf[1], -sf[2])), gcd), sf)
    gg = _pshift(_divexact_frac(_pshift(g, (-sg[0], -sg[1], -sg[2])), gcd), sg)
    return ff, gg


def _divexact_frac(f: Poly, g: Poly) -> Poly:
    """Exact division for Fraction-coefficient polynomials (g must divide f).

    Division is taken in the Laurent sense: the quotient may pick up a
    monomial shift, but the loop must terminate with zero remainder.
    """
    if not f:
        return {}
    out: Poly = {}
    rem = dict(f)
    glead = _lex_lead(g)
    gl = g[glead]
    budget = 4 * len(f) * max(len(g), 1) + 64
    while rem:
        budget -= 1
        if budget < 0:
            raise ArithmeticError("non-exact polynomial division")
        flead = _lex_lead(rem)
        mono = (flead[0] - glead[0], flead[1] - glead[1], flead[2] - glead[2])
        c = rem[flead] / gl
        out[mono] = c
        for k, v in g.items():
            key = (k[0] + mono[0], k[1] + mono[1], k[2] + mono[2])
            s = rem.get(key, 0) - c * v
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return out


def _split_by_u(f: Poly) -> Dict[int, Poly]:
    out: Dict[int, Poly] = {}
    for (i, j, k), c in f.items():
        out.setdefault(j, {})[(i, 0, k)] = c
    return out


def _mono_text(k: Key, c: Fraction) -> str:
    parts = []
    if c == -1 and k != _ZERO_KEY:
        parts.append("-")
    elif c != 1 or k == _ZERO_KEY:
        parts.append(str(c))
    for name, e in (("q", k[0]), ("u", k[1]), ("a", k[2])):
        if e == 0:
            continue
        if name == "q":
            if e % 2 == 0:
                parts.append(f"q^{e // 2}" if e != 2 else "q")
            else:
                parts.append(f"q^({e}/2)")
        else:
            parts.append(f"{name}^{e}" if e != 1 else name)
    joined = "*".join(p for p in parts if p not in ("-",))
    if parts and parts[0] == "-":
        return "-" + joined
    return joined


def _poly_text(f: Poly) -> str:
    if not f:
        return "0"
    terms = [_mono_text(k, f[k]) for k in sorted(f, reverse=True)]
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def _poly_json(f: Poly) -> List[list]:
    return [[k[0], k[1], k[2], str(f[k])] for k in sorted(f)]


def _poly_unjson(rows: List[list]) -> Poly:
    return {(int(r[0]), int(r[1]), int(r[2])): Fraction(r[3]) for r in rows}


# ---------------------------------------------------------------------------
# Convenience constructors
# ---------------------------------------------------------------------------

ZERO = Scalar.zero()
ONE = Scalar.one()


def q_power(e: int) -> Scalar:
    """q^e."""
    return Scalar.monomial(1, 2 * e)


def q_half_power(e: int) -> Scalar:
    """q^(e/2)."""
    return Scalar.monomial(1, e)


def u_power(e: int) -> Scalar:
    return Scalar.monomial(1, 0, e)


def a_power(e: int) -> Scalar:
    return Scalar.monomial(1, 0, 0, e)


def rational(c) -> Scalar:
    return Scalar.from_rational(c)


def substitute(s: Scalar, rule: str) -> Scalar:
    """Invert one variable: rule is one of 'q', 'u', 'a' (meaning v -> v^-1)."""
    images = {
        "q": ((-1, 0, 0), (0, 1, 0), (0, 0, 1)),
        "u": ((1, 0, 0), (0, -1, 0), (0, 0, 1)),
        "a": ((1, 0, 0), (0, 1, 0), (0, 0, -1)),
    }
    if rule not in images:
        raise ValueError(f"unknown substitution rule {rule!r}")
    return s.substitute_monomial(*images[rule])


# ---------------------------------------------------------------------------
# q-combinatorics
# ---------------------------------------------------------------------------


def q_number(m: int) -> Scalar:
    """[m]_q = (q^m - q^-m)/(q - q^-1), a Laurent polynomial; [-m] = -[m]."""
    if m == 0:
        return Scalar.zero()
    sign = 1 if m > 0 else -1
    m = abs(m)
    # [m]_q = q^(m-1) + q^(m-3) + ... + q^(1-m)
    poly = {(2 * (m - 1 - 2 * i), 0, 0): Fraction(sign) for i in range(m)}
    return Scalar(poly, _reduced=True)


def q_factorial(m: int) -> Scalar:
    if m < 0:
        raise ValueError("q_factorial needs m >= 0")
    out = Scalar.one()
    for r in range(2, m + 1):
        out = out * q_number(r)
    return out


def q_binomial(m: int, p: int) -> Scalar:
    """Gaussian binomial [m p]_q; zero when m < p, rejects p < 0."""
    if p < 0:
        raise ValueError("q_binomial needs p >= 0")
    if m < p:
        return Scalar.zero()
    out = q_factorial(m) / (q_factorial(p) * q_factorial(m - p))
    assert out.is_polynomial()
    return out


def q_number_spectral(x: int) -> Scalar:
    """[x]_{q,u} = (q^x u - q^-x)/(q - q^-1)."""
    num = {(2 * x, 1, 0): Fraction(1), (-2 * x, 0, 0): Fraction(-1)}
    den = {(2, 0, 0): Fraction(1), (-2, 0, 0): Fraction(-1)}
    return Scalar(num, den)


def q_exponential_truncated(sign: int, order: int) -> List[Scalar]:
    """Coefficients c_r = q^(sign*r(1-r)/2) / [r]_q! for r = 0..order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = []
    for r in range(order + 1):
        e = sign * r * (1 - r)  # always even, so e/2 is an integer q-exponent
        out.append(q_half_power(e) / q_factorial(r))
    return out


def scalar_json_dumps(s: Scalar) -> str:
    return json.dumps(s.to_json(), separators=(",", ":"))


def iter_monomials(s: Scalar) -> Iterator[Tuple[Key, Fraction, bool]]:
    """Yield (key, coefficient, is_numerator) over both parts, sorted."""
    for k in sorted(s.num):
        yield k, s.num[k], True
    for k in sorted(s.den):
        yield k, s.den[k], False
