"""Exact rational-function arithmetic over QQ(x, y).

Elements are fractions of polynomials in two variables with Fraction
coefficients.  The interesting structure is the rank-two monomial
valuation

    v(x^a y^b) = (b, a)   ordered lexicographically,

extended to polynomials by taking the minimum over monomials (the
minimum is attained at a unique monomial, so v is multiplicative) and
to fractions by v(f/g) = v(f) - v(g).  The subring {v >= 0} is the
rank-two valuation ring the valuation backend is built on; the first
component of v is the y-adic valuation.

Polynomials are dicts {(a, b): Fraction} keyed by (x-exponent,
y-exponent).  Fractions are reduced on construction: integer content,
common monomial factors, and a primitive-PRS gcd in (QQ[x])[y], so
equality and hashing are structural.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

Mono = tuple[int, int]
PolyDict = dict[Mono, Fraction]


def _trim(p: PolyDict) -> PolyDict:
    return {m: c for m, c in p.items() if c != 0}


def poly_add(p: PolyDict, q: PolyDict) -> PolyDict:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, Fraction(0)) + c
    return _trim(out)


def poly_neg(p: PolyDict) -> PolyDict:
    return {m: -c for m, c in p.items()}


def poly_mul(p: PolyDict, q: PolyDict) -> PolyDict:
    out: PolyDict = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            m = (a1 + a2, b1 + b2)
            out[m] = out.get(m, Fraction(0)) + c1 * c2
    return _trim(out)


def poly_val(p: PolyDict) -> Mono | None:
    """Lex-minimal (b, a) over monomials x^a y^b; None for the zero polynomial."""
    if not p:
        return None
    return min((b, a) for (a, b) in p)


def _y_parts(p: PolyDict) -> dict[int, dict[int, Fraction]]:
    """Split into y-degree slices, each a univariate x-polynomial."""
    out: dict[int, dict[int, Fraction]] = {}
    for (a, b), c in p.items():
        out.setdefault(b, {})[a] = c
    return out


# -- univariate helpers (dict degree -> Fraction) --------------------------

def _u_trim(u):
    return {d: c for d, c in u.items() if c != 0}


def _u_mul(u, w):
    out: dict[int, Fraction] = {}
    for d1, c1 in u.items():
        for d2, c2 in w.items():
            out[d1 + d2] = out.get(d1 + d2, Fraction(0)) + c1 * c2
    return _u_trim(out)


def _u_sub(u, w):
    out = dict(u)
    for d, c in w.items():
        out[d] = out.get(d, Fraction(0)) - c
    return _u_trim(out)


def _u_divmod(u, w):
    """Polynomial division in QQ[x]."""
    assert w, "division by zero polynomial"
    dw = max(w)
    lw = w[dw]
    q: dict[int, Fraction] = {}
    r = dict(u)
    while r and max(r) >= dw:
        dr = max(r)
        coef = r[dr] / lw
        q[dr - dw] = coef
        r = _u_sub(r, _u_mul({dr - dw: coef}, w))
    return _u_trim(q), r


def _u_gcd(u, w):
    u, w = _u_trim(dict(u)), _u_trim(dict(w))
    while w:
        u, w = w, _u_divmod(u, w)[1]
    if u:
        lc = u[max(u)]
        u = {d: c / lc for d, c in u.items()}
    return u


# -- gcd in QQ[x][y] --------------------------------------------------------

def _content_x(p: PolyDict):
    """gcd in QQ[x] of the y-slice coefficients."""
    g: dict[int, Fraction] = {}
    for _, slice_ in _y_parts(p).items():
        g = _u_gcd(g, slice_)
        if g == {0: Fraction(1)}:
            break
    return g


def _from_y_slices(slices) -> PolyDict:
    out: PolyDict = {}
    for b, u in slices.items():
        for a, c in u.items():
            if c != 0:
                out[(a, b)] = c
    return out


def _poly_divexact(p: PolyDict, q: PolyDict) -> PolyDict:
    """Exact division p/q in QQ[x,y] (q must divide p)."""
    ps, qs = _y_parts(p), _y_parts(q)
    dq = max(qs) if qs else 0
    lead_q = qs[dq]
    out_slices: dict[int, dict[int, Fraction]] = {}
    rem = dict(ps)
    while rem:
        dr = max(rem)
        quot_slice, r = _u_divmod(rem[dr], lead_q)
        assert not r, "inexact division"
        out_slices[dr - dq] = quot_slice
        # rem -= quot_slice * y^(dr-dq) * q
        prod = poly_mul(_from_y_slices({dr - dq: quot_slice}), q)
        new = poly_add(_from_y_slices(rem), poly_neg(prod))
        rem = _y_parts(new)
    return _from_y_slices(out_slices)


def poly_gcd(p: PolyDict, q: PolyDict) -> PolyDict:
    """gcd in QQ[x,y] via primitive remainder sequence in (QQ[x])[y]."""
    if not p:
        return dict(q)
    if not q:
        return dict(p)
    cp, cq = _content_x(p), _content_x(q)
    cont = _u_gcd(cp, cq)
    pp = _y_parts(_poly_divexact(p, _from_y_slices({0: cp})))
    qq = _y_parts(_poly_divexact(q, _from_y_slices({0: cq})))
    while qq:
        dp, dq = max(pp), max(qq)
        if dp < dq:
            pp, qq = qq, pp
            continue
        # pseudo-remainder of pp by qq in y
        lead = qq[max(qq)]
        f = _from_y_slices({0: lead})
        r = poly_add(poly_mul(_from_y_slices(pp), f),
                     poly_neg(poly_mul(_from_y_slices({dp - dq: pp[dp]}), _from_y_slices(qq))))
        rs = _y_parts(r)
        if rs and max(rs) >= dp:  # no progress guard; cannot happen
            raise ArithmeticError("pseudo-division failed")
        pp, qq = qq, rs
        if qq:
            c = _content_x(_from_y_slices(qq))
            qq = _y_parts(_poly_divexact(_from_y_slices(qq), _from_y_slices({0: c})))
    g = _from_y_slices(pp)
    return poly_mul(g, _from_y_slices({0: cont}))


class RatXY:
    """An element of QQ(x, y), kept fully reduced with monic denominator."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: PolyDict, den: PolyDict, reduce: bool = True):
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator in QQ(x,y)")
        if not num:
            den = {(0, 0): Fraction(1)}
        elif reduce:
            # monomial + content fast path
            va, vb = min(a for (a, b) in num), min(b for (_, b) in num)
            wa, wb = min(a for (a, b) in den), min(b for (_, b) in den)
            sa, sb = min(va, wa), min(vb, wb)
            if sa or sb:
                num = {(a - sa, b - sb): c for (a, b), c in num.items()}
                den = {(a - sa, b - sb): c for (a, b), c in den.items()}
            if len(num) > 1 or len(den) > 1:
                g = poly_gcd(num, den)
                if poly_val(g) is not None and g != {(0, 0): Fraction(1)}:
                    num = _poly_divexact(num, g)
                    den = _poly_divexact(den, g)
        # normalize: denominator gets leading (lex-max monomial) coefficient 1
        lead = max(den, key=lambda m: (m[1], m[0]))
        lc = den[lead]
        if lc != 1:
            num = {m: c / lc for m, c in num.items()}
            den = {m: c / lc for m, c in den.items()}
        self.num = num
        self.den = den
        self._key = (tuple(sorted(num.items())), tuple(sorted(den.items())))

    # -- constructors -------------------------------------------------------
    @staticmethod
    def const(q) -> "RatXY":
        q = Fraction(q)
        return RatXY({(0, 0): q} if q else {}, {(0, 0): Fraction(1)}, reduce=False)

    @staticmethod
    def monomial(a: int, b: int, coef=1) -> "RatXY":
        c = Fraction(coef)
        return RatXY({(a, b): c} if c else {}, {(0, 0): Fraction(1)}, reduce=False)

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, RatXY):
            return other
        if isinstance(other, (int, Fraction)):
            return RatXY.const(other)
        return NotImplemented

    def __add__(self, other) -> "RatXY":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatXY(poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
                     poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self) -> "RatXY":
        return RatXY(poly_neg(self.num), self.den, reduce=False)

    def __sub__(self, other) -> "RatXY":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatXY":
        return (-self) + other

    def __mul__(self, other) -> "RatXY":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatXY(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatXY":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero in QQ(x,y)")
        return RatXY(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __pow__(self, n: int) -> "RatXY":
        out = RatXY.const(1)
        base = self if n >= 0 else self.inv()
        for _ in range(abs(n)):
            out = out * base
        return out

    def inv(self) -> "RatXY":
        return RatXY.const(1) / self

    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatXY.const(other)
        return isinstance(other, RatXY) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    # -- valuations ----------------------------------------------------------
    def val(self) -> Mono | None:
        """Rank-two valuation (y-order, x-order), lex; None for 0."""
        if self.is_zero():
            return None
        vb, va = poly_val(self.num)
        wb, wa = poly_val(self.den)
        return (vb - wb, va - wa)

    def vy(self) -> int | None:
        v = self.val()
        return None if v is None else v[0]

    def y_eval(self) -> "RatXY":
        """Image under y -> 0, defined when vy >= 0 (cancel y-powers first)."""
        if self.is_zero():
            return self
        vb = min(b for (_, b) in self.num)
        wb = min(b for (_, b) in self.den)
        if vb - wb < 0:
            raise ZeroDivisionError("y-pole: y_eval undefined")
        shift = min(vb, wb)
        num = {(a, b - shift): c for (a, b), c in self.num.items()}
        den = {(a, b - shift): c for (a, b), c in self.den.items()}
        num0 = {m: c for m, c in num.items() if m[1] == 0}
        den0 = {m: c for m, c in den.items() if m[1] == 0}
        return RatXY(num0, den0)

    def is_y_free(self) -> bool:
        if self.is_zero():
            return True
        v = self.vy()
        if v is None or v < 0:
            return False
        return self == self.y_eval()

    def vx_of_y_free(self) -> int | None:
        """x-adic valuation, for y-free elements only."""
        f = self.y_eval()
        if f.is_zero():
            return None
        return f.val()[1]

    # -- display ---------------------------------------------------------------
    def _poly_str(self, p: PolyDict) -> str:
        if not p:
            return "0"
        parts = []
        for (a, b) in sorted(p, key=lambda m: (m[1], m[0])):
            c = p[(a, b)]
            body = "".join([f"x^{a}" if a > 1 else "x" if a == 1 else "",
                            f"y^{b}" if b > 1 else "y" if b == 1 else ""])
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        n = self._poly_str(self.num)
        if self.den == {(0, 0): Fraction(1)}:
            return n
        return f"({n})/({self._poly_str(self.den)})"


@lru_cache(maxsize=None)
def _cached_consts():
    return RatXY.const(0), RatXY.const(1), RatXY.monomial(1, 0), RatXY.monomial(0, 1)


def zero() -> RatXY:
    return _cached_consts()[0]


def one() -> RatXY:
    return _cached_consts()[1]


def x() -> RatXY:
    return _cached_consts()[2]


def y() -> RatXY:
    return _cached_consts()[3]


def parse_ratxy(s: str) -> RatXY:
    """Parse expressions like '3*x^2*y/(1 + x)' (exact, eval-free)."""
    import ast

    def conv(node):
        if isinstance(node, ast.Expression):
            return conv(node.body)
        if isinstance(node, ast.BinOp):
            left, right = conv(node.left), conv(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
            if isinstance(node.op, ast.Pow):
                if not isinstance(node.right, ast.Constant):
                    raise ValueError("exponent must be a literal")
                out = one()
                base = left
                for _ in range(int(node.right.value)):
                    out = out * base
                return out
            raise ValueError(f"unsupported operator {node.op}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -conv(node.operand)
        if isinstance(node, ast.Name):
            if node.id == "x":
                return x()
            if node.id == "y":
                return y()
            raise ValueError(f"unknown symbol {node.id}")
        if isinstance(node, ast.Constant):
            return RatXY.const(Fraction(node.value))
        raise ValueError(f"cannot parse {ast.dump(node)}")

    return conv(ast.parse(s.replace("^", "**"), mode="eval"))
