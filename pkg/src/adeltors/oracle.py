"""Residue-truncation oracles.

The mixed-world homology engine leans on a finite table of fracture
pullbacks, cross-atom quotients and completion identifications.  Every
table entry is validated here along an independent computational path:

  * integer backend: reduce a complex mod p^N.  Worlds with p invertible
    die, all others become Z/p^N, and H_n of the truncation must match
    the claimed classes through the universal-coefficient shape
    H_n(C/p^N) = H_n(C)/p^N (+) (p^N-torsion of H_{n-1}(C)), for
    doubling N until two successive checks agree.

  * valuation backend: realize worlds inside k((x))((y)) on a finite
    Laurent window (y-slices with O- or R-type x-ranges), turn every
    block into an exact QQ-matrix by expanding rational functions, and
    compare homology dimensions against per-piece model complexes run
    through the same truncation, for doubling windows.

Nothing here shares code with the classifier: matrices go through plain
fraction Gauss elimination and integer Smith forms only.
"""

from __future__ import annotations

from fractions import Fraction

from .classes import GradedClasses, PRUEFER_X, PRUEFER_Y, QUOT_KV
from .complexes import ChainComplex
from .linalg import snf
from .ratfunc import RatXY
from .worlds import World, Z_INT, world_from_name


class OracleMismatch(AssertionError):
    pass


# -- integer side ---------------------------------------------------------------------


def _mat_rank_q(M) -> int:
    """Rank over QQ by Gauss elimination."""
    A = [[Fraction(e) for e in row] for row in M]
    rank = 0
    rows = len(A)
    cols = len(A[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        A[r] = [e / A[r][c] for e in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [A[i][k] - f * A[r][k] for k in range(cols)]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def _q_inverse(M):
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] +
         [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        A[c] = [e / A[c][c] for e in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [A[i][k] - f * A[c][k] for k in range(2 * n)]
    return [row[n:] for row in A]


def zint_truncate(C: ChainComplex, p: int, N: int):
    """Integer matrices of C mod p^N: (ranks per degree, diff per degree)."""
    M = p ** N
    ranks: dict[int, int] = {}
    index: dict[tuple[int, int], int] = {}
    for n in C.degrees():
        at = 0
        for i, (w, r) in enumerate(C.strand_list(n)):
            alive = w.kind == "z" and p not in w.inv or (w.kind == "fp" and w.char == p)
            if alive:
                index[(n, i)] = at
                at += r
        ranks[n] = at
    mats: dict[int, list] = {}
    for n in sorted(ranks):
        if ranks.get(n, 0) and ranks.get(n - 1, 0):
            A = [[0] * ranks[n] for _ in range(ranks[n - 1])]
            mats[n] = A
    for (n, i, j), Mb in C.blocks.items():
        if (n, i) not in index or (n - 1, j) not in index:
            continue
        off_i, off_j = index[(n, i)], index[(n - 1, j)]
        for a in range(len(Mb)):
            for b in range(len(Mb[0])):
                e = Mb[a][b]
                num, den = e.numerator, e.denominator
                inv = pow(den % M, -1, M)
                mats[n][off_j + a][off_i + b] = (num * inv) % M
    return ranks, mats


def zmod_homology_exponents(ranks, mats, p: int, N: int) -> dict[int, list[int]]:
    """H_n of a free Z/p^N complex as sorted p-exponent lists."""
    M = p ** N
    out: dict[int, list[int]] = {}
    world = Z_INT()
    for n, a in ranks.items():
        if a == 0:
            continue
        D_n = mats.get(n)
        D_up = mats.get(n + 1)
        if D_n is not None:
            A = [[Fraction(e) for e in row] for row in D_n]
            U, D, Vt = snf(A, world)
            k = min(len(D), len(D[0]) if D else 0)
            mults = []
            for i in range(a):
                d = int(D[i][i]) if i < k else 0
                g = _gcd(abs(d), M)
                mults.append(M // g)
            Vt_inv = _q_inverse(Vt)
            K = [[Vt_inv[i][j] * mults[j] for j in range(a)] for i in range(a)]
        else:
            mults = [1] * a
            K = [[Fraction(1 if i == j else 0) for j in range(a)] for i in range(a)]
            Vt = [row[:] for row in K]
        rel_cols: list[list[Fraction]] = []
        if D_up is not None:
            for c in range(len(D_up[0])):
                rel_cols.append([Fraction(D_up[r][c]) for r in range(a)])
        for j in range(a):
            rel_cols.append([Fraction(M if i == j else 0) for i in range(a)])
        # express relations in the kernel basis: K^{-1} rel = diag(1/m) Vt rel
        R = []
        for i in range(a):
            row = []
            for col in rel_cols:
                v = sum(Vt[i][t] * col[t] for t in range(a)) / mults[i]
                if v.denominator != 1:
                    raise OracleMismatch("relation escapes the kernel lattice")
                row.append(v)
            R.append(row)
        _, DR, _ = snf(R, world)
        exps = []
        k = min(len(DR), len(DR[0]) if DR else 0)
        for i in range(a):
            d = int(DR[i][i]) if i < k else 0
            d = _gcd(abs(d), M) if d else M
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                exps.append(e)
        out[n] = sorted(exps)
    return {n: v for n, v in out.items() if v}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def predicted_exponents(classes: GradedClasses, p: int, N: int) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    degs = set(classes.data)
    for n in set(list(degs) + [m + 1 for m in degs]):
        mod, _ = classes[n].zint_trunc(p, N)
        _, tor = classes[n - 1].zint_trunc(p, N)
        exps = sorted(mod + tor)
        if exps:
            out[n] = exps
    return out


def zint_oracle_check(C: ChainComplex, classes: GradedClasses, p: int,
                      Ns=(4, 8, 16)) -> bool:
    """Claimed classes match the mod-p^N homology for each N; doubling N
    keeps agreeing (stabilization), else OracleMismatch."""
    for N in Ns:
        ranks, mats = zint_truncate(C, p, N)
        got = zmod_homology_exponents(ranks, mats, p, N)
        want = predicted_exponents(classes, p, N)
        if got != want:
            raise OracleMismatch(
                f"mod {p}^{N}: truncated homology {got} != predicted {want}")
    return True


# -- valuation side -------------------------------------------------------------------

# slice structure: (y-range kind, x-type at b<0, b=0, b>0)
_VAL_SLICES = {
    "V": ("nonneg", None, "O", "R"),
    "Vp": ("nonneg", None, "R", "R"),
    "VhatPFull": ("nonneg", None, "O", "R"),
    "VhatP": ("nonneg", None, "R", "R"),
    "K": ("all", "R", "R", "R"),
    "VhatPInv": ("all", "R", "R", "R"),
    "VhatM": ("zero", None, "O", None),
    "VhatMInv": ("zero", None, "R", None),
}


def _world_window(w: World, Ny: int, Nx: int):
    """Ordered basis [(b, a), ...] of the windowed model of w."""
    kind, neg, zer, pos = _VAL_SLICES[w.sym]
    brange = {"nonneg": range(0, Ny), "all": range(-Ny, Ny), "zero": range(0, 1)}[kind]
    basis = []
    for b in brange:
        t = neg if b < 0 else zer if b == 0 else pos
        if t is None:
            continue
        arange = range(0, Nx) if t == "O" else range(-Nx, Nx)
        basis.extend((b, a) for a in arange)
    return basis


class _XWin:
    """Truncated x-Laurent series: coefficients on [lo, hi)."""

    __slots__ = ("lo", "hi", "c")

    def __init__(self, lo, hi, c=None):
        self.lo, self.hi = lo, hi
        self.c = {k: v for k, v in (c or {}).items() if lo <= k < hi and v}

    def mul(self, other: "_XWin") -> "_XWin":
        out = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                k = k1 + k2
                if self.lo <= k < self.hi:
                    out[k] = out.get(k, Fraction(0)) + v1 * v2
        return _XWin(self.lo, self.hi, out)

    def sub(self, other: "_XWin") -> "_XWin":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Fraction(0)) - v
        return _XWin(self.lo, self.hi, out)

    def add(self, other: "_XWin") -> "_XWin":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return _XWin(self.lo, self.hi, out)


def _xwin_of_poly(p: dict, lo, hi) -> _XWin:
    return _XWin(lo, hi, {a: c for a, c in p.items()})


def _xwin_inverse_poly(p: dict, lo, hi) -> _XWin:
    """Window expansion of 1/p for a nonzero polynomial p of x."""
    v = min(p)
    shifted = {a - v: c for a, c in p.items()}
    lead = shifted[0]
    coeffs: dict[int, Fraction] = {}
    state = {0: Fraction(1)}
    for k in range(hi - lo + abs(v) + 1):
        c = state.get(0, Fraction(0)) / lead
        coeffs[k - v] = c
        for dk, dv in shifted.items():
            state[dk] = state.get(dk, Fraction(0)) - c * dv
        state = {k2 - 1: vv for k2, vv in state.items() if k2 >= 1 and vv}
    return _XWin(lo, hi, coeffs)


def laurent_window(f: RatXY, bmin: int, bmax: int, amin: int, amax: int):
    """Exact Laurent coefficients of f in k((x))((y)) on the window."""
    if f.is_zero():
        return {}
    from .ratfunc import _y_parts
    num_sl = _y_parts(f.num)
    den_sl = _y_parts(f.den)
    vy_n = min(num_sl)
    vy_d = min(den_sl)
    shift = vy_n - vy_d
    terms = max(bmax - min(bmin, shift) + 2, 2)
    pad = 8 + sum(abs(a) for a in
                  [min((a for (a, b) in f.num), default=0),
                   max((a for (a, b) in f.num), default=0),
                   min((a for (a, b) in f.den), default=0),
                   max((a for (a, b) in f.den), default=0)])
    lo, hi = amin - pad, amax + pad
    d0 = den_sl[vy_d]
    inv0 = _xwin_inverse_poly(d0, lo, hi)
    # u_b = (D_{vy_d + b} / d0) for b >= 1; series inverse g of 1 + sum u_b y^b
    u = {b: _xwin_of_poly(den_sl.get(vy_d + b, {}), lo, hi).mul(inv0)
         for b in range(1, terms)}
    g: list[_XWin] = [_XWin(lo, hi, {0: Fraction(1)})]
    for k in range(1, terms):
        acc = _XWin(lo, hi)
        for j in range(1, k + 1):
            if j in u:
                acc = acc.sub(u[j].mul(g[k - j]))
        g.append(acc)
    out: dict[tuple[int, int], Fraction] = {}
    for b in range(bmin, bmax + 1):
        k = b - shift
        if k < 0 or k >= terms:
            continue
        acc = _XWin(lo, hi)
        for j in range(0, k + 1):
            nslice = num_sl.get(vy_n + j, None)
            if nslice:
                acc = acc.add(_xwin_of_poly(nslice, lo, hi).mul(inv0).mul(g[k - j]))
        for a, c in acc.c.items():
            if amin <= a < amax and c:
                out[(b, a)] = c
    return out


def _x_track_basis(w: World, N: int):
    """The x-adic residue W/x^N W: only the O-type slice survives (x is
    invertible on R-type slices and the y-tail lies in every x-power)."""
    _, neg, zer, pos = _VAL_SLICES[w.sym]
    return list(range(N)) if zer == "O" else []


def x_track_dims(C: ChainComplex, N: int) -> dict[int, int]:
    """QQ-dimensions of H_*(C (x) V/x^N)."""
    bases: dict[int, list] = {}
    for n in C.degrees():
        basis = []
        for i, (w, r) in enumerate(C.strand_list(n)):
            for k in range(r):
                basis.extend((i, k, a) for a in _x_track_basis(w, N))
        bases[n] = basis
    mats: dict[int, list] = {}
    for n in C.degrees():
        if not bases.get(n) or not bases.get(n - 1):
            continue
        tgt_index = {key: pos for pos, key in enumerate(bases[n - 1])}
        A = [[Fraction(0)] * len(bases[n]) for _ in range(len(bases[n - 1]))]
        for (m, i, j), Mb in C.blocks.items():
            if m != n:
                continue
            for col, (si, sk, a) in enumerate(bases[n]):
                if si != i:
                    continue
                for row_k in range(len(Mb)):
                    e = Mb[row_k][sk]
                    if e == 0 if isinstance(e, Fraction) else e.is_zero():
                        continue
                    prod = e * RatXY.monomial(a, 0)
                    for (bb, aa), c in laurent_window(prod, 0, 0, 0, N).items():
                        key = (j, row_k, aa)
                        if key in tgt_index:
                            A[tgt_index[key]][col] += c
        mats[n] = A
    return _dims_from(bases, mats, _mat_rank_q)


def _y_loc_basis(w: World, N: int):
    """(W/y^N W)[1/x] as a k(x)-space: the surviving y-slices."""
    kind, neg, zer, pos = _VAL_SLICES[w.sym]
    if kind == "zero":
        raise OracleMismatch("y-residue track needs y-adic-family strands only")
    if kind == "all":
        return []          # y already invertible
    return list(range(N))  # slices 0..N-1, each a copy of k(x) after inverting x


def y_track_dims(C: ChainComplex, N: int) -> dict[int, int]:
    """k(x)-dimensions of H_*((C (x) V/y^N)[1/x]), exact Gauss over QQ(x)."""
    bases: dict[int, list] = {}
    for n in C.degrees():
        basis = []
        for i, (w, r) in enumerate(C.strand_list(n)):
            for k in range(r):
                basis.extend((i, k, b) for b in _y_loc_basis(w, N))
        bases[n] = basis
    zero, one = RatXY.const(0), RatXY.const(1)
    mats: dict[int, list] = {}
    from .ratfunc import _y_parts
    for n in C.degrees():
        if not bases.get(n) or not bases.get(n - 1):
            continue
        tgt_index = {key: pos for pos, key in enumerate(bases[n - 1])}
        A = [[zero] * len(bases[n]) for _ in range(len(bases[n - 1]))]
        for (m, i, j), Mb in C.blocks.items():
            if m != n:
                continue
            for col, (si, sk, b) in enumerate(bases[n]):
                if si != i:
                    continue
                for row_k in range(len(Mb)):
                    e = Mb[row_k][sk]
                    if e.is_zero():
                        continue
                    # y-slice expansion of e: k(x)-coefficients per power of y
                    num_sl = _y_parts(e.num)
                    den_sl = _y_parts(e.den)
                    vd = min(den_sl)
                    d0 = RatXY(_from_slices({0: den_sl[vd]}), {(0, 0): Fraction(1)})
                    # e = y^{-vd} (sum_k num_{k} y^k) / (d0 + y d1 + ...)
                    # expand by explicit series division up to N terms
                    coeffs = _y_series(e, N + 1)
                    for db, cf in coeffs.items():
                        bb = b + db
                        key = (j, row_k, bb)
                        if key in tgt_index and not cf.is_zero():
                            A[tgt_index[key]][col] = A[tgt_index[key]][col] + cf
        mats[n] = A
    return _dims_from(bases, mats, _mat_rank_ratx)


def _from_slices(slices):
    out = {}
    for b, u in slices.items():
        for a, c in u.items():
            out[(a, b)] = c
    return out


def _y_series(e: RatXY, terms: int) -> dict[int, RatXY]:
    """y-adic expansion of e with k(x)-rational coefficients."""
    from .ratfunc import _y_parts
    num_sl = _y_parts(e.num)
    den_sl = _y_parts(e.den)
    vn, vd = min(num_sl), min(den_sl)
    dd = {k - vd: RatXY(_from_slices({0: v}), {(0, 0): Fraction(1)})
          for k, v in den_sl.items()}
    nn = {k - vn: RatXY(_from_slices({0: v}), {(0, 0): Fraction(1)})
          for k, v in num_sl.items()}
    q: dict[int, RatXY] = {}
    for k in range(terms):
        acc = nn.get(k, RatXY.const(0))
        for j in range(k):
            if (k - j) in dd and j in q:
                acc = acc - q[j] * dd[k - j]
        q[k] = acc / dd[0]
    return {k + vn - vd: v for k, v in q.items() if not v.is_zero()}


def _mat_rank_ratx(M) -> int:
    A = [row[:] for row in M]
    rank, r = 0, 0
    rows = len(A)
    cols = len(A[0]) if rows else 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inv()
        A[r] = [e * inv for e in A[r]]
        for i in range(rows):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [A[i][k] - f * A[r][k] for k in range(cols)]
        r += 1
        rank += 1
        if r == rows:
            break
    return rank


def _dims_from(bases, mats, rank_fn) -> dict[int, int]:
    out = {}
    for n, basis in bases.items():
        dim = len(basis)
        if dim == 0:
            continue
        rk_out = rank_fn(mats[n]) if n in mats else 0
        rk_in = rank_fn(mats[n + 1]) if (n + 1) in mats else 0
        h = dim - rk_out - rk_in
        if h:
            out[n] = h
    return out


def _piece_dims(piece, N: int, track: str) -> tuple[int, int]:
    """(mod, tor) dimensions of one class piece under a residue track."""
    if piece[0] == "free":
        w = world_from_name(piece[1])
        if track == "x":
            return (N, 0) if _VAL_SLICES[w.sym][2] == "O" else (0, 0)
        kind = _VAL_SLICES[w.sym][0]
        if kind == "zero":
            raise OracleMismatch("y-residue track cannot see x-complete worlds")
        return (N, 0) if kind == "nonneg" else (0, 0)
    if piece[:2] == ("cyc", "V"):
        b, a = piece[2]
        if track == "x":
            return (min(a, N), min(a, N)) if b == 0 else (N, N)
        return (min(b, N), min(b, N))
    if piece[:2] == ("cyc", "Vp"):
        b = piece[2]
        return (0, 0) if track == "x" else (min(b, N), min(b, N))
    tag = piece[1]
    if track == "x":
        return (0, N) if tag in (PRUEFER_X, QUOT_KV) else (0, 0)
    return (0, N) if tag in (PRUEFER_Y, QUOT_KV) else (0, 0)


def _predicted_dims(classes: GradedClasses, N: int, track: str) -> dict[int, int]:
    out: dict[int, int] = {}
    degs = set(classes.data)
    for n in set(list(degs) + [m + 1 for m in degs]):
        total = 0
        for piece, mult in classes[n].pieces():
            total += _piece_dims(piece, N, track)[0] * mult
        for piece, mult in classes[n - 1].pieces():
            total += _piece_dims(piece, N, track)[1] * mult
        if total:
            out[n] = total
    return out


def val_oracle_check(C: ChainComplex, classes: GradedClasses,
                     Ns=(2, 4, 8)) -> bool:
    """Both residue tracks agree with the class predictions for each N
    (x-adic over QQ always; y-adic over QQ(x) when no x-complete strand
    is present)."""
    has_xcomplete = any(w.sym in ("VhatM", "VhatMInv") for w in C.worlds)
    for N in Ns:
        got = x_track_dims(C, N)
        want = _predicted_dims(classes, N, "x")
        if got != want:
            raise OracleMismatch(f"x-residue N={N}: dims {got} != predicted {want}")
        if not has_xcomplete:
            got = y_track_dims(C, N)
            want = _predicted_dims(classes, N, "y")
            if got != want:
                raise OracleMismatch(f"y-residue N={N}: dims {got} != predicted {want}")
    return True


def oracle_check(C: ChainComplex, classes: GradedClasses, primes=(2, 3)) -> bool:
    """Dispatch on the backend; integer complexes are checked at every
    listed prime."""
    if C.backend == "valrank2":
        return val_oracle_check(C, classes)
    for p in primes:
        zint_oracle_check(C, classes, p)
    return True
