"""Bounded complexes of finitely generated free modules over worlds.

A complex stores, per degree, an ordered list of strands (World, rank),
and a differential given blockwise: block[(n, i, j)] is the matrix of
the component from strand i of degree n to strand j of degree n-1.  A
block from a W1-strand to a W2-strand is the composite of the canonical
map W1 -> W2 with a matrix over the carrier of W2, so a complex is
"adelically shaped" by construction; a single-world complex is the
special case where every strand shares one world.

d(d(x)) = 0 is asserted exactly on construction.  The fixed sign
conventions: shift negates the differential once per step, and the
mapping cone of f: C -> D is C[1] (+) D with d(c, d) = (-dc, f(c)+dd).

Degrees are confined to a window (default [-8, 8]); constructions that
would leave it fail loudly rather than truncate.
"""

from __future__ import annotations

from fractions import Fraction

from .worlds import (World, canonical_map_exists, carrier_act, map_act,
                     mult_map_allowed)
from .linalg import mat_mul

DEGREE_LO, DEGREE_HI = -8, 8


class DegreeWindowError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class NotChainMapError(ValueError):
    pass


class IncompatibleWorldsError(ValueError):
    pass


def _zeros(world: World, rows: int, cols: int):
    z = world.el_zero()
    return [[z for _ in range(cols)] for _ in range(rows)]


def _is_zero_mat(M) -> bool:
    return all(e == 0 if isinstance(e, (int, Fraction)) else e.is_zero()
               for row in M for e in row)


def _kron(A, B, zero):
    """Kronecker product, A acting on the outer index."""
    ra, ca = len(A), len(A[0]) if A else 0
    rb, cb = len(B), len(B[0]) if B else 0
    out = [[zero for _ in range(ca * cb)] for _ in range(ra * rb)]
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k][j * cb + l] = A[i][j] * B[k][l]
    return out


class ChainComplex:
    def __init__(self, backend: str, strands: dict[int, list[tuple[World, int]]],
                 blocks: dict[tuple[int, int, int], list], check: bool = True):
        self.backend = backend
        self.strands = {}
        keep: dict[int, list[int]] = {}
        for n, ss in strands.items():
            if not (DEGREE_LO <= n <= DEGREE_HI):
                raise DegreeWindowError(f"degree {n} outside [{DEGREE_LO},{DEGREE_HI}]")
            kept = [(w, r) for (w, r) in ss if r > 0 and not w.is_zero_world]
            keep[n] = [i for i, (w, r) in enumerate(ss) if r > 0 and not w.is_zero_world]
            if kept:
                self.strands[n] = kept
        self.blocks = {}
        for (n, i, j), M in blocks.items():
            if _is_zero_mat(M):
                continue
            if n not in keep or i not in keep[n] or (n - 1) not in keep or j not in keep[n - 1]:
                raise ShapeError("nonzero block attached to a dropped strand")
            self.blocks[(n, keep[n].index(i), keep[n - 1].index(j))] = M
        if check:
            self._validate()

    # -- bookkeeping ------------------------------------------------------------
    def degrees(self):
        return sorted(self.strands)

    def strand_list(self, n: int):
        return self.strands.get(n, [])

    def rank(self, n: int) -> int:
        return sum(r for _, r in self.strand_list(n))

    def block(self, n: int, i: int, j: int):
        hit = self.blocks.get((n, i, j))
        if hit is not None:
            return hit
        tgt = self.strand_list(n - 1)[j]
        src = self.strand_list(n)[i]
        return _zeros(tgt[0], tgt[1], src[1])

    def is_empty(self) -> bool:
        return not self.strands

    @property
    def worlds(self) -> set[World]:
        return {w for ss in self.strands.values() for (w, _) in ss}

    def single_world(self) -> World | None:
        ws = self.worlds
        return next(iter(ws)) if len(ws) == 1 else None

    def _validate(self):
        for (n, i, j), M in self.blocks.items():
            src = self.strand_list(n)[i]
            tgt = self.strand_list(n - 1)[j]
            if len(M) != tgt[1] or any(len(row) != src[1] for row in M):
                raise ShapeError(f"block ({n},{i},{j}) has wrong shape")
            for row in M:
                for e in row:
                    if not mult_map_allowed(src[0], tgt[0], e):
                        raise IncompatibleWorldsError(
                            f"invalid block entry {e}: {src[0]} -> {tgt[0]}")
        # d o d = 0, blockwise
        for n in self.degrees():
            if (n - 1) not in self.strands or (n - 2) not in self.strands:
                continue
            for i, (wi, ri) in enumerate(self.strand_list(n)):
                for k, (wk, rk) in enumerate(self.strand_list(n - 2)):
                    acc = _zeros(wk, rk, ri)
                    for j, (wj, rj) in enumerate(self.strand_list(n - 1)):
                        M1 = self.blocks.get((n, i, j))
                        M2 = self.blocks.get((n - 1, j, k))
                        if M1 is None or M2 is None:
                            continue
                        M1k = [[map_act(wj, wk, e) for e in row] for row in M1]
                        P = mat_mul(M2, M1k)
                        acc = [[acc[a][b] + P[a][b] for b in range(ri)] for a in range(rk)]
                    if not _is_zero_mat(acc):
                        raise ShapeError(f"d o d != 0 between degrees {n} and {n-2}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return False
        if self.backend != other.backend or self.strands != other.strands:
            return False
        keys = set(self.blocks) | set(other.blocks)
        for key in keys:
            n, i, j = key
            if self.block(n, i, j) != other.block(n, i, j):
                return False
        return True

    def __repr__(self):
        if self.is_empty():
            return "ChainComplex(0)"
        parts = []
        for n in sorted(self.strands, reverse=True):
            ss = " + ".join(f"{w.name}^{r}" for w, r in self.strands[n])
            parts.append(f"[{n}] {ss}")
        return "ChainComplex(" + "; ".join(parts) + ")"

    # -- constructors ------------------------------------------------------------
    @staticmethod
    def zero(backend: str) -> "ChainComplex":
        return ChainComplex(backend, {}, {})

    @staticmethod
    def unit(world: World) -> "ChainComplex":
        return ChainComplex(world.backend, {0: [(world, 1)]}, {})

    @staticmethod
    def single(world: World, ranks: dict[int, int],
               diffs: dict[int, list] | None = None) -> "ChainComplex":
        """Single-world complex from free ranks and differential matrices."""
        strands = {n: [(world, r)] for n, r in ranks.items() if r}
        blocks = {}
        for n, M in (diffs or {}).items():
            if ranks.get(n, 0) and ranks.get(n - 1, 0):
                blocks[(n, 0, 0)] = M
        return ChainComplex(world.backend, strands, blocks)

    @staticmethod
    def two_term(world: World, el, top_degree: int = 1) -> "ChainComplex":
        """[W --el--> W] in degrees (top, top-1); the Koszul shape."""
        return ChainComplex.single(world, {top_degree: 1, top_degree - 1: 1},
                                   {top_degree: [[el]]})

    # -- operations ---------------------------------------------------------------
    def shift(self, s: int) -> "ChainComplex":
        """Suspension: degrees go up by s, differential picks up (-1)^s."""
        sign = 1 if s % 2 == 0 else -1
        strands = {n + s: list(ss) for n, ss in self.strands.items()}
        blocks = {(n + s, i, j): [[e * sign for e in row] for row in M]
                  for (n, i, j), M in self.blocks.items()}
        return ChainComplex(self.backend, strands, blocks, check=False)

    def dsum(self, other: "ChainComplex") -> "ChainComplex":
        if self.backend != other.backend:
            raise IncompatibleWorldsError("direct sum across backends")
        strands: dict[int, list] = {}
        offs: dict[int, int] = {}
        for n in set(self.strands) | set(other.strands):
            strands[n] = list(self.strand_list(n)) + list(other.strand_list(n))
            offs[n] = len(self.strand_list(n))
        blocks = dict(self.blocks)
        for (n, i, j), M in other.blocks.items():
            blocks[(n, i + offs.get(n, 0), j + offs.get(n - 1, 0))] = M
        return ChainComplex(self.backend, strands, blocks, check=False)

    def scale_differential(self, c) -> "ChainComplex":
        blocks = {k: [[e * c for e in row] for row in M] for k, M in self.blocks.items()}
        return ChainComplex(self.backend, dict(self.strands), blocks, check=False)

    def base_change(self, world_op, entry_act=None) -> "ChainComplex":
        """Apply a world operation strandwise; entries pass through entry_act.

        world_op: World -> World; entry_act(src_world, new_tgt_world, e)
        defaults to the canonical-map carrier action when the new target
        world is reachable, else the identity.
        """
        new_worlds = {}
        for n, ss in self.strands.items():
            new_worlds[n] = [(world_op(w), r) for (w, r) in ss]
        strands = {n: ss for n, ss in new_worlds.items()}
        blocks = {}
        for (n, i, j), M in self.blocks.items():
            old_tgt = self.strand_list(n - 1)[j][0]
            new_tgt = new_worlds[n - 1][j][0]
            if new_tgt.is_zero_world or new_worlds[n][i][0].is_zero_world:
                continue
            if entry_act is not None:
                M2 = [[entry_act(old_tgt, new_tgt, e) for e in row] for row in M]
            elif canonical_map_exists(old_tgt, new_tgt):
                M2 = [[carrier_act(old_tgt, new_tgt, e) for e in row] for row in M]
            else:
                M2 = M
            blocks[(n, i, j)] = M2
        return ChainComplex(self.backend, strands, blocks)

    def tensor(self, other: "ChainComplex") -> "ChainComplex":
        """Total tensor product; other must live over one world mapping
        canonically into every strand world of self."""
        wo = other.single_world()
        if other.is_empty():
            return ChainComplex.zero(self.backend)
        if self.is_empty():
            return ChainComplex.zero(self.backend)
        if wo is None:
            raise IncompatibleWorldsError("tensor: right factor must be single-world")
        index = {}   # (p, i, q) -> new strand index per degree
        strands: dict[int, list] = {}
        for p in self.degrees():
            for i, (w, r) in enumerate(self.strand_list(p)):
                if not canonical_map_exists(wo, w):
                    raise IncompatibleWorldsError(f"tensor: no map {wo} -> {w}")
                for q in other.degrees():
                    n = p + q
                    if not (DEGREE_LO <= n <= DEGREE_HI):
                        raise DegreeWindowError("tensor leaves the degree window")
                    strands.setdefault(n, [])
                    index[(p, i, q)] = len(strands[n])
                    strands[n].append((w, r * other.rank(q)))
        blocks: dict[tuple[int, int, int], list] = {}
        for (p, i, q), si in index.items():
            w = self.strand_list(p)[i][0]
            r = self.strand_list(p)[i][1]
            # d_C (x) id
            for j in range(len(self.strand_list(p - 1))):
                M = self.blocks.get((p, i, j))
                if M is not None and (p - 1, j, q) in index:
                    wj = self.strand_list(p - 1)[j][0]
                    eye = [[wj.el_one() if a == b else wj.el_zero()
                            for b in range(other.rank(q))] for a in range(other.rank(q))]
                    blocks[(p + q, si, index[(p - 1, j, q)])] = _kron(M, eye, wj.el_zero())
            # (-1)^p id (x) d_X
            DX = other.blocks.get((q, 0, 0))
            if DX is not None and (p, i, q - 1) in index:
                sign = 1 if p % 2 == 0 else -1
                DXw = [[carrier_act(wo, w, e) * sign for e in row] for row in DX]
                eye = [[w.el_one() if a == b else w.el_zero() for b in range(r)]
                       for a in range(r)]
                blocks[(p + q, si, index[(p, i, q - 1)])] = _kron(eye, DXw, w.el_zero())
        return ChainComplex(self.backend, strands, blocks)

    def hom_complex(self, other: "ChainComplex") -> "ChainComplex":
        """Hom(self, other) for two single-world complexes over one world:
        Hom_n = prod_i Hom(C_i, D_{i+n}), d(f) = d_D f - (-1)^n f d_C."""
        w = self.single_world()
        if w is None or other.single_world() != w:
            raise IncompatibleWorldsError("hom needs a common single world")
        from .homology import full_matrix
        rC = {n: self.rank(n) for n in self.degrees()}
        rD = {n: other.rank(n) for n in other.degrees()}
        dC = {n: full_matrix(self, n) for n in self.degrees() if self.rank(n - 1)}
        dD = {n: full_matrix(other, n) for n in other.degrees() if other.rank(n - 1)}
        # basis of Hom_n: (i, a, b) = matrix unit E_{ba}: C_i gen a -> D_{i+n} gen b
        basis: dict[int, list] = {}
        for n in range(min(rD) - max(rC), max(rD) - min(rC) + 1):
            bs = [(i, a, b) for i in sorted(rC) if (i + n) in rD
                  for a in range(rC[i]) for b in range(rD[i + n])]
            if bs:
                basis[n] = bs
        strands = {n: [(w, len(bs))] for n, bs in basis.items()}
        blocks = {}
        zero = w.el_zero()
        for n, bs in basis.items():
            if (n - 1) not in basis:
                continue
            tgt = {key: pos for pos, key in enumerate(basis[n - 1])}
            M = [[zero] * len(bs) for _ in range(len(basis[n - 1]))]
            sgn = w.el_one() if n % 2 == 0 else -w.el_one()
            for col, (i, a, b) in enumerate(bs):
                # d_D o f: (i, a, b') for d_D: D_{i+n} -> D_{i+n-1}
                if (i + n) in dD:
                    for b2 in range(rD.get(i + n - 1, 0)):
                        key = (i, a, b2)
                        if key in tgt:
                            M[tgt[key]][col] = M[tgt[key]][col] + dD[i + n][b2][b]
                # -(-1)^n f o d_C: source gen a2 of C_{i+1} maps through d_C
                if (i + 1) in dC:
                    for a2 in range(rC.get(i + 1, 0)):
                        key = (i + 1, a2, b)
                        if key in tgt:
                            M[tgt[key]][col] = M[tgt[key]][col] - sgn * dC[i + 1][a][a2]
            blocks[(n, 0, 0)] = M
        return ChainComplex(self.backend, strands, blocks)


class ChainMap:
    """A degreewise map of complexes given by strand blocks.

    blocks[(n, i, j)] is the matrix of the component from strand i of
    src degree n to strand j of dst degree n, as a canonical-map-
    composed matrix just like differentials.
    """

    def __init__(self, src: ChainComplex, dst: ChainComplex,
                 blocks: dict[tuple[int, int, int], list], check: bool = True):
        self.src, self.dst, self.blocks = src, dst, dict(blocks)
        for k, M in list(self.blocks.items()):
            if _is_zero_mat(M):
                del self.blocks[k]
        if check and not self.is_chain_map():
            raise NotChainMapError("not a chain map")

    @staticmethod
    def from_unit(src: ChainComplex, dst: ChainComplex) -> "ChainMap":
        """The canonical strandwise map when dst = base_change(src)-shaped:
        matching strand lists degreewise, identity matrices."""
        blocks = {}
        for n in src.degrees():
            ss, ds = src.strand_list(n), dst.strand_list(n)
            di = 0
            for i, (w, r) in enumerate(ss):
                if di < len(ds) and ds[di][1] == r and canonical_map_exists(w, ds[di][0]):
                    w2 = ds[di][0]
                    blocks[(n, i, di)] = [[w2.el_one() if a == b else w2.el_zero()
                                           for b in range(r)] for a in range(r)]
                    di += 1
                elif not any(canonical_map_exists(w, d[0]) for d in ds):
                    continue  # strand died under the world op
                else:
                    raise ShapeError("unit map: strand lists out of step")
        return ChainMap(src, dst, blocks)

    def block(self, n, i, j):
        hit = self.blocks.get((n, i, j))
        if hit is not None:
            return hit
        tgt = self.dst.strand_list(n)[j]
        src = self.src.strand_list(n)[i]
        return _zeros(tgt[0], tgt[1], src[1])

    def is_chain_map(self) -> bool:
        for n in set(list(self.src.strands) + list(self.dst.strands)):
            for i, (wi, ri) in enumerate(self.src.strand_list(n)):
                for k, (wk, rk) in enumerate(self.dst.strand_list(n - 1)):
                    acc = _zeros(wk, rk, ri)
                    # f o d_src
                    for j, (wj, rj) in enumerate(self.src.strand_list(n - 1)):
                        M1 = self.src.blocks.get((n, i, j))
                        M2 = self.blocks.get((n - 1, j, k))
                        if M1 is None or M2 is None:
                            continue
                        M1k = [[map_act(wj, wk, e) for e in row] for row in M1]
                        P = mat_mul(M2, M1k)
                        acc = [[acc[a][b] + P[a][b] for b in range(ri)] for a in range(rk)]
                    # - d_dst o f
                    for j, (wj, rj) in enumerate(self.dst.strand_list(n)):
                        M1 = self.blocks.get((n, i, j))
                        M2 = self.dst.blocks.get((n, j, k))
                        if M1 is None or M2 is None:
                            continue
                        M1k = [[map_act(wj, wk, e) for e in row] for row in M1]
                        P = mat_mul(M2, M1k)
                        acc = [[acc[a][b] - P[a][b] for b in range(ri)] for a in range(rk)]
                    if not _is_zero_mat(acc):
                        return False
        return True


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g o f, entries passing through the middle worlds' canonical maps."""
    if f.dst is not g.src and f.dst != g.src:
        raise ShapeError("compose: middle complexes differ")
    blocks: dict[tuple[int, int, int], list] = {}
    for n in f.src.degrees():
        for i, (wi, ri) in enumerate(f.src.strand_list(n)):
            for k, (wk, rk) in enumerate(g.dst.strand_list(n)):
                acc = _zeros(wk, rk, ri)
                hit = False
                for j, (wj, rj) in enumerate(f.dst.strand_list(n)):
                    M1 = f.blocks.get((n, i, j))
                    M2 = g.blocks.get((n, j, k))
                    if M1 is None or M2 is None:
                        continue
                    hit = True
                    M1k = [[map_act(wj, wk, e) for e in row] for row in M1]
                    P = mat_mul(M2, M1k)
                    acc = [[acc[a][b] + P[a][b] for b in range(ri)] for a in range(rk)]
                if hit and not _is_zero_mat(acc):
                    blocks[(n, i, k)] = acc
    return ChainMap(f.src, g.dst, blocks, check=False)


def map_equal(f: ChainMap, g: ChainMap) -> bool:
    if f.src != g.src or f.dst != g.dst:
        return False
    for key in set(f.blocks) | set(g.blocks):
        if f.block(*key) != g.block(*key):
            return False
    return True


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: cone(f)_n = C_{n-1} (+) D_n, d(c,d) = (-dc, f(c)+dd)."""
    C, D = f.src, f.dst
    strands: dict[int, list] = {}
    c_at: dict[int, int] = {}
    for n in {m + 1 for m in C.strands} | set(D.strands):
        sC = C.strand_list(n - 1)
        sD = D.strand_list(n)
        if sC or sD:
            if not (DEGREE_LO <= n <= DEGREE_HI):
                raise DegreeWindowError("cone leaves the degree window")
            strands[n] = list(sC) + list(sD)
            c_at[n] = len(sC)
    blocks: dict[tuple[int, int, int], list] = {}
    for (n, i, j), M in C.blocks.items():
        blocks[(n + 1, i, j)] = [[-e for e in row] for row in M]
    for (n, i, j), M in D.blocks.items():
        blocks[(n, i + c_at.get(n, 0), j + c_at.get(n - 1, 0))] = M
    for (n, i, j), M in f.blocks.items():
        blocks[(n + 1, i, j + c_at.get(n, 0))] = M
    return ChainComplex(C.backend, strands, blocks)


def fib(f: ChainMap) -> ChainComplex:
    """Fibre = cone shifted down once."""
    return cone(f).shift(-1)


def cone_inclusion(f: ChainMap) -> ChainMap:
    """The structure map D -> cone(f)."""
    C, D = f.src, f.dst
    cf = cone(f)
    blocks = {}
    for n in D.degrees():
        off = len(C.strand_list(n - 1))
        for j, (w, r) in enumerate(D.strand_list(n)):
            one, zero = w.el_one(), w.el_zero()
            blocks[(n, j, off + j)] = [[one if a == b else zero for b in range(r)]
                                       for a in range(r)]
    return ChainMap(D, cf, blocks)


def cone_null_homotopy(f: ChainMap) -> dict:
    """The canonical null homotopy h of (D -> cone(f)) o f: blocks of a
    degree +1 map C -> cone(f) with dh + hd = incl o f."""
    C = f.src
    blocks = {}
    for n in C.degrees():
        for i, (w, r) in enumerate(C.strand_list(n)):
            one, zero = w.el_one(), w.el_zero()
            # C_n sits inside cone(f)_{n+1} as the i-th C-strand
            blocks[(n, i, i)] = [[one if a == b else zero for b in range(r)]
                                 for a in range(r)]
    return blocks


def fib_projection(f: ChainMap) -> ChainMap:
    """The structure map fib(f) -> C."""
    C = f.src
    fc = fib(f)
    blocks = {}
    for n in C.degrees():
        for i, (w, r) in enumerate(C.strand_list(n)):
            one, zero = w.el_one(), w.el_zero()
            blocks[(n - 0, i, i)] = [[one if a == b else zero for b in range(r)]
                                     for a in range(r)]
    # fib(f)_n = C_n (+) D_{n+1}: the C-strands come first in each degree
    return ChainMap(fc, C, blocks)


def induced_cone_map(f: ChainMap, f2: ChainMap, p: ChainMap, q: ChainMap) -> ChainMap:
    """cone(f) -> cone(f2) induced by a strictly commuting square
    (p: src f -> src f2, q: dst f -> dst f2 with q f = f2 p)."""
    if not map_equal(compose(q, f), compose(f2, p)):
        raise NotChainMapError("square does not commute on the nose")
    c1, c2 = cone(f), cone(f2)
    off1 = {n: len(f.src.strand_list(n - 1)) for n in c1.strands}
    off2 = {n: len(f2.src.strand_list(n - 1)) for n in c2.strands}
    blocks = {}
    for (n, i, j), M in p.blocks.items():
        blocks[(n + 1, i, j)] = M
    for (n, i, j), M in q.blocks.items():
        blocks[(n, i + off1.get(n, 0), j + off2.get(n, 0))] = M
    return ChainMap(c1, c2, blocks)


def homotopy_defect(f: ChainMap, g: ChainMap, h_blocks: dict) -> bool:
    """Check dh + hd = g o f for a degree +1 block map h: src f -> dst g."""
    C, E = f.src, g.dst
    gf = compose(g, f)
    for n in C.degrees():
        for i, (wi, ri) in enumerate(C.strand_list(n)):
            for k, (wk, rk) in enumerate(E.strand_list(n)):
                acc = _zeros(wk, rk, ri)
                # d_E o h: h lands in E_{n+1}
                for j, (wj, rj) in enumerate(E.strand_list(n + 1)):
                    H = h_blocks.get((n, i, j))
                    D = E.blocks.get((n + 1, j, k))
                    if H is None or D is None:
                        continue
                    Hk = [[map_act(wj, wk, e) for e in row] for row in H]
                    P = mat_mul(D, Hk)
                    acc = [[acc[a][b] + P[a][b] for b in range(ri)] for a in range(rk)]
                # h o d_C
                for j, (wj, rj) in enumerate(C.strand_list(n - 1)):
                    D = C.blocks.get((n, i, j))
                    H = h_blocks.get((n - 1, j, k))
                    if H is None or D is None:
                        continue
                    Dk = [[map_act(wj, wk, e) for e in row] for row in D]
                    P = mat_mul(H, Dk)
                    acc = [[acc[a][b] + P[a][b] for b in range(ri)] for a in range(rk)]
                if [[acc[a][b] - gf.block(n, i, k)[a][b] for b in range(ri)]
                        for a in range(rk)] != _zeros(wk, rk, ri):
                    return False
    return True
