"""The adelic cube and the limit reconstruction.

The adelic ring at a nonempty chain A = {i_0 < ... < i_n} is the
alternating product of localized completions

    prod_{x_n} L_{x_n} ... prod_{x_1} L_{x_1} prod_{x_0} L_{x_0} Lambda_{x_0} 1

with the products over the assembly classes of each dimension, realized
here through the functor tables of the Site.  Over the integer backend
the dimension-zero products are restricted to the truncation set T;
this is exact (not approximate) for objects supported in T and the
generic point -- the torsion of such an object meets only finitely many
completions, and the support precondition is checked before every run.
Over the valuation backend the spectrum is finite and nothing is
truncated.

The unit cube's vertices are flat (degree-zero) strand lists, so the
cube tensored with X is literally vertexwise tensor, and the limit is
the iterated-fibre totalization from `shapes`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classes import GradedClasses
from .complexes import ChainComplex, ChainMap, cone
from .homology import homology, is_acyclic
from .localize import Site, TruncationTooSmall, UnsupportedRegionError
from .posets import AssemblyData
from .shapes import CubeDiagram, holim_punctured, punctured_cube
from .worlds import World, canonical_map_exists, factorint, invert_val


def _flat(backend: str, worlds) -> ChainComplex:
    ws = [w for w in worlds if not w.is_zero_world]
    return ChainComplex(backend, {0: [(w, 1) for w in ws]}, {}) if ws else \
        ChainComplex.zero(backend)


def _flat_worlds(C: ChainComplex):
    if C.is_empty():
        return []
    if C.degrees() != [0]:
        raise UnsupportedRegionError("adelic ring complex should be flat")
    return [w for (w, _) in C.strand_list(0)]


class AdelicCube:
    """The punctured cube of adelic rings for a site and assembly."""

    def __init__(self, site: Site, assembly: AssemblyData | None = None):
        self.site = site
        self.assembly = assembly if assembly is not None else site.assembly
        self.d = site.poset.dimension
        self.shape = punctured_cube(self.d)
        self._vertex_worlds: dict[tuple, list[World]] = {}
        for v in self.shape.vertices:
            self._vertex_worlds[tuple(v.label)] = self._build_vertex(tuple(v.label))

    # -- rings ---------------------------------------------------------------------
    def _class_factor_worlds(self, x: str) -> list[World]:
        """Worlds of L_x Lambda_x 1 for an assembly class x."""
        site, A = self.site, self.assembly
        region = frozenset(y for y in A.subposet if A.ambient.leq(y, x))
        lam = site.lam(region, site.unit(), assembly=A)
        loc = site.l_class(A, x, lam)
        return _flat_worlds(loc)

    def _class_inversion(self, x: str):
        """The world op of L^A_x."""
        site, A = self.site, self.assembly
        region = frozenset(p for p in site.poset.elements
                           if not A.ambient.leq(x, A.alpha[p]))
        if not region:
            return lambda w: w
        S = site.inversion_set(region)
        return site.localize_op(S)

    def _build_vertex(self, label: tuple) -> list[World]:
        dims = sorted(label)
        worlds: list[World] = []
        for x in self.assembly.sub_elements_of_dim(dims[0]):
            worlds.extend(self._class_factor_worlds(x))
        for i in dims[1:]:
            new: list[World] = []
            for x in self.assembly.sub_elements_of_dim(i):
                op = self._class_inversion(x)
                new.extend(op(w) for w in worlds)
            worlds = new
        return [w for w in worlds if not w.is_zero_world]

    def ring_worlds(self, label) -> list[World]:
        return list(self._vertex_worlds[tuple(sorted(label))])

    def ring_name(self, label) -> str:
        ws = self.ring_worlds(label)
        return " x ".join(w.name for w in ws) if ws else "0"

    def ring_complex(self, label) -> ChainComplex:
        return _flat(self.site.backend, self.ring_worlds(label))

    # -- ext along edges ----------------------------------------------------------------
    def ext_strand_worlds(self, label_a, label_b, u: World) -> list[World]:
        """Worlds of u (x)_{ring(A)} ring(B) for one inserted index."""
        A = tuple(sorted(label_a))
        B = tuple(sorted(label_b))
        (j,) = set(B) - set(A)
        if u.is_zero_world:
            return []
        out: list[World] = []
        if j > min(A):
            for x in self.assembly.sub_elements_of_dim(j):
                out.append(self._class_inversion(x)(u))
        else:
            for x in self.assembly.sub_elements_of_dim(j):
                for f in self._class_factor_worlds(x):
                    out.append(_combine(u, f))
        return [w for w in out if not w.is_zero_world]

    def ext_complex(self, label_a, label_b, C: ChainComplex) -> ChainComplex:
        """C (x)_{ring(A)} ring(B), strandwise."""
        A, B = tuple(sorted(label_a)), tuple(sorted(label_b))
        chain = [A]
        for j in sorted(set(B) - set(A)):
            chain.append(tuple(sorted(chain[-1] + (j,))))
        out = C
        for src, dst in zip(chain, chain[1:]):
            out = self._ext_one(src, dst, out)
        return out

    def _ext_one(self, A, B, C: ChainComplex) -> ChainComplex:
        strands: dict[int, list] = {}
        index: dict[tuple[int, int], list[int]] = {}
        for n in C.degrees():
            strands[n] = []
            for i, (w, r) in enumerate(C.strand_list(n)):
                idxs = []
                for nw in self.ext_strand_worlds(A, B, w):
                    idxs.append(len(strands[n]))
                    strands[n].append((nw, r))
                index[(n, i)] = idxs
        blocks = {}
        for (n, i, j), M in C.blocks.items():
            for a, si in enumerate(index[(n, i)]):
                for b, tj in enumerate(index[(n - 1, j)]):
                    wsrc = strands[n][si][0]
                    wtgt = strands[n - 1][tj][0]
                    if not canonical_map_exists(wsrc, wtgt):
                        continue
                    if not _same_slot(wsrc, wtgt, len(index[(n, i)]), len(index[(n - 1, j)]), a, b):
                        continue
                    from .worlds import carrier_act
                    old_t = C.strand_list(n - 1)[j][0]
                    blocks[(n, si, tj)] = [
                        [carrier_act(old_t, wtgt, e) for e in row] for row in M]
        return ChainComplex(C.backend, strands, blocks)

    # -- diagrams -------------------------------------------------------------------------
    def unit_diagram(self) -> CubeDiagram:
        values = {v.name: self.ring_complex(v.label) for v in self.shape.vertices}
        maps = {}
        for (s, t, _) in self.shape.arrows:
            values_s, values_t = values[s], values[t]
            maps[(s, t)] = _canonical_flat_map(values_s, values_t)
        rings = {v.name: self.ring_name(v.label) for v in self.shape.vertices}
        return CubeDiagram(self.shape, values, maps, {}, rings)

    def check_truncation(self, X: ChainComplex):
        """Torsion of X must live at truncation primes.

        Torsion at a prime outside T would silently migrate to the
        generic vertex (the truncated functors cannot see it), so it is
        refused.  Free parts over any catalogue world are exact in the
        recorded truncated scope: the truncated generic localization
        inverts exactly the sampled primes, which is what makes the
        fracture pullbacks literal."""
        if self.site.backend != "zint":
            return
        T = set(self.site.T)
        for n, cls in homology(X).data.items():
            for piece, _ in cls.pieces():
                if piece[:2] == ("cyc", "Z"):
                    if any(p not in T for p, _ in factorint(piece[2])):
                        raise TruncationTooSmall(
                            f"torsion at primes outside T={sorted(T)} in degree {n}")
                elif piece[0] == "quot":
                    if piece[1] == "pruefer" and piece[2] not in T:
                        raise TruncationTooSmall(f"divisible torsion at {piece[2]}")

    def tensor(self, X: ChainComplex) -> CubeDiagram:
        """The punctured-cube diagram 1_ad (x) X: vertexwise derived
        tensor, computed strandwise through the world combination rule
        (each X strand world is flat over the base, so the tensor is the
        honest localization-completion pushout of worlds)."""
        self.check_truncation(X)
        base = self.unit_diagram()
        values: dict[str, ChainComplex] = {}
        layout: dict[str, dict] = {}
        backend = self.site.backend
        from .worlds import carrier_act
        for v in self.shape.vertices:
            flat = base.value(v.name)
            ring = flat.strand_list(0)
            strands: dict[int, list] = {}
            index: dict[tuple[int, int, int], int] = {}   # (ring strand, q, X strand)
            for i, (w, _) in enumerate(ring):
                for q in X.degrees():
                    for a, (wa, ra) in enumerate(X.strand_list(q)):
                        nw = _combine(wa, w)
                        if nw.is_zero_world:
                            continue
                        strands.setdefault(q, [])
                        index[(i, q, a)] = len(strands[q])
                        strands[q].append((nw, ra))
            blocks: dict[tuple[int, int, int], list] = {}
            for (q, a, b), M in X.blocks.items():
                wb = X.strand_list(q - 1)[b][0]
                for i, (w, _) in enumerate(ring):
                    si = index.get((i, q, a))
                    tj = index.get((i, q - 1, b))
                    if si is None or tj is None:
                        continue
                    nwt = strands[q - 1][tj][0]
                    blocks[(q, si, tj)] = [[carrier_act(wb, nwt, e) for e in row]
                                           for row in M]
            values[v.name] = ChainComplex(backend, strands, blocks)
            layout[v.name] = index
        maps: dict[tuple[str, str], ChainMap] = {}
        for (s, t, _) in self.shape.arrows:
            f = base.map(s, t)
            blocks = {}
            for (_z, i, j), M in f.blocks.items():
                for q in X.degrees():
                    for a, (wa, ra) in enumerate(X.strand_list(q)):
                        si = layout[s].get((i, q, a))
                        tj = layout[t].get((j, q, a))
                        if si is None or tj is None:
                            continue
                        nwt = values[t].strand_list(q)[tj][0]
                        e = M[0][0]
                        blocks[(q, si, tj)] = [[e if x == y else nwt.el_zero()
                                                for y in range(ra)] for x in range(ra)]
            maps[(s, t)] = ChainMap(values[s], values[t], blocks)
        return CubeDiagram(self.shape, values, maps, {}, dict(base.ring_names))


def _same_slot(wsrc, wtgt, nsrc, ntgt, a, b):
    """Slot routing for ext blocks: when an ext fans a strand out into
    several target factors the diagonal block sits where the worlds are
    canonically related; with equal fan-out degrees slots must match."""
    if nsrc == ntgt:
        return a == b
    return True


def _canonical_flat_map(CA: ChainComplex, CB: ChainComplex) -> ChainMap:
    """All-ones blocks wherever a canonical world map exists (the unit
    maps of the adelic cube on flat vertices)."""
    blocks = {}
    for i, (u, _) in enumerate(CA.strand_list(0)):
        for j, (v, _) in enumerate(CB.strand_list(0)):
            if canonical_map_exists(u, v):
                blocks[(0, i, j)] = [[v.el_one()]]
    return ChainMap(CA, CB, blocks)


def _combine(u: World, f: World) -> World:
    """u (x)_base f for a strand u and an inner adelic factor f."""
    if u.is_zero_world or f.is_zero_world:
        return f if u.is_zero_world else u
    if u.backend == "zint":
        if u.comp is not None and f.comp is not None and u.comp != f.comp:
            raise UnsupportedRegionError("cross-completion tensor outside the catalogue")
        comp = f.comp if f.comp is not None else u.comp
        inv = u.inv.union(f.inv)
        if comp is not None and comp in inv:
            return World("zint", "z", comp, inv)
        return World("zint", "z", comp, inv)
    gens = _VAL_INVERTED[u.sym]
    return invert_val(f, frozenset(gens))


_VAL_INVERTED = {"V": (), "VhatM": (), "VhatPFull": (),
                 "Vp": ("x",), "VhatMInv": ("x",), "VhatP": ("x",),
                 "K": ("x", "y"), "VhatPInv": ("x", "y")}


def is_adelic_object(D: CubeDiagram, cube: AdelicCube) -> bool:
    """Every adjoint structure map ext_A^B M(A) -> M(B) is a homology
    isomorphism."""
    if D.shape.kind != "pcube":
        from .shapes import ShapeMismatchError
        raise ShapeMismatchError("adelic membership applies to punctured cubes")
    for (s, t, _) in D.shape.arrows:
        A = tuple(D.shape.vertex(s).label)
        B = tuple(D.shape.vertex(t).label)
        if not _adjoint_iso(cube, A, B, D.value(s), D.value(t), D.map(s, t)):
            return False
    return True


def _adjoint_iso(cube: AdelicCube, A, B, MA: ChainComplex, MB: ChainComplex,
                 f: ChainMap) -> bool:
    E = cube.ext_complex(A, B, MA)
    fb = _adjoint_map(cube, A, B, MA, E, MB, f)
    if fb is None:
        return False
    return is_acyclic(cone(fb))


def _adjoint_map(cube: AdelicCube, A, B, MA, E, MB, f: ChainMap):
    """The adjoint ext M(A) -> M(B) of a structure map, blockwise: the
    entries of f re-sourced at the surviving ext strands."""
    index: dict[tuple[int, int], list[int]] = {}
    for n in MA.degrees():
        at = 0
        for i, (w, r) in enumerate(MA.strand_list(n)):
            ws = cube.ext_strand_worlds(A, B, w) if len(set(B) - set(A)) == 1 else None
            if ws is None:
                ws = [sw for (sw, _) in _ext_strands_of(cube, A, B, w)]
            index[(n, i)] = list(range(at, at + len(ws)))
            at += len(ws)
    blocks = {}
    for (n, i, j), M in f.blocks.items():
        tgt_world = MB.strand_list(n)[j][0]
        for si in index[(n, i)]:
            src_world = E.strand_list(n)[si][0]
            if canonical_map_exists(src_world, tgt_world):
                blocks[(n, si, j)] = M
    try:
        return ChainMap(E, MB, blocks)
    except Exception:
        return None


def _ext_strands_of(cube: AdelicCube, A, B, w: World):
    chain = [tuple(sorted(A))]
    for j in sorted(set(B) - set(A)):
        chain.append(tuple(sorted(chain[-1] + (j,))))
    worlds = [w]
    for src, dst in zip(chain, chain[1:]):
        worlds = [nw for u in worlds for nw in cube.ext_strand_worlds(src, dst, u)]
    return [(u, 1) for u in worlds]


def reconstruct_limit(D: CubeDiagram, X: ChainComplex):
    """holim of the punctured diagram, with the homology comparison
    against X."""
    lim = holim_punctured(D)
    got = homology(lim)
    want = homology(X)
    return ReconstructionReport(lim, got, want)


@dataclass
class ReconstructionReport:
    limit: ChainComplex
    got: GradedClasses
    want: GradedClasses

    @property
    def agree(self) -> bool:
        return self.got == self.want

    def to_json(self):
        return {"check": "fracture-limit", "agree": self.agree,
                "limit": self.got.to_json(), "object": self.want.to_json()}
