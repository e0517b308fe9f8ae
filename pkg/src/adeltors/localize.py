"""Torsion, localization, and completion functors on the exact backends.

A Site fixes a backend (the integer fan or the rank-two valuation
chain), a finite poset truncation, and assembly data.  It realizes:

  * Gamma_V X = fib(X -> X[1/S_V])   with S_V the inversion set of V:
    the primes of V over the integers, x for {m} and y for {m,p} over
    the valuation ring;
  * L_{V^c} X  = X[1/S_V]            (smashing, so a plain base change);
  * Lambda_V X                       termwise world completion, realizing
    Hom(Gamma_V 1, X) with Gamma_V 1 the explicit two-term complex -- an
    inverse limit never appears outside the validation oracle;
  * Delta_{V^c} X = fib(X -> Lambda_V X).

Regions must be realizable: over the integers only finite sets of
closed points (or everything); over the valuation chain the three
specialization-closed sets.  Anything else raises UnsupportedRegion
rather than approximating.

Splitting operations check the support hypotheses of the statements
they implement and refuse with HypothesisFailed when they do not hold;
a force flag computes both sides anyway and reports disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .classes import GradedClasses, ModuleClass
from .complexes import ChainComplex, ChainMap, fib
from .homology import homology
from .posets import (AssemblyData, SpecClosedSet, dim_filtration, down_closure,
                     finest, min_of, preimage_family, up_cone, valrank2_poset,
                     zint_poset)
from .ratfunc import x as rf_x, y as rf_y
from .worlds import (VAL, World, Z_INT, carrier_act, complete_world,
                     invert_primes, invert_val)


class UnsupportedRegionError(ValueError):
    pass


class UnknownPrimeError(ValueError):
    pass


class HypothesisFailed(ValueError):
    pass


class TruncationTooSmall(ValueError):
    pass


@dataclass(frozen=True)
class FunctorRequest:
    kind: str                       # "Gamma" | "Lcomp" | "Lambda" | "Delta"
    region: frozenset[str]          # specialization closed member set
    assembly: AssemblyData | None = None


class Site:
    """A backend with its truncated spectrum and assembly data."""

    def __init__(self, backend: str, T=(2, 3), assembly: AssemblyData | None = None):
        if backend == "zint":
            self.T = tuple(sorted(set(T)))
            if not self.T:
                raise UnsupportedRegionError("integer backend needs a nonempty truncation")
            self.poset = zint_poset(self.T)
            self.base = Z_INT()
        elif backend == "valrank2":
            self.T = ()
            self.poset = valrank2_poset()
            self.base = VAL("V")
        else:
            raise UnsupportedRegionError(f"unknown backend {backend!r}")
        self.backend = backend
        self.assembly = assembly if assembly is not None else finest(self.poset)
        if self.assembly.ambient.elements != self.poset.elements:
            raise UnsupportedRegionError("assembly data lives on a different poset")

    # -- region plumbing ---------------------------------------------------------
    def region(self, V) -> frozenset[str]:
        """Resolve a region: a SpecClosedSet, a single prime (meaning its
        down closure), or a raw member set which must already be
        specialization closed."""
        if isinstance(V, SpecClosedSet):
            return V.members
        if isinstance(V, str):
            return self.poset.down(V)
        return SpecClosedSet(self.poset, frozenset(V)).members

    def assembled_region(self, V, assembly: AssemblyData | None) -> frozenset[str]:
        if assembly is None:
            return self.region(V)
        return preimage_family(assembly, V).members

    def prime_elements(self) -> tuple[str, ...]:
        return tuple(self.poset.canonical_order(self.poset.elements))

    def _check_prime(self, p: str):
        if p not in self.poset.elements:
            raise UnknownPrimeError(f"unknown prime {p!r}")

    def inversion_set(self, V: frozenset[str]):
        """The multiplicative data inverting away from V (S_V)."""
        all_els = frozenset(self.poset.elements)
        if V == all_els:
            return None    # Gamma = id, L = 0
        if self.backend == "zint":
            if not all(self.poset.dim[p] == 0 for p in V):
                raise UnsupportedRegionError(
                    f"integer backend realizes only closed-point regions, got {sorted(V)}")
            return frozenset(int(p.strip("()")) for p in V)
        table = {frozenset(): frozenset(), frozenset({"m"}): frozenset({"x"}),
                 frozenset({"m", "p"}): frozenset({"y"})}
        if V not in table:
            raise UnsupportedRegionError(f"region {sorted(V)} not realizable")
        return table[V]

    def localize_op(self, S):
        if self.backend == "zint":
            return lambda w: invert_primes(w, S)
        return lambda w: invert_val(w, S)

    # -- objects --------------------------------------------------------------------
    def unit(self) -> ChainComplex:
        return ChainComplex.unit(self.base)

    def koszul(self, p: str) -> ChainComplex:
        """A compact complex with support the closure of p."""
        self._check_prime(p)
        if self.poset.dim[p] == self.poset.dimension:
            return self.unit()
        if self.backend == "zint":
            return ChainComplex.two_term(self.base, Fraction(int(p.strip("()"))),
                                         top_degree=1)
        gen = rf_x() if p == "m" else rf_y()
        return ChainComplex.two_term(self.base, gen, top_degree=1)

    # -- the four functors -------------------------------------------------------------
    def localized(self, X: ChainComplex, S) -> tuple[ChainComplex, ChainMap]:
        op = self.localize_op(S)
        LX = X.base_change(op)
        return LX, _unit_chain_map(X, LX, op)

    def l_complement(self, V, X: ChainComplex,
                     assembly: AssemblyData | None = None) -> ChainComplex:
        """L_{V^c} X, the smashing localization away from V."""
        members = self.assembled_region(V, assembly)
        S = self.inversion_set(members)
        if S is None:
            return ChainComplex.zero(self.backend)
        return X.base_change(self.localize_op(S))

    def gamma(self, V, X: ChainComplex,
              assembly: AssemblyData | None = None) -> ChainComplex:
        members = self.assembled_region(V, assembly)
        S = self.inversion_set(members)
        if S is None:
            return X
        if not members:
            return ChainComplex.zero(self.backend)
        LX, u = self.localized(X, S)
        return fib(u)

    def completion_targets(self, members: frozenset[str]):
        if self.backend == "zint":
            return tuple(int(p.strip("()")) for p in sorted(members, key=lambda s: int(s.strip("()"))))
        if members == frozenset({"m"}):
            return ("m",)
        if members == frozenset({"m", "p"}):
            return ("p",)
        raise UnsupportedRegionError(f"no completion rule for {sorted(members)}")

    def lam(self, V, X: ChainComplex,
            assembly: AssemblyData | None = None) -> ChainComplex:
        """Lambda_V X by termwise world completion (adelically shaped)."""
        members = self.assembled_region(V, assembly)
        all_els = frozenset(self.poset.elements)
        if members == all_els:
            return X
        if not members:
            return ChainComplex.zero(self.backend)
        if self.backend == "zint" and any(self.poset.dim[p] != 0 for p in members):
            raise UnsupportedRegionError("completion regions must be closed points")
        targets = self.completion_targets(members)
        LX, _ = self.completed(X, targets)
        return LX

    def completed(self, X: ChainComplex, targets) -> tuple[ChainComplex, ChainMap]:
        """(product of termwise completions at targets, the unit map)."""
        new_strands: dict[int, list] = {}
        index: dict[tuple[int, int, int], int] = {}   # (n, old strand, target) -> new
        for n in X.degrees():
            new_strands[n] = []
            for i, (w, r) in enumerate(X.strand_list(n)):
                for k, t in enumerate(targets):
                    cw = complete_world(w, t)
                    if cw.is_zero_world:
                        continue
                    index[(n, i, k)] = len(new_strands[n])
                    new_strands[n].append((cw, r))
        blocks: dict[tuple[int, int, int], list] = {}
        for (n, i, j), M in X.blocks.items():
            wj = X.strand_list(n - 1)[j][0]
            for k, t in enumerate(targets):
                si = index.get((n, i, k))
                tj = index.get((n - 1, j, k))
                if si is None or tj is None:
                    continue
                cw = new_strands[n - 1][tj][0]
                blocks[(n, si, tj)] = [[carrier_act(wj, cw, e) for e in row] for row in M]
        LX = ChainComplex(X.backend, new_strands, blocks)
        ublocks: dict[tuple[int, int, int], list] = {}
        for (n, i, k), si in index.items():
            w = X.strand_list(n)[i][0]
            cw = LX.strand_list(n)[si][0]
            r = X.strand_list(n)[i][1]
            one = cw.el_one()
            zero = cw.el_zero()
            ublocks[(n, i, si)] = [[one if a == b else zero for b in range(r)]
                                   for a in range(r)]
        return LX, ChainMap(X, LX, ublocks)

    def delta(self, V, X: ChainComplex,
              assembly: AssemblyData | None = None) -> ChainComplex:
        """Delta_{V^c} X = fib(X -> Lambda_V X)."""
        members = self.assembled_region(V, assembly)
        all_els = frozenset(self.poset.elements)
        if members == all_els:
            return ChainComplex.zero(self.backend)
        targets = self.completion_targets(members)
        LX, u = self.completed(X, targets)
        return fib(u)

    def apply(self, req: FunctorRequest, X: ChainComplex) -> ChainComplex:
        table = {"Gamma": self.gamma, "Lcomp": self.l_complement,
                 "Lambda": self.lam, "Delta": self.delta}
        if req.kind not in table:
            raise UnsupportedRegionError(f"unknown functor kind {req.kind!r}")
        return table[req.kind](req.region, X, req.assembly)

    # -- prime-indexed versions (Notation-style shorthands) ----------------------------
    def gamma_at(self, p: str, X: ChainComplex) -> ChainComplex:
        return self.gamma(self.poset.down(p), X)

    def l_at(self, p: str, X: ChainComplex) -> ChainComplex:
        """L_p = localization onto the up-cone of p."""
        self._check_prime(p)
        Vc = frozenset(self.poset.elements) - up_cone(self.poset, p)
        if not Vc:
            return X
        return self.l_complement(Vc, X)

    def lam_at(self, p: str, X: ChainComplex) -> ChainComplex:
        return self.lam(self.poset.down(p), X)

    def gamma_le(self, n: int, X: ChainComplex) -> ChainComplex:
        return self.gamma(dim_filtration(self.poset, n).members, X)

    def l_ge(self, n: int, X: ChainComplex) -> ChainComplex:
        return self.l_complement(dim_filtration(self.poset, n - 1).members, X)

    def lam_le(self, n: int, X: ChainComplex) -> ChainComplex:
        return self.lam(dim_filtration(self.poset, n).members, X)

    # assembled class localization L^A_x
    def l_class(self, A: AssemblyData, x: str, X: ChainComplex) -> ChainComplex:
        """L^A_x = localization away from alpha^{-1}(up-cone of x)^c."""
        region = frozenset(p for p in self.poset.elements
                           if not A.ambient.leq(x, A.alpha[p]))
        if not region:
            return X
        return self.l_complement(region, X)

    # -- atomwise classification --------------------------------------------------------
    def gamma_classes(self, V, X: ChainComplex,
                      assembly: AssemblyData | None = None) -> GradedClasses:
        """Homology classes of Gamma_V X, computed atom by atom when X is
        a single-world complex (torsion and cones commute with direct
        sums, so the rank-one rule table is exact)."""
        from .homology import (cone_atom_classes, cross_atom_classes,
                               decompose_single, homology)
        members = self.assembled_region(V, assembly)
        S = self.inversion_set(members)
        if S is None:
            return homology(X)
        if not members:
            return GradedClasses()
        W = X.single_world()
        if W is None:
            return homology(self.gamma(members, X, assembly))
        Wloc = self.localize_op(S)(W)
        if Wloc == W:
            return GradedClasses()
        if Wloc.is_zero_world:
            return homology(X)
        out = GradedClasses()
        for (t, a) in decompose_single(X):
            if a is None:
                ker, coker = cross_atom_classes(W, Wloc, W.el_one())
                out = out + GradedClasses({t: ker, t - 1: coker})
            else:
                mid, bot = cone_atom_classes(W, Wloc, a)
                out = out + GradedClasses({t - 1: mid, t - 2: bot})
        return out

    def l_classes(self, V, X: ChainComplex,
                  assembly: AssemblyData | None = None) -> GradedClasses:
        from .homology import homology
        return homology(self.l_complement(V, X, assembly))

    def lam_classes(self, V, X: ChainComplex,
                    assembly: AssemblyData | None = None) -> GradedClasses:
        from .homology import homology
        return homology(self.lam(V, X, assembly))

    # -- support ------------------------------------------------------------------------
    def support(self, X: ChainComplex) -> frozenset[str]:
        out = set()
        for p in self.poset.elements:
            lx = self.l_at(p, X)
            if not self.gamma_classes(self.poset.down(p), lx).is_zero():
                out.add(p)
        return frozenset(out)

    # -- splittings -----------------------------------------------------------------------
    def split_gamma(self, V, X: ChainComplex, force: bool = False):
        """Gamma_V X against (+)_{p in max V} Gamma_p X (needs
        supp(X) & V inside max V)."""
        members = self.region(V)
        scs = SpecClosedSet(self.poset, members)
        supp = self.support(X)
        hyp = (supp & members) <= scs.max_elements()
        if not hyp and not force:
            raise HypothesisFailed(
                f"supp(X) meets {sorted(members)} below its maximal elements")
        lhs = GradedClasses()
        for p in self.poset.canonical_order(scs.max_elements()):
            lhs = lhs + self.gamma_classes(self.poset.down(p), X)
        rhs = self.gamma_classes(members, X)
        return SplitReport("gamma-splitting", hyp, lhs, rhs)

    def split_l(self, V, X: ChainComplex, force: bool = False):
        """L_{V^c} X against (+)_{p in min V^c} L_p X (needs
        supp(X) & V^c inside min V^c)."""
        members = self.region(V)
        comp = frozenset(self.poset.elements) - members
        mins = min_of(self.poset, comp)
        supp = self.support(X)
        hyp = (supp & comp) <= mins
        if not hyp and not force:
            raise HypothesisFailed(
                f"supp(X) meets the complement of {sorted(members)} above its minimum")
        lhs = self.l_complement(members, X)
        rhs = ChainComplex.zero(self.backend)
        for p in self.poset.canonical_order(mins):
            rhs = rhs.dsum(self.l_at(p, X))
        return SplitReport("l-splitting", hyp, homology(lhs), homology(rhs))

    def gamma_product(self, V, family) -> "SplitReport":
        """Gamma_V prod_i Gamma_V X_i against Gamma_V prod_i X_i."""
        members = self.region(V)
        prod_gamma = ChainComplex.zero(self.backend)
        prod_plain = ChainComplex.zero(self.backend)
        for X in family:
            prod_gamma = prod_gamma.dsum(self.gamma(members, X))
            prod_plain = prod_plain.dsum(X)
        lhs = self.gamma(members, prod_gamma)
        rhs = self.gamma(members, prod_plain)
        return SplitReport("gamma-products", True, homology(lhs), homology(rhs))

    # -- mono-dimensional pieces -------------------------------------------------------------
    def e_object(self, i: int) -> ChainComplex:
        """Gamma_{<=i} L_{>=i} of the unit."""
        return self.gamma_le(i, self.l_ge(i, self.unit()))

    def epointy_check(self, i: int, X: ChainComplex,
                      assembly: AssemblyData | None = None) -> "SplitReport":
        """Gamma_{<=i} prod_{x_i} L^A_{x_i} X against e(i) (x) X."""
        A = assembly or self.assembly
        prod = ChainComplex.zero(self.backend)
        for x in A.sub_elements_of_dim(i):
            prod = prod.dsum(self.l_class(A, x, X))
        lhs = self.gamma_le(i, prod)
        rhs = tensor_with_mixed(self.e_object(i), X, self.base)
        return SplitReport("mono-dimensional-split", True, homology(lhs), homology(rhs))

    # -- MGM -------------------------------------------------------------------------------
    def mgm_check(self, V, X: ChainComplex) -> "MGMReport":
        members = self.region(V)
        GX = self.gamma(members, X)
        LamX = self.lam(members, X)
        LamGX = self.lam(members, GX)
        return MGMReport(homology(LamGX), homology(LamX),
                         self.gamma_classes(members, X),
                         self.gamma_classes(members, LamX))


@dataclass
class SplitReport:
    check: str
    hypothesis: bool
    lhs: GradedClasses
    rhs: GradedClasses

    @property
    def agree(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self):
        return {"check": self.check, "hypothesis": self.hypothesis,
                "agree": self.agree, "lhs": self.lhs.to_json(),
                "rhs": self.rhs.to_json()}


@dataclass
class MGMReport:
    lam_gamma: GradedClasses
    lam: GradedClasses
    gamma: GradedClasses
    gamma_lam: GradedClasses

    @property
    def agree(self) -> bool:
        return self.lam_gamma == self.lam and self.gamma == self.gamma_lam

    def to_json(self):
        return {"check": "mgm", "agree": self.agree,
                "lam_gamma": self.lam_gamma.to_json(), "lam": self.lam.to_json(),
                "gamma": self.gamma.to_json(), "gamma_lam": self.gamma_lam.to_json()}


def _unit_chain_map(X: ChainComplex, LX: ChainComplex, op) -> ChainMap:
    """Unit of a strandwise base change, tracking dropped strands."""
    blocks = {}
    for n in X.degrees():
        kept = 0
        for i, (w, r) in enumerate(X.strand_list(n)):
            nw = op(w)
            if nw.is_zero_world:
                continue
            one, zero = nw.el_one(), nw.el_zero()
            blocks[(n, i, kept)] = [[one if a == b else zero for b in range(r)]
                                    for a in range(r)]
            kept += 1
    return ChainMap(X, LX, blocks)


def tensor_with_mixed(C: ChainComplex, X: ChainComplex, base: World) -> ChainComplex:
    """C (x) X for mixed C and single-world X over the base."""
    if X.single_world() != base:
        raise UnsupportedRegionError("tensor factor must live over the base world")
    return C.tensor(X)
