from fractions import Fraction as F

import pytest

from adeltors.classes import GradedClasses, ModuleClass
from adeltors.complexes import ChainComplex, ChainMap, cone, fib
from adeltors.homology import (UnsupportedMixedShape, decompose_single,
                               homology, is_acyclic)
from adeltors.library import random_complex
from adeltors.oracle import oracle_check
from adeltors.ratfunc import x as rx, y as ry
from adeltors.worlds import (VAL, Z_INT, Z_INV, Z_LOC, Z_PADIC, Z_PADICRAT,
                             Z_RAT)


def test_cyclic_normalization():
    Z = Z_INT()
    # Z/2 (+) Z/3 displays as the invariant factor Z/6
    a = ModuleClass.cyclic(Z, F(2)) + ModuleClass.cyclic(Z, F(3))
    b = ModuleClass.cyclic(Z, F(6))
    assert a == b
    assert "Cyclic(Z,6)" in repr(b)
    # world reduction: completed cyclics match integer ones
    assert ModuleClass.cyclic(Z_PADIC(2), F(8)) == ModuleClass.cyclic(Z, F(8))
    assert ModuleClass.cyclic(Z_LOC(2), F(12)) == ModuleClass.cyclic(Z, F(4))
    # valuation families
    assert ModuleClass.cyclic(VAL("VhatM"), rx() ** 2) == \
        ModuleClass.cyclic(VAL("V"), rx() ** 2)
    assert ModuleClass.cyclic(VAL("VhatP"), ry()) == \
        ModuleClass.cyclic(VAL("Vp"), ry())
    assert ModuleClass.cyclic(VAL("V"), ry()) != ModuleClass.cyclic(VAL("Vp"), ry())


def test_single_world_homology_and_oracle(rng):
    for _ in range(50):
        C = random_complex(rng, Z_INT())
        h = homology(C)
        oracle_check(C, h, primes=(2, 3, 5))


def test_cone_of_identity_acyclic(rng):
    for _ in range(100):
        C = random_complex(rng, Z_INT())
        assert is_acyclic(cone(ChainMap.from_unit(C, C)))


def test_decompose_reassembles(rng):
    for _ in range(80):
        C = random_complex(rng, Z_INT())
        atoms = decompose_single(C)
        total = ChainComplex.zero("zint")
        Z = Z_INT()
        for (t, a) in atoms:
            total = total.dsum(ChainComplex.single(Z, {t: 1}) if a is None
                               else ChainComplex.two_term(Z, a, top_degree=t))
        assert homology(total) == homology(C)


def test_fracture_square_collapse():
    Z, Q, Z2, Q2 = Z_INT(), Z_RAT(), Z_PADIC(2), Z_PADICRAT(2)
    sq = ChainComplex("zint",
                      {0: [(Z, 1)], -1: [(Z_INV(2), 1), (Z2, 1)], -2: [(Q2, 1)]},
                      {(0, 0, 0): [[F(1)]], (0, 0, 1): [[F(1)]],
                       (-1, 0, 0): [[F(1)]], (-1, 1, 0): [[F(-1)]]})
    assert is_acyclic(sq)
    frac = ChainComplex("zint", {0: [(Q, 1), (Z2, 1)], -1: [(Q2, 1)]},
                        {(0, 0, 0): [[F(1)]], (0, 1, 0): [[F(-1)]]})
    assert homology(frac) == GradedClasses({0: ModuleClass.free(Z_LOC(2))})


def test_val_cube_collapse():
    one = VAL("K").el_one()
    cube = ChainComplex("valrank2",
                        {0: [(VAL("VhatM"), 1), (VAL("VhatP"), 1), (VAL("K"), 1)],
                         -1: [(VAL("VhatMInv"), 1), (VAL("VhatPInv"), 1)]},
                        {(0, 0, 0): [[one]], (0, 1, 0): [[-one]],
                         (0, 1, 1): [[one]], (0, 2, 1): [[-one]]})
    assert homology(cube) == GradedClasses({0: ModuleClass.free(VAL("V"))})


def test_quot_classes_from_cones():
    Z = Z_INT()
    u = ChainMap.from_unit(ChainComplex.unit(Z), ChainComplex.unit(Z_INV(2)))
    h = homology(cone(u))
    assert h == GradedClasses({0: ModuleClass.quot("pruefer", 2)})
    V = VAL("V")
    uv = ChainMap.from_unit(ChainComplex.unit(V), ChainComplex.unit(VAL("Vp")))
    assert homology(fib(uv)) == GradedClasses({-1: ModuleClass.quot("prueferX")})
    uk = ChainMap.from_unit(ChainComplex.unit(V), ChainComplex.unit(VAL("K")))
    assert homology(fib(uk)) == GradedClasses({-1: ModuleClass.quot("quotKV")})


def test_homology_invariant_under_unit_rescale():
    # base-change compatible rescaling by a unit does not move classes
    Z2 = Z_LOC(2)
    C = ChainComplex.two_term(Z2, F(4))
    D = ChainComplex.two_term(Z2, F(4) * F(3, 7))
    assert homology(C) == homology(D)


def test_unsupported_shapes_raise():
    # a cross-completion pair with no rule must refuse, not guess
    with pytest.raises((UnsupportedMixedShape, Exception)):
        C = ChainComplex("valrank2",
                         {0: [(VAL("Vp"), 1)], -1: [(VAL("VhatP"), 1)]},
                         {(0, 0, 0): [[VAL("VhatP").el_one()]]})
        homology(C)
