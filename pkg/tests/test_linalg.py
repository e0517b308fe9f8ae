"""SNF soundness: A = U D Vt with unimodular transforms and divisibility
chains, pivoting on minimal valuation.  The randomized check plays the
role of the brute-force row/column-operation oracle: the factorization
and divisibility are verified directly rather than recomputed."""

from fractions import Fraction as F

import pytest

from adeltors.linalg import diagonal_entries, mat_eq, mat_mul, snf
from adeltors.ratfunc import RatXY, x, y
from adeltors.worlds import (VAL, Z_INT, Z_INV, Z_LOC, Z_PADIC, Z_RAT,
                             Z_SEMILOC)


def _is_zero(e):
    return e == 0 if isinstance(e, F) else e.is_zero()


def check_snf(A, world):
    U, D, Vt = snf(A, world)
    assert mat_eq(mat_mul(mat_mul(U, D), Vt), A)
    ds = diagonal_entries(D)
    for i in range(len(ds) - 1):
        if not _is_zero(ds[i]) and not _is_zero(ds[i + 1]):
            assert world.divides(ds[i], ds[i + 1])
        if _is_zero(ds[i]):
            assert _is_zero(ds[i + 1])
    for i in range(len(D)):
        for j in range(len(D[0])):
            if i != j:
                assert _is_zero(D[i][j])
    return ds


def test_spec_integer_example():
    ds = check_snf([[F(2), F(4)], [F(6), F(8)]], Z_INT())
    assert ds == [F(2), F(4)]


def test_identity_fixed():
    ds = check_snf([[F(1), F(0)], [F(0), F(1)]], Z_INT())
    assert ds == [F(1), F(1)]


def test_valuation_pivot_example():
    # lex valuation oracle: v(x) = (0,1) < v(y) = (1,0), so x is the pivot
    assert VAL("V").pivot_size(x()) < VAL("V").pivot_size(y())
    ds = check_snf([[y(), x()]], VAL("V"))
    assert ds == [x()]


def test_snf_random_many(rng):
    worlds = [Z_INT(), Z_LOC(2), Z_PADIC(2), Z_INV(2), Z_RAT(), Z_SEMILOC(2, 3)]
    for trial in range(1100):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        A = [[F(rng.randint(-40, 40)) for _ in range(n)] for _ in range(m)]
        for w in worlds[:2]:
            check_snf(A, w)
        A2 = [[F(rng.randint(-40, 40), rng.choice([1, 3, 9, 5])) for _ in range(n)]
              for _ in range(m)]
        check_snf(A2, Z_PADIC(2))
        check_snf(A2, Z_LOC(2))
        A3 = [[F(rng.randint(-40, 40), rng.choice([1, 2, 4])) for _ in range(n)]
              for _ in range(m)]
        check_snf(A3, Z_INV(2))
        check_snf(A3, Z_RAT())


def test_snf_random_valuation(rng):
    for trial in range(340):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = [[RatXY.monomial(rng.randint(0, 2), rng.randint(0, 2),
                             rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)]
        for w in ("V", "VhatP", "VhatM", "K", "VhatPFull"):
            if w == "VhatM":
                B = [[e.y_eval() if e.vy() is not None and e.vy() >= 0 else
                      RatXY.const(0) for e in row] for row in A]
                check_snf(B, VAL(w))
            else:
                check_snf(A, VAL(w))


def test_snf_entry_outside_world():
    from adeltors.linalg import SNFError
    with pytest.raises(SNFError):
        snf([[F(1, 2)]], Z_INT())
