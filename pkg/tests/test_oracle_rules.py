"""Rule-table consistency: every registered mixed-world identification
must stabilize under the residue-truncation oracle.  The integer side is
pushed to N = 2^10 as the outer bound; the valuation side doubles its
window twice."""

from fractions import Fraction as F

import pytest

from adeltors.classes import GradedClasses, ModuleClass
from adeltors.complexes import ChainComplex
from adeltors.homology import homology
from adeltors.oracle import (OracleMismatch, predicted_exponents,
                             val_oracle_check, x_track_dims, y_track_dims,
                             zint_oracle_check)
from adeltors.ruleoracle import validate_rule_tables
from adeltors.worlds import Z_INT


def test_zint_rule_table():
    assert validate_rule_tables("zint") >= 25


def test_val_rule_table():
    assert validate_rule_tables("valrank2") >= 35


def test_stabilization_up_to_1024():
    """One entry is run at every doubling up to N = 2^10."""
    Z = Z_INT()
    C = ChainComplex.two_term(Z, F(12))
    zint_oracle_check(C, homology(C), 2, Ns=(4, 8, 16, 32, 64, 128, 256, 512, 1024))


def test_oracle_rejects_wrong_claims(zsite):
    Z = Z_INT()
    C = ChainComplex.two_term(Z, F(4))
    with pytest.raises(OracleMismatch):
        zint_oracle_check(C, GradedClasses({0: ModuleClass.cyclic(Z, F(8))}), 2)
    with pytest.raises(OracleMismatch):
        zint_oracle_check(C, GradedClasses({0: ModuleClass.free(Z)}), 2)


def test_uct_shape_of_predictions():
    """The tor correction shows up one degree above the class."""
    Z = Z_INT()
    cls = GradedClasses({0: ModuleClass.quot("pruefer", 2)})
    pred = predicted_exponents(cls, 2, 8)
    assert pred == {1: [8]}   # pure torsion part, one degree up


def test_val_tracks_on_models(vsite):
    from adeltors.ratfunc import x as rx, y as ry
    V = vsite.base
    C = ChainComplex.two_term(V, rx() * ry())
    assert x_track_dims(C, 4) == {0: 4, 1: 4}    # Cyclic(V, xy): N and N
    assert y_track_dims(C, 4) == {0: 1, 1: 1}    # y-exponent is 1
    val_oracle_check(C, homology(C))
