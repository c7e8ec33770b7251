import random
from fractions import Fraction

import pytest

from cypairs.qpoly import Poly, parse
from cypairs.singclass import (
    INF,
    GermReport,
    Table1Type,
    classify,
    elliptic_weight_system,
    fundamental_cycle_classification,
    hessian_corank,
    jet_quotient_dimension,
    milnor_number,
    milnor_profile,
    newton_type,
)

XYZ = ("x", "y", "z")


def germ(text):
    return parse(text, XYZ)


# ----------------------------------------------------------------------
# hessian corank

def test_hessian_corank():
    assert hessian_corank(germ("x^2+y^2+z^2")) == 0
    assert hessian_corank(germ("x^2+y^3+z^6+x*y*z")) == 2
    assert hessian_corank(germ("x^3+y^3+z^3+x*y*z")) == 3
    with pytest.raises(ValueError):
        hessian_corank(germ("x+y^2"))


# ----------------------------------------------------------------------
# Milnor numbers

def test_milnor_simple():
    assert milnor_number(germ("x^2+y^2+z^2")) == 1
    # direct jet oracle at the smallest truncation order
    partials = [germ("x^2+y^2+z^2").derivative(v) for v in XYZ]
    assert jet_quotient_dimension(partials, 4) == 1


def test_milnor_t444_closed_form():
    mu = milnor_number(germ("x^4+y^4+z^4+x*y*z"))
    assert mu == 4 + 4 + 4 - 1 == 11


def test_milnor_infinite_normal_crossing():
    assert milnor_number(germ("x^2+y^2")) == "infinite"
    assert milnor_number(germ("x^2+y^2*z")) == "infinite"
    assert milnor_number(germ("x*y*z")) == "infinite"
    assert milnor_number(germ("x^2*y^2-z^2")) == "infinite"


def test_milnor_an_oracle():
    for n in range(1, 7):
        assert milnor_number(germ(f"x^2+y^2+z^{n + 1}")) == n


def test_milnor_du_val_values():
    assert milnor_number(germ("x^2+y^2*z+z^4")) == 5  # D5
    assert milnor_number(germ("x^2+y^3+z^4")) == 6  # E6
    assert milnor_number(germ("x^2+y^3+y*z^3")) == 7  # E7
    assert milnor_number(germ("x^2+y^3+z^5")) == 8  # E8


def test_milnor_stabilisation_monotone():
    # once two consecutive truncation orders agree, all later ones agree
    for text in ("x^4+y^4+z^4+x*y*z", "x^2+y^3+z^6+x*y*z", "x^2+y^2*z+z^4"):
        profile = milnor_profile(germ(text), max_order=16)
        assert all(a <= b for a, b in zip(profile, profile[1:]))
        for i in range(len(profile) - 1):
            if profile[i] == profile[i + 1]:
                assert all(p == profile[i] for p in profile[i + 1:])
                break
        else:
            pytest.fail("profile never stabilised")


def test_milnor_inconclusive_on_irrational_degeneration():
    # lambda^4 = 64 a^2 b c instance: non-isolated along an irrational direction
    assert milnor_number(germ("x^2+y^4+4*z^4+4*x*y*z"), max_order=8) == "inconclusive"


def test_milnor_smooth_is_zero():
    assert milnor_number(germ("x+y^2")) == 0


# ----------------------------------------------------------------------
# newton shapes

def test_newton_type_examples():
    shape = newton_type(germ("x^3+y^3+z^4+x*y*z"))
    assert shape.tag == "axis-triple-with-xyz"
    assert shape.data["pqr"] == (3, 3, 4)
    assert newton_type(germ("x^2+y^2*z")).tag == "D_inf"
    shape = newton_type(germ("x*y*z+x^5"))
    assert shape.tag == "T_p_inf_inf" and shape.data["p"] == 5


# ----------------------------------------------------------------------
# the 17-row golden suite

GOLDEN = [
    ("x", "A0"),
    ("x^2+y^2+z^4", "A3"),
    ("x^2+z*(y^2+z^3)", "D5"),
    ("x^2+y^3+z^4", "E6"),
    ("x^2+y^3+y*z^3", "E7"),
    ("x^2+y^3+z^5", "E8"),
    ("x^2+y^4+z^4+x*y*z", "X_{1,0}"),
    ("x^2+y^3+z^6+x*y*z", "J_{2,0}"),
    ("x^3+y^3+z^3+x*y*z", "T_{3,3,3}"),
    ("x^4+y^4+z^4+x*y*z", "T_{4,4,4}"),
    ("x^2+y^2", "Ainf"),
    ("x^2+y^2*z", "Dinf"),
    ("x^2+y^2*z^2", "T_{2,inf,inf}"),
    ("x^2+y^2*(z^2+y)", "T_{2,3,inf}"),
    ("x*y*z", "T_{inf,inf,inf}"),
    ("x*y*z+x^5", "T_{5,inf,inf}"),
    ("x*y*z+x^3+y^4", "T_{3,4,inf}"),
]


@pytest.mark.parametrize("text,symbol", GOLDEN)
def test_golden_rows(text, symbol):
    report = classify(germ(text))
    assert report.verdict == Table1Type.from_symbol(symbol), (
        f"{text}: got {report.verdict.symbol}, expected {symbol}"
    )


def test_golden_milnor_values():
    assert classify(germ("x^2+y^4+z^4+x*y*z")).milnor_number == 9
    assert classify(germ("x^2+y^3+z^6+x*y*z")).milnor_number == 10
    assert classify(germ("x^3+y^3+z^3+x*y*z")).milnor_number == 8
    assert classify(germ("x^4+y^4+z^4+x*y*z")).milnor_number == 11


def test_degenerate_moduli_rejected():
    # scaled instances of lambda^4 = 64, lambda^6 = 432, lambda^3 = -27
    for text in (
        "x^2+y^4+4*z^4+4*x*y*z",
        "x^2+y^3+1/432*z^6+x*y*z",
        "x^3+y^3+z^3-3*x*y*z",
    ):
        report = classify(germ(text))
        assert report.verdict == Table1Type.degenerate_modulus(), text


def test_fermat_cubic_cone_is_t333():
    # lambda = 0 is allowed: the Fermat cubic curve is smooth
    assert classify(germ("x^3+y^3+z^3")).verdict == Table1Type.T(3, 3, 3)


def test_classification_scale_invariance():
    rng = random.Random(99)
    for text, symbol in GOLDEN:
        base = classify(germ(text)).verdict
        for _ in range(3):
            scales = {
                v: Poly.var(XYZ, v) * Fraction(rng.randint(1, 5), rng.randint(1, 5))
                for v in XYZ
            }
            scaled = germ(text).substitute(scales)
            assert classify(scaled).verdict == base, (text, str(scaled))


def test_cusp_condition_is_exact():
    # T verdicts only come with 1/p + 1/q + 1/r < 1
    for text in ("x^3+y^3+z^4+x*y*z", "x^2+y^3+z^7+x*y*z", "x^4+y^4+z^4+x*y*z"):
        report = classify(germ(text))
        assert report.verdict.family == "T"
        p, q, r = report.verdict.indices
        assert Fraction(1, p) + Fraction(1, q) + Fraction(1, r) < 1


def test_case_34_cusp():
    report = classify(germ("x^3+y^3+z^4+x*y*z"))
    assert report.verdict == Table1Type.T(3, 3, 4)
    assert report.milnor_number == 9


def test_double_pinch_point_verdicts():
    minus = classify(germ("x^2*y^2-z^2"))
    plus = classify(germ("x^2*y^2+z^2"))
    for report in (minus, plus):
        assert report.verdict == Table1Type.T(2, INF, INF)
        assert "double pinch" in report.note
        assert report.milnor_number == "infinite"
        assert report.multiplicity == 2


def test_quasi_homogeneous_elliptic_germs():
    # boundary germs of the weighted-blowup case: not in normal form
    g1 = germ("x^2+y^3+x*z^3+x*y*z")  # weights (3,2,1), degree 6
    report = classify(g1)
    assert report.verdict == Table1Type.J20()
    assert report.milnor_number == 10
    assert elliptic_weight_system(g1) is not None


def test_unclassified_is_a_verdict():
    report = classify(germ("x^5+y^7+x*y*z^9"))
    assert report.verdict == Table1Type.unclassified()


def test_fundamental_cycle_classification():
    assert fundamental_cycle_classification(-1) == "hypersurface"
    assert fundamental_cycle_classification(-3) == "hypersurface"
    assert fundamental_cycle_classification(-4) == "codimension-2 complete intersection"
    assert fundamental_cycle_classification(-7) == "not a complete intersection"
    with pytest.raises(ValueError):
        fundamental_cycle_classification(0)


def test_table1_type_symbols_roundtrip():
    for sym in ("A0", "A5", "Ainf", "D4", "Dinf", "E7", "X_{1,0}", "J_{2,0}",
                "T_{3,3,3}", "T_{4,4,4}", "T_{2,inf,inf}", "T_{2,5,inf}",
                "T_{inf,inf,inf}", "UNCLASSIFIED", "DEGENERATE_MODULUS"):
        assert Table1Type.from_symbol(sym).symbol.replace("inf", "inf") == Table1Type.from_symbol(sym).symbol
        assert Table1Type.from_symbol(Table1Type.from_symbol(sym).symbol) == Table1Type.from_symbol(sym)


def test_table1_side_conditions_enforced():
    with pytest.raises(ValueError):
        Table1Type("T", (2, 2, 2))  # 1/2+1/2+1/2 > 1
    with pytest.raises(ValueError):
        Table1Type("T", (2, 2, INF))  # q >= 3 required
    with pytest.raises(ValueError):
        Table1Type("D", (3,))
    with pytest.raises(ValueError):
        Table1Type("E", (9,))
