import random
from fractions import Fraction

import pytest

from cypairs.qpoly import Poly, parse
from cypairs.singlocus import (
    Hypersurface,
    Line,
    ProjPoint,
    is_ordinary_double_point,
    is_singular_at,
    local_germ,
    multiplicity,
    multiplicity_along_axis,
    multiplicity_along_line,
    singularity_certificate,
    verify_singular_locus,
    weighted_multiplicity,
)

P3 = ("x0", "x1", "x2", "x3")
P4 = ("x0", "x1", "x2", "x3", "x4")
XYZ = ("x", "y", "z")
XYZT = ("x", "y", "z", "t")


def pt(*coords):
    return ProjPoint([Fraction(c) for c in coords])


D31 = Hypersurface(parse("x1^4+x2^4+x3^4+x0*x1*x2*x3", P3))


def test_projpoint_normalisation():
    assert pt(2, 0, 4, 0) == pt(1, 0, 2, 0)
    with pytest.raises(ValueError):
        pt(0, 0, 0, 0)


def test_is_singular_at_case31_boundary():
    assert is_singular_at(D31, pt(1, 0, 0, 0)) is True


def test_is_singular_at_smooth_fermat_point():
    fermat = Hypersurface(parse("x0^3+x1^3+x2^3+x3^3", P3))
    with pytest.raises(ValueError):
        is_singular_at(fermat, pt(1, 0, 0, 0))  # not on the surface
    assert is_singular_at(fermat, pt(1, -1, 0, 0)) is False


def test_multiplicity_examples():
    assert multiplicity(parse("x^2+y^2+z^4", XYZ)) == 2
    assert multiplicity(parse("x*y*z", XYZ)) == 3
    assert multiplicity(parse("x", XYZ)) == 1
    with pytest.raises(ValueError):
        multiplicity(Poly.zero(XYZ))


def test_multiplicity_additive_on_products():
    rng = random.Random(11)
    for _ in range(40):
        f = _rand_germ(rng)
        g = _rand_germ(rng)
        assert multiplicity(f * g) == multiplicity(f) + multiplicity(g)


def _rand_germ(rng, ring=XYZ):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        mono = tuple(rng.randint(0, 3) for _ in ring)
        if sum(mono) == 0:
            mono = (1,) + (0,) * (len(ring) - 1)
        terms[mono] = rng.choice([-3, -2, -1, 1, 2, 3])
    p = Poly(ring, terms)
    return p if not p.is_zero() else Poly.var(ring, ring[0])


def test_odp_examples():
    assert is_ordinary_double_point(parse("x*y+z*t", XYZT)) is True
    assert is_ordinary_double_point(parse("x^2+y^2+z^2+t^3", XYZT)) is False
    assert is_ordinary_double_point(parse("x*y+z^3+t^3", XYZT)) is False
    with pytest.raises(ValueError):
        is_ordinary_double_point(parse("x^2+y^2", ("x", "y")))


def test_odp_invariant_under_unimodular_changes():
    rng = random.Random(12)
    germs = [parse("x*y+z*t", XYZT), parse("x^2+y^2+z^2+t^3", XYZT)]
    for _ in range(20):
        # random integer unimodular matrix via row operations on identity
        mat = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
        for _ in range(6):
            i, j = rng.sample(range(4), 2)
            c = rng.randint(-2, 2)
            mat[i] = [a + c * b for a, b in zip(mat[i], mat[j])]
        assign = {
            v: sum(
                (Poly.var(XYZT, w) * mat[k][l] for l, w in enumerate(XYZT)),
                Poly.zero(XYZT),
            )
            for k, v in enumerate(XYZT)
        }
        for germ in germs:
            transformed = germ.substitute(assign)
            assert is_ordinary_double_point(transformed) == is_ordinary_double_point(germ)


def test_weighted_multiplicity():
    assert weighted_multiplicity(parse("x^2+y^3+z^6+x*y*z", XYZ), (3, 2, 1)) == 6
    assert weighted_multiplicity(parse("x", ("x",)), (5,)) == 5
    with pytest.raises(ValueError):
        weighted_multiplicity(parse("x", XYZ), (1, 0, 1))
    rng = random.Random(13)
    for _ in range(40):
        f = _rand_germ(rng)
        assert weighted_multiplicity(f, (1, 1, 1)) == multiplicity(f)


def test_singularity_agrees_with_translated_multiplicity():
    rng = random.Random(14)
    surf = D31
    pts = [pt(1, 0, 0, 0), pt(1, -1, 0, 0)]
    for p in pts:
        if not surf.contains(p):
            continue
        germ = local_germ(surf, p)
        assert is_singular_at(surf, p) == (multiplicity(germ) >= 2)


def test_local_germ_t444():
    germ = local_germ(D31, pt(1, 0, 0, 0))
    assert germ == parse("x1^4+x2^4+x3^4+x1*x2*x3", ("x1", "x2", "x3"))
    assert germ.constant_term == 0 and germ.homogeneous_part(1).is_zero()


def test_verify_singular_locus_case32():
    x = Hypersurface(parse("x3*(x0^3+x1^3)+x2^4+x0*x1*x2*x3+x4*(x3^3+x4^3+x0^2*x2)", P4))
    line = Line(pt(1, 0, 0, 0, 0), pt(0, 1, 0, 0, 0), label="L")
    verdict = verify_singular_locus(x, [pt(1, -1, 0, 0, 0)], [line], check_odp=True)
    assert verdict.confirmed, verdict.errors
    (finding,) = verdict.findings
    assert finding.rational_points == [pt(1, -1, 0, 0, 0)]
    (cert,) = finding.certificates
    assert cert.count == 2 and cert.irreducible and cert.all_odp
    assert finding.point_count == 3


def test_verify_singular_locus_smooth_quartic_empty_claim():
    fermat = Hypersurface(parse("x0^4+x1^4+x2^4+x3^4+x4^4", P4))
    lines = [Line(pt(1, 0, 0, 0, 0), pt(0, 1, 0, 0, 0))]
    verdict = verify_singular_locus(fermat, [], lines)
    assert verdict.confirmed
    assert verdict.findings[0].point_count == 0


def test_verify_singular_locus_rejects_nonsingular_claim():
    verdict = verify_singular_locus(
        Hypersurface(parse("x0^3+x1^3+x2^3+x3^3", P3)), [pt(1, -1, 0, 0)], []
    )
    assert not verdict.confirmed
    assert any("not singular" in e for e in verdict.errors)


def test_verify_singular_locus_reports_extra_point():
    x = Hypersurface(parse("x3*(x0^3+x1^3)+x2^4+x0*x1*x2*x3+x4*(x3^3+x4^3+x0^2*x2)", P4))
    line = Line(pt(1, 0, 0, 0, 0), pt(0, 1, 0, 0, 0), label="L")
    verdict = verify_singular_locus(x, [], [line])
    assert not verdict.confirmed
    assert pt(1, -1, 0, 0, 0) in verdict.extra_points


def test_multiplicity_along_axis():
    germ = parse("x^2*y^2+z^2", XYZ)
    assert multiplicity_along_axis(germ, "y") == 2
    assert multiplicity_along_axis(parse("x", XYZ), "x") == 0  # axis not inside
    assert multiplicity_along_axis(parse("y", XYZ), "x") == 1


def test_multiplicity_along_line_case36():
    ring = P4
    f3 = "x0^3-2*x1^3+x1^2*x3-2*x2^3+x3^3-x3^2*x4-x3*x4^2+x4^3"
    x = Hypersurface(
        parse(
            "x1^2*x2^2+x1*x2*x3*(x0+x2-x3)+x3^2*(x0^2+x0*x1+x1*x3)"
            f"+x4*({f3})",
            ring,
        )
    )
    line_l = Line(pt(1, 0, 0, 0, 0), pt(0, 0, 1, 0, 0), label="L")
    line_lp = Line(pt(1, 0, 0, 0, 0), pt(0, 1, 0, 0, 0), label="L'")
    d = Hypersurface(parse("x1^2*x2^2+x1*x2*x3*(x0+x2-x3)+x3^2*(x0^2+x0*x1+x1*x3)", P3))
    dl = Line(pt(1, 0, 0, 0), pt(0, 0, 1, 0), label="L")
    dlp = Line(pt(1, 0, 0, 0), pt(0, 1, 0, 0), label="L'")
    assert multiplicity_along_line(d, dl) == 2
    assert multiplicity_along_line(d, dlp) == 2
    # the 3-fold itself is generically smooth along both lines
    assert multiplicity_along_line(x, line_l) == 1
    assert multiplicity_along_line(x, line_lp) == 1
    with pytest.raises(ValueError):
        multiplicity_along_line(x, Line(pt(1, 0, 0, 0, 0), pt(0, 0, 0, 0, 1)))


def test_multiplicity_along_line_smooth_is_one():
    quadric = Hypersurface(parse("x0*x3-x1*x2", P3))
    line = Line(pt(1, 0, 0, 0), pt(0, 1, 0, 0))
    assert multiplicity_along_line(quadric, line) == 1


def test_singularity_certificate_node():
    x = Hypersurface(parse("x3*(x0^3+x1^3)+x2^4+x0*x1*x2*x3+x4*(x3^3+x4^3+x0^2*x2)", P4))
    cert = singularity_certificate(x, pt(1, -1, 0, 0, 0))
    assert cert.multiplicity == 2
    assert cert.is_odp
