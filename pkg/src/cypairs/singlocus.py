"""Singular loci of projective hypersurfaces and pointwise local invariants.

Verification here is stratified, not global: the caller names the linear
strata (lines, given as two-point spans) on which singular points are claimed
to live, and the restricted Jacobian system is solved exactly in one
parameter by univariate gcd over Q.  Rational singular points come out as
coordinates; Galois-conjugate clusters come out as irreducible-factor
certificates with a count, never as approximate coordinates.

Ordinary-double-point checks at conjugate clusters stay inside Q as well:
the Hessian determinant of the translated germ is a polynomial in the line
parameter, and rank 4 at every root of a factor c(t) is equivalent to
gcd(c, det) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .qpoly import (
    Poly,
    Scalar,
    UnivPoly,
    as_univariate,
    uv_degree,
    uv_divmod,
    uv_factor_certificates,
    uv_gcd,
    uv_squarefree_part,
    uv_to_poly,
    uv_trim,
)


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^n with exact rational coordinates.

    Normalised so the first nonzero coordinate is 1; equality is equality of
    points, not of coordinate vectors.
    """

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Sequence[Scalar]):
        vals = tuple(Fraction(c) for c in coords)
        if all(v == 0 for v in vals):
            raise ValueError("projective point needs a nonzero coordinate")
        lead = next(v for v in vals if v != 0)
        object.__setattr__(self, "coords", tuple(v / lead for v in vals))

    def __str__(self) -> str:
        return "(" + ":".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Hypersurface:
    """Projective hypersurface {equation = 0} in P^n, n = len(ring) - 1."""

    equation: Poly

    def __post_init__(self):
        f = self.equation
        if f.is_zero():
            raise ValueError("hypersurface equation must be nonzero")
        if not f.is_homogeneous():
            raise ValueError("hypersurface equation must be homogeneous")
        if f.degree() < 1:
            raise ValueError("hypersurface equation must have degree >= 1")

    @property
    def ambient_dim(self) -> int:
        return len(self.equation.ring) - 1

    @property
    def degree(self) -> int:
        return self.equation.degree()

    def gradient(self) -> list[Poly]:
        return [self.equation.derivative(v) for v in self.equation.ring]

    def contains(self, p: ProjPoint) -> bool:
        return self.equation.evaluate(p.coords) == 0


@dataclass(frozen=True)
class Line:
    """Line in P^n spanned by two distinct points."""

    a: ProjPoint
    b: ProjPoint
    label: str = ""

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("line needs two distinct points")

    def chart_data(self) -> tuple[ProjPoint, tuple[Fraction, ...]]:
        """Return (a, direction) with direction zero in a's chart coordinate.

        Points of the affine chart of the line are a + t * direction; the
        remaining point is b itself (checked separately as t = infinity).
        """
        a = self.a.coords
        b = self.b.coords
        i = next(j for j, c in enumerate(a) if c != 0)  # a[i] == 1
        direction = tuple(bc - b[i] * ac for ac, bc in zip(a, b))
        return self.a, direction


@dataclass(frozen=True)
class SingularityCertificate:
    point: ProjPoint
    multiplicity: int
    tangent_cone: Poly
    is_odp: bool


@dataclass
class ConjugateCertificate:
    """Cluster of Galois-conjugate singular points on one stratum.

    ``factor`` is an irreducible (or, for degree >= 4, unfactored) univariate
    polynomial in the line parameter; the cluster has ``count`` = deg(factor)
    points.  ``all_odp`` is None when the check was not requested.
    """

    stratum: str
    factor: Poly
    count: int
    irreducible: bool
    all_odp: bool | None = None


@dataclass
class StratumFinding:
    stratum: str
    rational_points: list[ProjPoint] = field(default_factory=list)
    certificates: list[ConjugateCertificate] = field(default_factory=list)
    contained_in_singular_locus: bool = False

    @property
    def point_count(self) -> int:
        return len(self.rational_points) + sum(c.count for c in self.certificates)


@dataclass
class SingularLocusVerdict:
    findings: list[StratumFinding]
    confirmed_points: list[ProjPoint]
    extra_points: list[ProjPoint]
    missing_points: list[ProjPoint]
    errors: list[str]

    @property
    def confirmed(self) -> bool:
        return not self.errors and not self.extra_points and not self.missing_points


# ----------------------------------------------------------------------
# pointwise invariants

def multiplicity(germ: Poly) -> int:
    """Multiplicity at the origin: minimal total degree of a term."""
    if germ.is_zero():
        raise ValueError("multiplicity of the zero polynomial is undefined")
    return germ.min_degree()


def tangent_cone(germ: Poly) -> Poly:
    return germ.homogeneous_part(multiplicity(germ))


def quadratic_form_matrix(germ: Poly) -> list[list[Fraction]]:
    """Symmetric matrix of the degree-2 part (Hessian/2 convention: M[i][i]
    is the coefficient of x_i^2, M[i][j] half the coefficient of x_i x_j)."""
    n = len(germ.ring)
    q = germ.homogeneous_part(2)
    m = [[Fraction(0)] * n for _ in range(n)]
    for mono, c in q.terms.items():
        idx = [i for i, e in enumerate(mono) if e]
        if len(idx) == 1:
            m[idx[0]][idx[0]] = c
        else:
            i, j = idx
            m[i][j] = m[j][i] = c / 2
    return m


def matrix_rank(m: Sequence[Sequence[Fraction]]) -> int:
    rows = [list(r) for r in m]
    cols = len(rows[0]) if rows else 0
    rank = 0
    pivot_col = 0
    for pivot_col in range(cols):
        pivot_row = next((r for r in range(rank, len(rows)) if rows[r][pivot_col] != 0), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pr = rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][pivot_col] != 0:
                factor = rows[r][pivot_col] / pr[pivot_col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], pr)]
        rank += 1
    return rank


def is_ordinary_double_point(germ: Poly, germ_dim: int = 3) -> bool:
    """True iff the germ is x*y + z*t after a linear change: multiplicity 2
    with full-rank quadratic part in germ_dim + 1 variables."""
    if len(germ.ring) < germ_dim + 1:
        raise ValueError(f"ordinary double point test needs {germ_dim + 1} germ variables")
    if germ.is_zero() or multiplicity(germ) != 2:
        return False
    return matrix_rank(quadratic_form_matrix(germ)) == germ_dim + 1


def weighted_multiplicity(germ: Poly, weights: Sequence[int]) -> int:
    """Minimal weighted degree <weights, exponents> over the germ's terms."""
    if len(weights) != len(germ.ring):
        raise ValueError("need one weight per germ variable")
    if any(w < 1 for w in weights):
        raise ValueError("weights must be positive")
    if germ.is_zero():
        raise ValueError("weighted multiplicity of the zero polynomial is undefined")
    return min(sum(w * e for w, e in zip(weights, m)) for m in germ.terms)


def weighted_initial_part(germ: Poly, weights: Sequence[int]) -> Poly:
    w0 = weighted_multiplicity(germ, weights)
    return Poly(
        germ.ring,
        {m: c for m, c in germ.terms.items() if sum(w * e for w, e in zip(weights, m)) == w0},
    )


# ----------------------------------------------------------------------
# charts and germs

def local_germ(x: Hypersurface, p: ProjPoint) -> Poly:
    """Affine germ of the hypersurface at p, translated to the origin.

    Dehomogenises in the chart of p's leading coordinate; the germ ring is
    the remaining variable names in their original order.
    """
    ring = x.equation.ring
    i = next(j for j, c in enumerate(p.coords) if c != 0)
    aff_ring = tuple(v for j, v in enumerate(ring) if j != i)
    assign: dict[str, Poly | Fraction] = {ring[i]: Fraction(1)}
    for j, v in enumerate(ring):
        if j != i:
            assign[v] = Poly.var(aff_ring, v)
    affine = x.equation.substitute(assign, ring=aff_ring)
    point = [p.coords[j] for j in range(len(ring)) if j != i]
    return affine.translate(point)


def is_singular_at(x: Hypersurface, p: ProjPoint) -> bool:
    """Jacobian criterion.  Error if p does not lie on the hypersurface."""
    if not x.contains(p):
        raise ValueError(f"point {p} is not on the hypersurface")
    return all(g.evaluate(p.coords) == 0 for g in x.gradient())


def singularity_certificate(x: Hypersurface, p: ProjPoint) -> SingularityCertificate:
    germ = local_germ(x, p)
    mult = multiplicity(germ)
    cone = tangent_cone(germ)
    odp = len(germ.ring) >= 4 and mult == 2 and matrix_rank(quadratic_form_matrix(germ)) == len(germ.ring)
    return SingularityCertificate(point=p, multiplicity=mult, tangent_cone=cone, is_odp=odp)


# ----------------------------------------------------------------------
# stratified singular-locus verification

_PARAM = "t"


def _restrict_to_line(f: Poly, line: Line) -> UnivPoly:
    """f(a + t*direction) as a univariate polynomial in t."""
    a, direction = line.chart_data()
    ring = (_PARAM,)
    t = Poly.var(ring, _PARAM)
    assign = {
        v: t * d + Fraction(c)
        for v, c, d in zip(f.ring, a.coords, direction)
    }
    return as_univariate(f.substitute(assign, ring=ring), _PARAM)


def line_in_hypersurface(x: Hypersurface, line: Line) -> bool:
    ring = ("s", _PARAM)
    s = Poly.var(ring, "s")
    t = Poly.var(ring, _PARAM)
    assign = {
        v: s * Fraction(ca) + t * Fraction(cb)
        for v, ca, cb in zip(x.equation.ring, line.a.coords, line.b.coords)
    }
    return x.equation.substitute(assign, ring=ring).is_zero()


def _point_on_line(line: Line, t: Fraction) -> ProjPoint:
    a, direction = line.chart_data()
    return ProjPoint([c + t * d for c, d in zip(a.coords, direction)])


def _hessian_det_along_line(x: Hypersurface, line: Line) -> UnivPoly:
    """Determinant of the quadratic part of the germ at the symbolic point
    a + t*direction, as a univariate polynomial in t.

    Uses the chart of the base point's leading coordinate, so it is valid on
    the whole affine parameter range of the stratum.
    """
    ring = x.equation.ring
    a, direction = line.chart_data()
    i = next(j for j, c in enumerate(a.coords) if c != 0)
    aff = tuple(v for j, v in enumerate(ring) if j != i)
    germ_ring = aff + (_PARAM,)
    tvar = Poly.var(germ_ring, _PARAM)
    assign: dict[str, Poly | Fraction] = {ring[i]: Fraction(1)}
    for j, v in enumerate(ring):
        if j != i:
            assign[v] = Poly.var(germ_ring, v) + Fraction(a.coords[j]) + tvar * direction[j]
    germ = x.equation.substitute(assign, ring=germ_ring)
    # quadratic part in the affine variables, coefficients in Q[t]
    n = len(aff)
    tix = len(germ_ring) - 1
    mat: list[list[UnivPoly]] = [[[] for _ in range(n)] for _ in range(n)]
    for mono, c in germ.terms.items():
        spatial = mono[:tix]
        if sum(spatial) != 2:
            continue
        te = mono[tix]
        idx = [k for k, e in enumerate(spatial) if e]
        if len(idx) == 1:
            k = idx[0]
            mat[k][k] = _uv_add(mat[k][k], _uv_shift(c, te))
        else:
            k, l = idx
            half = _uv_shift(c / 2, te)
            mat[k][l] = _uv_add(mat[k][l], half)
            mat[l][k] = _uv_add(mat[l][k], half)
    return _uv_det(mat)


def _uv_shift(c: Fraction, e: int) -> UnivPoly:
    return [Fraction(0)] * e + [c]


def _uv_add(a: UnivPoly, b: UnivPoly) -> UnivPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return uv_trim(out)


def _uv_det(mat: list[list[UnivPoly]]) -> UnivPoly:
    """Determinant of a small matrix over Q[t] by cofactor expansion."""
    n = len(mat)
    if n == 0:
        return [Fraction(1)]
    if n == 1:
        return uv_trim(mat[0][0])
    from .qpoly import uv_mul

    det: UnivPoly = []
    for j in range(n):
        entry = mat[0][j]
        if not uv_trim(entry):
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in mat[1:]]
        term = uv_mul(entry, _uv_det(minor))
        if j % 2:
            term = [-v for v in term]
        det = _uv_add(det, term)
    return uv_trim(det)


def _linear_part_vanishes_mod(x: Hypersurface, line: Line, factor: UnivPoly) -> bool:
    """Check each gradient component restricted to the line is 0 mod factor."""
    for g in x.gradient():
        restricted = _restrict_to_line(g, line)
        if not restricted:
            continue
        _, rem = uv_divmod(restricted, factor)
        if uv_trim(rem):
            return False
    return True


def certify_odp_along_line(x: Hypersurface, line: Line, factor: UnivPoly) -> bool:
    """True iff every root of ``factor`` is an ordinary double point of x.

    Requires the roots to be singular points (gradient divisible by the
    factor); rank-4 of the quadratic part at every conjugate root is
    certified by gcd(factor, Hessian determinant) = 1.
    """
    if len(x.equation.ring) != 5:
        raise ValueError("conjugate ODP certification expects a 3-fold in P^4")
    if not _linear_part_vanishes_mod(x, line, factor):
        return False
    det = _hessian_det_along_line(x, line)
    if not uv_trim(det):
        return False
    g = uv_gcd(factor, det)
    return uv_degree(g) == 0


def verify_singular_locus(
    x: Hypersurface,
    claimed: Sequence[ProjPoint],
    strata: Sequence[Line],
    check_odp: bool = False,
) -> SingularLocusVerdict:
    """Confirm claimed singular points and search the strata for any others.

    Every claimed point must be singular (error otherwise).  On each stratum
    the restricted Jacobian system is solved exactly; rational solutions not
    in the claim are reported as extra points, irrational solutions as
    conjugate certificates.  ``check_odp`` additionally certifies the
    ordinary-double-point property for every rational point and conjugate
    cluster found (3-folds in P^4 only).
    """
    errors: list[str] = []
    confirmed: list[ProjPoint] = []
    for p in claimed:
        if not x.contains(p):
            errors.append(f"claimed point {p} is not on the hypersurface")
            continue
        if not is_singular_at(x, p):
            errors.append(f"claimed point {p} is not singular")
            continue
        confirmed.append(p)

    findings: list[StratumFinding] = []
    found_points: list[ProjPoint] = []
    for line in strata:
        finding = StratumFinding(stratum=line.label or str((str(line.a), str(line.b))))
        restrictions = [_restrict_to_line(g, line) for g in x.gradient()]
        nonzero = [r for r in restrictions if uv_trim(r)]
        if not nonzero:
            finding.contained_in_singular_locus = True
            findings.append(finding)
            errors.append(f"stratum {finding.stratum} lies in the singular locus")
            continue
        h: UnivPoly = nonzero[0]
        for r in nonzero[1:]:
            h = uv_gcd(h, r)
        if uv_degree(h) >= 1:
            h = uv_squarefree_part(h)
            roots, factors = uv_factor_certificates(h)
            for root, _ in roots:
                finding.rational_points.append(_point_on_line(line, root))
            for factor, irreducible in factors:
                cert = ConjugateCertificate(
                    stratum=finding.stratum,
                    factor=uv_to_poly(factor, (_PARAM,), _PARAM),
                    count=uv_degree(factor),
                    irreducible=irreducible,
                )
                if check_odp:
                    cert.all_odp = certify_odp_along_line(x, line, factor)
                    if not cert.all_odp:
                        errors.append(
                            f"conjugate cluster on {finding.stratum} is not all ordinary double points"
                        )
                finding.certificates.append(cert)
        # the point at t = infinity is the second spanning point
        if all(g.evaluate(line.b.coords) == 0 for g in x.gradient()):
            finding.rational_points.append(line.b)
        findings.append(finding)
        found_points.extend(finding.rational_points)

    claimed_set = set(claimed)
    unique_found: list[ProjPoint] = []
    for p in found_points:
        if p not in unique_found:
            unique_found.append(p)
    extra = [p for p in unique_found if p not in claimed_set]
    on_any_stratum = set(unique_found)
    missing = [
        p for p in claimed
        if p not in on_any_stratum and any(_lies_on(line, p) for line in strata)
    ]
    for p in extra:
        errors.append(f"extra rational singular point {p} found on a stratum")
    if check_odp:
        for p in unique_found:
            if p in claimed_set or p in extra:
                cert = singularity_certificate(x, p)
                if not cert.is_odp:
                    errors.append(f"singular point {p} is not an ordinary double point")
    return SingularLocusVerdict(
        findings=findings,
        confirmed_points=confirmed,
        extra_points=extra,
        missing_points=missing,
        errors=errors,
    )


def _lies_on(line: Line, p: ProjPoint) -> bool:
    # p on span(a, b) <=> all 2x2 minors of the 2x(n+1) matrix with rows
    # (coords of p, generic combination) vanish; test via rank
    a, b = line.a.coords, line.b.coords
    rows = [list(a), list(b), list(p.coords)]
    return matrix_rank(rows) <= 2


# ----------------------------------------------------------------------
# multiplicity along a line

def multiplicity_along_axis(germ: Poly, axis_var: str) -> int:
    """Multiplicity of an affine germ at the generic point of a coordinate
    axis: translate the axis variable by a formal parameter and take the
    minimal total degree in the original variables.  Returns 0 if the germ
    does not vanish along the axis."""
    if axis_var not in germ.ring:
        raise ValueError(f"unknown variable {axis_var!r}")
    if germ.is_zero():
        raise ValueError("zero germ")
    ext = germ.ring + (_PARAM,)
    assign: dict[str, Poly] = {v: Poly.var(ext, v) for v in germ.ring}
    assign[axis_var] = Poly.var(ext, axis_var) + Poly.var(ext, _PARAM)
    shifted = germ.substitute(assign, ring=ext)
    n = len(germ.ring)
    return min(sum(m[:n]) for m in shifted.terms)


def multiplicity_along_line(x: Hypersurface, line: Line) -> int:
    """Multiplicity of the hypersurface at a generic point of a contained line."""
    if not line_in_hypersurface(x, line):
        raise ValueError("line is not contained in the hypersurface")
    ring = x.equation.ring
    a, direction = line.chart_data()
    i = next(j for j, c in enumerate(a.coords) if c != 0)
    aff = tuple(v for j, v in enumerate(ring) if j != i)
    germ_ring = aff + (_PARAM,)
    tvar = Poly.var(germ_ring, _PARAM)
    assign: dict[str, Poly | Fraction] = {ring[i]: Fraction(1)}
    for j, v in enumerate(ring):
        if j != i:
            assign[v] = Poly.var(germ_ring, v) + Fraction(a.coords[j]) + tvar * direction[j]
    shifted = x.equation.substitute(assign, ring=germ_ring)
    n = len(aff)
    return min(sum(m[:n]) for m in shifted.terms)
