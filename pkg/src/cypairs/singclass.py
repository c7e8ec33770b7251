"""Classification of 2-dimensional hypersurface germs in near-normal form.

The decision tree covers terminal / du Val / simple elliptic / cusp germs
and the non-normal (slc) block: normal crossing, pinch point and degenerate
cusps.  Inputs are germs in three variables written in coordinates adjacent
to the classical normal forms; anything outside the recognised shapes gets
the UNCLASSIFIED verdict rather than a guess.

The Milnor number is computed by exact linear algebra on jets: for
truncation order k the quotient Q[x,y,z]_{<k} / trunc(Jacobian ideal) has
dimension dim O/(J + m^k), which is nondecreasing in k and stabilises
exactly when m^k lands in J (Nakayama).  Agreement of two consecutive
truncation orders is therefore a certificate, not a heuristic.

Simple elliptic germs away from the textbook normal forms (for instance
x^2 + y^3 + x*z^3 + x*y*z) are recognised through their quasi-homogeneous
weight system; genericity of the modulus is certified by the finite Milnor
number (10, 9 or 8 for the three systems respectively).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, inf
from typing import Sequence, Union

from .qpoly import Poly
from .singlocus import matrix_rank, multiplicity, quadratic_form_matrix

INF = inf

MilnorNumber = Union[int, str]  # int, "infinite" or "inconclusive"


# ----------------------------------------------------------------------
# Table-1 verdict type


@dataclass(frozen=True)
class Table1Type:
    """Symbol from the slc hypersurface classification table.

    ``family`` is one of A, D, E, X, J, T, UNCLASSIFIED, DEGENERATE_MODULUS;
    indices carry the subscripts (float('inf') marks an infinite index).
    """

    family: str
    indices: tuple = ()

    def __post_init__(self):
        f, idx = self.family, self.indices
        if f == "A":
            ok = len(idx) == 1 and (idx[0] == INF or idx[0] >= 0)
        elif f == "D":
            ok = len(idx) == 1 and (idx[0] == INF or idx[0] >= 4)
        elif f == "E":
            ok = len(idx) == 1 and idx[0] in (6, 7, 8)
        elif f == "X":
            ok = idx == (1, 0)
        elif f == "J":
            ok = idx == (2, 0)
        elif f == "T":
            ok = self._valid_t(idx)
        elif f in ("UNCLASSIFIED", "DEGENERATE_MODULUS"):
            ok = idx == ()
        else:
            ok = False
        if not ok:
            raise ValueError(f"invalid type {f} with indices {idx}")

    @staticmethod
    def _valid_t(idx: tuple) -> bool:
        if len(idx) != 3:
            return False
        finite = [i for i in idx if i != INF]
        if any(not isinstance(i, int) or i < 2 for i in finite):
            return False
        n_inf = 3 - len(finite)
        if n_inf == 0:
            p, q, r = idx
            return Fraction(1, p) + Fraction(1, q) + Fraction(1, r) <= 1
        if n_inf == 1:
            p, q = sorted(finite)
            return (p == 2 and q >= 3) or (q >= p >= 3)
        if n_inf == 2:
            (p,) = finite
            return p == 2 or p >= 3
        return True  # (inf, inf, inf)

    # constructors ------------------------------------------------------

    @classmethod
    def A(cls, n) -> "Table1Type":
        return cls("A", (n,))

    @classmethod
    def D(cls, n) -> "Table1Type":
        return cls("D", (n,))

    @classmethod
    def E(cls, n: int) -> "Table1Type":
        return cls("E", (n,))

    @classmethod
    def X10(cls) -> "Table1Type":
        return cls("X", (1, 0))

    @classmethod
    def J20(cls) -> "Table1Type":
        return cls("J", (2, 0))

    @classmethod
    def T(cls, p, q, r) -> "Table1Type":
        key = lambda v: (v == INF, v)
        p, q, r = sorted((p, q, r), key=key)
        return cls("T", (p, q, r))

    @classmethod
    def unclassified(cls) -> "Table1Type":
        return cls("UNCLASSIFIED")

    @classmethod
    def degenerate_modulus(cls) -> "Table1Type":
        return cls("DEGENERATE_MODULUS")

    # rendering ---------------------------------------------------------

    @property
    def symbol(self) -> str:
        def fmt(i):
            return "inf" if i == INF else str(i)

        if self.family in ("UNCLASSIFIED", "DEGENERATE_MODULUS"):
            return self.family
        if self.family == "X":
            return "X_{1,0}"
        if self.family == "J":
            return "J_{2,0}"
        if self.family == "T":
            return "T_{" + ",".join(fmt(i) for i in self.indices) + "}"
        return f"{self.family}{fmt(self.indices[0])}"

    def __str__(self) -> str:
        return self.symbol

    @classmethod
    def from_symbol(cls, text: str) -> "Table1Type":
        text = text.strip()
        if text in ("UNCLASSIFIED", "DEGENERATE_MODULUS"):
            return cls(text)
        if text == "X_{1,0}":
            return cls.X10()
        if text == "J_{2,0}":
            return cls.J20()
        if text.startswith("T_{") and text.endswith("}"):
            parts = text[3:-1].split(",")
            vals = tuple(INF if p.strip() == "inf" else int(p) for p in parts)
            return cls("T", vals)
        family, idx = text[0], text[1:]
        return cls(family, (INF if idx == "inf" else int(idx),))


# ----------------------------------------------------------------------
# Newton-shape analysis


@dataclass
class NewtonShape:
    """Support pattern of a 3-variable germ.

    ``axis_powers`` maps each variable to (exponent, coefficient) of its pure
    power when present; ``xyz_coeff`` is the coefficient of x*y*z (0 when
    absent); ``mixed`` is the remaining support.
    """

    axis_powers: dict[str, tuple[int, Fraction]]
    xyz_coeff: Fraction
    mixed: list[tuple[tuple[int, ...], Fraction]]
    tag: str = "other"
    data: dict = field(default_factory=dict)

    @property
    def is_axis_triple(self) -> bool:
        return self.tag.startswith("axis-triple")


def newton_type(germ: Poly) -> NewtonShape:
    """Pattern-match the support of a germ in exactly 3 variables."""
    if len(germ.ring) != 3:
        raise ValueError("newton_type expects a germ in 3 variables")
    axis: dict[str, tuple[int, Fraction]] = {}
    xyz = Fraction(0)
    mixed: list[tuple[tuple[int, ...], Fraction]] = []
    for mono, c in germ.sorted_terms():
        nz = [i for i, e in enumerate(mono) if e]
        if mono == (1, 1, 1):
            xyz = c
        elif len(nz) == 1:
            v = germ.ring[nz[0]]
            if v in axis:  # two pure powers of one variable: not a table shape
                mixed.append((mono, c))
            else:
                axis[v] = (mono[nz[0]], c)
        else:
            mixed.append((mono, c))
    shape = NewtonShape(axis_powers=axis, xyz_coeff=xyz, mixed=mixed)
    _assign_tag(shape, germ)
    return shape


def _assign_tag(shape: NewtonShape, germ: Poly) -> None:
    ring = germ.ring
    axis, mixed, xyz = shape.axis_powers, shape.mixed, shape.xyz_coeff
    if len(axis) == 3 and not mixed:
        exps = tuple(sorted(axis[v][0] for v in ring))
        shape.data["pqr"] = exps
        shape.tag = "axis-triple-with-xyz" if xyz else "axis-triple"
        return
    supp = {m for m, _ in mixed}
    if xyz == 0 and not mixed and len(axis) == 2:
        if all(e == 2 for e, _ in axis.values()):
            shape.tag = "A_inf"  # normal crossing x^2 + y^2
            return
    if xyz == 0 and len(axis) == 1 and len(mixed) <= 1:
        ((v, (e, _)),) = axis.items()
        if e == 2 and len(mixed) == 1:
            (mono, _), = mixed
            nz = sorted((ring[i], ex) for i, ex in enumerate(mono) if ex)
            others = [w for w in ring if w != v]
            pattern = {w: dict(nz).get(w, 0) for w in others}
            vals = sorted(pattern.values())
            if vals == [1, 2] and dict(nz).get(v, 0) == 0:
                shape.tag = "D_inf"  # pinch point x^2 + y^2 z
                return
            if vals == [2, 2] and dict(nz).get(v, 0) == 0:
                shape.tag = "T_2_inf_inf"  # degenerate cusp x^2 + y^2 z^2
                shape.data["square_var"] = v
                return
    if xyz == 0 and len(axis) == 2 and len(mixed) == 1:
        # x^2 + y^2 z^2 + y^q  (T_{2,q,inf}, q >= 3)
        (mono, _), = mixed
        mono_vars = {ring[i]: ex for i, ex in enumerate(mono) if ex}
        squares = [v for v, (e, _) in axis.items() if e == 2]
        for v in squares:
            rest = [w for w in ring if w != v]
            if set(mono_vars) == set(rest) and sorted(mono_vars.values()) == [2, 2]:
                other_axis = [w for w in axis if w != v]
                if len(other_axis) == 1:
                    w = other_axis[0]
                    q = axis[w][0]
                    if w in mono_vars and q >= 3:
                        shape.tag = "T_2_q_inf"
                        shape.data["q"] = q
                        return
    if xyz != 0 and not mixed:
        if not axis:
            shape.tag = "T_inf_inf_inf"
            return
        exps = sorted((e for e, _ in axis.values()))
        if len(axis) == 1 and exps[0] >= 3:
            shape.tag = "T_p_inf_inf"
            shape.data["p"] = exps[0]
            return
        if len(axis) == 2 and all(e >= 3 for e in exps):
            shape.tag = "T_p_q_inf"
            shape.data["pq"] = tuple(exps)
            return
    # du Val corank-2 shapes
    if xyz == 0:
        if _match_d_shape(shape, germ):
            return
        if _match_e7_shape(shape, germ):
            return
    shape.tag = "other"


def _match_d_shape(shape: NewtonShape, germ: Poly) -> bool:
    # x^2 + y^2 z + z^(n-1), n >= 4
    ring = germ.ring
    axis, mixed = shape.axis_powers, shape.mixed
    if len(mixed) != 1 or shape.xyz_coeff != 0:
        return False
    squares = [v for v, (e, _) in axis.items() if e == 2]
    for v in squares:
        (mono, _), = mixed
        mono_vars = {ring[i]: ex for i, ex in enumerate(mono) if ex}
        if v in mono_vars:
            continue
        others = [w for w in ring if w != v]
        if sorted(mono_vars.get(w, 0) for w in others) != [1, 2]:
            continue
        zvar = next(w for w in others if mono_vars.get(w) == 1)
        if zvar in axis and axis[zvar][0] >= 3 and len(axis) == 2:
            shape.tag = "du-val-D"
            shape.data["n"] = axis[zvar][0] + 1
            return True
    return False


def _match_e7_shape(shape: NewtonShape, germ: Poly) -> bool:
    # x^2 + y^3 + y z^3
    ring = germ.ring
    axis, mixed = shape.axis_powers, shape.mixed
    if len(mixed) != 1 or len(axis) != 2:
        return False
    (mono, _), = mixed
    mono_vars = {ring[i]: ex for i, ex in enumerate(mono) if ex}
    squares = [v for v, (e, _) in axis.items() if e == 2]
    cubes = [v for v, (e, _) in axis.items() if e == 3]
    if len(squares) == 1 and len(cubes) == 1:
        x, y = squares[0], cubes[0]
        z = next(w for w in ring if w not in (x, y))
        if mono_vars == {y: 1, z: 3}:
            shape.tag = "du-val-E7"
            return True
    return False


# ----------------------------------------------------------------------
# Hessian corank


def hessian_corank(germ: Poly) -> int:
    """3 minus the rank of the quadratic part.  Errors on a nonzero linear part."""
    if len(germ.ring) != 3:
        raise ValueError("hessian_corank expects a germ in 3 variables")
    if not germ.homogeneous_part(1).is_zero():
        raise ValueError("germ has a nonzero linear part")
    return 3 - matrix_rank(quadratic_form_matrix(germ))


# ----------------------------------------------------------------------
# Milnor number by jets


def _integer_rows(rows: list[dict[int, Fraction]]) -> list[dict[int, int]]:
    out = []
    for row in rows:
        den = 1
        for v in row.values():
            den = den * v.denominator // gcd(den, v.denominator)
        ints = {k: int(v * den) for k, v in row.items()}
        content = 0
        for v in ints.values():
            content = gcd(content, v)
        if content > 1:
            ints = {k: v // content for k, v in ints.items()}
        out.append(ints)
    return out


def _sparse_rank(rows: list[dict[int, int]]) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = max(row)
            if lead not in pivots:
                content = 0
                for v in row.values():
                    content = gcd(content, v)
                if content > 1:
                    row = {k: v // content for k, v in row.items()}
                pivots[lead] = row
                break
            piv = pivots[lead]
            a, b = piv[lead], row[lead]
            g = gcd(a, b)
            ma, mb = a // g, b // g
            new = {}
            for k in set(row) | set(piv):
                v = ma * row.get(k, 0) - mb * piv.get(k, 0)
                if v:
                    new[k] = v
            row = new
    return len(pivots)


def _monomials_below(order: int) -> list[tuple[int, int, int]]:
    out = []
    for d in range(order):
        for a in range(d + 1):
            for b in range(d - a + 1):
                out.append((a, b, d - a - b))
    return out


def jet_quotient_dimension(partials: Sequence[Poly], order: int) -> int:
    """dim of Q[x,y,z]_{<order} / trunc_{<order}(ideal generated by partials)."""
    monos = _monomials_below(order)
    index = {m: i for i, m in enumerate(monos)}
    rows: list[dict[int, Fraction]] = []
    for g in partials:
        if g.is_zero():
            continue
        ordg = g.min_degree()
        for m in _monomials_below(order - ordg):
            row: dict[int, Fraction] = {}
            for gm, c in g.terms.items():
                prod = (m[0] + gm[0], m[1] + gm[1], m[2] + gm[2])
                if sum(prod) < order:
                    row[index[prod]] = row.get(index[prod], Fraction(0)) + c
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
    rank = _sparse_rank(_integer_rows(rows))
    return len(monos) - rank


def _axis_in_singular_locus(partials: Sequence[Poly], axis: int) -> bool:
    n = len(partials)
    for g in partials:
        restricted = {m: c for m, c in g.terms.items() if all(e == 0 for j, e in enumerate(m) if j != axis)}
        if restricted:
            return False
    return True


def _common_variable_factor(partials: Sequence[Poly]) -> bool:
    nonzero = [g for g in partials if not g.is_zero()]
    n = len(nonzero[0].ring)
    for i in range(n):
        if all(all(m[i] > 0 for m in g.terms) for g in nonzero):
            return True
    return False


def milnor_number(germ: Poly, max_order: int = 16) -> MilnorNumber:
    """Milnor number of a germ at the origin, or "infinite"/"inconclusive".

    Finite answers are certified: two consecutive truncation orders agreeing
    forces stabilisation.  "infinite" is returned on an exact witness of a
    positive-dimensional singular locus (a coordinate axis or plane of
    singular points, or fewer independent partials than variables).
    """
    if germ.is_zero():
        return "infinite"
    if germ.constant_term != 0:
        raise ValueError("germ does not vanish at the origin")
    partials = [germ.derivative(v) for v in germ.ring]
    if any(g.constant_term != 0 for g in partials):
        return 0  # smooth point: Jacobian ideal is the unit ideal
    nonzero = [g for g in partials if not g.is_zero()]
    if len(nonzero) < len(germ.ring):
        # k < n equations through the origin cut a positive-dimensional locus
        return "infinite"
    if _common_variable_factor(partials):
        return "infinite"
    for axis in range(len(germ.ring)):
        if _axis_in_singular_locus(partials, axis):
            return "infinite"
    prev: int | None = None
    for order in range(4, max_order + 1, 2):
        dim = jet_quotient_dimension(partials, order)
        if prev is not None and prev == dim:
            return dim
        prev = dim
    return "inconclusive"


def milnor_profile(germ: Poly, max_order: int = 16) -> list[int]:
    """Jet quotient dimensions for k = 4, 6, ..., max_order (diagnostics)."""
    partials = [germ.derivative(v) for v in germ.ring]
    return [jet_quotient_dimension(partials, k) for k in range(4, max_order + 1, 2)]


# ----------------------------------------------------------------------
# quasi-homogeneous elliptic systems

_ELLIPTIC_SYSTEMS = (
    ((3, 2, 1), 6, "J"),   # J_{2,0} = T_{2,3,6}, Milnor number 10
    ((2, 1, 1), 4, "X"),   # X_{1,0} = T_{2,4,4}, Milnor number 9
    ((1, 1, 1), 3, "T3"),  # T_{3,3,3}, Milnor number 8
)

_ELLIPTIC_MILNOR = {"J": 10, "X": 9, "T3": 8}


def elliptic_weight_system(germ: Poly) -> tuple[tuple[int, int, int], int, str] | None:
    """Detect quasi-homogeneity for one of the three simple elliptic systems.

    Returns (weights aligned with the germ's variable order, degree, system id)
    or None.
    """
    monos = list(germ.terms)
    for weights, degree, system in _ELLIPTIC_SYSTEMS:
        for perm in set(itertools.permutations(weights)):
            if all(sum(w * e for w, e in zip(perm, m)) == degree for m in monos):
                return perm, degree, system
    return None


def _degenerate_modulus(shape: NewtonShape, germ: Poly, pqr: tuple[int, int, int]) -> bool:
    """Exact modulus test for the three elliptic normal forms.

    With axis coefficients a, b, c and x*y*z coefficient m the degeneracy
    conditions scale to m^4 = 64 a^2 b c (T_{2,4,4}), m^6 = 432 a^3 b^2 c
    (T_{2,3,6}) and m^3 = -27 a b c (T_{3,3,3}).
    """
    ring = germ.ring
    by_exp = {shape.axis_powers[v][0]: [] for v in ring}
    for v in ring:
        e, c = shape.axis_powers[v]
        by_exp.setdefault(e, []).append(c)
    m = shape.xyz_coeff
    if pqr == (2, 4, 4):
        (a,) = by_exp[2]
        b, c = by_exp[4]
        return m**4 == 64 * a**2 * b * c
    if pqr == (2, 3, 6):
        (a,) = by_exp[2]
        (b,) = by_exp[3]
        (c,) = by_exp[6]
        return m**6 == 432 * a**3 * b**2 * c
    if pqr == (3, 3, 3):
        a, b, c = by_exp[3]
        return m**3 == -27 * a * b * c
    raise ValueError(f"not an elliptic triple: {pqr}")


_ELLIPTIC_TRIPLES = {(2, 4, 4): "X", (2, 3, 6): "J", (3, 3, 3): "T3"}


def _elliptic_symbol(system: str) -> Table1Type:
    if system == "X":
        return Table1Type.X10()
    if system == "J":
        return Table1Type.J20()
    return Table1Type.T(3, 3, 3)


# ----------------------------------------------------------------------
# germ report and the decision tree


@dataclass
class GermReport:
    germ: Poly
    multiplicity: int
    corank: int | None
    milnor_number: MilnorNumber
    newton: NewtonShape
    verdict: Table1Type
    note: str = ""


def classify(germ: Poly, max_order: int = 16) -> GermReport:
    """Classify a 3-variable germ against the slc hypersurface table.

    UNCLASSIFIED is a verdict, never a crash; a degenerate modulus in one of
    the simple elliptic families is reported as DEGENERATE_MODULUS.
    """
    if len(germ.ring) != 3:
        raise ValueError("classify expects a germ in 3 variables")
    if germ.is_zero():
        return GermReport(germ, 0, None, "infinite", newton_type(germ),
                          Table1Type.unclassified(), note="zero germ")
    if germ.constant_term != 0:
        raise ValueError("germ does not vanish at the origin")
    shape = newton_type(germ)
    mult = multiplicity(germ)
    if mult == 1:
        return GermReport(germ, 1, None, 0, shape, Table1Type.A(0), note="smooth point")
    corank = hessian_corank(germ)

    if shape.is_axis_triple:
        p, q, r = shape.data["pqr"]
        s = Fraction(1, p) + Fraction(1, q) + Fraction(1, r)
        if s == 1:
            if _degenerate_modulus(shape, germ, (p, q, r)):
                return GermReport(
                    germ, mult, corank, "infinite", shape,
                    Table1Type.degenerate_modulus(),
                    note="modulus on the degeneracy locus; cone over a singular curve",
                )
            mu = milnor_number(germ, max_order)
            system = _ELLIPTIC_TRIPLES[(p, q, r)]
            if mu != _ELLIPTIC_MILNOR[system]:
                return GermReport(germ, mult, corank, mu, shape, Table1Type.unclassified(),
                                  note="elliptic normal form with unexpected Milnor number")
            return GermReport(germ, mult, corank, mu, shape, _elliptic_symbol(system))
        if s < 1 and shape.xyz_coeff != 0:
            mu = milnor_number(germ, max_order)
            return GermReport(germ, mult, corank, mu, shape, Table1Type.T(p, q, r))
        # s > 1 axis triples fall through to the du Val branch

    mu = milnor_number(germ, max_order)
    if isinstance(mu, int):
        if mult == 2 and corank <= 1:
            return GermReport(germ, mult, corank, mu, shape, Table1Type.A(mu))
        if mult == 2 and corank == 2:
            if shape.is_axis_triple:  # x^2 + y^3 + z^4 or z^5 (E6 / E8)
                p, q, r = shape.data["pqr"]
                if (p, q) == (2, 3) and r in (4, 5) and shape.xyz_coeff == 0:
                    expected = {4: 6, 5: 8}[r]
                    if mu == expected:
                        return GermReport(germ, mult, corank, mu, shape, Table1Type.E(expected))
            if shape.tag == "du-val-D" and mu == shape.data["n"]:
                return GermReport(germ, mult, corank, mu, shape, Table1Type.D(mu))
            if shape.tag == "du-val-E7" and mu == 7:
                return GermReport(germ, mult, corank, mu, shape, Table1Type.E(7))
        system = elliptic_weight_system(germ)
        if system is not None:
            _, _, sysid = system
            if mu == _ELLIPTIC_MILNOR[sysid]:
                return GermReport(
                    germ, mult, corank, mu, shape, _elliptic_symbol(sysid),
                    note="quasi-homogeneous elliptic system; genericity certified by finite Milnor number",
                )
        return GermReport(germ, mult, corank, mu, shape, Table1Type.unclassified())

    if mu == "infinite":
        verdict, note = _classify_slc(shape)
        return GermReport(germ, mult, corank, mu, shape, verdict, note=note)

    system = elliptic_weight_system(germ)
    note = "Milnor truncation did not stabilise"
    if system is not None:
        note += "; quasi-homogeneous elliptic shape with undetermined genericity"
    return GermReport(germ, mult, corank, mu, shape, Table1Type.unclassified(), note=note)


def _classify_slc(shape: NewtonShape) -> tuple[Table1Type, str]:
    tag = shape.tag
    if tag == "A_inf":
        return Table1Type.A(INF), "normal crossing"
    if tag == "D_inf":
        return Table1Type.D(INF), "pinch point"
    if tag == "T_2_inf_inf":
        return Table1Type.T(2, INF, INF), "degenerate cusp (double pinch point shape w^2 + u^2 v^2)"
    if tag == "T_2_q_inf":
        return Table1Type.T(2, shape.data["q"], INF), "degenerate cusp"
    if tag == "T_inf_inf_inf":
        return Table1Type.T(INF, INF, INF), "degenerate cusp"
    if tag == "T_p_inf_inf":
        return Table1Type.T(shape.data["p"], INF, INF), "degenerate cusp"
    if tag == "T_p_q_inf":
        p, q = shape.data["pq"]
        return Table1Type.T(p, q, INF), "degenerate cusp"
    return Table1Type.unclassified(), "non-isolated singular locus outside the table shapes"


# ----------------------------------------------------------------------
# fundamental cycle


def fundamental_cycle_classification(z_squared: int) -> str:
    """Embedding type of an elliptic surface germ from the self-intersection
    of the fundamental cycle on the minimal resolution."""
    if z_squared >= 0:
        raise ValueError("fundamental cycle self-intersection must be negative")
    if z_squared >= -3:
        return "hypersurface"
    if z_squared == -4:
        return "codimension-2 complete intersection"
    return "not a complete intersection"
