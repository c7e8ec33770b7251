"""Blowup replay: rank-2 toric models, proper transforms, crepancy ledger.

Blowups of coordinate points and coordinate linear subspaces of P^n are
presented exactly as rank-2 toric quotients: a new Cox variable u, weight
rows (1,0) on u, (0,1) on the untouched coordinates and (-1,1) on the
coordinates cutting the center, with irrelevant ideal
(u, untouched) ∩ (center coordinates).  In the point case the center
coordinates are renamed x_i -> s_i.

Total transforms substitute x_i -> u * s_i; the extracted u-power equals
the multiplicity of the divisor along the center, and the residual equation
restricted to u = 0 cuts the intersection with the exceptional divisor.

Log discrepancies use the convention a_E(K + D) = 0 <=> E enters the
boundary with coefficient one (crepant for the pair).  For a (possibly
weighted) blowup along a center of a hypersurface X inside an ambient
toric variety, with transverse ambient weights w,

    a_E(K_X + D) = sum(w) - w-mult(X along center) - w-mult(D along center),

so a point of P^4 has weights (1,1,1,1), a curve in the blown-up 4-fold has
weights (1,1,1), and a weighted point blowup carries its declared weights
with the chart coordinate's 0 dropped.  Flops, Q-factoriality and named
divisorial extractions are never recomputed: they enter the ledger as
ASSUMED entries with their declared outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .qpoly import Poly
from .singlocus import ProjPoint


@dataclass(frozen=True)
class ToricAmbient:
    """Rank-2 toric presentation of a blowup of P^n along a coordinate center."""

    variables: tuple[str, ...]
    weight_matrix: tuple[tuple[int, ...], tuple[int, ...]]
    irrelevant: tuple[tuple[str, ...], tuple[str, ...]]

    def matrix_rows(self) -> list[list[int]]:
        return [list(self.weight_matrix[0]), list(self.weight_matrix[1])]


@dataclass(frozen=True)
class BlowupStep:
    """One modification step.

    kind: "point" | "linear-subspace" | "curve" | "weighted-point" |
    "named-divisorial-extraction".  ``center_vars`` lists the ambient
    coordinates cutting the center (point and subspace kinds); ``weights``
    are the transverse weights (unit for ordinary blowups, the declared
    weights for weighted ones, with the chart coordinate's 0 dropped).
    """

    kind: str
    exceptional_name: str
    center_vars: tuple[str, ...] = ()
    center_label: str = ""
    weights: tuple[int, ...] = ()
    ambient_after: ToricAmbient | None = None
    recipe: str = ""
    declared_outcomes: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "weighted-point" and any(w < 1 for w in self.weights):
            raise ValueError("weighted blowup needs weights >= 1 on germ variables")


def _rename_point_var(name: str) -> str:
    if name.startswith("x") and name[1:].isdigit():
        return "s" + name[1:]
    return "s_" + name


def blowup_center(ambient_vars: Sequence[str], center_vars: Sequence[str]) -> ToricAmbient:
    """Toric model of the blowup of P^n along {center_vars = 0}."""
    ambient_vars = tuple(ambient_vars)
    center = tuple(center_vars)
    if not set(center) <= set(ambient_vars):
        raise ValueError("center coordinates must be ambient coordinates")
    if not 1 <= len(center) <= len(ambient_vars) - 1:
        raise ValueError("center must be a proper coordinate subspace")
    is_point = len(center) == len(ambient_vars) - 1
    new_names = []
    row1 = [1]
    row2 = [0]
    for v in ambient_vars:
        if v in center:
            new_names.append(_rename_point_var(v) if is_point else v)
            row1.append(-1)
            row2.append(1)
        else:
            new_names.append(v)
            row1.append(0)
            row2.append(1)
    variables = ("u", *new_names)
    untouched = tuple(v for v in ambient_vars if v not in center)
    center_named = tuple(
        (_rename_point_var(v) if is_point else v) for v in ambient_vars if v in center
    )
    return ToricAmbient(
        variables=variables,
        weight_matrix=(tuple(row1), tuple(row2)),
        irrelevant=(("u", *untouched), center_named),
    )


def blowup_point(ambient_vars: Sequence[str], p: ProjPoint) -> ToricAmbient:
    """Blowup of P^n at a coordinate point.

    Errors on non-coordinate points: those need a recorded linear change
    first, which the caller applies through Poly.substitute.
    """
    coords = p.coords
    nonzero = [i for i, c in enumerate(coords) if c != 0]
    if len(nonzero) != 1:
        raise ValueError(f"{p} is not a coordinate point; supply a linear change first")
    keep = nonzero[0]
    center = tuple(v for i, v in enumerate(ambient_vars) if i != keep)
    return blowup_center(ambient_vars, center)


@dataclass
class TransformResult:
    u_power: int
    proper: Poly
    exceptional_restriction: Poly
    total: Poly


def total_and_proper_transform(f: Poly, step: BlowupStep) -> TransformResult:
    """Substitute the blowup relation and split off the maximal u-power.

    The u-power equals the multiplicity of {f = 0} along the center (0 when
    the center is not contained in it); the proper transform restricted to
    u = 0 cuts the intersection with the exceptional divisor.
    """
    if f.is_zero():
        raise ValueError("cannot transform the zero polynomial")
    ambient = step.ambient_after
    if ambient is None:
        raise ValueError("step carries no toric ambient")
    ring = ambient.variables
    is_point = step.kind == "point"
    u = Poly.var(ring, "u")
    assign: dict[str, Poly] = {}
    for v in f.ring:
        if v in step.center_vars:
            target = _rename_point_var(v) if is_point else v
            assign[v] = u * Poly.var(ring, target)
        else:
            assign[v] = Poly.var(ring, v)
    total = f.substitute(assign, ring=ring)
    u_index = ring.index("u")
    u_power = min(m[u_index] for m in total.terms)
    proper = Poly(
        ring,
        {
            tuple(e - u_power if i == u_index else e for i, e in enumerate(m)): c
            for m, c in total.terms.items()
        },
    )
    restriction = Poly(ring, {m: c for m, c in proper.terms.items() if m[u_index] == 0})
    return TransformResult(u_power=u_power, proper=proper, exceptional_restriction=restriction, total=total)


def log_discrepancy(step: BlowupStep, variety_mult: int, boundary_mult: int) -> int:
    """a_E(K_X + D) for the step, log-discrepancy normalisation.

    ``variety_mult`` is the (weighted) multiplicity of the ambient
    hypersurface X along the center (1 when X is smooth there), and
    ``boundary_mult`` the (weighted) multiplicity of the full boundary.
    Zero means crepant: the exceptional divisor joins the boundary reduced.
    """
    if not step.weights:
        raise ValueError("step carries no transverse weights")
    if boundary_mult > 0 and variety_mult == 0:
        raise ValueError("boundary passes through a center not on the variety")
    return sum(step.weights) - variety_mult - boundary_mult


def normal_bundle_ruled_surface(deg_a: int, deg_b: int) -> int:
    """Hirzebruch index of P(O(a) + O(b)) over P^1: |a - b|."""
    return abs(deg_a - deg_b)


@dataclass
class LedgerEntry:
    step: BlowupStep
    assumed: bool
    discrepancy: int | None = None
    joins_boundary: bool = False
    u_powers: dict[str, int] = field(default_factory=dict)
    proper_transforms: dict[str, Poly] = field(default_factory=dict)
    exceptional_restrictions: dict[str, Poly] = field(default_factory=dict)
    boundary_after: tuple[str, ...] = ()
    citation: str = ""
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.step.kind,
            "exceptional": self.step.exceptional_name,
            "center": self.step.center_label or ",".join(self.step.center_vars),
            "weights": list(self.step.weights),
            "assumed": self.assumed,
            "discrepancy": self.discrepancy,
            "joins_boundary": self.joins_boundary,
            "u_powers": dict(sorted(self.u_powers.items())),
            "proper_transforms": {k: str(v) for k, v in sorted(self.proper_transforms.items())},
            "exceptional_restrictions": {
                k: str(v) for k, v in sorted(self.exceptional_restrictions.items())
            },
            "boundary_after": list(self.boundary_after),
            "citation": self.citation,
            "flags": list(self.flags),
        }


@dataclass
class ModificationLedger:
    entries: list[LedgerEntry] = field(default_factory=list)

    def add(self, entry: LedgerEntry) -> None:
        self.entries.append(entry)

    def validate_crepancy(self) -> list[str]:
        """Every exceptional divisor added to the boundary must be crepant."""
        problems = []
        for e in self.entries:
            if e.joins_boundary and e.discrepancy not in (None, 0):
                problems.append(
                    f"{e.step.exceptional_name} joins the boundary with a_E = {e.discrepancy}"
                )
            if not e.assumed and e.discrepancy is None:
                problems.append(f"{e.step.exceptional_name}: computable step without a discrepancy")
        return problems

    def to_dict(self) -> dict:
        return {"steps": [e.to_dict() for e in self.entries]}


def apply_named_extraction(step: BlowupStep, citation: str = "") -> LedgerEntry:
    """Record a declared divisorial extraction as ASSUMED, never recomputed."""
    if step.kind != "named-divisorial-extraction":
        raise ValueError("step is not a named divisorial extraction")
    if not step.recipe.strip():
        raise ValueError("named extraction needs a recipe")
    return LedgerEntry(
        step=step,
        assumed=True,
        discrepancy=0 if step.declared_outcomes.get("crepant", True) else None,
        joins_boundary=bool(step.declared_outcomes.get("joins_boundary", True)),
        citation=citation or "declared in the case registry; not recomputed",
    )


@dataclass
class GoodDltCheck:
    """Goodness of a modification: smooth boundary components and at worst
    cyclic quotient ambient singularities."""

    boundary_components_smooth: dict[str, str]  # name -> smooth | assumed-smooth | unknown
    ambient_singularities: tuple[str, ...]  # tags: smooth | ODP | 1/2(1,1,1) | other

    _CYCLIC = ("smooth", "1/2(1,1,1)")

    @property
    def good(self) -> bool:
        comps_ok = all(v in ("smooth", "assumed-smooth") for v in self.boundary_components_smooth.values())
        ambient_ok = all(tag in self._CYCLIC for tag in self.ambient_singularities)
        return comps_ok and ambient_ok
