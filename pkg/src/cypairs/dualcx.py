"""Regular cell complexes for dual complexes of boundary divisors.

A complex is built from strata data: one vertex per boundary component, one
edge per irreducible curve in a pairwise intersection, one 2-cell per point
of a triple intersection.  Cells may be non-simplicial (a 2-cell glued along
a full 3-edge circuit); parallel edges between the same two vertices are
distinct cells, so boundary circuits must be supplied explicitly whenever a
facet pair occurs with multiplicity.

Homology is over Z/2, computed by exact rank of the boundary matrices; PL
types are certified only at the invariant level (dimension, Euler
characteristic, mod-2 Betti numbers, cell pattern) against a small catalog.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

CellKey = tuple
EdgeRef = tuple[frozenset, int]  # (pair of component names, copy index)


@dataclass(frozen=True)
class Stratum:
    """One declared stratum: the set of components whose intersection it is,
    and how many irreducible pieces that intersection has."""

    members: frozenset
    count: int = 1
    # for non-simplicial or parallel-edge situations: one circuit per 2-cell,
    # each circuit a sequence of (pair, copy_index) edge references
    circuits: tuple[tuple[EdgeRef, ...], ...] | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("stratum count must be >= 1")
        if len(self.members) < 2:
            raise ValueError("strata are intersections of >= 2 components")


def stratum(members: Iterable[str], count: int = 1, circuits=None) -> Stratum:
    circ = None
    if circuits is not None:
        circ = tuple(
            tuple((frozenset(pair), idx) for pair, idx in circuit) for circuit in circuits
        )
    return Stratum(frozenset(members), count, circ)


@dataclass
class Cell:
    dim: int
    key: CellKey
    label: str
    boundary: tuple[CellKey, ...]  # facet keys with multiplicity


class CellComplex:
    """Regular cell complex with cells in dimensions 0..2."""

    def __init__(self, cells: Mapping[int, Sequence[Cell]]):
        self.cells: dict[int, list[Cell]] = {d: list(cells.get(d, [])) for d in (0, 1, 2)}
        self._by_key = {c.key: c for d in self.cells for c in self.cells[d]}
        self._validate()

    def _validate(self) -> None:
        for d in (1, 2):
            for cell in self.cells[d]:
                if not cell.boundary:
                    raise ValueError(f"{d}-cell {cell.label} has an empty facet set")
                for fk in cell.boundary:
                    facet = self._by_key.get(fk)
                    if facet is None or facet.dim != d - 1:
                        raise ValueError(f"missing facet {fk} of cell {cell.label}")
        # boundary of boundary vanishes over Z/2
        for cell in self.cells[2]:
            vertex_parity: dict[CellKey, int] = {}
            for ek in cell.boundary:
                for vk in self._by_key[ek].boundary:
                    vertex_parity[vk] = vertex_parity.get(vk, 0) ^ 1
            if any(vertex_parity.values()):
                raise ValueError(
                    f"boundary circuit of 2-cell {cell.label} is not a closed Z/2 cycle"
                )

    # ------------------------------------------------------------------

    def cell_counts(self) -> tuple[int, int, int]:
        return (len(self.cells[0]), len(self.cells[1]), len(self.cells[2]))

    @property
    def dimension(self) -> int:
        return max((d for d in (0, 1, 2) if self.cells[d]), default=-1)

    def euler_characteristic(self) -> int:
        v, e, f = self.cell_counts()
        return v - e + f

    def boundary_matrix(self, d: int) -> list[list[int]]:
        """Z/2 boundary matrix from d-cells (columns) to (d-1)-cells (rows)."""
        rows = self.cells[d - 1]
        cols = self.cells[d]
        index = {c.key: i for i, c in enumerate(rows)}
        mat = [[0] * len(cols) for _ in rows]
        for j, cell in enumerate(cols):
            for fk in cell.boundary:
                mat[index[fk]][j] ^= 1
        return mat

    def is_regular(self) -> bool:
        """Every edge has two distinct endpoints and every 2-cell circuit
        passes each vertex through exactly two of its edges."""
        for edge in self.cells[1]:
            if len(set(edge.boundary)) != 2:
                return False
        for cell in self.cells[2]:
            incidence: dict[CellKey, int] = {}
            for ek in cell.boundary:
                for vk in self._by_key[ek].boundary:
                    incidence[vk] = incidence.get(vk, 0) + 1
            if any(v != 2 for v in incidence.values()):
                return False
        return True


def _gf2_rank(mat: list[list[int]]) -> int:
    mat = [row[:] for row in mat]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                mat[r] = [a ^ b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def homology_mod2(c: CellComplex) -> tuple[int, ...]:
    """Mod-2 Betti numbers up to the dimension of the complex."""
    if c.dimension < 0:
        return ()
    counts = c.cell_counts()
    ranks = [0, 0, 0]  # rank of boundary maps d=1, 2 (index by d)
    for d in (1, 2):
        if counts[d] and counts[d - 1]:
            ranks[d] = _gf2_rank(c.boundary_matrix(d))
    betti = []
    for d in range(c.dimension + 1):
        kernel = counts[d] - (ranks[d] if d >= 1 else 0)
        image = ranks[d + 1] if d + 1 <= 2 else 0
        betti.append(kernel - image)
    return tuple(betti)


# ----------------------------------------------------------------------
# construction from strata


def build(components: Sequence[str], strata: Sequence[Stratum]) -> CellComplex:
    """Build the dual complex from declared strata.

    Components become vertices.  Each pair stratum with count k contributes k
    parallel edges; each triple stratum contributes 2-cells whose boundary
    circuits default to one copy of each facet edge (valid only when all
    three facet pairs have count 1) and must be supplied explicitly
    otherwise.  Intersections of four or more components are rejected: the
    ambient 3-fold geometry has no strata of that depth.
    """
    components = list(components)
    if len(set(components)) != len(components):
        raise ValueError("duplicate component names")
    vertices = [Cell(0, ("v", name), name, ()) for name in components]
    known = set(components)
    edges: list[Cell] = []
    faces: list[Cell] = []
    pair_counts: dict[frozenset, int] = {}
    for s in strata:
        if not s.members <= known:
            raise ValueError(f"stratum {sorted(s.members)} uses unknown components")
        if len(s.members) == 2:
            pair_counts[s.members] = pair_counts.get(s.members, 0) + s.count
    for pair, count in sorted(pair_counts.items(), key=lambda kv: sorted(kv[0])):
        a, b = sorted(pair)
        for i in range(count):
            label = f"{a}&{b}" + (f"#{i}" if count > 1 else "")
            edges.append(Cell(1, ("e", (a, b), i), label, (("v", a), ("v", b))))
    edge_keys = {c.key for c in edges}
    for s in strata:
        if len(s.members) == 2:
            continue
        if len(s.members) != 3:
            raise ValueError(
                f"stratum of {len(s.members)} components: dual complexes of"
                " 3-fold pairs have cells of dimension <= 2"
            )
        trio = sorted(s.members)
        facet_pairs = [frozenset((trio[i], trio[j])) for i in range(3) for j in range(i + 1, 3)]
        for pair in facet_pairs:
            if pair_counts.get(pair, 0) < 1:
                raise ValueError(f"missing facet {sorted(pair)} for stratum {trio}")
        if s.circuits is None:
            if any(pair_counts[p] > 1 for p in facet_pairs):
                raise ValueError(
                    f"stratum {trio} needs explicit boundary circuits: parallel facet edges"
                )
            circuits = tuple(
                tuple((p, 0) for p in facet_pairs) for _ in range(s.count)
            )
        else:
            if len(s.circuits) != s.count:
                raise ValueError(f"stratum {trio} declares {s.count} cells but {len(s.circuits)} circuits")
            circuits = s.circuits
        for i, circuit in enumerate(circuits):
            boundary = []
            for pair, idx in circuit:
                a, b = sorted(pair)
                key = ("e", (a, b), idx)
                if key not in edge_keys:
                    raise ValueError(f"circuit of stratum {trio} uses missing edge {sorted(pair)}#{idx}")
                boundary.append(key)
            label = "&".join(trio) + (f"#{i}" if s.count > 1 else "")
            faces.append(Cell(2, ("f", tuple(trio), i), label, tuple(boundary)))
    return CellComplex({0: vertices, 1: edges, 2: faces})


# ----------------------------------------------------------------------
# fingerprints


@dataclass(frozen=True)
class PLFingerprint:
    dimension: int
    euler: int
    betti_mod2: tuple[int, ...]
    cells: tuple[int, int, int]
    catalog_match: str  # point | interval | circle | disk B2 | sphere S2 | tetrahedron-boundary | other


def _vertex_degrees(c: CellComplex) -> dict[CellKey, int]:
    deg: dict[CellKey, int] = {v.key: 0 for v in c.cells[0]}
    for e in c.cells[1]:
        for vk in e.boundary:
            deg[vk] += 1
    return deg


def _catalog_match(c: CellComplex, betti: tuple[int, ...]) -> str:
    v, e, f = c.cell_counts()
    dim = c.dimension
    if dim == 0:
        return "point" if v == 1 else "other"
    degrees = list(_vertex_degrees(c).values())
    if dim == 1:
        if betti == (1, 0) and all(d <= 2 for d in degrees):
            return "interval"
        if betti == (1, 1) and all(d == 2 for d in degrees):
            return "circle"
        return "other"
    if dim == 2:
        if not c.is_regular():
            return "other"
        if betti == (1, 0, 1) and (v, e, f) == (4, 6, 4) and _is_boundary_of_simplex(c):
            return "tetrahedron-boundary"
        if betti == (1, 0, 1) and (v, e, f) == (3, 3, 2) and _is_double_disk(c):
            return "sphere S2"
        if betti == (1, 0, 0) and f == 1 and _is_single_disk(c):
            return "disk B2"
        return "other"
    return "other"


def _is_boundary_of_simplex(c: CellComplex) -> bool:
    v, e, f = c.cell_counts()
    if (v, e, f) != (4, 6, 4):
        return False
    vertex_keys = [x.key for x in c.cells[0]]
    pairs = {frozenset(x.boundary) for x in c.cells[1]}
    if len(pairs) != 6:
        return False
    triangles = set()
    for face in c.cells[2]:
        verts = set()
        for ek in face.boundary:
            verts |= set(c._by_key[ek].boundary)
        if len(face.boundary) != 3 or len(verts) != 3:
            return False
        triangles.add(frozenset(verts))
    return len(triangles) == 4


def _is_double_disk(c: CellComplex) -> bool:
    # two 2-cells glued along a common 3-edge circuit which is the whole
    # 1-skeleton, itself a triangle
    v, e, f = c.cell_counts()
    if (v, e, f) != (3, 3, 2):
        return False
    degrees = list(_vertex_degrees(c).values())
    if any(d != 2 for d in degrees):
        return False
    all_edges = tuple(sorted(x.key for x in c.cells[1]))
    return all(
        tuple(sorted(face.boundary)) == all_edges and len(face.boundary) == 3
        for face in c.cells[2]
    )


def _is_single_disk(c: CellComplex) -> bool:
    v, e, f = c.cell_counts()
    if f != 1:
        return False
    face = c.cells[2][0]
    if sorted(face.boundary) != sorted(x.key for x in c.cells[1]):
        return False
    if len(set(face.boundary)) != len(face.boundary):
        return False
    degrees = list(_vertex_degrees(c).values())
    return all(d == 2 for d in degrees) and v == e


def fingerprint(c: CellComplex) -> PLFingerprint:
    """Invariant-level PL fingerprint with a conservative catalog match.

    The catalog only fires on patterns whose PL type is forced by the cell
    data (boundary of a 3-simplex, two disks glued along a triangle, a
    single disk, cycle and path graphs, a point); everything else is
    reported as "other" rather than over-claimed.
    """
    betti = homology_mod2(c)
    return PLFingerprint(
        dimension=c.dimension,
        euler=c.euler_characteristic(),
        betti_mod2=betti,
        cells=c.cell_counts(),
        catalog_match=_catalog_match(c, betti) if c.dimension >= 0 else "other",
    )


def link_of_vertex(c: CellComplex, vertex_name: str) -> CellComplex:
    """Link of a vertex: d-cells are the (d+1)-cells through it, with the
    induced incidences."""
    vkey = ("v", vertex_name)
    if vkey not in c._by_key:
        raise ValueError(f"no vertex named {vertex_name!r}")
    link_vertices = []
    edge_at_v = {}
    for e in c.cells[1]:
        if vkey in e.boundary:
            key = ("lv", e.key)
            edge_at_v[e.key] = key
            link_vertices.append(Cell(0, key, e.label, ()))
    link_edges = []
    for face in c.cells[2]:
        incident = [ek for ek in face.boundary if ek in edge_at_v]
        if not incident:
            continue
        if len(incident) != 2:
            raise ValueError(
                f"2-cell {face.label} passes vertex {vertex_name!r} {len(incident)} times;"
                " link is not a regular complex"
            )
        link_edges.append(
            Cell(1, ("le", face.key), face.label, tuple(edge_at_v[ek] for ek in incident))
        )
    return CellComplex({0: link_vertices, 1: link_edges})


def is_maximal_intersection(c: CellComplex, ambient_dim: int) -> bool:
    """True iff the complex has dimension ambient_dim - 1."""
    return c.dimension == ambient_dim - 1
