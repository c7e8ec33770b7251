"""Exact intersection calculus on P^2 and the Hirzebruch surfaces F_n.

Divisor classes are integer vectors in the standard bases: (H) on P^2 with
H^2 = 1, and (sigma, f) on F_n with sigma^2 = -n, sigma.f = 1, f^2 = 0.
Only the numerical lattice is modelled; no curve geometry.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class SurfaceLattice:
    """Picard lattice of P^2 ("P2") or a Hirzebruch surface ("Fn", n >= 0)."""

    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("P2", "Fn"):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.kind == "P2" and self.n:
            raise ValueError("P2 takes no parameter")
        if self.kind == "Fn" and self.n < 0:
            raise ValueError("Hirzebruch index must be >= 0")

    @property
    def rank(self) -> int:
        return 1 if self.kind == "P2" else 2

    @property
    def basis(self) -> tuple[str, ...]:
        return ("H",) if self.kind == "P2" else ("sigma", "f")

    def gram(self) -> list[list[int]]:
        if self.kind == "P2":
            return [[1]]
        return [[-self.n, 1], [1, 0]]

    def __str__(self) -> str:
        return "P2" if self.kind == "P2" else f"F{self.n}"


def P2() -> SurfaceLattice:
    return SurfaceLattice("P2")


def Fn(n: int) -> SurfaceLattice:
    return SurfaceLattice("Fn", n)


@dataclass(frozen=True)
class DivClass:
    lattice: SurfaceLattice
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.lattice.rank:
            raise ValueError("coordinate vector has wrong rank for the lattice")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __add__(self, other: "DivClass") -> "DivClass":
        if self.lattice != other.lattice:
            raise ValueError("lattice mismatch")
        return DivClass(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __str__(self) -> str:
        names = self.lattice.basis
        parts = []
        for c, name in zip(self.coords, names):
            if c == 0:
                continue
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}{name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def div(lattice: SurfaceLattice, *coords: int) -> DivClass:
    return DivClass(lattice, tuple(coords))


def intersect(a: DivClass, b: DivClass) -> int:
    """Intersection number of two classes on the same lattice."""
    if a.lattice != b.lattice:
        raise ValueError("lattice mismatch")
    g = a.lattice.gram()
    return sum(
        a.coords[i] * g[i][j] * b.coords[j]
        for i in range(len(g))
        for j in range(len(g))
    )


def self_intersection(a: DivClass) -> int:
    return intersect(a, a)


def anticanonical(lattice: SurfaceLattice) -> DivClass:
    """-K: 3H on P^2, 2 sigma + (n+2) f on F_n."""
    if lattice.kind == "P2":
        return DivClass(lattice, (3,))
    return DivClass(lattice, (2, lattice.n + 2))


@dataclass
class CycleVerdict:
    sums_to_anticanonical: bool
    self_intersections: list[int]
    matches_expected: bool | None

    @property
    def ok(self) -> bool:
        return self.sums_to_anticanonical and self.matches_expected is not False


def _cyclic_variants(values: Sequence[int]) -> list[tuple[int, ...]]:
    vals = list(values)
    out = []
    for seq in (vals, vals[::-1]):
        for i in range(len(seq)):
            out.append(tuple(seq[i:] + seq[:i]))
    return out


def verify_anticanonical_cycle(
    lattice: SurfaceLattice,
    components: Sequence[DivClass],
    expected_self_intersections: Sequence[int] | None = None,
) -> CycleVerdict:
    """Check the components sum to -K and report their self-intersections.

    The expected list is compared up to cyclic rotation and reversal: cycles
    carry no distinguished starting component or orientation.
    """
    if not components:
        raise ValueError("component list must be nonempty")
    total = components[0]
    for c in components[1:]:
        total = total + c
    sums = total == anticanonical(lattice)
    selfs = [self_intersection(c) for c in components]
    matches = None
    if expected_self_intersections is not None:
        matches = tuple(expected_self_intersections) in _cyclic_variants(selfs)
    return CycleVerdict(sums_to_anticanonical=sums, self_intersections=selfs, matches_expected=matches)
