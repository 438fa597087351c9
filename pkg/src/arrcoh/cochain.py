"""Finite cochain complexes and their exact cohomology.

A complex is a finite family of based free modules C^k (k in a contiguous
degree range) with differentials d^k : C^k -> C^{k+1}.  Over a field the
report carries dimensions; over Z it carries free ranks and invariant
factors (torsion) per degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from arrcoh.linalg import (
    IntegerRing,
    Matrix,
    Ring,
    ZZ,
    rank_kernel,
    smith_normal_form,
)

__all__ = ["CochainComplexData", "CohomologyReport", "complex_cohomology"]


@dataclass(frozen=True)
class CochainComplexData:
    """Degrees, dimensions and differentials of a finite cochain complex.

    ``differentials[k]`` is the matrix of d^k with shape
    (dims[k+1], dims[k]); missing keys mean zero maps.  d o d = 0 is
    verified on construction via :func:`make_complex`.
    """

    ring: Ring
    dims: Mapping[int, int]
    differentials: Mapping[int, Matrix]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def differential(self, k: int) -> Matrix:
        d = self.differentials.get(k)
        if d is not None:
            return d
        return Matrix.zeros(self.ring, self.dims.get(k + 1, 0), self.dims.get(k, 0))


def make_complex(ring: Ring, dims: Mapping[int, int], differentials: Mapping[int, Matrix]) -> CochainComplexData:
    """Validate shapes and d^2 = 0, then freeze the complex."""
    dims = dict(dims)
    for k, dim in dims.items():
        if dim < 0:
            raise ValueError(f"negative dimension in degree {k}")
    diffs = {}
    for k, mat in differentials.items():
        if mat.nrows != dims.get(k + 1, 0) or mat.ncols != dims.get(k, 0):
            raise ValueError(
                f"differential d^{k} has shape {mat.nrows}x{mat.ncols}, "
                f"expected {dims.get(k + 1, 0)}x{dims.get(k, 0)}"
            )
        if mat.nrows and mat.ncols:
            diffs[k] = mat
    for k in diffs:
        nxt = diffs.get(k + 1)
        if nxt is not None and not nxt.mul(diffs[k]).is_zero():
            raise ValueError(f"d^{k + 1} o d^{k} != 0")
    return CochainComplexData(ring=ring, dims=dims, differentials=diffs)


@dataclass(frozen=True)
class CohomologyReport:
    """Per-degree cohomology: free rank plus invariant factors over Z."""

    ring: Ring
    free_ranks: Mapping[int, int]
    torsion: Mapping[int, tuple[int, ...]] = dc_field(default_factory=dict)

    def betti(self, k: int) -> int:
        return self.free_ranks.get(k, 0)

    def torsion_at(self, k: int) -> tuple[int, ...]:
        return tuple(self.torsion.get(k, ()))

    def is_zero(self, k: int) -> bool:
        return self.betti(k) == 0 and not self.torsion_at(k)

    def nonzero_degrees(self) -> list[int]:
        degs = set(k for k, r in self.free_ranks.items() if r) | set(
            k for k, t in self.torsion.items() if t
        )
        return sorted(degs)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * r for k, r in self.free_ranks.items())

    def to_json(self) -> dict:
        out: dict = {"field": self.ring.to_json(), "cohomology": {}}
        degs = sorted(set(self.free_ranks) | set(self.torsion))
        for k in degs:
            entry: dict = {"rank": self.betti(k)}
            if self.torsion_at(k):
                entry["torsion"] = list(self.torsion_at(k))
            out["cohomology"][str(k)] = entry
        return out


def complex_cohomology(cx: CochainComplexData) -> CohomologyReport:
    """Exact cohomology of a finite complex.

    Field case: rank H^k = dim C^k - rank d^k - rank d^{k-1}.
    Z case: free rank by the same formula with rational ranks, torsion in
    degree k given by the invariant factors (>1) of d^{k-1}.
    """
    ranks: dict[int, int] = {}
    integral = isinstance(cx.ring, IntegerRing)
    for k, mat in cx.differentials.items():
        if integral:
            from fractions import Fraction

            from arrcoh.linalg import QQ

            qmat = Matrix.from_rows(QQ, [[Fraction(x) for x in row] for row in mat.entries])
            ranks[k] = rank_kernel(qmat)[0]
        else:
            ranks[k] = rank_kernel(mat)[0]
    free = {}
    torsion: dict[int, tuple[int, ...]] = {}
    for k, dim in cx.dims.items():
        free[k] = dim - ranks.get(k, 0) - ranks.get(k - 1, 0)
        if free[k] < 0:
            raise ValueError(f"negative rank in degree {k}; complex is inconsistent")
    if integral:
        for k, mat in cx.differentials.items():
            factors = smith_normal_form(mat).nontrivial
            if factors:
                torsion[k + 1] = factors
    return CohomologyReport(ring=cx.ring, free_ranks=free, torsion=torsion)
