"""Abstract simplicial complexes: links, reduced cohomology, CM testing.

Complexes are nonvoid (they always contain the empty face) and carry an
explicit vertex order so that every chain-level object is deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from arrcoh.cochain import CochainComplexData, CohomologyReport, complex_cohomology, make_complex
from arrcoh.linalg import Matrix, Ring, ZZ

__all__ = [
    "SimplicialComplex",
    "link",
    "reduced_cohomology",
    "is_cohen_macaulay",
    "CMVerdict",
    "flag_complex",
    "enumerate_complexes",
]


class SimplicialComplex:
    """A finite abstract simplicial complex with ordered vertices."""

    def __init__(self, vertices: Sequence[Hashable], faces: Iterable[frozenset]):
        self.vertices: tuple = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        faces = set(faces)
        faces.add(frozenset())
        for f in faces:
            for v in f:
                if v not in self._vindex:
                    raise ValueError(f"face {sorted(map(repr, f))} uses unknown vertex {v!r}")
        # downward closure
        closed: set[frozenset] = set()
        for f in faces:
            fs = sorted(f, key=self._vindex.get)
            for r in range(len(fs) + 1):
                closed.update(frozenset(c) for c in itertools.combinations(fs, r))
        self.faces: frozenset = frozenset(closed)

    @classmethod
    def from_faces(cls, vertices: Sequence, faces: Iterable[Iterable]) -> "SimplicialComplex":
        return cls(vertices, [frozenset(f) for f in faces])

    @classmethod
    def from_facets(cls, vertices: Sequence, facets: Iterable[Iterable]) -> "SimplicialComplex":
        return cls(vertices, [frozenset(f) for f in facets])

    # --- structure ----------------------------------------------------------

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.faces) - 1

    def facets(self) -> list[tuple]:
        maximal = [f for f in self.faces if not any(f < g for g in self.faces)]
        return [self.sort_face(f) for f in sorted(maximal, key=self._face_key)]

    def sort_face(self, face: Iterable) -> tuple:
        return tuple(sorted(face, key=self._vindex.get))

    def _face_key(self, face: frozenset) -> tuple:
        return (len(face), tuple(sorted(self._vindex[v] for v in face)))

    def faces_of_card(self, c: int) -> list[frozenset]:
        return sorted((f for f in self.faces if len(f) == c), key=self._face_key)

    def all_faces(self) -> list[tuple]:
        return [self.sort_face(f) for f in sorted(self.faces, key=self._face_key)]

    def f_vector(self) -> list[int]:
        """Face counts by cardinality, starting with the empty face."""
        out = [0] * (self.dim + 2)
        for f in self.faces:
            out[len(f)] += 1
        return out

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets()}) <= 1

    def has_face(self, face: Iterable) -> bool:
        return frozenset(face) in self.faces

    def euler_characteristic_reduced(self) -> int:
        return sum((-1) ** (len(f) - 1) for f in self.faces)

    def canonical_key(self) -> tuple:
        """Isomorphism invariant key: lexicographically minimal facet encoding."""
        n = len(self.vertices)
        facets = [frozenset(self._vindex[v] for v in f) for f in self.facets()]
        best = None
        for perm in itertools.permutations(range(n)):
            enc = tuple(sorted(tuple(sorted(perm[i] for i in f)) for f in facets))
            if best is None or enc < best:
                best = enc
        return best

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "facets": [list(f) for f in self.facets()],
        }

    @staticmethod
    def from_json(obj: dict) -> "SimplicialComplex":
        return SimplicialComplex.from_facets(obj["vertices"], obj["facets"])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.vertices == other.vertices
            and self.faces == other.faces
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.faces))

    def __repr__(self) -> str:
        return f"SimplicialComplex({len(self.vertices)} vertices, dim {self.dim})"


def link(L: SimplicialComplex, sigma: Iterable) -> SimplicialComplex:
    """The link of a face: all tau disjoint from sigma with tau | sigma in L."""
    s = frozenset(sigma)
    if s not in L.faces:
        raise ValueError(f"{sorted(map(repr, s))} is not a face")
    faces = [f for f in L.faces if not (f & s) and (f | s) in L.faces]
    verts = [v for v in L.vertices if frozenset([v]) in faces or any(v in f for f in faces)]
    return SimplicialComplex(verts, faces)


def reduced_cochain_complex(L: SimplicialComplex, ring: Ring) -> CochainComplexData:
    """Augmented simplicial cochain complex; degree k has basis the k-faces
    (cardinality k+1), with the empty face in degree -1."""
    dims = {k: len(L.faces_of_card(k + 1)) for k in range(-1, L.dim + 1)}
    diffs = {}
    for k in range(-1, L.dim):
        source = L.faces_of_card(k + 1)
        target = L.faces_of_card(k + 2)
        tindex = {f: i for i, f in enumerate(target)}
        rows = [[0] * len(source) for _ in target]
        for j, f in enumerate(source):
            fidx = sorted(L._vindex[v] for v in f)
            for v in L.vertices:
                if v in f:
                    continue
                g = f | {v}
                ti = tindex.get(g)
                if ti is None:
                    continue
                pos = sum(1 for u in fidx if u < L._vindex[v])
                rows[ti][j] = (-1) ** pos
        diffs[k] = Matrix.from_rows(ring, rows)
    return make_complex(ring, dims, diffs)


def reduced_cohomology(L: SimplicialComplex, ring: Ring = ZZ) -> CohomologyReport:
    """Reduced simplicial cohomology of a nonvoid complex.

    The irrelevant complex {emptyset} reports rank 1 in degree -1.
    """
    return complex_cohomology(reduced_cochain_complex(L, ring))


@dataclass(frozen=True)
class CMVerdict:
    ok: bool
    dim: int
    ring: Ring
    failures: tuple = ()
    """Each failure is (face, degree, rank, torsion): a nonvanishing reduced
    cohomology group of a link away from (or torsion in) the top degree."""

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "dim": self.dim,
            "ring": self.ring.to_json(),
            "failures": [
                {"face": list(face), "degree": deg, "rank": rank, "torsion": list(tors)}
                for face, deg, rank, tors in self.failures
            ],
        }


def is_cohen_macaulay(L: SimplicialComplex, ring: Ring = ZZ) -> CMVerdict:
    """Reisner-style test: for every face s (including the empty one) the
    reduced cohomology of its link is concentrated in degree dim L - |s|,
    and over Z is torsion-free there.

    Purity is a consequence, not a hypothesis: a too-small facet has a link
    whose cohomology sits in degree -1 < dim L - |facet|.
    """
    d = L.dim
    failures = []
    for f in sorted(L.faces, key=L._face_key):
        lk = link(L, f)
        expected = d - len(f)
        report = reduced_cohomology(lk, ring)
        for k in range(-1, lk.dim + 1):
            rank_k = report.betti(k)
            tors = report.torsion_at(k)
            if k != expected and (rank_k or tors):
                failures.append((L.sort_face(f), k, rank_k, tors))
            elif k == expected and tors:
                failures.append((L.sort_face(f), k, rank_k, tors))
    return CMVerdict(ok=not failures, dim=d, ring=ring, failures=tuple(failures))


def flag_complex(vertices: Sequence, edges: Iterable[tuple]) -> SimplicialComplex:
    """Clique complex of a graph: faces are the vertex sets of cliques."""
    vset = list(vertices)
    adj = {v: set() for v in vset}
    for a, b in edges:
        if a == b:
            raise ValueError("loops not allowed")
        adj[a].add(b)
        adj[b].add(a)
    cliques: list[frozenset] = [frozenset()]
    current = [frozenset([v]) for v in vset]
    while current:
        cliques.extend(current)
        nxt = set()
        for c in current:
            for v in vset:
                if v not in c and all(v in adj[u] for u in c):
                    nxt.add(c | {v})
        current = sorted(nxt, key=lambda f: tuple(sorted(map(vset.index, f))))
    return SimplicialComplex(vset, cliques)


def enumerate_complexes(max_vertices: int) -> list[SimplicialComplex]:
    """All isomorphism classes of complexes on at most ``max_vertices``
    vertices (every vertex used), including the irrelevant complex.

    Vertices are 0..k-1; representatives are canonical under relabeling.
    """
    out: list[SimplicialComplex] = []
    for k in range(max_vertices + 1):
        subsets = [frozenset(s) for r in range(1, k + 1) for s in itertools.combinations(range(k), r)]
        subsets.sort(key=lambda s: (-len(s), tuple(sorted(s))))
        antichains: list[list[frozenset]] = []

        def grow(chosen: list[frozenset], start: int) -> None:
            antichains.append(list(chosen))
            for idx in range(start, len(subsets)):
                s = subsets[idx]
                if all(not (s <= t or t <= s) for t in chosen):
                    chosen.append(s)
                    grow(chosen, idx + 1)
                    chosen.pop()

        grow([], 0)
        seen = set()
        for facets in antichains:
            if k > 0:
                if not facets or set().union(*facets) != set(range(k)):
                    continue
            cx = SimplicialComplex.from_facets(tuple(range(k)), facets or [()])
            key = cx.canonical_key()
            if key not in seen:
                seen.add(key)
                out.append(cx)
    return out
