"""Simplicial complexes: faces, links, reduced cohomology, depth checks.

Sphere and projective-plane values are classical and easy to confirm by
hand from the face counts; they are frozen here as regression anchors.
"""

import itertools

import pytest

from arrcoh.linalg import GF, QQ, ZZ
from arrcoh.simplicial import (
    SimplicialComplex,
    enumerate_complexes,
    flag_complex,
    is_cohen_macaulay,
    link,
    reduced_cohomology,
)

# Minimal 6-vertex triangulation of the real projective plane.
RP2_FACETS = [
    (1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 3, 6), (1, 4, 5),
    (2, 3, 4), (2, 3, 5), (2, 4, 6), (3, 5, 6), (4, 5, 6),
]


def sphere_boundary(n):
    """Boundary of the n-simplex on vertices 0..n: an (n-1)-sphere."""
    verts = tuple(range(n + 1))
    facets = list(itertools.combinations(verts, n))
    return SimplicialComplex.from_facets(verts, facets)


def full_simplex(n):
    verts = tuple(range(n + 1))
    return SimplicialComplex.from_facets(verts, [verts])


# --- basic structure ---------------------------------------------------


def test_faces_closed_downward():
    L = SimplicialComplex.from_facets([1, 2, 3], [(1, 2, 3)])
    assert L.has_face((1, 2))
    assert L.has_face((3,))
    assert L.has_face(())
    assert L.f_vector() == [1, 3, 3, 1]
    assert L.dim == 2
    assert L.is_pure()


def test_unknown_vertex_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex.from_facets([1, 2], [(1, 3)])


def test_duplicate_vertices_rejected():
    with pytest.raises(ValueError):
        SimplicialComplex.from_facets([1, 1], [(1,)])


def test_irrelevant_and_empty_distinction():
    irrelevant = SimplicialComplex.from_facets([], [()])
    assert irrelevant.dim == -1
    assert irrelevant.f_vector() == [1]
    rep = reduced_cohomology(irrelevant, QQ)
    assert rep.betti(-1) == 1  # only the empty face contributes


def test_f_vector_rp2():
    L = SimplicialComplex.from_facets(range(1, 7), RP2_FACETS)
    assert L.f_vector() == [1, 6, 15, 10]
    assert L.euler_characteristic_reduced() == 0  # chi(RP^2) - 1 = 0


def test_facets_recovered():
    L = SimplicialComplex.from_faces([1, 2, 3], [(1, 2), (2, 3), (1,), (2,), (3,), ()])
    assert sorted(L.facets()) == [(1, 2), (2, 3)]
    assert not L.is_pure() or L.dim == 1


# --- links --------------------------------------------------------------


def test_link_of_vertex_in_sphere():
    S2 = sphere_boundary(3)
    lk = link(S2, (0,))
    # link of a vertex in S^2 is a circle (here: boundary of a triangle)
    assert lk.f_vector() == [1, 3, 3]
    rep = reduced_cohomology(lk, ZZ)
    assert rep.betti(1) == 1 and rep.is_zero(0)


def test_link_of_empty_face_is_whole_complex():
    L = SimplicialComplex.from_facets([1, 2, 3], [(1, 2), (2, 3)])
    lk = link(L, ())
    assert lk.faces == L.faces


def test_link_of_nonface_rejected():
    L = SimplicialComplex.from_facets([1, 2, 3], [(1, 2), (2, 3)])
    with pytest.raises(ValueError):
        link(L, (1, 3))


def test_link_in_rp2_is_circle():
    L = SimplicialComplex.from_facets(range(1, 7), RP2_FACETS)
    for v in range(1, 7):
        lk = link(L, (v,))
        rep = reduced_cohomology(lk, ZZ)
        assert rep.betti(1) == 1 and rep.is_zero(0), f"link of {v} not a circle"


# --- reduced cohomology --------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sphere_cohomology(n):
    rep = reduced_cohomology(sphere_boundary(n), ZZ)
    for k in range(-1, n):
        if k == n - 1:
            assert rep.betti(k) == 1 and rep.torsion_at(k) == ()
        else:
            assert rep.is_zero(k)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_full_simplex_acyclic(n):
    rep = reduced_cohomology(full_simplex(n), ZZ)
    assert rep.nonzero_degrees() == []


def test_two_points():
    L = SimplicialComplex.from_facets([1, 2], [(1,), (2,)])
    rep = reduced_cohomology(L, ZZ)
    assert rep.betti(0) == 1
    assert rep.is_zero(-1) and rep.is_zero(1)


def test_rp2_integral_torsion():
    L = SimplicialComplex.from_facets(range(1, 7), RP2_FACETS)
    rep = reduced_cohomology(L, ZZ)
    assert rep.betti(1) == 0 and rep.betti(2) == 0
    assert rep.torsion_at(2) == (2,)
    assert rep.torsion_at(1) == ()


def test_rp2_field_coefficients():
    L = SimplicialComplex.from_facets(range(1, 7), RP2_FACETS)
    over_q = reduced_cohomology(L, QQ)
    assert over_q.nonzero_degrees() == []
    over_f2 = reduced_cohomology(L, GF(2))
    assert over_f2.betti(1) == 1 and over_f2.betti(2) == 1
    over_f3 = reduced_cohomology(L, GF(3))
    assert over_f3.nonzero_degrees() == []


# --- Cohen-Macaulay ------------------------------------------------------


def test_cm_sphere_over_z():
    v = is_cohen_macaulay(sphere_boundary(2), ZZ)
    assert v.ok and v.failures == ()


def test_cm_disjoint_edges_fails():
    L = SimplicialComplex.from_facets([1, 2, 3, 4], [(1, 2), (3, 4)])
    v = is_cohen_macaulay(L, ZZ)
    assert not v.ok
    # witness: the full complex (link of the empty face) is disconnected
    faces = [f for f, deg, rank, tors in v.failures]
    assert () in faces
    degs = [deg for f, deg, rank, tors in v.failures if f == ()]
    assert 0 in degs


def test_cm_rp2_depends_on_coefficients():
    L = SimplicialComplex.from_facets(range(1, 7), RP2_FACETS)
    assert is_cohen_macaulay(L, QQ).ok
    assert is_cohen_macaulay(L, GF(3)).ok
    over_z = is_cohen_macaulay(L, ZZ)
    assert not over_z.ok
    assert ((), 2, 0, (2,)) in over_z.failures  # torsion below top degree
    over_f2 = is_cohen_macaulay(L, GF(2))
    assert not over_f2.ok
    assert ((), 1, 1, ()) in over_f2.failures


def test_cm_implication_z_to_fields_on_corpus():
    for L in enumerate_complexes(4):
        if is_cohen_macaulay(L, ZZ).ok:
            for ring in (QQ, GF(2), GF(3)):
                assert is_cohen_macaulay(L, ring).ok, L.facets()


def test_cm_verdict_json():
    L = SimplicialComplex.from_facets([1, 2, 3, 4], [(1, 2), (3, 4)])
    obj = is_cohen_macaulay(L, ZZ).to_json()
    assert obj["ok"] is False and obj["dim"] == 1
    assert any(f["face"] == [] and f["degree"] == 0 for f in obj["failures"])


# --- flag complexes -------------------------------------------------------


def test_flag_complex_fills_triangles():
    L = flag_complex([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert L.has_face((1, 2, 3))


def test_flag_complex_square_stays_hollow():
    L = flag_complex([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4), (1, 4)])
    assert L.dim == 1
    rep = reduced_cohomology(L, ZZ)
    assert rep.betti(1) == 1  # a 4-cycle is a circle


# --- enumeration ----------------------------------------------------------


def test_enumeration_counts():
    # complexes on exactly k labeled vertices up to isomorphism, cumulative:
    # k<=0: 1 (irrelevant), <=1: 2, <=2: 4, <=3: 9, <=4: 29, <=5: 209
    assert len(enumerate_complexes(0)) == 1
    assert len(enumerate_complexes(1)) == 2
    assert len(enumerate_complexes(2)) == 4
    assert len(enumerate_complexes(3)) == 9
    assert len(enumerate_complexes(4)) == 29


def test_enumeration_five_vertices():
    assert len(enumerate_complexes(5)) == 209


def test_canonical_key_isomorphism_invariance():
    a = SimplicialComplex.from_facets([1, 2, 3], [(1, 2), (3,)])
    b = SimplicialComplex.from_facets(["x", "y", "z"], [("z", "y"), ("x",)])
    assert a.canonical_key() == b.canonical_key()
    c = SimplicialComplex.from_facets([1, 2, 3], [(1, 2), (2, 3)])
    assert a.canonical_key() != c.canonical_key()


def test_json_round_trip():
    L = SimplicialComplex.from_facets(range(1, 7), RP2_FACETS)
    again = SimplicialComplex.from_json(L.to_json())
    assert again == L
