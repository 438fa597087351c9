"""Combinatorial complement model: cell counts and twisted Betti numbers.

Untwisted Betti numbers must equal the Poincare polynomial coefficients;
that identity is the strongest cheap oracle for the whole pipeline (face
enumeration, sign propagation, boundary matrices), so it is exercised on
every pinned arrangement here.
"""

import itertools

import pytest

from arrcoh.arrangement import Arrangement, RankOneSystem, poincare_and_beta
from arrcoh.linalg import GF, QQ
from arrcoh.salvetti import (
    MAX_DIMENSION,
    MAX_HYPERPLANES,
    SalvettiComplex,
    build_salvetti,
    enumerate_faces,
    twisted_cohomology,
)


def three_generic_lines():
    return Arrangement.from_rows(2, [[1, 0], [0, 1], [1, 1]], ("a", "b", "c"))


def braid_a3_essential():
    rows, labels = [], []
    for i, j in itertools.combinations(range(4), 2):
        r = [0] * 4
        r[i], r[j] = 1, -1
        rows.append(r)
        labels.append(f"h{i}{j}")
    return Arrangement.from_rows(4, rows, labels).essentialize()


def untwisted(field, m):
    return RankOneSystem(field, (1,) * m)


# --- face enumeration -------------------------------------------------------


def test_faces_three_lines():
    fs = enumerate_faces(three_generic_lines())
    assert len(fs.faces) == 13  # 1 origin + 6 rays + 6 chambers
    assert len(fs.chambers) == 6


def test_faces_single_hyperplane():
    fs = enumerate_faces(Arrangement.from_rows(1, [[1]]))
    assert len(fs.faces) == 3
    assert len(fs.chambers) == 2


def test_faces_braid_a3():
    fs = enumerate_faces(braid_a3_essential())
    assert len(fs.faces) == 75
    assert len(fs.chambers) == 24  # |S_4|


# --- cell structure ----------------------------------------------------------


def test_cells_three_lines():
    sal = build_salvetti(three_generic_lines())
    assert sal.cell_counts() == [6, 12, 6]
    assert sal.euler_characteristic() == 0
    assert sal.dim == 2


def test_cells_braid_a3():
    sal = build_salvetti(braid_a3_essential())
    assert sal.cell_counts() == [24, 72, 72, 24]
    assert sal.euler_characteristic() == 0


def test_cells_b2():
    b2 = Arrangement.from_rows(2, [[1, 0], [0, 1], [1, 1], [1, -1]])
    sal = build_salvetti(b2)
    assert sal.cell_counts() == [8, 16, 8]
    pi, _ = poincare_and_beta(b2)
    rep = twisted_cohomology(b2, untwisted(QQ, 4), sal)
    assert rep.full_betti == tuple(pi)


def test_caps_enforced():
    too_many = Arrangement.from_rows(2, [[1, k] for k in range(MAX_HYPERPLANES + 1)])
    with pytest.raises(ValueError, match="hyperplanes"):
        enumerate_faces(too_many)
    rows = [[1 if i == j else 0 for j in range(MAX_DIMENSION + 1)] for i in range(MAX_DIMENSION + 1)]
    too_deep = Arrangement.from_rows(MAX_DIMENSION + 1, rows)
    with pytest.raises(ValueError, match="dimension"):
        enumerate_faces(too_deep)


# --- untwisted cohomology = Poincare coefficients ----------------------------


@pytest.mark.parametrize(
    "rows,n",
    [
        ([[1]], 1),
        ([[1, 0], [0, 1]], 2),
        ([[1, 0], [0, 1], [1, 1]], 2),
        ([[1, 0], [0, 1], [1, 1], [1, -1]], 2),
        ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3),
    ],
)
def test_untwisted_betti_equals_poincare(rows, n):
    a = Arrangement.from_rows(n, rows)
    pi, _ = poincare_and_beta(a)
    rep = twisted_cohomology(a, untwisted(QQ, a.m))
    assert rep.full_betti == tuple(pi)


def test_untwisted_braid_a3():
    e = braid_a3_essential()
    rep = twisted_cohomology(e, untwisted(QQ, 6))
    assert rep.full_betti == (1, 6, 11, 6)
    assert rep.projective_betti == (1, 5, 6)


# --- twisted cohomology -------------------------------------------------------


def test_twisted_three_lines_concentrates():
    a = three_generic_lines()
    rep = twisted_cohomology(a, RankOneSystem(GF(7), (2, 2, 2)))
    assert rep.full_betti == (0, 1, 1)
    assert rep.projective_betti == (0, 1)  # degree 1, dimension |beta| = 1


def test_twisted_single_hyperplane_vanishes():
    a = Arrangement.from_rows(1, [[1]])
    rep = twisted_cohomology(a, RankOneSystem(GF(7), (2,)))
    assert rep.full_betti == (0, 0)
    assert rep.projective_betti is None  # weights not projective


def test_failing_predicate_is_only_sufficient():
    a = three_generic_lines()
    # weight 1 on line c fails the support predicate, yet the actual
    # cohomology still happens to concentrate: the check is one-sided
    rep = twisted_cohomology(a, RankOneSystem(GF(7), (2, 4, 1)))
    assert rep.full_betti == (0, 1, 1)
    assert rep.projective_betti == (0, 1)


def test_trivial_weights_spread():
    a = three_generic_lines()
    rep = twisted_cohomology(a, RankOneSystem(GF(7), (1, 1, 1)))
    assert rep.full_betti == (1, 3, 2)
    assert rep.projective_betti == (1, 2)


def test_report_json():
    a = three_generic_lines()
    obj = twisted_cohomology(a, RankOneSystem(GF(7), (2, 2, 2))).to_json()
    assert obj["cells"] == [6, 12, 6]
    assert obj["betti"] == [0, 1, 1]
    assert obj["projective_betti"] == [0, 1]
    assert obj["field"] == {"kind": "prime", "p": 7}


def test_reuse_of_prebuilt_complex():
    a = three_generic_lines()
    sal = build_salvetti(a)
    r1 = twisted_cohomology(a, RankOneSystem(GF(7), (2, 2, 2)), sal)
    r2 = twisted_cohomology(a, RankOneSystem(GF(7), (3, 3, 4)), sal)
    assert r1.full_betti == (0, 1, 1)
    assert r2.full_betti == (0, 1, 1)
