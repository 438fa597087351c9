"""Cochain complexes and their exact cohomology over Z, Q and F_p."""

import pytest

from arrcoh.cochain import complex_cohomology, make_complex
from arrcoh.linalg import GF, Matrix, QQ, ZZ


def test_circle_over_q():
    # 0 -> k -> k -> 0 with zero differential: both degrees survive
    cx = make_complex(QQ, {0: 1, 1: 1}, {0: Matrix.from_rows(QQ, [[0]])})
    rep = complex_cohomology(cx)
    assert rep.betti(0) == 1 and rep.betti(1) == 1
    assert rep.euler_characteristic() == 0


def test_multiplication_by_two_over_z():
    cx = make_complex(ZZ, {0: 1, 1: 1}, {0: Matrix.from_rows(ZZ, [[2]])})
    rep = complex_cohomology(cx)
    assert rep.betti(0) == 0 and rep.betti(1) == 0
    assert rep.torsion_at(1) == (2,)
    assert rep.torsion_at(0) == ()
    assert not rep.is_zero(1)
    assert rep.nonzero_degrees() == [1]


def test_multiplication_by_two_over_f2():
    F2 = GF(2)
    cx = make_complex(F2, {0: 1, 1: 1}, {0: Matrix.from_rows(F2, [[0]])})
    rep = complex_cohomology(cx)
    assert rep.betti(0) == 1 and rep.betti(1) == 1


def test_exact_two_step():
    cx = make_complex(QQ, {0: 1, 1: 1}, {0: Matrix.from_rows(QQ, [[5]])})
    rep = complex_cohomology(cx)
    assert rep.is_zero(0) and rep.is_zero(1)
    assert rep.nonzero_degrees() == []


def test_three_term_complex():
    # 0 -> Q -> Q^2 -> Q -> 0 with d0 = (1, 0)^T, d1 = (0, 1): exact in the middle
    d0 = Matrix.from_rows(QQ, [[1], [0]])
    d1 = Matrix.from_rows(QQ, [[0, 1]])
    cx = make_complex(QQ, {0: 1, 1: 2, 2: 1}, {0: d0, 1: d1})
    rep = complex_cohomology(cx)
    assert [rep.betti(k) for k in (0, 1, 2)] == [0, 0, 0]
    assert rep.euler_characteristic() == 0


def test_d_squared_nonzero_rejected():
    d0 = Matrix.from_rows(QQ, [[1]])
    d1 = Matrix.from_rows(QQ, [[1]])
    with pytest.raises(ValueError, match="d.*o d"):
        make_complex(QQ, {0: 1, 1: 1, 2: 1}, {0: d0, 1: d1})


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError, match="shape"):
        make_complex(QQ, {0: 2, 1: 1}, {0: Matrix.from_rows(QQ, [[1, 0], [0, 1]])})


def test_negative_dimension_rejected():
    with pytest.raises(ValueError, match="negative"):
        make_complex(QQ, {0: -1}, {})


def test_missing_differentials_are_zero_maps():
    cx = make_complex(QQ, {0: 2, 3: 1}, {})
    rep = complex_cohomology(cx)
    assert rep.betti(0) == 2 and rep.betti(3) == 1
    d = cx.differential(0)
    assert d.nrows == 0 and d.ncols == 2


def test_torsion_chain_over_z():
    # d = diag(1, 2, 0) from Z^3 to Z^3
    d = Matrix.from_rows(ZZ, [[1, 0, 0], [0, 2, 0], [0, 0, 0]])
    cx = make_complex(ZZ, {0: 3, 1: 3}, {0: d})
    rep = complex_cohomology(cx)
    assert rep.betti(0) == 1  # kernel rank
    assert rep.betti(1) == 1  # cokernel free rank
    assert rep.torsion_at(1) == (2,)


def test_json_shape():
    cx = make_complex(ZZ, {0: 1, 1: 1}, {0: Matrix.from_rows(ZZ, [[2]])})
    obj = complex_cohomology(cx).to_json()
    assert obj["cohomology"]["1"] == {"rank": 0, "torsion": [2]}
    assert obj["cohomology"]["0"] == {"rank": 0}
