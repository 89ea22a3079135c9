import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from algebra import superalg
from algebra.exactnum import scalar, scale
from algebra.superalg import SuperMatrix
from errors import MixedParityError, OutOfScopeError


def test_dimensions(sl21, sl31, c3):
    assert sl21.dim == 8
    assert sl31.dim == 15
    assert c3.dim == 19


def test_equal_blocks_are_rejected():
    with pytest.raises(OutOfScopeError, match=r"A\(n,n\)"):
        superalg.build_sl(2, 2)


def test_small_c_is_rejected():
    with pytest.raises(OutOfScopeError):
        superalg.build_c(2)


def test_build_from_descriptor(sl21, c3):
    assert superalg.build({"type": "sl", "m": 2, "n": 1}) is sl21
    assert superalg.build({"type": "C", "m": 3}) is c3
    with pytest.raises(OutOfScopeError, match="incomplete"):
        superalg.build({"type": "sl", "m": 2})
    with pytest.raises(OutOfScopeError, match="unsupported"):
        superalg.build({"type": "D", "m": 2, "n": 1})


def test_odd_anticommutator(sl21):
    e13 = sl21.roots[(QQ(1), QQ(0), QQ(-1))]
    e31 = sl21.roots[(QQ(-1), QQ(0), QQ(1))]
    # E11 + E33 = h1 + h2
    assert sl21.bracket(e13, e31) == {0: QQ(1), 1: QQ(1)}
    assert sl21.label(e13) == "E13"


def test_supertrace_and_mixed_parity():
    assert SuperMatrix.unit(2, 1, 2, 2).supertrace() == QQ(-1)
    mixed = SuperMatrix(2, 1, {(0, 0): 1, (0, 2): 1})
    assert mixed.parity is None
    with pytest.raises(MixedParityError):
        superalg.superbracket(mixed, SuperMatrix.unit(2, 1, 0, 1))


def test_simple_root_vectors(sl21, c3):
    assert [sl21.label(i) for i in sl21.raising] == ["E12", "E23"]
    assert [sl21.label(i) for i in sl21.lowering] == ["E21", "E32"]
    assert c3.label(c3.cartan[0]) == "z"
    assert c3.label(c3.raising[0]) == "x[ε-δ1]"
    assert sl21.generators == sl21.raising + sl21.lowering + sl21.cartan


def test_z_grading_counts(sl21, c3):
    for A, counts in ((sl21, (2, 4, 2)), (c3, (4, 11, 4))):
        *_, grading = superalg.triangular(A)
        assert (grading.minus.dim, grading.zero.dim, grading.plus.dim) == counts


def test_z_acts_by_degree(sl21, c3):
    assert sl21.z.diagonal_entries() == [QQ(1), QQ(1), QQ(2)]
    for A in (sl21, c3):
        for i in A.indices:
            image = A.coordinates(superalg.superbracket(A.z, A.basis[i]))
            assert image == scale({i: QQ.one}, A.degree(i))


def test_coroots(sl21):
    e12 = sl21.raising[0]
    root = sl21.weight(e12)
    assert sl21.coroot(root) == {0: QQ(1)}
    with pytest.raises(OutOfScopeError, match="isotropic"):
        sl21.coroot(sl21.weight(sl21.raising[1]))


def test_canonical_weight_drops_supertrace_direction(sl21):
    assert sl21.canonical([1, 1, -1]) == (QQ(0), QQ(0), QQ(0))
    assert sl21.cartan_values(sl21.canonical([3, 1, 2])) == sl21.cartan_values([3, 1, 2])


def test_weight_from_values(sl21, c3):
    for A, values in ((sl21, [2, "1/3"]), (c3, [1, -1, 2])):
        w = A.weight_from_values(values)
        assert A.cartan_values(w) == [scalar(x) for x in values]


def test_even_split(sl21):
    # h2 = diag(0,1,1) = -1/2 h1 + 1/2 z
    assert sl21.even_split(1) == ({0: QQ(-1, 2)}, QQ(1, 2))
    with pytest.raises(MixedParityError):
        sl21.even_split(sl21.raising[1])


def test_restrict_ss_kills_z_value(c3):
    w = c3.weight_from_values([5, 1, 0])
    r = c3.restrict_ss(w)
    assert c3.z_value(r) == 0
    assert [c3.pair(r, h) for h in c3.ss_cartan] == [c3.pair(w, h) for h in c3.ss_cartan]


def test_subalgebra_views(sl21, c3):
    assert sl21.even_part().dim == 4
    assert sl21.ss_part().dim == 3
    assert c3.ss_part().dim == 10
    assert sl21.even_part() is sl21.even_part()
    with pytest.raises(OutOfScopeError):
        sl21.degree_part(1)


def test_root_datum(c3):
    datum = superalg.root_datum(c3)
    assert len(datum.even_positive) == 4
    assert len(datum.odd_positive) == 4
    assert datum.form(datum.simple[0], datum.simple[0]) == 0


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_super_antisymmetry(data):
    A = data.draw(st.sampled_from([superalg.build_sl(2, 1), superalg.build_c(3)]))
    i = data.draw(st.sampled_from(A.indices))
    j = data.draw(st.sampled_from(A.indices))
    sign = 1 if A.parity(i) and A.parity(j) else -1
    assert A.bracket(i, j) == scale(A.bracket(j, i), sign)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_bracket_preserves_weights(data):
    A = superalg.build_sl(3, 1)
    i = data.draw(st.sampled_from(A.indices))
    j = data.draw(st.sampled_from(A.indices))
    expected = tuple(a + b for a, b in zip(A.weight(i), A.weight(j)))
    for k in A.bracket(i, j):
        assert A.cartan_values(A.weight(k)) == A.cartan_values(expected)
