import pytest
from sympy.polys.domains import QQ

from algebra import exactnum, loopeval, repcore
from algebra.loopeval import IdealSpec, LaurentPoly
from errors import DimensionMismatchError, OutOfScopeError, WindowTooSmallError

E1 = [1, 0, 0]


def test_reduce_powers_modulo_ideal():
    I = IdealSpec((2, 3), (1, 1))
    assert I.reduce(1) == {1: QQ(1)}
    # t^2 = 5t - 6
    assert I.reduce(2) == {0: QQ(-6), 1: QQ(5)}
    # t * (5/6 - t/6) = 1
    assert I.reduce(-1) == {0: QQ(5, 6), 1: QQ(-1, 6)}
    assert I.coefficients == (QQ(6), QQ(-5), QQ(1))


def test_reduce_poly_is_linear():
    I = IdealSpec((1,), (2,))
    f = LaurentPoly({2: 1, -1: 3})
    expected = dict(I.reduce(2))
    for k, c in I.reduce(-1).items():
        expected[k] = expected.get(k, QQ.zero) + 3 * c
    assert I.reduce_poly(f) == {k: c for k, c in expected.items() if c}


@pytest.mark.parametrize(
    "points, mults, error",
    [
        ((), (), OutOfScopeError),
        ((1, 2), (1,), DimensionMismatchError),
        ((0,), (1,), OutOfScopeError),
        ((2, 2), (1, 1), OutOfScopeError),
        ((2,), (0,), OutOfScopeError),
    ],
)
def test_invalid_ideals(points, mults, error):
    with pytest.raises(error):
        IdealSpec(points, mults)


def test_ideal_properties():
    I = IdealSpec(("1/2", -1), (2, 1))
    assert I.theta == 3
    assert not I.is_radical
    assert I.radical() == IdealSpec.radical_at(["1/2", -1])
    assert I.to_json() == {"points": ["1/2", "-1"], "mults": [2, 1]}
    assert loopeval.derived_poly(IdealSpec((1, 2), (2, 1))) == LaurentPoly({0: 2, 1: -3, 2: 1})


def test_laurent_arithmetic():
    f = LaurentPoly({-1: 1, 0: 2})
    g = f * LaurentPoly.monomial(1)
    assert g == LaurentPoly({0: 1, 1: 2})
    assert g(3) == QQ(7)
    assert (f + LaurentPoly({0: -2})) == LaurentPoly.monomial(-1)
    assert LaurentPoly({3: 0}) == LaurentPoly()


def test_quotient_algebra_is_shared(sl21):
    Q = loopeval.quotient_algebra(sl21, IdealSpec((2, 3), (1, 1)))
    assert loopeval.quotient_algebra(sl21, IdealSpec.radical_at([2, 3])) is Q
    assert Q.dim == 16
    assert Q.label(Q.index(sl21.raising[0], 1)) == "E12⊗t^1"


def test_quotient_bracket_reduces_degrees(sl21):
    Q = loopeval.quotient_algebra(sl21, IdealSpec((2, 3), (1, 1)))
    e, f = sl21.raising[0], sl21.lowering[0]
    # [e t, f t] = h1 t^2 = h1 (5t - 6)
    assert Q.bracket(Q.index(e, 1), Q.index(f, 1)) == {Q.index(0, 0): QQ(-6), Q.index(0, 1): QQ(5)}
    assert Q.element(0, LaurentPoly.monomial(2)) == {Q.index(0, 0): QQ(-6), Q.index(0, 1): QQ(5)}


def test_crt_image_needs_radical_ideal(sl21):
    Q = loopeval.quotient_algebra(sl21, IdealSpec((2, 3), (1, 1)))
    assert Q.crt_image(Q.index(1, 1)) == {(0, 1): QQ(2), (1, 1): QQ(3)}
    nonradical = loopeval.quotient_algebra(sl21, IdealSpec((1,), (2,)))
    with pytest.raises(OutOfScopeError):
        nonradical.crt_image(0)


def test_evaluation_module_at_two_points(sl21):
    M = loopeval.evaluation_module(sl21, [E1, E1], [2, 3])
    assert M.dim == 9
    assert M.algebra.ideal == IdealSpec.radical_at([2, 3])
    assert repcore.check_bracket_soundness(M) == []
    assert repcore.is_irreducible(M)


def test_evaluation_module_length_mismatch(sl21):
    with pytest.raises(DimensionMismatchError):
        loopeval.evaluation_module(sl21, [E1], [2, 3])


def test_loop_action_at_one_point(sl21):
    M = loopeval.evaluation_module(sl21, [E1], [2])
    loop = loopeval.LoopAction(M)
    for x in (sl21.raising[0], sl21.lowering[-1], sl21.cartan[0]):
        assert exactnum.equal(loop.action(x, 3), M.actions[x].mul(QQ(8)))
    with pytest.raises(OutOfScopeError):
        loop.action(sl21.cartan[0], -1)


def test_loop_action_satisfies_ideal(sl21):
    M = loopeval.evaluation_module(sl21, [E1, E1], [2, 3])
    loop = loopeval.LoopAction(M)
    zero = exactnum.zeros(M.dim, M.dim)
    for x in sl21.indices:
        assert not exactnum.equal(loop.action(x, 2), zero)
        for s in range(4):
            assert exactnum.equal(loop.polynomial(x, M.algebra.ideal.coefficients, s), zero)


def test_psi_values(sl21):
    psi = loopeval.psi_from(sl21, [E1, E1], [2, 3])
    assert psi(0, 0) == QQ(2)
    assert psi(0, 2) == QQ(13)


@pytest.mark.parametrize(
    "lambdas, points, r",
    [
        ([E1, E1], [1, -1], 2),
        ([E1, E1], [2, 3], 1),
        ([E1], ["1/2"], 1),
        ([[0, 0, 0], [0, 0, 0]], [1, -1], 0),
    ],
)
def test_detect_period(sl21, lambdas, points, r):
    assert loopeval.detect_period(sl21, lambdas, points) == r


def test_graded_loop_module_slices(sl21):
    M = loopeval.evaluation_module(sl21, [[0, 0, 1]], [2])
    Vhat = loopeval.loop_module(M, "1/2")
    character = Vhat.slice_character(0)
    assert sum(character.values()) == 4
    assert {d for _, d in character} == {QQ(1, 2)}
    assert Vhat.shifted(1).d_eigenvalue(0) == QQ(3, 2)
    assert Vhat.window_matrix(sl21.raising[0], 1, -1, 1).shape == (12, 12)
    with pytest.raises(OutOfScopeError):
        loopeval.loop_module(loopeval.full_module(sl21, E1))


def test_window_matrix_moves_degrees(sl21):
    M = loopeval.evaluation_module(sl21, [E1], [2])
    Vhat = loopeval.loop_module(M)
    f = sl21.lowering[0]
    W = Vhat.window_matrix(f, 1, 0, 1)
    op = Vhat.operator(f, 1)
    for r, row in op.items():
        for c, x in row.items():
            assert W[Vhat.window_index(1, r, 0)][Vhat.window_index(0, c, 0)] == x
    assert not any(Vhat.window_index(0, 0, 0) <= r < Vhat.dim for r in W)


def test_loop_decomposition_with_period_two(sl21):
    M = loopeval.evaluation_module(sl21, [E1, E1], [1, -1])
    components = loopeval.decompose_loop(loopeval.loop_module(M), r=2, window=(-2, 2))
    assert [c.index for c in components] == [0, 1]
    for s in range(-2, 3):
        assert sum(c.slice_dims[s] for c in components) == 9
    assert all(c.irreducible for c in components)
    assert components[0].to_dict()["slice_dims"]["0"] == components[0].slice_dims[0]


def test_loop_decomposition_with_period_one(sl21):
    M = loopeval.evaluation_module(sl21, [[0, 0, 1]], [2])
    (component,) = loopeval.decompose_loop(loopeval.loop_module(M), r=1, window=(-1, 1))
    assert component.slice_dims == {-1: 4, 0: 4, 1: 4}
    assert component.irreducible


def test_decomposition_rejects_small_windows(sl21):
    M = loopeval.evaluation_module(sl21, [E1, E1], [1, -1])
    with pytest.raises(WindowTooSmallError):
        loopeval.decompose_loop(loopeval.loop_module(M), r=2, window=(1, 2))
    with pytest.raises(WindowTooSmallError):
        loopeval.decompose_loop(loopeval.loop_module(M), r=2, window=(0, 0))


@pytest.mark.slow
def test_wide_window_decomposition(sl21):
    M = loopeval.evaluation_module(sl21, [E1, E1], [1, -1])
    components = loopeval.decompose_loop(loopeval.loop_module(M), r=2, window=(-4, 4))
    assert all(c.irreducible for c in components)
