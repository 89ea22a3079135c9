import pytest
from sympy.polys.domains import QQ

from algebra import exactnum, repcore
from algebra.loopeval import full_module
from errors import DimensionMismatchError, NotCyclicError, NotDominantError


def trivial_v0(algebra):
    ss = repcore.hw_module_ss(algebra, [0] * len(algebra.coord_index))
    return repcore.extend_by_center(ss, 0)


@pytest.mark.parametrize(
    "weight, dim",
    [([0, 1, 0], 4), ([0, 1, 1], 5), ([0, 2, 0], 10), ([0, 0, 0], 1)],
)
def test_symplectic_modules_match_weyl_dimension(c3, weight, dim):
    M = repcore.hw_module_ss(c3, weight)
    assert M.dim == dim
    assert repcore.weyl_dimension(c3, weight) == dim
    assert repcore.check_bracket_soundness(M) == []


def test_sl2_part_of_sl21(sl21):
    M = repcore.hw_module_ss(sl21.ss_part(), [2, 0, 0])
    assert M.dim == 3
    assert repcore.is_irreducible(M)


def test_dominance_certificate(sl21):
    certified = repcore.DominantWeight.certify(sl21, [3, 1, 0])
    assert certified.pairings == (2,)
    with pytest.raises(NotDominantError):
        repcore.DominantWeight.certify(sl21, [0, 1, 0])
    with pytest.raises(NotDominantError):
        repcore.DominantWeight.certify(sl21, ["1/2", 0, 0])
    with pytest.raises(DimensionMismatchError):
        repcore.DominantWeight.certify(sl21, [1, 0])


def test_center_acts_by_scalar(sl21):
    ss = repcore.hw_module_ss(sl21, [1, 0, 0])
    V0 = repcore.extend_by_center(ss, "5/2")
    z_action = V0.action_of(sl21.z_coords)
    assert exactnum.equal(z_action, exactnum.identity(2).mul(QQ(5, 2)))
    assert all(sl21.z_value(w) == QQ(5, 2) for w in V0.weights)


def test_kac_module_of_trivial_module_is_reducible(sl21):
    K = repcore.kac_module(sl21, trivial_v0(sl21))
    assert K.dim == 4
    assert repcore.check_bracket_soundness(K) == []
    assert not repcore.is_irreducible(K)
    assert repcore.irreducible_quotient(K).dim == 1


def test_typical_kac_module_is_irreducible(sl21):
    ss = repcore.hw_module_ss(sl21, [0, 0, 1])
    K = repcore.kac_module(sl21, repcore.extend_by_center(ss, sl21.z_value([0, 0, 1])))
    assert K.dim == 4
    assert repcore.is_irreducible(K)


@pytest.mark.parametrize(
    "weight, dim",
    [([1, 0, 0], 3), ([0, 0, 1], 4), ([1, 0, 1], 8), ([2, 0, 0], 5)],
)
def test_full_modules_of_sl21(sl21, weight, dim):
    V = full_module(sl21, weight)
    assert V.dim == dim
    assert repcore.is_irreducible(V)
    assert repcore.is_integrable(V)
    assert repcore.highest_weight_vectors(V).dim == 1


def test_natural_module_of_c3(c3):
    V = full_module(c3, [1, 0, 0])
    assert V.dim == 6
    assert repcore.check_bracket_soundness(V) == []


def test_tensor_square_keeps_koszul_signs(sl21):
    V = full_module(sl21, [1, 0, 0])
    T = repcore.tensor([V, V])
    assert T.dim == 9
    assert repcore.check_bracket_soundness(T) == []
    assert not repcore.is_irreducible(T)


def test_tensor_rejects_mixed_algebras(sl21, c3):
    with pytest.raises(DimensionMismatchError):
        repcore.tensor([full_module(sl21, [1, 0, 0]), full_module(c3, [1, 0, 0])])
    with pytest.raises(DimensionMismatchError):
        repcore.tensor([])


def test_direct_sum_is_not_cyclic(sl21, c3):
    V = full_module(sl21, [1, 0, 0])
    S = repcore.direct_sum(V, V)
    assert S.dim == 6
    assert repcore.weight_multiplicities(S) == {w: 2 for w in V.weights}
    with pytest.raises(NotCyclicError) as info:
        repcore.irreducible_quotient(S)
    assert len(info.value.deficient) == 3
    with pytest.raises(DimensionMismatchError):
        repcore.direct_sum(V, full_module(c3, [1, 0, 0]))


def test_bracket_soundness_detects_broken_action(sl21):
    V = full_module(sl21, [1, 0, 0])
    e = sl21.raising[0]
    broken = dict(V.actions)
    broken[e] = V.actions[e].mul(QQ(2))
    W = repcore.WeightModule(sl21, V.weights, V.parities, broken, V.labels, V.top)
    assert repcore.check_bracket_soundness(W)


def test_add_weights_checks_length():
    assert repcore.add_weights((1, 2), (3, 4)) == (QQ(4), QQ(6))
    with pytest.raises(DimensionMismatchError):
        repcore.add_weights((1, 2), (1, 2, 3))
    assert repcore.weight_to_json([QQ(1, 2), QQ(0)]) == ["1/2", "0"]
