import pytest
from hypothesis import given, strategies as st

from helpers import check_contact_intersections
from plane_lct.constellation import Branch, CurveSpec, constellation_from_tuples, curvette_multiplicities
from plane_lct.errors import PointNotInF, SameBranch
from plane_lct.gen import BranchRecipe, GenConfig, branch_from_beta, random_spec
from plane_lct.invariants import (
    ContactPair,
    Separation,
    all_branch_invariants,
    contact_pair,
    j_partition,
    l0,
    point_sets,
    separation,
    terminal_satellites,
)

BETAS = [(5, 17), (3, 11), (2, 11), (2, 13), (2, 5), (1, 6), (1, 6), (1, 3)]
L0 = [3, 3, 5, 6, 2, 6, 6, 3]

# (J1, J2, J3, J4) or (J1, J2, J3, J41, J42) for curvettes at T u S
PARTITIONS = {
    2: ((), (), (), (), (1, 2, 3, 4, 5, 6, 7, 8)),
    4: ((1, 2), (), (), (5, 8), (3, 4, 6, 7)),
    7: ((), (2, 3, 4, 6, 7), (1,), (5, 8)),
    8: ((1,), (3, 4, 6, 7), (2,), (5, 8)),
    11: ((1, 2), (4,), (3,), (5, 6, 7, 8)),
    13: ((1, 2, 3), (), (4,), (5, 6, 7, 8)),
    15: ((1, 2), (), (), (3, 4, 5, 8), (6, 7)),
    17: ((), (8,), (5,), (1, 2, 3, 4, 6, 7)),
}


def test_beta_table(ex17):
    assert [(x.beta0, x.beta1) for x in all_branch_invariants(ex17)] == BETAS


def test_l0_table(ex17):
    assert [l0(ex17, i) for i in ex17.branch_ids()] == L0


def test_terminal_satellites(ex17):
    assert terminal_satellites(ex17, 1) == (7,)
    assert terminal_satellites(ex17, 6) == ()
    assert [x.t_min for x in all_branch_invariants(ex17)] == [7, 8, 11, 13, 17, None, None, None]


def test_point_sets(ex17):
    sets = point_sets(ex17)
    assert sets.T == {7, 8, 11, 13, 17}
    assert sets.S == {2, 4, 15}
    assert sets.F == set(range(1, 18))


def test_contact_pairs(ex17):
    assert contact_pair(ex17, 1, 3) == ContactPair(0, 4)
    assert contact_pair(ex17, 1, 5) == ContactPair(0, 2)
    assert contact_pair(ex17, 3, 4) == ContactPair(0, 6)
    assert contact_pair(ex17, 8, 5) == ContactPair(0, 3)
    with pytest.raises(SameBranch):
        contact_pair(ex17, 2, 2)


def test_separations(ex17):
    assert separation(ex17, 1, 3) == Separation(4, False)
    assert separation(ex17, 1, 5) == Separation(2, True)
    assert separation(ex17, 1, 8) == Separation(2, True)
    assert separation(ex17, 3, 4) == Separation(10, False)
    assert separation(ex17, 8, 5) == Separation(16, False)
    assert separation(ex17, 6, 7) == Separation(15, True)


@pytest.mark.parametrize("j", sorted(PARTITIONS))
def test_j_partitions(ex17, j):
    J = j_partition(ex17, j)
    want = [frozenset(x) for x in PARTITIONS[j]]
    if len(want) == 5:
        assert (J.J1, J.J2, J.J3, J.J41, J.J42) == tuple(want)
        assert J.J4 == want[3] | want[4]
    else:
        assert (J.J1, J.J2, J.J3, J.J4) == tuple(want)
        assert J.J41 is None


def test_two_pair_branch_and_points_outside_f():
    c = constellation_from_tuples([(1,), (2, 1), (3, 2, 1), (4, 3), (5, 4, 3)])
    spec = CurveSpec(c, (Branch("f", 5),))
    (inv,) = all_branch_invariants(spec)
    assert curvette_multiplicities(c, 5) == (4, 2, 2, 1, 1)
    assert inv.terminal_satellites == (3, 5) and inv.t_min == 3
    assert (inv.beta0, inv.beta1) == (4, 6)
    assert point_sets(spec).F == {1, 2, 3}
    with pytest.raises(PointNotInF):
        j_partition(spec, 4)


def test_smooth_convention():
    spec, _ = branch_from_beta(BranchRecipe.smooth(3))
    (inv,) = all_branch_invariants(spec)
    assert (inv.beta0, inv.beta1, inv.l0) == (1, 3, 3)


@given(st.integers(0, 10_000))
def test_intersections_by_contact_type(seed):
    spec = random_spec(GenConfig(seed=seed, max_points=30, max_branches=5))
    assert check_contact_intersections(spec) == []
