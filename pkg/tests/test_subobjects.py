import numpy as np
import pytest

from hypergroups import constructions as C
from hypergroups.duality import character_table, find_isomorphism, isomorphic_via
from hypergroups.errors import CapExceeded, EquivalenceFailure, NotClosed
from hypergroups.subobjects import (
    annihilator,
    certify,
    closure,
    cosets,
    dual_coset_members,
    enumerate_subhypergroups,
    haar_transform_on,
    is_subhypergroup,
    lemma23_check,
    lemma23_report,
    quotient,
    restrict,
    restricted_hypergroup,
    same_restriction,
)

BM = C.PRESETS["bose_mesner_square"]


def _row(table, values):
    d = np.abs(table.values - np.asarray(values)).max(axis=1)
    return int(np.argmin(d))


@pytest.mark.parametrize(
    "name, expected",
    [
        ("trivial", [[0]]),
        ("bose_mesner_square", [[0], [0, 1], [0, 1, 2]]),
        ("z2_theta_1_2", [[0], [0, 1]]),
        ("Z6", [[0], [0, 3], [0, 2, 4], list(range(6))]),
        ("Z8", [[0], [0, 4], [0, 2, 4, 6], list(range(8))]),
        ("z2(1/2)xz2(1/3)", [[0], [0, 1], [0, 2], [0, 1, 2, 3]]),
    ],
)
def test_enumeration(name, expected):
    assert [H.sorted() for H in enumerate_subhypergroups(C.PRESETS[name])] == expected


@pytest.mark.parametrize("name, normal_subgroups", [("class_S3", 3), ("class_D4", 6), ("class_Q8", 6)])
def test_class_hypergroup_subobjects_count_normal_subgroups(name, normal_subgroups):
    assert len(enumerate_subhypergroups(C.PRESETS[name])) == normal_subgroups


def test_enumeration_cap():
    K = C.direct_product(C.group_hypergroup(C.cyclic_group(3)), C.group_hypergroup(C.cyclic_group(8)))
    with pytest.raises(CapExceeded) as exc:
        enumerate_subhypergroups(K)
    assert exc.value.exit_code == 2
    assert len(enumerate_subhypergroups(K, cap=24)) == 8


def test_subhypergroup_certification():
    assert is_subhypergroup(BM, [0, 1])
    assert not is_subhypergroup(BM, [0, 2])
    assert not is_subhypergroup(BM, [1])
    with pytest.raises(NotClosed):
        certify(BM, [0, 2])
    assert closure(BM, [2]) == {0, 1, 2}
    assert closure(C.PRESETS["Z8"], [6]) == {0, 2, 4, 6}


def test_bose_mesner_cosets():
    part = cosets(BM, certify(BM, [0, 1]))
    assert [sorted(b) for b in part.blocks] == [[0, 1], [2]]
    assert part.block_mass == (2.0, 2.0)
    assert part.labels() == [0, 0, 1]
    assert part.block_of(2) == 1


def test_z4_cosets_and_restrictions():
    Z4 = C.PRESETS["Z4"]
    H = certify(Z4, [0, 2])
    assert [sorted(b) for b in cosets(Z4, H).blocks] == [[0, 2], [1, 3]]
    t = character_table(Z4)
    ks = [_row(t, [1j ** (k * x) for x in range(4)]) for k in range(4)]
    assert np.allclose(restrict(Z4, t, ks[1], H), [1, -1])
    assert same_restriction(Z4, t, ks[0], ks[2], H)
    assert same_restriction(Z4, t, ks[1], ks[3], H)
    assert not same_restriction(Z4, t, ks[0], ks[1], H)
    assert sorted(annihilator(Z4, t, H)) == sorted([ks[0], ks[2]])


def test_restricted_hypergroup_of_class_s3():
    K = C.PRESETS["class_S3"]
    # the 3-cycle class squares to 2e + (3-cycles) in the class algebra
    sub = restricted_hypergroup(K, certify(K, [0, 1]))
    assert find_isomorphism(sub, C.z2_theta(0.5)) == [0, 1]


def test_annihilators():
    t = character_table(BM)
    assert annihilator(BM, t, certify(BM, [0])) == [0, 1, 2]
    assert annihilator(BM, t, certify(BM, [0, 1, 2])) == [0]
    assert sorted(annihilator(BM, t, certify(BM, [0, 1]))) == sorted([0, _row(t, [1, 1, -1])])


def test_haar_transform_on_subgroup_is_annihilator_indicator():
    t = character_table(BM)
    H = certify(BM, [0, 1])
    hat = haar_transform_on(BM, t, H)
    ind = np.zeros(3)
    ind[annihilator(BM, t, H)] = 1
    assert np.allclose(hat, ind, atol=1e-12)


def test_quotients():
    for name in ("bose_mesner_square", "nonhermitian_1_2", "class_D4"):
        K = C.PRESETS[name]
        Q = quotient(K, certify(K, [0]))
        assert isomorphic_via(Q, K, list(range(K.order)))
        assert quotient(K, certify(K, range(K.order))).order == 1
    Q = quotient(BM, certify(BM, [0, 1]))
    assert find_isomorphism(Q, C.z2_theta(1.0)) == [0, 1]


def test_quotient_of_z8_by_z2_is_z4():
    Z8 = C.PRESETS["Z8"]
    Q = quotient(Z8, certify(Z8, [0, 4]))
    assert find_isomorphism(Q, C.PRESETS["Z4"]) is not None


def test_dual_coset_members():
    Z4 = C.PRESETS["Z4"]
    t = character_table(Z4)
    H = certify(Z4, [0, 2])
    perp = set(annihilator(Z4, t, H))
    for s in range(4):
        members = dual_coset_members(Z4, t, s, H)
        assert len(members) == 2
        assert all(same_restriction(Z4, t, s, r, H) for r in members)
    assert dual_coset_members(Z4, t, 0, H) == perp


def test_lemma23_holds_for_bose_mesner_middle_subgroup():
    t = character_table(BM)
    rep = lemma23_check(BM, t, certify(BM, [0, 1]))
    assert rep.equivalent
    chi1 = _row(t, [1, 1, -1])
    chi2 = _row(t, [1, -1, 0])
    assert rep.in_annihilator[chi1] and rep.every_coset_nonzero[chi1] and rep.some_coset_nonzero[chi1]
    assert not (rep.in_annihilator[chi2] or rep.every_coset_nonzero[chi2] or rep.some_coset_nonzero[chi2])


def test_lemma23_counterexample_trivial_subgroup():
    # every character annihilates {e}, yet the character vanishing at element 2
    # gives a zero coset sum on the coset {2}
    t = character_table(BM)
    H = certify(BM, [0])
    rep = lemma23_report(BM, t, H)
    chi2 = _row(t, [1, -1, 0])
    assert rep.in_annihilator[chi2]
    assert not rep.every_coset_nonzero[chi2]
    assert (chi2, 2) in rep.offenders
    with pytest.raises(EquivalenceFailure):
        lemma23_check(BM, t, H)


@pytest.mark.parametrize("name", ["Z4", "Z6", "Z8", "Z2xZ2", "z2_theta_1_3", "nonhermitian_1_2"])
def test_lemma23_on_instances_without_vanishing_characters(name):
    K = C.PRESETS[name]
    t = character_table(K)
    if np.abs(t.values).min() < 1e-9:
        pytest.skip("has a vanishing character value")
    for H in enumerate_subhypergroups(K):
        assert lemma23_report(K, t, H).equivalent
