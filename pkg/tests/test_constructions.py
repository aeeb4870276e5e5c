import itertools
import math

import numpy as np
import pytest

from hypergroups import constructions as C
from hypergroups.core import haar, is_commutative, is_hermitian
from hypergroups.duality import character_table, find_isomorphism, is_strong, match_permutation
from hypergroups.errors import InvalidGroupTable, NotASubgroup, ParamOutOfRange


def test_z2_theta_corners():
    assert np.array_equal(C.z2_theta(1.0).constants, C.group_hypergroup(C.cyclic_group(2)).constants)
    assert haar(C.z2_theta(0.5))[1] == 2.0
    assert is_hermitian(C.z2_theta(0.3))
    with pytest.raises(ParamOutOfRange):
        C.z2_theta(0.0)
    with pytest.raises(ParamOutOfRange):
        C.z2_theta(1.5)


def test_nonhermitian_corner_is_z3():
    assert np.array_equal(C.order3_nonhermitian(1.0).constants, C.group_hypergroup(C.cyclic_group(3)).constants)
    with pytest.raises(ParamOutOfRange):
        C.order3_nonhermitian(0.0)


def test_nonhermitian_half():
    K = C.order3_nonhermitian(0.5)
    assert np.allclose(haar(K), [1, 2, 2], atol=1e-12)
    assert K.involution == (0, 2, 1)
    z = C.order3_nonhermitian_z(0.5)
    assert z == pytest.approx(complex(-1, math.sqrt(5)) / 4)
    assert np.allclose(C.order3_nonhermitian_plancherel(0.5), [0.2, 0.4, 0.4], atol=1e-12)


@pytest.mark.parametrize("alpha", [0.1, 0.37, 0.5, 0.9, 1.0])
def test_nonhermitian_characters_and_plancherel_closed_forms(alpha):
    K = C.order3_nonhermitian(alpha)
    assert np.allclose(haar(K), [1, 1 / alpha, 1 / alpha], atol=1e-12)
    t = character_table(K)
    z = C.order3_nonhermitian_z(alpha)
    expected = np.array([[1, 1, 1], [1, z, z.conjugate()], [1, z.conjugate(), z]])
    assert match_permutation(expected, t.values, 1e-10) is not None
    assert np.allclose(t.plancherel, C.order3_nonhermitian_plancherel(alpha), atol=1e-10)


def test_bose_mesner_parameters():
    p = C.order3_hermitian_params(0.0, 1.0, 2.0)
    assert p["beta1"] == 0 and p["alpha1"] == 0 and p["alpha2"] == 0
    assert p["gamma2"] == 1 and p["beta2"] == 0.5
    assert C.order3_hermitian_D(0.0, 1.0, 2.0) == pytest.approx(2.0)
    chars = C.order3_hermitian_characters(0.0, 1.0, 2.0)
    assert np.allclose(chars, [[1, 1, 1], [1, 1, -1], [1, -1, 0]], atol=1e-15)


def test_order3_hermitian_valid_instance():
    K = C.order3_hermitian(0.5, 3.0, 3.0)
    assert np.allclose(haar(K), [1, 3, 3], atol=1e-12)


@pytest.mark.parametrize(
    "params, label",
    [((1.2, 3, 3), "gamma1"), ((0.5, 0.5, 3), "omega1 >= 1"), ((0.5, 1.2, 3), "1 + gamma1*omega2"), ((0.5, 3, 1.5), "1 + (1-gamma1)*omega1")],
)
def test_order3_hermitian_constraints(params, label):
    with pytest.raises(ParamOutOfRange, match=label.replace("*", r"\*").replace("(", r"\(").replace(")", r"\)").replace("+", r"\+")):
        C.order3_hermitian(*params)


def _rows_match(A, B, tol):
    return match_permutation(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex), tol) is not None


def test_hermitian_closed_forms_match_eigensolver_on_50_draws():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        g1, w1, w2 = C.random_order3_hermitian_params(rng)
        K = C.order3_hermitian(g1, w1, w2)
        assert np.allclose(haar(K), [1, w1, w2], atol=1e-10)
        assert _rows_match(C.order3_hermitian_characters(g1, w1, w2), character_table(K).values, 1e-8)


def test_printed_hermitian_xy_denominator_is_an_erratum():
    # as typeset, x and y divide D by 2*omega2; on the Bose-Mesner square that
    # gives x = 1/2 although the worked example (and the true character) has x = 1
    printed = C.order3_hermitian_characters(0.0, 1.0, 2.0, printed=True)
    assert printed[1, 1] == pytest.approx(0.5)
    assert not _rows_match(printed, character_table(C.PRESETS["bose_mesner_square"]).values, 1e-8)


def test_hermitian_plancherel_closed_form():
    rng = np.random.default_rng(7)
    hits = 0
    for _ in range(50):
        g1, w1, w2 = C.random_order3_hermitian_params(rng)
        t = character_table(C.order3_hermitian(g1, w1, w2))
        perm = match_permutation(C.order3_hermitian_characters(g1, w1, w2).astype(complex), t.values, 1e-8)
        try:
            closed = C.order3_hermitian_plancherel(g1, w1, w2)
        except ParamOutOfRange:
            continue
        hits += 1
        assert np.allclose(closed, t.plancherel[perm], atol=1e-8)
    assert hits >= 40


def test_printed_s3_is_an_erratum():
    # typeset s3 ends in 1/omega1 where 1/omega2 is needed; s1, s2 are unaffected
    g1, w1, w2 = 0.5, 3.0, 3.5
    good = C.order3_hermitian_plancherel(g1, w1, w2)
    printed = C.order3_hermitian_plancherel(g1, w1, w2, printed=True)
    assert np.allclose(good[:2], printed[:2])
    assert abs(good[2] - printed[2]) > 1e-3
    assert good.sum() == pytest.approx(1.0)


def test_hermitian_plancherel_closed_form_is_singular_on_bose_mesner():
    # x = 1, y = z = -1, v = 0 make t = 0 although pi = (1/4, 1/4, 1/2)
    with pytest.raises(ParamOutOfRange, match="singular"):
        C.order3_hermitian_plancherel(0.0, 1.0, 2.0)


def _brute_class_constants(n):
    """Class algebra constants from raw permutation products: with z0 fixed in class C,
    n[A][B][C] = |C| * #{(a, b) in A x B : a b = z0} / (|A| |B|)."""
    perms = list(itertools.permutations(range(n)))

    def mul(p, q):
        return tuple(p[i] for i in q)

    def inv(p):
        out = [0] * n
        for i, v in enumerate(p):
            out[v] = i
        return tuple(out)

    classes = []
    seen = set()
    for g in perms:
        if g in seen:
            continue
        cls = {mul(mul(h, g), inv(h)) for h in perms}
        seen |= cls
        classes.append(sorted(cls))
    classes.sort(key=lambda c: (len(c), perms.index(c[0])))
    M = len(classes)
    out = np.zeros((M, M, M))
    for a, A in enumerate(classes):
        for b, B in enumerate(classes):
            for c, Cl in enumerate(classes):
                z0 = Cl[0]
                hits = sum(1 for x in A for y in B if mul(x, y) == z0)
                out[a, b, c] = len(Cl) * hits / (len(A) * len(B))
    return out, [len(c) for c in classes]


def test_class_hypergroup_of_s3_against_brute_force():
    K = C.class_hypergroup(C.symmetric_group(3))
    expected, sizes = _brute_class_constants(3)
    assert sizes == [1, 2, 3]
    assert np.allclose(K.constants, expected, atol=1e-15)
    assert is_commutative(K)
    assert is_strong(K)
    assert np.allclose(haar(K), sizes, atol=1e-12)


def test_class_hypergroup_of_abelian_group_is_the_group():
    G = C.cyclic_group(6)
    assert np.array_equal(C.class_hypergroup(G).constants, C.group_hypergroup(G).constants)


def test_double_coset_of_s3_by_transposition_is_z2_half():
    S3 = C.symmetric_group(3)
    # sorted permutations: index 1 is (0, 2, 1), a transposition
    K = C.double_coset(S3, [0, 1])
    assert K.order == 2
    assert K.constants[1, 1, 0] == pytest.approx(0.5)
    assert haar(K)[1] == pytest.approx(2.0)
    assert find_isomorphism(K, C.z2_theta(0.5)) == [0, 1]


def test_double_coset_corners():
    G = C.symmetric_group(3)
    assert np.array_equal(C.double_coset(G, [0]).constants, C.group_hypergroup(G).constants)
    assert C.double_coset(G, range(6)).order == 1
    with pytest.raises(NotASubgroup):
        C.double_coset(G, [0, 3])


def test_group_hypergroup_matches_family_corners():
    assert np.array_equal(C.group_hypergroup(C.cyclic_group(2)).constants, C.z2_theta(1).constants)
    assert np.array_equal(C.group_hypergroup(C.cyclic_group(3)).constants, C.order3_nonhermitian(1).constants)


def test_z4_characters_are_fourth_roots_of_unity():
    t = character_table(C.group_hypergroup(C.cyclic_group(4)))
    assert np.allclose(t.values[:, 1] ** 4, 1, atol=1e-12)
    assert _rows_match(t.values, [[1j**(k * x) for x in range(4)] for k in range(4)], 1e-12)


def test_group_table_validation():
    with pytest.raises(InvalidGroupTable):
        C.group_table([[0, 1], [1, 1]])
    with pytest.raises(InvalidGroupTable):
        C.group_table([[1, 0], [0, 1]])
    # Latin square with identity but not associative (order 5 loop)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidGroupTable, match="associative"):
        C.group_table(loop)
    assert C.quaternion_group().order == 8 and not C.quaternion_group().abelian
    assert not C.dihedral_group(4).abelian


def test_direct_product():
    K = C.PRESETS["bose_mesner_square"]
    assert np.array_equal(C.direct_product(K, C.trivial_hypergroup()).constants, K.constants)
    V4 = C.direct_product(C.z2_theta(1), C.z2_theta(1))
    t = character_table(V4)
    assert len(t) == 4 and np.allclose(np.abs(t.values), 1) and np.allclose(t.values.imag, 0)
    a, b = C.z2_theta(0.5), C.z2_theta(1 / 3)
    P = C.direct_product(a, b)
    assert np.allclose(haar(P), np.outer(haar(a), haar(b)).ravel())
    expected = np.outer(character_table(a).plancherel, character_table(b).plancherel).ravel()
    assert np.allclose(np.sort(character_table(P).plancherel), np.sort(expected), atol=1e-12)
    # characters of the product are the pairwise products of factor characters
    ta, tb = character_table(a), character_table(b)
    products = np.array([np.outer(r, s).ravel() for r in ta.values for s in tb.values])
    assert _rows_match(products, character_table(P).values, 1e-10)


def test_presets_are_commutative_and_match_declared_haar():
    for K in C.presets().values():
        assert is_commutative(K)
    assert np.allclose(haar(C.PRESETS["order3_hermitian_0.5_3_3"]), [1, 3, 3])
    assert np.allclose(haar(C.PRESETS["z2_theta_1_4"]), [1, 4])
