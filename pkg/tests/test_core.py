import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypergroups import constructions as C
from hypergroups.core import (
    check_axioms,
    convolve,
    delta,
    eval_translated,
    haar,
    is_commutative,
    is_hermitian,
    support_product,
    translation_invariance_residual,
    validate,
)
from hypergroups.errors import AxiomViolationError, DimensionError


def z2_tensor(theta):
    n = np.zeros((2, 2, 2))
    n[0, 0, 0] = n[0, 1, 1] = n[1, 0, 1] = 1.0
    n[1, 1] = (theta, 1 - theta)
    return n


def cyclic_tensor(m):
    n = np.zeros((m, m, m))
    for i in range(m):
        for j in range(m):
            n[i, j, (i + j) % m] = 1.0
    return n


def test_group_cayley_tensor_is_valid_with_counting_haar():
    K = validate(cyclic_tensor(5), [0, 4, 3, 2, 1])
    assert np.array_equal(haar(K), np.ones(5))


def test_z2_half_is_valid():
    K = validate(z2_tensor(0.5), [0, 1])
    assert np.allclose(convolve(K, delta(K, 1), delta(K, 1)), [0.5, 0.5], atol=1e-15)


def test_missing_identity_mass_is_an_involution_support_violation():
    n = z2_tensor(0.5)
    n[1, 1] = (0.0, 1.0)
    report = check_axioms(n, [0, 1])
    assert "InvolutionSupport" in report.kinds()
    with pytest.raises(AxiomViolationError) as exc:
        validate(n, [0, 1])
    assert any(v.location == (1, 1) for v in exc.value.report.violations)


def test_row_sum_violation_names_the_pair():
    n = z2_tensor(0.5)
    n[1, 1] = (0.5, 0.4)
    report = check_axioms(n, [0, 1])
    (v,) = [v for v in report.violations if v.kind == "RowSum"]
    assert v.location == (1, 1)
    assert v.residual == pytest.approx(-0.1)


def test_negative_entries_reported_and_tiny_ones_clamped():
    n = z2_tensor(0.5)
    n[1, 1] = (0.5 + 0.3, -0.3 + 0.5)
    n[1, 1] = (1.2, -0.2)
    assert "Negativity" in check_axioms(n, [0, 1]).kinds()
    n[1, 1] = (0.5 + 1e-12, 0.5 - 1e-12)
    n[0, 1] = (-1e-12, 1.0 + 1e-12)
    K = validate(n, [0, 1])
    assert K.constants.min() >= 0.0


def test_identity_violation():
    n = z2_tensor(0.5)
    n[0, 1] = (0.5, 0.5)
    assert "Identity" in check_axioms(n, [0, 1]).kinds()


def test_associativity_is_checked():
    # order-3 table that satisfies axioms 1-4 but is not associative
    n = np.zeros((3, 3, 3))
    for i in range(3):
        n[0, i, i] = n[i, 0, i] = 1.0
    n[1, 1] = (0.5, 0.5, 0.0)
    n[2, 2] = (0.5, 0.0, 0.5)
    n[1, 2] = n[2, 1] = (0.0, 0.0, 1.0)
    assert "Associativity" in check_axioms(n, [0, 1, 2]).kinds()


def test_antihomomorphism_violation():
    # non-commutative tensor with identity involution breaks (x*y)^- = ybar*xbar
    K = C.group_hypergroup(C.symmetric_group(3))
    report = check_axioms(K.constants, range(6))
    assert "InvolutionAntihomomorphism" in report.kinds()


def test_dimension_errors():
    with pytest.raises(DimensionError):
        validate(np.ones((2, 2)), [0, 1])
    with pytest.raises(DimensionError):
        validate(z2_tensor(0.5), [0, 0])


@pytest.mark.parametrize("theta", [1.0, 0.5, 0.2])
def test_haar_of_z2_theta(theta):
    assert np.allclose(haar(C.z2_theta(theta)), [1, 1 / theta], atol=1e-12)


def test_haar_of_bose_mesner_square():
    assert np.allclose(haar(C.PRESETS["bose_mesner_square"]), [1, 1, 2], atol=1e-12)


def test_identity_convolution_is_neutral():
    K = C.PRESETS["order3_hermitian_0.5_3_3"]
    mu = np.array([0.2, 0.3, 0.5])
    assert np.allclose(convolve(K, delta(K, 0), mu), mu, atol=1e-12)
    assert np.allclose(convolve(K, mu, delta(K, 0)), mu, atol=1e-12)


@pytest.mark.parametrize("theta", [0.5, 0.3])
def test_z2_square_of_generator(theta):
    K = C.z2_theta(theta)
    assert np.allclose(convolve(K, delta(K, 1), delta(K, 1)), [theta, 1 - theta], atol=1e-15)


def test_nonhermitian_mixed_product():
    K = C.order3_nonhermitian(0.5)
    assert np.allclose(convolve(K, delta(K, 1), delta(K, 2)), [0.5, 0.25, 0.25], atol=1e-15)


def test_support_products():
    bm = C.PRESETS["bose_mesner_square"]
    assert support_product(bm, {0}, {1, 2}) == {1, 2}
    assert support_product(bm, {2}, {0, 1}) == {2}
    assert support_product(C.z2_theta(0.5), {1}, {1}) == {0, 1}
    assert support_product(C.z2_theta(1.0), {1}, {1}) == {0}


def test_commutative_and_hermitian_flags():
    nh = C.order3_nonhermitian(0.5)
    assert is_commutative(nh) and not is_hermitian(nh)
    assert is_commutative(C.class_hypergroup(C.symmetric_group(3)))
    assert not is_commutative(C.group_hypergroup(C.symmetric_group(3)))


def test_eval_translated():
    K = C.z2_theta(0.5)
    assert eval_translated(K, lambda z: 1.0, 1, 1) == pytest.approx(1.0)
    chi1 = [1.0, -0.5]
    assert eval_translated(K, chi1, 1, 1) == pytest.approx(0.25, abs=1e-15)
    Z5 = C.group_hypergroup(C.cyclic_group(5))
    e_indicator = [1.0, 0, 0, 0, 0]
    for x in range(5):
        for y in range(5):
            assert eval_translated(Z5, e_indicator, x, y) == (1.0 if (x + y) % 5 == 0 else 0.0)


def _assert_axiom_invariants(K):
    n = K.constants
    assert np.abs(n.sum(axis=2) - 1).max() <= 1e-9
    eye = np.eye(K.order)
    assert np.abs(n[0] - eye).max() <= 1e-12 and np.abs(n[:, 0] - eye).max() <= 1e-12
    for i in range(K.order):
        for j in range(K.order):
            assert (n[i, j, 0] > 1e-9) == (K.involution[i] == j)
    assert translation_invariance_residual(K) <= 1e-9
    lhs = np.tensordot(n, n, axes=([2], [0]))
    rhs = np.tensordot(n, n, axes=([2], [1])).transpose(2, 0, 1, 3)
    assert np.abs(lhs - rhs).max() <= 1e-9
    assert haar(K)[0] == 1.0 and haar(K).min() >= 1 - 1e-9
    if is_hermitian(K):
        assert is_commutative(K)


@pytest.mark.parametrize("name", sorted(C.PRESETS))
def test_preset_invariants(name):
    _assert_axiom_invariants(C.PRESETS[name])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_family_draw_invariants(seed):
    rng = np.random.default_rng(seed)
    for sampler in C.FAMILY_SAMPLERS.values():
        _assert_axiom_invariants(sampler(rng))
    _assert_axiom_invariants(C.random_direct_product(rng))


def test_hypergroup_is_immutable():
    K = C.z2_theta(0.5)
    with pytest.raises(ValueError):
        K.constants[0, 0, 0] = 2.0
    with pytest.raises(AttributeError):
        K.name = "other"
