import numpy as np
import pytest

from taumres.transforms import TransformPlan, circular_convolve, dst1, dst1_multi

from conftest import convolve_direct, kron_chain, rel_err, sine_matrix

SIZES = (1, 3, 7, 15, 31, 63, 255, 511)


def test_length_one_is_identity():
    assert dst1([5.0]) == pytest.approx([5.0], abs=0)


def test_unit_vector_m3_frozen():
    # sqrt(1/2) * sin(pi*j/4), j = 1..3
    out = dst1([1.0, 0.0, 0.0])
    assert out == pytest.approx([0.5, 0.7071067811865476, 0.5], abs=1e-15)


@pytest.mark.parametrize("m", SIZES)
def test_involution_and_parseval(m, rng):
    for _ in range(5):
        x = rng.standard_normal(m)
        y = dst1(x)
        assert np.max(np.abs(dst1(y) - x)) <= 1e-12 * max(np.max(np.abs(x)), 1.0)
        assert abs(np.linalg.norm(y) - np.linalg.norm(x)) <= 1e-12 * np.linalg.norm(x)


@pytest.mark.parametrize("m", SIZES + (2, 5, 12, 100))
def test_fft_matches_direct_and_dense(m, rng):
    x = rng.standard_normal(m)
    dense = sine_matrix(m) @ x
    assert rel_err(dst1(x, method="fft"), dense) <= 1e-13
    assert rel_err(TransformPlan(m, "direct")(x), dense) <= 1e-13


def test_plan_is_immutable_and_validates():
    plan = TransformPlan(4)
    with pytest.raises(AttributeError):
        plan.m = 5
    with pytest.raises(ValueError):
        TransformPlan(0)
    with pytest.raises(ValueError):
        TransformPlan(4, "fastest")
    with pytest.raises(ValueError):
        plan(np.zeros(5))


def test_multi_trivial_cases(rng):
    assert dst1_multi((1, 1), [3.25]) == pytest.approx([3.25], abs=0)
    x = rng.standard_normal(9)
    assert np.max(np.abs(dst1_multi((3, 3), dst1_multi((3, 3), x)) - x)) <= 1e-13


def test_multi_matches_kronecker_oracle(rng):
    for dims in ((2, 3), (2, 3, 4), (5, 4)):
        n = int(np.prod(dims))
        S = kron_chain([sine_matrix(m) for m in dims])
        e1 = np.zeros(n)
        e1[0] = 1.0
        assert rel_err(dst1_multi(dims, e1), S[:, 0]) <= 1e-13
        x = rng.standard_normal(n)
        assert rel_err(dst1_multi(dims, x), S @ x) <= 1e-12
        assert rel_err(dst1_multi(dims, x, method="direct"), S @ x) <= 1e-12


def test_multi_rejects_bad_length():
    with pytest.raises(ValueError):
        dst1_multi((2, 3), np.zeros(5))


def test_convolve_identity_kernel():
    out = circular_convolve([1.0, 0.0, 0.0], [4.0, 5.0, 6.0])
    assert out == pytest.approx([4.0, 5.0, 6.0], abs=1e-14)


def test_convolve_cyclic_shift():
    assert circular_convolve([0.0, 1.0], [3.0, 4.0]) == pytest.approx([4.0, 3.0], abs=1e-14)


def test_convolve_matches_direct_sum(rng):
    a = rng.standard_normal(8)
    b = rng.standard_normal(8)
    ref = convolve_direct(a, b)
    assert rel_err(circular_convolve(a, b), ref) <= 1e-12


def test_convolve_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        circular_convolve(np.zeros(3), np.zeros(4))
