import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pfk import _kernels
from pfk.errors import LabelCollision, NotSkewSymmetric, OrderMismatch
from pfk.pfaffian import (SkewMatrix, direct_sum_ordered, pfaffian, sign_flip,
                          sub_pfaffian, sub_pfaffian_dual)
from pfk.scalars import I, QI
from pfk.tensor import parse_tensor

from conftest import random_skew

# 4x4 matrix with the six non-trivial sub-Pfaffians 1, i, 2, -1, 3, -2+3i
XI = SkewMatrix((1, 2, 3, 4), [[0, I, 0, 2],
                               [-I, 0, -1, 0],
                               [0, 1, 0, 3],
                               [-2, 0, -3, 0]])


def skew_from(arr, labels=None):
    n = arr.shape[0]
    labels = tuple(range(1, n + 1)) if labels is None else labels
    return SkewMatrix.from_numpy(labels, arr)


def test_two_by_two():
    assert pfaffian(SkewMatrix((1, 2), [[0, 7], [-7, 0]])) == 7


@pytest.mark.parametrize("method", ["elimination", "laplace", "enumeration"])
def test_four_by_four_exact(method):
    assert pfaffian(XI, method) == QI(-2, 3)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_odd_order_is_zero(nprng, n):
    assert abs(complex(pfaffian(skew_from(random_skew(nprng, n))))) == 0


def test_sub_pfaffian_exact():
    want = parse_tensor("|0000> + i|1100> + 2|1001> - |0110> + 3|0011> "
                        "+ (-2+3i)|1111>", kind="gate")
    assert sub_pfaffian(XI) == want


def test_sub_pfaffian_dual_exact():
    want = parse_tensor("(-2+3i)<0000| + 3<1100| - <1001| + 2<0110| "
                        "+ i<0011| + <1111|", kind="cogate")
    assert sub_pfaffian_dual(XI) == want


def test_sub_pfaffian_of_zero_matrix():
    assert sub_pfaffian(SkewMatrix.zero((1, 2, 3))) == parse_tensor("|000>", kind="gate")
    assert sub_pfaffian_dual(SkewMatrix.zero((1, 2))) == parse_tensor("<11|", kind="cogate")


def test_non_skew_input_rejected():
    with pytest.raises(NotSkewSymmetric):
        SkewMatrix((1, 2), [[0, 1], [1, 0]])


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_pfaffian_squared_is_determinant(seed, half):
    rng = np.random.default_rng(seed)
    a = random_skew(rng, 2 * half)
    pf = complex(pfaffian(skew_from(a)))
    det = np.linalg.det(a)
    assert abs(pf * pf - det) <= 1e-7 * max(1.0, abs(det))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 8))
def test_three_methods_agree(seed, n):
    rng = np.random.default_rng(seed)
    m = skew_from(random_skew(rng, n))
    ref = complex(pfaffian(m, "enumeration"))
    for method in ("laplace", "elimination"):
        assert abs(complex(pfaffian(m, method)) - ref) <= 1e-9 * max(1.0, abs(ref))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 8))
def test_sub_pfaffian_normalisation(seed, n):
    rng = np.random.default_rng(seed)
    m = skew_from(random_skew(rng, n))
    assert complex(sub_pfaffian(m).coeffs[0]) == 1
    assert complex(sub_pfaffian_dual(m).coeffs[(1 << n) - 1]) == 1


# -- ordered direct sums -----------------------------------------------------

def test_direct_sum_interleaves_by_label():
    a = SkewMatrix((4, 5, 6), [[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])
    b = SkewMatrix((1, 3, 8, 9), [[0, 4, 5, 6], [-4, 0, 7, 8],
                                  [-5, -7, 0, 9], [-6, -8, -9, 0]])
    out = direct_sum_ordered([a, b], (1, 3, 4, 5, 6, 8, 9))
    assert out.labels == (1, 3, 4, 5, 6, 8, 9)
    assert out.entry(1, 8) == 5 and out.entry(4, 6) == 2
    assert out.entry(1, 4) == 0 and out.entry(6, 9) == 0


def test_direct_sum_two_sat_gates():
    blocks = [SkewMatrix((2, 3), [[0, -1], [1, 0]]),
              SkewMatrix((1, 6), [[0, -1], [1, 0]]),
              SkewMatrix((4, 5), [[0, -1], [1, 0]])]
    out = direct_sum_ordered(blocks, (1, 2, 3, 4, 5, 6))
    want = np.zeros((6, 6))
    for i, j in ((1, 6), (2, 3), (4, 5)):
        want[i - 1, j - 1], want[j - 1, i - 1] = -1, 1
    assert np.array_equal(out.to_numpy().real, want)


def test_direct_sum_single_block_identity():
    assert direct_sum_ordered([XI], XI.labels) == XI


def test_direct_sum_label_errors():
    a = SkewMatrix((1, 2), [[0, 1], [-1, 0]])
    with pytest.raises(LabelCollision):
        direct_sum_ordered([a, a], (1, 2))
    with pytest.raises(OrderMismatch):
        direct_sum_ordered([a], (1,))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_direct_sum_of_contiguous_blocks_multiplies(seed):
    rng = np.random.default_rng(seed)
    a = skew_from(random_skew(rng, 2), (1, 2))
    b = skew_from(random_skew(rng, 4), (3, 4, 5, 6))
    s = direct_sum_ordered([b, a], (1, 2, 3, 4, 5, 6))
    got = complex(pfaffian(s, "enumeration"))
    assert abs(got - complex(pfaffian(a)) * complex(pfaffian(b))) < 1e-9 * max(1, abs(got))


# -- sign flip ---------------------------------------------------------------

def test_sign_flip_pattern():
    k = 5
    theta = SkewMatrix((1, 2, 3, 4), [[0, k, 1, 1], [-k, 0, 1, 1],
                                      [-1, -1, 0, k], [-1, -1, -k, 0]])
    t = sign_flip(theta)
    # adjacent positions keep their sign, distance two flips
    assert t.entry(1, 2) == k and t.entry(3, 4) == k
    assert t.entry(1, 3) == -1 and t.entry(1, 4) == 1


def test_sign_flip_zero_and_involution(nprng):
    assert sign_flip(SkewMatrix.zero((1, 2, 3))) == SkewMatrix.zero((1, 2, 3))
    m = skew_from(random_skew(nprng, 6))
    assert sign_flip(sign_flip(m)).allclose(m)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 5))
def test_sign_flip_preserves_pfaffian_square(seed, half):
    rng = np.random.default_rng(seed)
    m = skew_from(random_skew(rng, 2 * half))
    a, b = complex(pfaffian(m)), complex(pfaffian(sign_flip(m)))
    assert abs(a * a - b * b) <= 1e-9 * max(1.0, abs(a * a))


# -- numba kernels agree with the numpy path ----------------------------------

@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
def test_kernels_agree(nprng):
    for n in (2, 4, 10, 20):
        a = random_skew(nprng, n)
        x = _kernels._pfaffian_nb(a.copy())
        y = _kernels.pfaffian_numpy(a)
        assert abs(x - y) <= 1e-10 * max(1.0, abs(y))
    a = random_skew(nprng, 8)
    assert np.allclose(_kernels._subpfaffians_nb(a), _kernels.subpfaffians_numpy(a))


def test_numpy_fallback_switch(monkeypatch, nprng):
    a = random_skew(nprng, 6)
    monkeypatch.setenv("PFK_NUMBA", "0")
    assert not _kernels.use_numba()
    slow = _kernels.pfaffian_float(a)
    monkeypatch.delenv("PFK_NUMBA")
    assert abs(slow - _kernels.pfaffian_float(a)) < 1e-10 * max(1, abs(slow))
