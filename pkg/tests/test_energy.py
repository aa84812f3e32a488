import math

import numpy as np
import pytest

from conftest import brute_energy_k, brute_pair_energy
from energylab.constructors import random_set, subspace
from energylab.energy import (WeightKernel, dual_correlation_energy, energy_k,
                              energy_pair_k, gowers_box_kernel, mixed_energy,
                              pair_energy, pair_energy_spectrum, restricted_energy,
                              sigma_restricted, starred_energy, t2_of_dual_square,
                              t_energy, t_k, t_k_spectrum, weighted_energy, wiener_norm)
from energylab.group import make_group
from energylab.setfun import GSet, difference_set, set_correlate


def test_energy_golden_values(triple):
    assert energy_k(triple, 2).value == 19
    assert energy_k(triple, 3).value == 45
    assert energy_k(triple, 4).value == 115


def test_energy_subgroup_and_first_moment():
    H = subspace(4, 2)
    for k in (1, 2, 3, 5):
        assert energy_k(H, k).value == H.card ** (k + 1)
    A = random_set(make_group([101]), 0.2, 4)
    assert energy_k(A, 1).value == A.card ** 2


def test_energy_fractional_exponent(triple):
    got = energy_k(triple, 1.5)
    assert not got.exact
    want = 3 ** 1.5 + 2 ** 1.5 + 1 + 1 + 2 ** 1.5
    assert math.isclose(got.value, want, rel_tol=1e-12)


def test_energy_matches_brute_on_mixed_group():
    factors = [3, 5]
    g = make_group(factors)
    A = GSet.from_indices(g, [0, 2, 7, 8, 13])
    for k in (2, 3, 4):
        assert energy_k(A, k).value == brute_energy_k(factors, A.members.tolist(), k)


def test_pair_energy(triple):
    B = GSet.from_indices(triple.group, [0, 3])
    assert energy_pair_k(triple, B, 2).value == 6
    assert pair_energy(triple, B) == 6
    assert energy_pair_k(triple, triple, 3).value == energy_k(triple, 3).value
    H = subspace(4, 2)
    assert energy_pair_k(H, H, 2).value == H.card ** 3
    assert pair_energy(triple, B) == brute_pair_energy([7], [0, 1, 2], [0, 3])


def test_mixed_energy_orders(triple):
    D = difference_set(triple, triple)
    forward = mixed_energy([D, triple, triple]).value
    backward = mixed_energy([triple, triple, D]).value
    assert forward == backward == 83
    H = subspace(4, 2)
    assert mixed_energy([H, H, H]).value == H.card ** 4
    assert mixed_energy([triple, triple]).value == energy_k(triple, 2).value


def test_t_energy(triple):
    assert t_k(triple, 2) == 19
    H = subspace(4, 2)
    for k in (2, 3):
        assert t_k(H, k) == H.card ** (2 * k - 1)
    assert t_energy([triple, triple]).value == 19
    # transform oracle agreement after rounding
    assert abs(t_k_spectrum(triple, 2) - 19) < 1e-9


def test_dual_identities(triple):
    N = triple.group.size
    assert abs(t2_of_dual_square(triple) - N ** 3 * 115) < 1e-6 * N ** 3 * 115
    assert abs(dual_correlation_energy(triple, 2) - N ** 5 * 19) < 1e-6 * N ** 5 * 19


def test_restricted_energies(triple):
    D = difference_set(triple, triple)
    assert restricted_energy(triple, D, 2).value == energy_k(triple, 2).value
    assert starred_energy(triple, 3).value == 45 - 27
    zero = GSet.from_indices(triple.group, [0])
    assert sigma_restricted(triple, zero) == triple.card
    # out-of-support restriction contributes nothing
    far = GSet.from_indices(triple.group, [3, 4])
    assert restricted_energy(triple, far, 2).value == 0


def test_weighted_energy(triple):
    g = triple.group
    H = subspace(4, 2)
    qh = WeightKernel.from_difference(H.group, set_correlate(H, H))
    assert qh.psd
    assert weighted_energy(H, H, qh).value == H.card ** 3

    ones = WeightKernel.from_difference(g, np.ones(7, dtype=np.int64))
    B = GSet.from_indices(g, [0, 3])
    assert weighted_energy(triple, B, ones).value == triple.card * B.card

    q2 = WeightKernel.from_difference(g, set_correlate(triple, triple) ** 2)
    want = sum(int(set_correlate(triple, triple)[(x - y) % 7]) ** 2
               for x in [0, 1, 2] for y in [0, 1, 2])
    assert weighted_energy(triple, triple, q2).value == want


def test_weight_kernel_validation():
    g = make_group([7])
    with pytest.raises(ValueError):
        WeightKernel.from_difference(g, np.array([0, 1, 0, 0, 0, 0, 0]))  # odd kernel
    with pytest.raises(ValueError):
        WeightKernel.from_difference(g, -np.ones(7, dtype=np.int64))
    mat = np.arange(49, dtype=float).reshape(7, 7)
    with pytest.raises(ValueError):
        WeightKernel.from_matrix(g, mat)


def test_weight_kernel_cauchy_schwarz_property(triple):
    # difference kernels (B o B)^k are nonnegatively defined
    rng = np.random.Generator(np.random.Philox(key=31))
    g = make_group([13])
    for _ in range(10):
        B = random_set(g, 0.4, int(rng.integers(0, 1000)))
        if B.card < 2:
            continue
        q = WeightKernel.from_difference(g, set_correlate(B, B) ** 2)
        assert q.psd
        X = random_set(g, 0.5, int(rng.integers(0, 1000)))
        Y = random_set(g, 0.5, int(rng.integers(0, 1000)))
        exy = q.energy(X, Y)
        assert exy * exy <= q.energy(X, X) * q.energy(Y, Y)


def test_gowers_box_kernel_small():
    g = make_group([5])
    A = GSet.from_indices(g, [0, 1, 3])
    q2 = gowers_box_kernel(g, A, 2)
    assert q2.psd
    q3 = gowers_box_kernel(g, A, 3)
    assert q3.psd
    # symmetric and matches a direct evaluation at one entry
    direct = 0
    mem = set(A.members.tolist())
    for h1 in range(5):
        for h2 in range(5):
            gh = lambda x: (1 if (x + h1) % 5 in mem else 0) * \
                (1 if (x + h2) % 5 in mem else 0) * (1 if (x + h1 + h2) % 5 in mem else 0)
            direct += gh(0) * gh(2)
    assert q3.matrix[0, 2] == direct


def test_wiener_norm(triple):
    H = subspace(4, 2)
    assert abs(wiener_norm(H) - 1.0) < 1e-9
    single = GSet.from_indices(make_group([9]), [0])
    assert abs(wiener_norm(single) - 1.0) < 1e-9
    # lower bound through the trivial character
    w = wiener_norm(triple)
    assert w >= triple.card ** 2 / triple.group.size - 1e-12
    # energy bound from the norm, exhaustively over subsets
    import itertools

    for r in range(1, 4):
        for sub in itertools.combinations([0, 1, 2], r):
            B = GSet.from_indices(triple.group, sub)
            assert pair_energy(triple, B) >= B.card ** 3 / w ** 2 - 1e-9


def test_pair_energy_fourier_random_pairs():
    g = make_group([2] * 7)
    rng = np.random.Generator(np.random.Philox(key=17))
    for _ in range(100):
        A = random_set(g, 0.25, int(rng.integers(0, 10 ** 6)))
        B = random_set(g, 0.25, int(rng.integers(0, 10 ** 6)))
        if not A.card or not B.card:
            continue
        exact = pair_energy(A, B)
        assert abs(pair_energy_spectrum(A, B) - exact) < 1e-6


def test_cauchy_schwarz_chain():
    g = make_group([101])
    for seed in range(20):
        A = random_set(g, 0.2, seed)
        e1 = int(energy_k(A, 1).value)
        e2 = int(energy_k(A, 2).value)
        e3 = int(energy_k(A, 3).value)
        assert e2 ** 2 <= e3 * e1
        assert e2 ** 2 <= e3 * A.card ** 2  # E <= sqrt(E_3) |A|, squared
        assert e3 <= A.card * e2  # monotone step


def test_slice_pair_sum_small():
    # sum over single shifts s, t of E(A_s, A_t) equals the fourth moment
    g = make_group([7])
    A = GSet.from_indices(g, [0, 1, 2, 4])
    total = 0
    for s in range(7):
        for t in range(7):
            As, At = A.slice1(s), A.slice1(t)
            total += pair_energy(As, At) if As.card and At.card else 0
    assert total == energy_k(A, 4).value


def test_symmetric_set_zero_sum_counts():
    # on a symmetric set the zero-sum counts collapse: sigma_2 = |A|, sigma_4 = T_2
    from energylab.setfun import sigma_k

    g = make_group([13])
    A = GSet.from_indices(g, [0, 1, 12, 5, 8])  # A = -A
    assert np.array_equal(A.mask, A.negate().mask)
    assert sigma_k(A, 2) == A.card
    assert sigma_k(A, 4) == t_k(A, 2)
    H = subspace(4, 2)
    assert sigma_k(H, 2) == H.card
    assert sigma_k(H, 4) == t_k(H, 2)
