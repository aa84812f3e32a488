import json

import numpy as np
import pytest

from conftest import (brute_convolve, brute_correlate, brute_delta_count, gset)
from energylab.constructors import random_set, subspace
from energylab.group import make_group
from energylab.setfun import (BudgetError, DenseFunc, GSet, convolve,
                              convolve_via_fourier, correlate,
                              count_nonempty_slice_tuples, delta_sumset_size,
                              difference_set, generalized_convolution,
                              iterated_convolve, katz_koester_check, set_convolve,
                              set_correlate, sigma_k, slice_set, sumset,
                              tuple_sumset_sum)


def test_triple_correlation_and_convolution(triple):
    assert set_correlate(triple, triple).tolist() == [3, 2, 1, 0, 0, 1, 2]
    assert set_convolve(triple, triple).tolist() == [1, 2, 3, 2, 1, 0, 0]


def test_subgroup_idempotence():
    H = subspace(4, 2)
    corr = set_correlate(H, H)
    assert all(corr[x] == 4 for x in H.members.tolist())
    assert corr.sum() == 16


def test_correlate_matches_brute_on_mixed_group():
    factors = [2, 3, 2]
    g = make_group(factors)
    rng = np.random.Generator(np.random.Philox(key=5))
    for _ in range(10):
        a = rng.integers(-3, 4, size=g.size)
        b = rng.integers(-3, 4, size=g.size)
        got = correlate(DenseFunc(g, a), DenseFunc(g, b)).values.tolist()
        assert got == brute_correlate(factors, a.tolist(), b.tolist())
        gotc = convolve(DenseFunc(g, a), DenseFunc(g, b)).values.tolist()
        assert gotc == brute_convolve(factors, a.tolist(), b.tolist())


def test_reflection_identity():
    g = make_group([11])
    rng = np.random.Generator(np.random.Philox(key=6))
    a = rng.integers(0, 3, size=11)
    b = rng.integers(0, 3, size=11)
    fg = correlate(DenseFunc(g, a), DenseFunc(g, b)).values
    gf = correlate(DenseFunc(g, b), DenseFunc(g, a)).values
    assert np.array_equal(fg, gf[g.neg_perm])


def test_convolution_overflow_escalates_exactly():
    g = make_group([4])
    big = 1 << 40
    f = DenseFunc(g, np.array([big, big, 0, 0], dtype=object), is_integer=True)
    out = convolve(f, f)
    assert out.values[1] == 2 * big * big  # exceeds int64; must not wrap
    assert out.values[0] == big * big


def test_iterated_convolve_and_sigma(triple):
    assert sigma_k(triple, 2) == 1
    assert sigma_k(triple, 3) == 1
    one_step = iterated_convolve(triple, 1).values
    assert one_step.tolist() == set_convolve(triple, triple).tolist()
    H = subspace(3, 2)  # symmetric subgroup
    assert sigma_k(H, 2) == H.card


def test_generalized_convolution(triple):
    assert generalized_convolution([triple, triple], [1]) == 2
    assert generalized_convolution([triple] * 3, [1, 2]) == 1
    H = subspace(4, 2)
    h = H.members.tolist()
    assert generalized_convolution([H] * 3, [h[1], h[2]]) == H.card
    with pytest.raises(ValueError):
        generalized_convolution([triple, triple], [1, 2])


def test_slices(triple):
    assert slice_set(triple, triple, [1]).members.tolist() == [0, 1]
    assert slice_set(triple, triple, [1, 2]).members.tolist() == [0]
    assert slice_set(triple, triple, []).members.tolist() == [0, 1, 2]
    H = subspace(4, 2)
    s = H.members.tolist()[1]
    assert slice_set(H, H, [s]).members.tolist() == H.members.tolist()


def test_slice_cardinality_is_correlation(triple):
    corr = set_correlate(triple, triple)
    for s in range(7):
        assert triple.slice1(s).card == corr[s]


def test_sumsets(triple):
    assert sorted(sumset(triple, triple).members.tolist()) == [0, 1, 2, 3, 4]
    assert sorted(difference_set(triple, triple).members.tolist()) == [0, 1, 2, 5, 6]
    H = subspace(4, 2)
    assert sumset(H, H).members.tolist() == H.members.tolist()


def test_delta_sumset_sizes(triple):
    assert delta_sumset_size(triple, 2, "-") == 19
    assert delta_sumset_size(triple, 2, "+") == 19
    # per-shift breakdown: 5+4+3+4+3 over s in A-A
    assert tuple_sumset_sum(triple, 1, "-") == 19
    H = subspace(3, 2)
    assert delta_sumset_size(H, 2, "-") == H.card ** 2


@pytest.mark.parametrize("sign", ["-", "+"])
@pytest.mark.parametrize("n", [2, 3])
def test_delta_sumset_against_brute(sign, n):
    g = make_group([11])
    A = GSet.from_indices(g, [0, 1, 3, 7])
    got = delta_sumset_size(A, n, sign)
    want = brute_delta_count([11], [0, 1, 3, 7], n, sign)
    assert got == want


def test_nonempty_tuple_count_is_delta_count(triple):
    assert count_nonempty_slice_tuples(triple, 2) == brute_delta_count([7], [0, 1, 2], 2, "-")
    assert count_nonempty_slice_tuples(triple, 3) == brute_delta_count([7], [0, 1, 2], 3, "-")


def test_budget_error():
    g = make_group([101])
    A = random_set(g, 0.3, 1)
    with pytest.raises(BudgetError):
        delta_sumset_size(A, 4, "-", budget=50)


def test_katz_koester(triple):
    assert katz_koester_check(triple, [1])
    assert katz_koester_check(triple, [])
    rng = np.random.Generator(np.random.Philox(key=9))
    A = random_set(make_group([2] * 8), 0.2, 3)
    D = difference_set(A, A).members
    for _ in range(10):
        shifts = [int(s) for s in rng.choice(D, size=2)]
        assert katz_koester_check(A, shifts)


def test_fourier_path_convolution_agrees():
    g = make_group([2] * 6)
    A = random_set(g, 0.3, 11)
    B = random_set(g, 0.3, 12)
    exact = set_convolve(A, B)
    via = convolve_via_fourier(A, B)
    assert np.max(np.abs(via - exact)) < 1e-6


def test_json_roundtrip_bit_exact():
    g = make_group([2, 3, 5])
    A = random_set(g, 0.4, 21)
    blob = json.dumps(A.to_dict())
    back = GSet.from_dict(json.loads(blob))
    assert np.array_equal(back.mask, A.mask)
    assert back.group == A.group


def test_negate_and_translate():
    g = make_group([7])
    A = GSet.from_indices(g, [1, 2])
    assert sorted(A.negate().members.tolist()) == [5, 6]
    assert sorted(A.translate(3).members.tolist()) == [4, 5]
    assert sorted(A.shift_minus(1).members.tolist()) == [0, 1]


def test_sumset_weighted_mass_dominates_tuple_count():
    # sum_x S(x) (S*D)^k (x) >= |A^{k+1} + Delta(A)| at k = 2, brute-checked
    from conftest import brute_delta_count

    g = make_group([11])
    A = GSet.from_indices(g, [0, 1, 3, 7])
    S = sumset(A, A)
    D = difference_set(A, A)
    sd = convolve(S.indicator(), D.indicator()).values
    lhs = sum(int(sd[x]) ** 2 for x in S.members.tolist())
    mid = delta_sumset_size(A, 3, "+")
    assert mid == brute_delta_count([11], [0, 1, 3, 7], 3, "+")
    assert lhs >= mid >= A.card ** 2 * max(D.card, S.card)
