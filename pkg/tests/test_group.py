import numpy as np
import pytest

from conftest import brute_add, brute_neg
from energylab.group import (DEFAULT_MAX_GROUP_SIZE, fourier_array,
                             inverse_fourier_array, make_group, parse_group,
                             parseval_residual)


def test_make_group_examples():
    assert make_group([7]).size == 7
    assert make_group([2, 2, 2]).size == 8
    assert make_group([2, 3]).size == 6


def test_make_group_rejects_bad_factors():
    with pytest.raises(ValueError):
        make_group([])
    with pytest.raises(ValueError):
        make_group([1, 5])
    with pytest.raises(ValueError):
        make_group([2] * 25)  # over the default cap


def test_max_size_override(monkeypatch):
    monkeypatch.setenv("ENERGY_LAB_MAX_N", "16")
    with pytest.raises(ValueError):
        make_group([17])
    assert make_group([16]).size == 16


def test_parse_group():
    assert parse_group("2,2,2,2").factors == (2, 2, 2, 2)
    assert parse_group("101").size == 101
    with pytest.raises(ValueError):
        parse_group(" ")


def test_add_neg_examples():
    z6 = make_group([6])
    assert z6.add(4, 5) == 3
    cube = make_group([2, 2, 2])
    assert cube.add(0b101, 0b110) == 0b011
    z7 = make_group([7])
    assert z7.neg(2) == 5
    assert z7.sub(1, 3) == 5
    assert z7.zero == 0


def test_add_out_of_range():
    z7 = make_group([7])
    with pytest.raises(ValueError):
        z7.add(7, 0)


@pytest.mark.parametrize("factors", [[6], [2, 3], [2, 2, 3], [4, 5]])
def test_index_arithmetic_against_brute(factors):
    g = make_group(factors)
    for x in range(g.size):
        assert g.neg(x) == brute_neg(factors, x)
        for y in range(g.size):
            assert g.add(x, y) == brute_add(factors, x, y)


@pytest.mark.parametrize("factors", [[7], [2, 2, 2], [2, 3], [12]])
def test_decode_encode_roundtrip(factors):
    g = make_group(factors)
    idx = np.arange(g.size)
    assert np.array_equal(g.encode(g.decode(idx)), idx)


def test_fourier_point_mass_is_flat():
    g = make_group([7])
    f = np.zeros(7)
    f[0] = 1
    assert np.allclose(fourier_array(g, f), np.ones(7))


def test_fourier_subgroup_indicator():
    # H = span(e0) inside rank-2: indices {0, 2}; spectrum is |H| on the annihilator
    g = make_group([2, 2])
    h = np.array([1, 0, 1, 0], dtype=float)
    spec = fourier_array(g, h)
    assert np.allclose(sorted(np.real(spec)), [0, 0, 2, 2])
    assert np.allclose(np.imag(spec), 0)


def test_fourier_triple_value_and_inverse(triple):
    g = triple.group
    spec = fourier_array(g, triple.mask.astype(float))
    assert abs(spec[0] - 3) < 1e-12
    back = inverse_fourier_array(g, spec)
    assert np.max(np.abs(back - triple.mask)) < 1e-9


def test_parseval_on_random_integer_functions():
    for factors in ([7], [2, 2, 2, 2], [3, 4]):
        g = make_group(factors)
        rng = np.random.Generator(np.random.Philox(key=1))
        for _ in range(100):
            f = rng.integers(-5, 6, size=g.size).astype(float)
            assert parseval_residual(g, f) < 1e-9


def test_convolution_theorem_pointwise():
    from energylab.setfun import DenseFunc, convolve

    g = make_group([3, 4])
    rng = np.random.Generator(np.random.Philox(key=2))
    for _ in range(25):
        a = rng.integers(-4, 5, size=g.size)
        b = rng.integers(-4, 5, size=g.size)
        exact = convolve(DenseFunc(g, a), DenseFunc(g, b)).values
        spec = fourier_array(g, a.astype(float)) * fourier_array(g, b.astype(float))
        via = np.real(inverse_fourier_array(g, spec))
        assert np.max(np.abs(via - exact)) < 1e-9 * max(1, np.max(np.abs(exact)))
