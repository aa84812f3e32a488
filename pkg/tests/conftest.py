import itertools

import numpy as np
import pytest

from energylab.constructors import golden_hplusl, golden_z7_triple
from energylab.group import make_group
from energylab.setfun import GSet


@pytest.fixture(scope="session")
def z7():
    return make_group([7])


@pytest.fixture(scope="session")
def triple(z7):
    return golden_z7_triple()


@pytest.fixture(scope="session")
def hplusl_golden():
    return golden_hplusl()


# -- brute-force oracles, independent of the library's computational paths --------


def cyclic_decode(factors, idx):
    coords = []
    for n in reversed(factors):
        coords.append(idx % n)
        idx //= n
    return tuple(reversed(coords))


def cyclic_encode(factors, coords):
    idx = 0
    for n, c in zip(factors, coords):
        idx = idx * n + (c % n)
    return idx


def brute_add(factors, x, y):
    cx = cyclic_decode(factors, x)
    cy = cyclic_decode(factors, y)
    return cyclic_encode(factors, [a + b for a, b in zip(cx, cy)])


def brute_neg(factors, x):
    return cyclic_encode(factors, [-c for c in cyclic_decode(factors, x)])


def brute_sub(factors, x, y):
    return brute_add(factors, x, brute_neg(factors, y))


def brute_correlate(factors, f, g):
    """(f o g)(x) = sum_y f(y) g(y+x), by explicit loops."""
    N = len(f)
    out = [0] * N
    for x in range(N):
        out[x] = sum(f[y] * g[brute_add(factors, y, x)] for y in range(N))
    return out


def brute_convolve(factors, f, g):
    N = len(f)
    out = [0] * N
    for x in range(N):
        out[x] = sum(f[y] * g[brute_sub(factors, x, y)] for y in range(N))
    return out


def brute_energy_k(factors, members, k):
    corr = brute_correlate(factors, _ind(factors, members), _ind(factors, members))
    return sum(v ** k for v in corr)


def brute_pair_energy(factors, amem, bmem):
    ca = brute_correlate(factors, _ind(factors, amem), _ind(factors, amem))
    cb = brute_correlate(factors, _ind(factors, bmem), _ind(factors, bmem))
    return sum(x * y for x, y in zip(ca, cb))


def brute_gowers_count(factors, members, d):
    """Number of (x, h_1..h_d) whose full 2^d-vertex pattern lies in the set."""
    N = 1
    for n in factors:
        N *= n
    mem = set(members)
    total = 0
    for x in range(N):
        for hs in itertools.product(range(N), repeat=d):
            ok = True
            for eps in itertools.product((0, 1), repeat=d):
                v = x
                for e, h in zip(eps, hs):
                    if e:
                        v = brute_add(factors, v, h)
                if v not in mem:
                    ok = False
                    break
            if ok:
                total += 1
    return total


def brute_delta_count(factors, members, n, sign):
    seen = set()
    for tup in itertools.product(members, repeat=n):
        for a in members:
            if sign == "-":
                seen.add(tuple(brute_sub(factors, t, a) for t in tup))
            else:
                seen.add(tuple(brute_add(factors, t, a) for t in tup))
    return len(seen)


def _ind(factors, members):
    N = 1
    for n in factors:
        N *= n
    out = [0] * N
    for m in members:
        out[m] = 1
    return out


def gset(factors, members) -> GSet:
    return GSet.from_indices(make_group(list(factors)), members)
