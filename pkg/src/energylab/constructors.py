"""Canonical instance generators: subspaces, dissociated sets, structured direct
sums, arithmetic progressions, seeded random sets, and unions of subspaces on
disjoint coordinate blocks.  Golden instances are frozen as package data.

Every generator validates its kind's defining predicate at construction (direct
sums check |A| = |H| |L| and dissociativity of the nonzero part, unions check
block disjointness, and so on)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .group import GroupSpec, make_group
from .setfun import GSet

DISSOCIATED_CAP = 24


def boolean_group(n: int) -> GroupSpec:
    if n < 1:
        raise ValueError("need at least one coordinate")
    return make_group([2] * n)


def subspace(n: int, dim: int) -> GSet:
    """Span of the first `dim` standard basis vectors inside the rank-n boolean group."""
    if not 0 <= dim <= n:
        raise ValueError(f"dim must lie in [0, {n}]")
    g = boolean_group(n)
    # the first dim coordinates (most-significant digits) vary, the rest stay zero
    members = []
    for pattern in range(1 << dim):
        x = 0
        for j in range(dim):
            if (pattern >> j) & 1:
                x |= 1 << (n - 1 - j)
        members.append(x)
    return GSet.from_indices(g, members)


def basis_vector(n: int, j: int) -> int:
    """Index of the standard basis vector e_j (0-based coordinate) in the rank-n boolean group."""
    if not 0 <= j < n:
        raise ValueError("coordinate out of range")
    return 1 << (n - 1 - j)


def is_dissociated(L: GSet) -> bool:
    """True iff all subset sums of L are distinct (no nonempty subset sums to zero)."""
    if L.card > DISSOCIATED_CAP:
        raise ValueError(f"dissociativity check capped at {DISSOCIATED_CAP} elements")
    g = L.group
    members = L.members.tolist()
    seen = {0}
    sums = [0]
    for m in members:
        new = []
        for s in sums:
            t = int(g.add_indices(np.asarray([s]), np.asarray([m]))[0])
            if t in seen:
                return False
            new.append(t)
        for t in new:
            seen.add(t)
        sums.extend(new)
    return True


def h_plus_lambda(n: int, dim: int, K: int) -> GSet:
    """H + L as a direct sum in the rank-n boolean group: H the span of the first
    `dim` basis vectors, L = {0, e_dim, ..., e_{dim+K-2}} so that |L| = K and the
    nonzero part of L is dissociated.  Verifies |A| = |H| * K at construction."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if dim + K - 1 > n:
        raise ValueError(f"need dim + K - 1 <= n, got {dim}+{K}-1 > {n}")
    g = boolean_group(n)
    H = subspace(n, dim)
    lam = [0] + [basis_vector(n, dim + j) for j in range(K - 1)]
    members = set()
    for l in lam:
        for h in H.members.tolist():
            members.add(h | l)
    A = GSet.from_indices(g, members)
    if A.card != H.card * K:
        raise ValueError("direct-sum condition |A| = |H| K violated")
    nonzero_lam = GSet.from_indices(g, [l for l in lam if l])
    if nonzero_lam.card and not is_dissociated(nonzero_lam):
        raise ValueError("nonzero part of L failed the dissociativity check")
    return A


def arithmetic_progression(N: int, start: int, step: int, length: int) -> GSet:
    """{start + i*step mod N : 0 <= i < length}, duplicates collapsed."""
    if length <= 0:
        raise ValueError("length must be positive")
    g = make_group([N])
    return GSet.from_indices(g, [(start + i * step) % N for i in range(length)])


def random_set(g: GroupSpec, density: float, seed: int) -> GSet:
    """Each element kept independently with the given probability; deterministic per seed."""
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.Generator(np.random.Philox(key=seed))
    mask = rng.random(g.size) < density
    return GSet(g, mask)


def coset_union(n: int, dims: list[int]) -> GSet:
    """Union of subspaces placed on disjoint coordinate blocks (pairwise meets = {0})."""
    if sum(dims) > n:
        raise ValueError("blocks exceed the available coordinates")
    g = boolean_group(n)
    members = {0}
    offset = 0
    for d in dims:
        for pattern in range(1 << d):
            x = 0
            for j in range(d):
                if (pattern >> j) & 1:
                    x |= 1 << (n - 1 - (offset + j))
            members.add(x)
        offset += d
    return GSet.from_indices(g, members)


@dataclass(frozen=True)
class InstanceSpec:
    """Declarative description of a generator call; `build` dispatches to it."""

    kind: str  # subspace | dissociated | hplusl | ap | random | cosetUnion
    params: dict = field(default_factory=dict)
    seed: int = 0

    def build(self) -> GSet:
        p = self.params
        if self.kind == "subspace":
            return subspace(p["n"], p["dim"])
        if self.kind == "dissociated":
            g = boolean_group(p["n"])
            return GSet.from_indices(g, [basis_vector(p["n"], j) for j in range(p["k"])])
        if self.kind == "hplusl":
            return h_plus_lambda(p["n"], p["dim"], p["K"])
        if self.kind == "ap":
            return arithmetic_progression(p["N"], p.get("start", 0), p.get("step", 1), p["length"])
        if self.kind == "random":
            return random_set(make_group(p["group"]), p["density"], self.seed)
        if self.kind == "cosetUnion":
            return coset_union(p["n"], list(p["dims"]))
        raise ValueError(f"unknown instance kind {self.kind!r}")


# -- golden frozen instances -------------------------------------------------------


def _load_golden(name: str) -> GSet:
    payload = resources.files("energylab").joinpath(f"data/{name}.json").read_text()
    return GSet.from_dict(json.loads(payload))


def golden_z7_triple() -> GSet:
    """{0,1,2} in Z_7, the running worked example."""
    return _load_golden("golden_z7")


def golden_hplusl() -> GSet:
    """The rank-6 direct-sum instance with dim 2 and K = 4 (|A| = 16)."""
    return _load_golden("golden_hplusl_f2_6")


def golden_random_z101() -> GSet:
    """Frozen seeded random subset of Z_101 (density 0.2, seed 42)."""
    return _load_golden("golden_random_z101")
