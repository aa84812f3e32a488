"""Constructive procedures: greedy disjoint translate/slice families, the seeded
randomized disjoint family, the regular part, connectedness measurement and
connected-subset extraction, the pseudorandom-slice scan, and a tiny-scale
exhaustive small-doubling oracle.

Determinism rules: greedy loops scan candidates in ascending index order;
subset searches enumerate bitmasks in ascending integer order (bit i of a mask
is the i-th smallest member) and return the first qualifying subset; the
randomized family uses a counter-based generator keyed by the caller's seed,
with retries drawing further along the same stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .energy import WeightKernel, energy_k, pair_energy
from .setfun import (DenseFunc, GSet, convolve, correlate, difference_set,
                     set_convolve, set_correlate)

SUBSET_SEARCH_CAP = 22
ORACLE_CAP = 18
RANDOM_FAMILY_RETRIES = 64


class PreconditionError(ValueError):
    """An algorithm's hypothesis failed, so its guarantee is void."""


@dataclass(frozen=True)
class ConnectednessParams:
    """Parameter bundle for connectedness measurement and extraction.

    beta2 defaults to beta1 (single-threshold usage); when both are given the
    extraction requires rho < beta1/beta2.
    """

    alpha: float
    beta1: float
    rho: float = 0.25
    beta2: float | None = None
    gamma: float | None = None

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise ValueError("alpha must exceed 1")
        b2 = self.beta1 if self.beta2 is None else self.beta2
        if not 0 < self.beta1 <= b2 <= 1:
            raise ValueError("need 0 < beta1 <= beta2 <= 1")
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        if not self.rho < self.beta1 / b2:
            raise ValueError("need rho < beta1/beta2")
        if self.gamma is not None and not 0 < self.gamma <= 1:
            raise ValueError("gamma must lie in (0, 1]")

    @property
    def beta_hi(self) -> float:
        return self.beta1 if self.beta2 is None else self.beta2


@dataclass
class DisjointFamily:
    """Pairwise-disjoint sets with provenance and the audited count bound."""

    members: list[tuple[object, GSet]]
    min_size: int
    provenance: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.members)

    def audit(self, inside: Callable[[object], GSet] | None = None) -> None:
        """Re-verify disjointness, per-member size, and inclusion in the claimed parent."""
        union = 0
        for tag, S in self.members:
            m = S.int_mask()
            if m & union:
                raise AssertionError("family members are not pairwise disjoint")
            union |= m
            if S.card < self.min_size:
                raise AssertionError(f"member of size {S.card} under the floor {self.min_size}")
            if inside is not None:
                parent = inside(tag)
                if not S.is_subset(parent):
                    raise AssertionError("family member escapes its claimed parent set")
        bound = self.provenance.get("count_bound")
        if bound is not None and not self.provenance.get("bound_waived", False):
            if self.count < bound - 1e-12:
                raise AssertionError(f"family count {self.count} under the bound {bound}")


def greedy_disjoint_translates(A: GSet, B: GSet) -> DisjointFamily:
    """Disjoint pieces A_j inside translates A + b_j with |A_j| >= |A|/2.

    Single ascending scan over b in B keeping each residual that stays at least
    half of |A|.  The returned count s satisfies s >= |A| |B|^2 / (16 E(A,B))
    or s >= |B|/2 (both exits audited)."""
    if A.group != B.group:
        raise ValueError("group mismatch")
    if not A.card or not B.card:
        raise PreconditionError("both sets must be nonempty")
    taken = 0
    members: list[tuple[object, GSet]] = []
    for b in B.members.tolist():
        shifted = A.translate(b)
        residual = shifted.int_mask() & ~taken
        if 2 * residual.bit_count() >= A.card:
            piece = GSet.from_int_mask(A.group, residual)
            members.append((b, piece))
            taken |= residual
    e = pair_energy(A, B)
    bound = A.card * B.card * B.card / (16.0 * e)
    fam = DisjointFamily(
        members=members,
        min_size=(A.card + 1) // 2,
        provenance={
            "algorithm": "greedy_disjoint_translates",
            "count_bound": min(bound, B.card / 2.0),
            "energy_bound": bound,
            "half_b": B.card / 2.0,
        },
    )
    fam.audit(inside=lambda b: A.translate(int(b)))
    return fam


def greedy_disjoint_in_target(A: GSet, B: GSet, S: GSet) -> DisjointFamily:
    """Disjoint pieces S_j inside S cap (A + b_j), each of size ceil(sigma/(8|B|)).

    Requires sigma = sum_{x in S} (A*B)(x) >= 16 |B|; raises otherwise because the
    count guarantee sigma^3 / (256 |A|^2 |B| E(A,B)) is void below that mass."""
    if not (A.group == B.group == S.group):
        raise ValueError("group mismatch")
    conv = set_convolve(A, B)
    sigma = int(conv[S.members].sum()) if S.card else 0
    if sigma < 16 * B.card:
        raise PreconditionError(f"sigma={sigma} below 16|B|={16 * B.card}; bound not guaranteed")
    piece_size = -(-sigma // (8 * B.card))  # ceil
    taken = 0
    smask = S.int_mask()
    members: list[tuple[object, GSet]] = []
    for b in B.members.tolist():
        window = (A.translate(b).int_mask() & smask) & ~taken
        if window.bit_count() >= piece_size:
            kept = 0
            m = window
            for _ in range(piece_size):
                lsb = m & -m
                kept |= lsb
                m ^= lsb
            members.append((b, GSet.from_int_mask(A.group, kept)))
            taken |= kept
    e = pair_energy(A, B)
    bound = sigma ** 3 / (256.0 * A.card * A.card * B.card * e)
    fam = DisjointFamily(
        members=members,
        min_size=piece_size,
        provenance={
            "algorithm": "greedy_disjoint_in_target",
            "sigma": sigma,
            "count_bound": bound,
        },
    )
    fam.audit(inside=lambda b: S.intersect(A.translate(int(b))))
    return fam


def greedy_disjoint_slices(A: GSet, D: GSet) -> DisjointFamily:
    """Shifts s_j with pairwise-disjoint slices A_{s_j}, picked greedily.

    Each round removes A - A_s for the surviving shift minimizing |A - A_s|
    (ties to the smallest index); stops once fewer than |D|/2 shifts survive.
    Disjointness holds because t in A - A_s exactly when A_t meets A_s.
    The count satisfies l >= |D|^2 / (4 sigma) with sigma = sum_{s in D}|A - A_s|."""
    if A.group != D.group:
        raise ValueError("group mismatch")
    if not D.card:
        raise PreconditionError("D must be nonempty")
    ca = set_correlate(A, A)
    if any(ca[s] == 0 for s in D.members.tolist()):
        raise PreconditionError("D must sit inside A - A (every slice nonempty)")

    diff_sizes: dict[int, int] = {}
    diff_masks: dict[int, int] = {}
    for s in D.members.tolist():
        dmask = difference_set(A, A.slice1(s)).int_mask()
        diff_masks[s] = dmask
        diff_sizes[s] = dmask.bit_count()
    sigma = sum(diff_sizes.values())

    surviving = D.int_mask()
    members: list[tuple[object, GSet]] = []
    half = D.card / 2.0
    while surviving.bit_count() >= half:
        best_s, best_v = -1, None
        m = surviving
        while m:
            lsb = m & -m
            s = lsb.bit_length() - 1
            v = diff_sizes[s]
            if best_v is None or v < best_v:
                best_s, best_v = s, v
            m ^= lsb
        members.append((best_s, A.slice1(best_s)))
        surviving &= ~diff_masks[best_s]

    bound = D.card * D.card / (4.0 * sigma)
    fam = DisjointFamily(
        members=members,
        min_size=1,
        provenance={
            "algorithm": "greedy_disjoint_slices",
            "sigma": sigma,
            "count_bound": bound,
        },
    )
    fam.audit(inside=lambda s: A)
    return fam


def random_disjoint_family(Ms: Sequence[GSet], delta: int, C: float, seed: int,
                           max_retries: int = RANDOM_FAMILY_RETRIES) -> DisjointFamily:
    """Seeded probabilistic disjointification of a family with bounded sizes.

    Requires delta <= |M_j| <= C*delta and overlap mass sigma = sum_{i,j} |M_i cap M_j|
    at most 1e-4 t^2 delta.  Samples each M_i with probability p = t*delta/(2 sigma),
    disjointifies greedily in index order, keeps pieces of size >= delta/(8C+4), and
    retries (same stream) until the count reaches t^2 delta / ((32C+16) sigma)."""
    t = len(Ms)
    if t == 0:
        raise PreconditionError("empty family")
    g = Ms[0].group
    occupancy = np.zeros(g.size, dtype=np.int64)
    for M in Ms:
        if M.group != g:
            raise ValueError("group mismatch")
        if not delta <= M.card <= C * delta:
            raise PreconditionError(f"member size {M.card} outside [delta, C delta] = [{delta}, {C * delta}]")
        occupancy[M.members] += 1
    # sum_{i,j} |M_i cap M_j| = sum_x (#members through x)^2
    sigma = int(np.dot(occupancy, occupancy))
    if sigma > 1e-4 * t * t * delta:
        raise PreconditionError(f"overlap mass sigma={sigma} exceeds 1e-4 t^2 delta={1e-4 * t * t * delta}")

    p = t * delta / (2.0 * sigma)
    keep_floor = delta / (8.0 * C + 4.0)
    target = t * t * delta / ((32.0 * C + 16.0) * sigma)
    rng = np.random.Generator(np.random.Philox(key=seed))
    for attempt in range(max_retries):
        chosen = np.flatnonzero(rng.random(t) < p)
        union = np.zeros(g.size, dtype=bool)
        members: list[tuple[object, GSet]] = []
        for i in chosen.tolist():
            piece = Ms[i].mask & ~union
            pc = int(np.count_nonzero(piece))
            if pc >= keep_floor:
                members.append((i, GSet(g, piece)))
                union |= piece
        if len(members) >= target:
            fam = DisjointFamily(
                members=members,
                min_size=math.ceil(keep_floor),
                provenance={
                    "algorithm": "random_disjoint_family",
                    "seed": seed,
                    "attempt": attempt,
                    "p": p,
                    "sigma": sigma,
                    "count_bound": target,
                    "max_retries": max_retries,
                },
            )
            fam.audit(inside=lambda i: Ms[int(i)])
            return fam
    raise RuntimeError(
        f"random_disjoint_family: {max_retries} seeded attempts all fell short of {target:.3f}")


def regular_part(A: GSet) -> GSet:
    """{x in A : ((A*A) o A)(x) <= 2 E(A)/|A|}; always at least half of A."""
    if not A.card:
        raise PreconditionError("A must be nonempty")
    cube = correlate(convolve(A, A), A).values
    e2 = int(energy_k(A, 2).value)
    keep = [x for x in A.members.tolist() if int(cube[x]) * A.card <= 2 * e2]
    out = GSet.from_indices(A.group, keep)
    if 2 * out.card < A.card:
        raise AssertionError("regular part lost more than half of the set")
    return out


def regular_part_weighted(A: GSet, weight: np.ndarray) -> GSet:
    """Markov-selected half of A for a nonnegative even weight w: keeps the points
    whose kernel row sum over A is at most twice the average, so that
    sum_x w(x) (f o f)(x) <= 2 |A|^{-1} sum_x w(x) (A o A)(x) |f|_2^2
    for every function f supported on the survivor."""
    if not A.card:
        raise PreconditionError("A must be nonempty")
    w = np.asarray(weight)
    if np.any(w < 0):
        raise ValueError("weight must be nonnegative")
    if not np.array_equal(w, w[A.group.neg_perm]):
        raise ValueError("weight must be even")
    rows = convolve(A.indicator(), DenseFunc(A.group, w.astype(np.int64))).values
    total = int(rows[A.members].sum())
    keep = [x for x in A.members.tolist() if int(rows[x]) * A.card <= 2 * total]
    out = GSet.from_indices(A.group, keep)
    if 2 * out.card < A.card:
        raise AssertionError("weighted regular part lost more than half of the set")
    return out


# -- exhaustive subset scans ---------------------------------------------------------


def _popcounts(n_masks: int) -> np.ndarray:
    masks = np.arange(n_masks, dtype=np.uint32)
    return np.bitwise_count(masks).astype(np.int64)


def _difference_classes(A: GSet) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise difference table of the members: (m*m array of class ids, class diffs)."""
    g = A.group
    mem = A.members
    m = mem.size
    xs = np.repeat(mem, m)
    ys = np.tile(mem, m)
    diffs = g.sub_indices(xs, ys).reshape(m, m)
    uniq, inv = np.unique(diffs, return_inverse=True)
    return inv.reshape(m, m), uniq


def _subset_correlation_power_sums(A: GSet, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """For every subset mask S of A's members: sum over difference classes of
    count_d(S)^alpha, plus the popcount table.  Vectorized over all 2^m masks."""
    m = A.card
    if m > SUBSET_SEARCH_CAP:
        raise ValueError(f"|A| = {m} exceeds the exhaustive-search cap {SUBSET_SEARCH_CAP}")
    n_masks = 1 << m
    classes, uniq = _difference_classes(A)
    pops = _popcounts(n_masks)
    masks = np.arange(n_masks, dtype=np.int64)
    bit = [(masks >> i) & 1 for i in range(m)]
    integer_alpha = float(alpha) == int(alpha)
    acc = np.zeros(n_masks, dtype=np.int64 if integer_alpha else np.float64)
    for d in range(uniq.size):
        pairs = np.argwhere(classes == d)
        cnt = np.zeros(n_masks, dtype=np.int64)
        for i, j in pairs:
            cnt += bit[i] & bit[j]
        if integer_alpha:
            acc += cnt ** int(alpha)
        else:
            acc += np.where(cnt > 0, cnt.astype(np.float64), 1.0) ** float(alpha) * (cnt > 0)
    return acc, pops


def connectedness_gamma(A: GSet, alpha: float, beta: float) -> tuple[float, GSet]:
    """gamma = min over B subset of A with |B| >= beta |A| of
    E_alpha(B) (|A|/|B|)^(2 alpha) / E_alpha(A), with its first minimizing witness."""
    if A.card == 0:
        raise PreconditionError("A must be nonempty")
    if A.card > SUBSET_SEARCH_CAP:
        raise ValueError(f"|A| = {A.card} exceeds the exhaustive-search cap {SUBSET_SEARCH_CAP}")
    e_full, pops = _subset_correlation_power_sums(A, alpha)
    a = A.card
    full = (1 << a) - 1
    e_a = float(e_full[full])
    sizes = pops
    eligible = sizes >= beta * a - 1e-9
    eligible[0] = False
    ratios = np.full(e_full.shape, np.inf)
    with np.errstate(divide="ignore"):
        sel = np.flatnonzero(eligible)
        ratios[sel] = e_full[sel].astype(np.float64) * (a / sizes[sel].astype(np.float64)) ** (2 * alpha) / e_a
    best = int(np.argmin(ratios))
    gamma = float(ratios[best])
    mem = A.members
    witness = GSet.from_indices(A.group, [int(mem[i]) for i in range(a) if (best >> i) & 1])
    return gamma, witness


def gowers_connectedness_gamma(A: GSet, k: int, beta: float) -> tuple[float, GSet]:
    """Like connectedness_gamma but with order-k uniformity counts in place of E_alpha."""
    from .gowers import gowers_u

    if A.card == 0:
        raise PreconditionError("A must be nonempty")
    if A.card > SUBSET_SEARCH_CAP:
        raise ValueError(f"|A| = {A.card} exceeds the exhaustive-search cap {SUBSET_SEARCH_CAP}")
    a = A.card
    mem = A.members.tolist()
    u_a = gowers_u(A, k).count
    best_gamma, best_mask = math.inf, 0
    for mask in range(1, 1 << a):
        size = mask.bit_count()
        if size < beta * a - 1e-9:
            continue
        B = GSet.from_indices(A.group, [mem[i] for i in range(a) if (mask >> i) & 1])
        ratio = gowers_u(B, k).count * (a / size) ** (1 << k) / u_a
        if ratio < best_gamma:
            best_gamma, best_mask = ratio, mask
    witness = GSet.from_indices(A.group, [mem[i] for i in range(a) if (best_mask >> i) & 1])
    return float(best_gamma), witness


def _subset_sums_over_masks(weights: np.ndarray) -> np.ndarray:
    """DP table: for every bitmask over m items, the sum of selected weights."""
    m = weights.size
    out = np.zeros(1 << m, dtype=np.int64)
    size = 1
    for i in range(m):
        out[size:2 * size] = out[:size] + int(weights[i])
        size *= 2
    return out


def extract_connected_subset(A: GSet, q: WeightKernel, beta1: float, beta2: float,
                             rho: float) -> tuple[GSet, int]:
    """Iteratively strip violating subsets until every mid-sized subset keeps a
    rho * density share of the kernel energy.

    A subset C of the current set V violates when E_q(C, V) < rho (|C|/|V|) E_q(V);
    the cross energy is linear in C, so the scan is a subset-sum sweep.  The first
    violator in ascending-bitmask order is removed.  On exit the survivor V* has
    E_q(V*) > (1 - beta2 rho)^{2s} E_q(A) for the returned step count s."""
    if not 0 < beta1 <= beta2 <= 1:
        raise ValueError("need 0 < beta1 <= beta2 <= 1")
    if not rho < beta1 / beta2:
        raise PreconditionError("need rho < beta1/beta2")
    if A.card > SUBSET_SEARCH_CAP:
        raise ValueError(f"|A| = {A.card} exceeds the exhaustive-search cap {SUBSET_SEARCH_CAP}")
    if A.card == 0:
        raise PreconditionError("A must be nonempty")

    current = A
    steps = 0
    while True:
        mem = current.members
        m = mem.size
        row = q.row_sums(current)
        w = np.asarray([int(row[x]) if isinstance(row[x], (int, np.integer)) else float(row[x])
                        for x in mem.tolist()])
        eq_v = w.sum()  # E_q(V) = sum_{x in V} w_V(x)
        if eq_v <= 0:
            raise PreconditionError("kernel energy vanished; no guarantee applies")
        exact = w.dtype.kind in "iu"
        sums = _subset_sums_over_masks(w) if exact else _float_subset_sums(w)
        pops = _popcounts(1 << m)
        lo = beta1 * m - 1e-9
        hi = beta2 * m + 1e-9
        eligible = (pops >= lo) & (pops <= hi) & (pops > 0)
        # violation: E_q(C, V) < rho * (|C|/|V|) * E_q(V), with E_q(C, V) linear in C
        viol = eligible & (sums.astype(np.float64) * m < rho * pops * float(eq_v))
        hits = np.flatnonzero(viol)
        first = -1
        if exact:
            rho_f = Fraction(rho)
            for h in hits.tolist():
                if Fraction(int(sums[h]) * m) < rho_f * int(pops[h]) * int(eq_v):
                    first = int(h)
                    break
        elif hits.size:
            first = int(hits[0])
        if first < 0:
            return current, steps
        drop = [int(mem[i]) for i in range(m) if (first >> i) & 1]
        current = current.difference(GSet.from_indices(A.group, drop))
        steps += 1


def _float_subset_sums(weights: np.ndarray) -> np.ndarray:
    m = weights.size
    out = np.zeros(1 << m, dtype=np.float64)
    size = 1
    for i in range(m):
        out[size:2 * size] = out[:size] + float(weights[i])
        size *= 2
    return out


def extraction_step_cap(A: GSet, q: WeightKernel, beta1: float, beta2: float, rho: float) -> int:
    """Ceiling on the number of removal steps, from the kernel-energy density."""
    eq = q.energy(A, A)
    c = float(eq) / (A.card * A.card * q.norm_inf())
    if c >= 1:
        return 0
    shrink = math.log((1 - beta2 * rho) / (1 - beta1))
    return math.ceil(math.log(1 / c) / (2 * shrink))


def connected_extraction_gamma_floor(k: int, beta: float, steps: int) -> float:
    """gamma implied for the (k, beta, gamma)-connected survivor after `steps` removals
    with the canonical parameters beta1=beta, beta2=1, rho=beta/2."""
    s = steps
    return 2.0 ** (-(2 * s * k + 2 * k - 2 * s)) * beta ** (2 * k) * (2 - beta) ** (2 * s * (k - 1))


@dataclass(frozen=True)
class SliceScan:
    """Result of the pseudorandom-slice scan (report-only)."""

    shift: int | None
    ratio: float | None
    slice_card: int
    qualifying: int


def min_slice_energy_ratio(A: GSet) -> SliceScan:
    """Scan s != 0 with |A_s| >= |A| / (2K), K = |A|^3/E(A); return the minimizer of
    E(A_s)/|A_s|^3.  Report-only: no constant is asserted."""
    if not A.card:
        raise PreconditionError("A must be nonempty")
    e2 = int(energy_k(A, 2).value)
    K = A.card ** 3 / e2
    floor = A.card / (2.0 * K)
    ca = set_correlate(A, A)
    best_s, best_ratio, best_card, count = None, None, 0, 0
    for s in np.flatnonzero(ca).tolist():
        if s == 0 or ca[s] < floor:
            continue
        count += 1
        As = A.slice1(s)
        ratio = int(energy_k(As, 2).value) / As.card ** 3
        if best_ratio is None or ratio < best_ratio:
            best_s, best_ratio, best_card = s, ratio, As.card
    return SliceScan(shift=best_s, ratio=best_ratio, slice_card=best_card, qualifying=count)


def small_doubling_subset_oracle(A: GSet, min_frac: float) -> tuple[GSet, float]:
    """Exhaustive search for the subset of relative size >= min_frac minimizing
    |A' - A'| / |A'|.  Ties break to the smallest bitmask.  Capped at 18 members."""
    if A.card > ORACLE_CAP:
        raise ValueError(f"|A| = {A.card} exceeds the oracle cap {ORACLE_CAP}")
    if not A.card:
        raise PreconditionError("A must be nonempty")
    m = A.card
    classes, uniq = _difference_classes(A)
    n_masks = 1 << m
    masks = np.arange(n_masks, dtype=np.int64)
    bit = [(masks >> i) & 1 for i in range(m)]
    pops = _popcounts(n_masks)
    diff_count = np.zeros(n_masks, dtype=np.int64)
    for d in range(uniq.size):
        pairs = np.argwhere(classes == d)
        present = np.zeros(n_masks, dtype=bool)
        for i, j in pairs:
            present |= (bit[i] & bit[j]).astype(bool)
        diff_count += present
    eligible = pops >= min_frac * m - 1e-9
    eligible[0] = False
    ratios = np.where(eligible, diff_count / np.maximum(pops, 1), np.inf)
    best = int(np.argmin(ratios))
    mem = A.members
    witness = GSet.from_indices(A.group, [int(mem[i]) for i in range(m) if (best >> i) & 1])
    return witness, float(ratios[best])


def popular_slice_family(A: GSet, seed: int, C: float = 2.0) -> DisjointFamily:
    """Pipeline: regular part, then a dyadic popular-slice level, then the seeded
    randomized disjointification of those slices.

    The probabilistic step requires overlap mass at most 1e-4 t^2 delta, which
    forces at least ~10^4 slices at the chosen level; desk-scale inputs raise
    PreconditionError with the measured mass."""
    Ap = regular_part(A)
    ca = set_correlate(Ap, Ap)
    sup = [s for s in np.flatnonzero(ca).tolist() if s != 0]
    if not sup:
        raise PreconditionError("no nonzero slices available")
    levels: dict[int, list[int]] = {}
    for s in sup:
        levels.setdefault(int(ca[s]).bit_length(), []).append(s)
    # pick the level carrying the most squared slice mass
    best_level = max(levels, key=lambda L: sum(int(ca[s]) ** 2 for s in levels[L]))
    shifts = levels[best_level]
    delta = 1 << (best_level - 1)
    Ms = [Ap.slice1(s) for s in shifts]
    fam = random_disjoint_family(Ms, delta, C, seed)
    fam.provenance.update({"algorithm": "popular_slice_family", "level": best_level,
                           "shifts": [int(s) for s in shifts[:64]]})
    return fam
