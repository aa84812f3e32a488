"""Sets and integer functions on a finite abelian group: exact convolutions and
correlations, slices, sumsets, and tuple-indexed sumset counts.

Everything here is exact.  int64 is used when a certified bound fits; otherwise
the computation escalates to Python integers (never wraps).  The float transform
path lives in `group` and is only compared against, never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .group import GroupSpec, fourier_array, inverse_fourier_array

INT64_SAFE_BOUND = 1 << 62
PAIR_PATH_LIMIT = 2_000_000
DEFAULT_NODE_BUDGET = 4_000_000


class BudgetError(RuntimeError):
    """Raised when a tuple enumeration would exceed the configured budget."""


class GSet:
    """A subset of a group: flat boolean membership array plus cached cardinality."""

    __slots__ = ("group", "mask", "_card", "_members", "_intmask", "_slice1", "_bytes")

    def __init__(self, group: GroupSpec, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool).reshape(group.size)
        self.group = group
        self.mask = mask
        self.mask.setflags(write=False)
        self._card: int | None = None
        self._members: np.ndarray | None = None
        self._intmask: int | None = None
        self._slice1: dict[int, "GSet"] = {}
        self._bytes: bytes | None = None

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_indices(cls, group: GroupSpec, indices: Iterable[int]) -> "GSet":
        mask = np.zeros(group.size, dtype=bool)
        idx = np.asarray(sorted(set(int(i) for i in indices)), dtype=np.int64)
        if idx.size:
            if idx[0] < 0 or idx[-1] >= group.size:
                raise ValueError("set element out of range")
            mask[idx] = True
        return cls(group, mask)

    @classmethod
    def empty(cls, group: GroupSpec) -> "GSet":
        return cls(group, np.zeros(group.size, dtype=bool))

    @classmethod
    def full(cls, group: GroupSpec) -> "GSet":
        return cls(group, np.ones(group.size, dtype=bool))

    # -- basic queries ---------------------------------------------------------

    @property
    def card(self) -> int:
        if self._card is None:
            self._card = int(np.count_nonzero(self.mask))
        return self._card

    def __len__(self) -> int:
        return self.card

    @property
    def members(self) -> np.ndarray:
        if self._members is None:
            self._members = np.flatnonzero(self.mask).astype(np.int64)
        return self._members

    def contains(self, x: int) -> bool:
        return bool(self.mask[x])

    def is_subset(self, other: "GSet") -> bool:
        return bool(np.all(~self.mask | other.mask))

    def key(self) -> bytes:
        if self._bytes is None:
            self._bytes = np.packbits(self.mask).tobytes()
        return self._bytes

    def __eq__(self, other) -> bool:
        return isinstance(other, GSet) and self.group == other.group and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.group.factors, self.key()))

    def __repr__(self) -> str:
        show = ",".join(str(i) for i in self.members[:12])
        more = ",..." if self.card > 12 else ""
        return f"GSet({self.group}, card={self.card}, {{{show}{more}}})"

    def int_mask(self) -> int:
        """Membership as a Python int bitmask (bit i == index i)."""
        if self._intmask is None:
            m = 0
            for i in self.members.tolist():
                m |= 1 << i
            self._intmask = m
        return self._intmask

    @classmethod
    def from_int_mask(cls, group: GroupSpec, m: int) -> "GSet":
        mask = np.zeros(group.size, dtype=bool)
        while m:
            lsb = m & -m
            mask[lsb.bit_length() - 1] = True
            m ^= lsb
        return cls(group, mask)

    # -- algebra ----------------------------------------------------------------

    def _roll(self, b: int) -> np.ndarray:
        return self.mask[self.group.shift_perm(int(b))]

    def translate(self, b: int) -> "GSet":
        """The set A + b."""
        return GSet(self.group, self._roll(int(b)))

    def shift_minus(self, s: int) -> "GSet":
        """The set A - s."""
        return GSet(self.group, self._roll(int(self.group.neg_perm[s])))

    def negate(self) -> "GSet":
        """The set -A."""
        return GSet(self.group, self.mask[self.group.neg_perm])

    def intersect(self, other: "GSet") -> "GSet":
        return GSet(self.group, self.mask & other.mask)

    def union(self, other: "GSet") -> "GSet":
        return GSet(self.group, self.mask | other.mask)

    def difference(self, other: "GSet") -> "GSet":
        return GSet(self.group, self.mask & ~other.mask)

    __and__ = intersect
    __or__ = union

    def slice1(self, s: int) -> "GSet":
        """A âˆ© (A - s), cached per shift."""
        got = self._slice1.get(s)
        if got is None:
            got = GSet(self.group, self.mask & self.shift_minus(s).mask)
            self._slice1[s] = got
        return got

    # -- serialization ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"group": list(self.group.factors), "elements": self.members.tolist()}

    @classmethod
    def from_dict(cls, d: dict, max_size: int | None = None) -> "GSet":
        from .group import make_group

        g = make_group(d["group"], max_size=max_size)
        return cls.from_indices(g, d["elements"])

    def indicator(self) -> "DenseFunc":
        return DenseFunc(self.group, self.mask.astype(np.int64), is_integer=True)


@dataclass
class DenseFunc:
    """A dense function on the group; integer-flagged values stay exact."""

    group: GroupSpec
    values: np.ndarray
    is_integer: bool = True

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values)
        if self.values.shape != (self.group.size,):
            raise ValueError("function length does not match group size")
        if self.is_integer and self.values.dtype.kind == "f":
            raise ValueError("integer-flagged function holds floating point values")

    @classmethod
    def from_values(cls, group: GroupSpec, seq, is_integer: bool | None = None) -> "DenseFunc":
        arr = np.asarray(seq)
        if is_integer is None:
            is_integer = arr.dtype.kind in "iub" or arr.dtype == object
        if is_integer and arr.dtype.kind in "iub":
            arr = arr.astype(np.int64)
        return cls(group, arr, is_integer=is_integer)

    def reflect(self) -> "DenseFunc":
        """f^c(x) = f(-x)."""
        return DenseFunc(self.group, self.values[self.group.neg_perm], self.is_integer)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values)

    def max_abs(self) -> int:
        sup = self.support()
        if not sup.size:
            return 0
        return int(max(abs(int(v)) for v in np.asarray(self.values)[sup].tolist()))


def as_func(f) -> DenseFunc:
    if isinstance(f, GSet):
        return f.indicator()
    if isinstance(f, DenseFunc):
        return f
    raise TypeError(f"expected GSet or DenseFunc, got {type(f)!r}")


# -- exact convolution / correlation ------------------------------------------


def _abs_sum(values: np.ndarray) -> int:
    if values.dtype == object:
        return int(sum(abs(int(v)) for v in values.tolist()))
    return int(np.abs(values.astype(np.int64, copy=False)).sum())


def _roll_array(group: GroupSpec, arr: np.ndarray, b: int) -> np.ndarray:
    """arr rolled so that out[x] = arr[x - b]."""
    return arr[group.shift_perm(int(b))]


def _as_exact_dtype(arr: np.ndarray, big: bool) -> np.ndarray:
    if big:
        return np.array([int(v) for v in arr.tolist()], dtype=object)
    return arr.astype(np.int64, copy=False)


def _conv_exact(group: GroupSpec, a: np.ndarray, b: np.ndarray, sign: int) -> np.ndarray:
    """sign=+1: (a*b)(x) = sum_y a(y) b(x-y); sign=-1: (a o b)(x) = sum_y a(y) b(y+x)."""
    sa = np.flatnonzero(a)
    sb = np.flatnonzero(b)
    if not sa.size or not sb.size:
        return np.zeros(group.size, dtype=np.int64)
    max_a = int(max(abs(int(v)) for v in a[sa].tolist()))
    max_b = int(max(abs(int(v)) for v in b[sb].tolist()))
    bound = min(_abs_sum(a[sa]) * max_b, _abs_sum(b[sb]) * max_a)
    big = bound >= INT64_SAFE_BOUND

    if not big and sa.size * sb.size <= PAIR_PATH_LIMIT:
        xs = np.repeat(sa, sb.size)
        ys = np.tile(sb, sa.size)
        idx = group.add_indices(xs, ys) if sign > 0 else group.sub_indices(ys, xs)
        w = (a[sa].astype(np.int64)[:, None] * b[sb].astype(np.int64)[None, :]).reshape(-1)
        out = np.zeros(group.size, dtype=np.int64)
        np.add.at(out, idx, w)
        return out

    # roll path; accumulate over the sparser support
    out = np.zeros(group.size, dtype=object if big else np.int64)
    if sa.size <= sb.size:
        bb = _as_exact_dtype(b, big)
        for y in sa.tolist():
            # a(y) contributes a(y)*b(x-y) resp. a(y)*b(y+x) = a(y)*roll(b, -y)(x)
            shift = y if sign > 0 else int(group.neg_perm[y])
            out = out + int(a[y]) * _roll_array(group, bb, shift)
    else:
        aa = _as_exact_dtype(a, big)
        ar = aa[group.neg_perm]
        for z in sb.tolist():
            # b(z) contributes b(z)*a(x-z) resp. sum_y a(y) b(y+x): y = z-x, so b(z)*a(z-x)
            shifted = _roll_array(group, aa, z) if sign > 0 else _roll_array(group, ar, z)
            out = out + int(b[z]) * shifted
    return out


def convolve(f, g) -> DenseFunc:
    """(f*g)(x) = sum_y f(y) g(x-y), exact."""
    ff, gg = as_func(f), as_func(g)
    if ff.group != gg.group:
        raise ValueError("convolve: group mismatch")
    if not (ff.is_integer and gg.is_integer):
        a = np.asarray(ff.values, dtype=np.float64)
        b = np.asarray(gg.values, dtype=np.float64)
        out = np.real(inverse_fourier_array(ff.group, fourier_array(ff.group, a) * fourier_array(ff.group, b)))
        return DenseFunc(ff.group, out, is_integer=False)
    return DenseFunc(ff.group, _conv_exact(ff.group, ff.values, gg.values, +1), is_integer=True)


def correlate(f, g) -> DenseFunc:
    """(f o g)(x) = sum_y f(y) g(y+x), exact."""
    ff, gg = as_func(f), as_func(g)
    if ff.group != gg.group:
        raise ValueError("correlate: group mismatch")
    if not (ff.is_integer and gg.is_integer):
        raise ValueError("correlate expects integer functions; use the transform oracle for floats")
    return DenseFunc(ff.group, _conv_exact(ff.group, ff.values, gg.values, -1), is_integer=True)


def set_correlate(A: GSet, B: GSet) -> np.ndarray:
    """(A o B) as an int64 array: (A o B)(x) = |A cap (B - x)|."""
    if A.group != B.group:
        raise ValueError("set_correlate: group mismatch")
    g = A.group
    if A.card * B.card <= PAIR_PATH_LIMIT and A.card and B.card:
        xs = np.repeat(A.members, B.card)
        ys = np.tile(B.members, A.card)
        idx = g.sub_indices(ys, xs)
        return np.bincount(idx, minlength=g.size).astype(np.int64)
    return _conv_exact(g, A.mask.astype(np.int64), B.mask.astype(np.int64), -1)


def set_convolve(A: GSet, B: GSet) -> np.ndarray:
    if A.group != B.group:
        raise ValueError("set_convolve: group mismatch")
    g = A.group
    if A.card * B.card <= PAIR_PATH_LIMIT and A.card and B.card:
        xs = np.repeat(A.members, B.card)
        ys = np.tile(B.members, A.card)
        idx = g.add_indices(xs, ys)
        return np.bincount(idx, minlength=g.size).astype(np.int64)
    return _conv_exact(g, A.mask.astype(np.int64), B.mask.astype(np.int64), +1)


def convolve_via_fourier(f, g) -> np.ndarray:
    """Float transform path for f*g; oracle only."""
    ff, gg = as_func(f), as_func(g)
    spec = fourier_array(ff.group, np.asarray(ff.values, dtype=np.float64)) * \
        fourier_array(ff.group, np.asarray(gg.values, dtype=np.float64))
    return np.real(inverse_fourier_array(ff.group, spec))


def iterated_convolve(f, k: int) -> DenseFunc:
    """k >= 1 convolution applications: k=1 gives f*f, k=2 gives f*f*f, ..."""
    if k < 1:
        raise ValueError("iterated_convolve requires k >= 1")
    ff = as_func(f)
    out = ff
    for _ in range(k):
        out = convolve(out, ff)
    return out


def sigma_k(A: GSet, k: int) -> int:
    """Number of k-tuples of A summing to zero."""
    if k < 1:
        raise ValueError("sigma_k requires k >= 1")
    if k == 1:
        return int(A.mask[0])
    return int(iterated_convolve(A, k - 1).values[0])


def generalized_convolution(fs: Sequence, xs: Sequence[int]):
    """C(f_0,...,f_{k-1})(x_1,...,x_{k-1}) = sum_z f_0(z) f_1(z+x_1) ... f_{k-1}(z+x_{k-1})."""
    funcs = [as_func(f) for f in fs]
    k = len(funcs)
    if k < 2:
        raise ValueError("generalized convolution needs at least two functions")
    if len(xs) != k - 1:
        raise ValueError(f"expected {k - 1} shifts for {k} functions, got {len(xs)}")
    g = funcs[0].group
    for f in funcs[1:]:
        if f.group != g:
            raise ValueError("generalized_convolution: group mismatch")
    bound = 1
    for f in funcs:
        bound *= max(1, f.max_abs())
    bound *= g.size
    acc = funcs[0].values.astype(object if bound >= INT64_SAFE_BOUND else np.int64, copy=True)
    for f, x in zip(funcs[1:], xs):
        acc = acc * _roll_array(g, f.values.astype(acc.dtype, copy=False), int(g.neg_perm[int(x)]))
    total = sum(int(v) for v in acc.tolist())
    return total


# -- slices ----------------------------------------------------------------------


def slice_set(A: GSet, B: GSet, shifts: Sequence[int]) -> GSet:
    """B cap (A - s_1) cap ... cap (A - s_m); the empty tuple gives B cap A."""
    if A.group != B.group:
        raise ValueError("slice_set: group mismatch")
    if len(shifts) == 0:
        return GSet(A.group, B.mask & A.mask)
    mask = B.mask.copy()
    for s in shifts:
        mask &= A.shift_minus(int(s)).mask
        if not mask.any():
            break
    return GSet(A.group, mask)


def self_slice(A: GSet, shifts: Sequence[int]) -> GSet:
    """A cap (A - s_1) cap ... (base set equals the sliced set)."""
    out = A
    for s in shifts:
        out = out.intersect(A.shift_minus(int(s)))
    return out


# -- sumsets ---------------------------------------------------------------------


def sumset(A: GSet, B: GSet) -> GSet:
    if A.group != B.group:
        raise ValueError("sumset: group mismatch")
    if not A.card or not B.card:
        return GSet.empty(A.group)
    small, big = (A, B) if A.card <= B.card else (B, A)
    mask = np.zeros(A.group.size, dtype=bool)
    for b in small.members.tolist():
        mask |= big._roll(b)
    return GSet(A.group, mask)


def difference_set(A: GSet, B: GSet) -> GSet:
    """A - B = {a - b}."""
    return sumset(A, B.negate())


# -- tuple-indexed sumset counts ---------------------------------------------------


class _SliceMachine:
    """Shared machinery for enumerating shift tuples with nonempty slices.

    Works on Python int bitmasks.  For each member b of A it precomputes the
    bitmask of A-b (the valid next shifts s with X cap (A-s) nonempty always lie
    in A-X = union of A-b over b in X) and the bitmask of (A-s) per candidate s.
    """

    def __init__(self, A: GSet, budget: int | None = None):
        self.A = A
        self.group = A.group
        self.budget = DEFAULT_NODE_BUDGET if budget is None else budget
        self.nodes = 0
        self._diff_from: dict[int, int] = {}   # b -> intmask of A-b
        self._sum_from: dict[int, int] = {}    # b -> intmask of A+b
        self._shifted: dict[int, int] = {}     # s -> intmask of A-s

    def diff_from(self, b: int) -> int:
        got = self._diff_from.get(b)
        if got is None:
            got = GSet(self.group, self.A._roll(int(self.group.neg_perm[b]))).int_mask()
            self._diff_from[b] = got
        return got

    def sum_from(self, b: int) -> int:
        got = self._sum_from.get(b)
        if got is None:
            got = GSet(self.group, self.A._roll(int(b))).int_mask()
            self._sum_from[b] = got
        return got

    def shifted(self, s: int) -> int:
        got = self._shifted.get(s)
        if got is None:
            got = GSet(self.group, self.A.shift_minus(s).mask).int_mask()
            self._shifted[s] = got
        return got

    def candidate_shifts(self, xmask: int) -> int:
        """Bitmask of {s : X cap (A-s) nonempty} = A - X."""
        out = 0
        m = xmask
        while m:
            lsb = m & -m
            out |= self.diff_from(lsb.bit_length() - 1)
            m ^= lsb
        return out

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetError(f"slice-tuple enumeration exceeded budget ({self.budget} nodes)")


def _bits(m: int):
    while m:
        lsb = m & -m
        yield lsb.bit_length() - 1
        m ^= lsb


def _tuple_sum(machine: _SliceMachine, xmask: int, depth: int, leaf, memo: dict) -> int:
    """Sum of leaf(X) over all shift tuples of the given arity with nonempty slices X."""
    if depth == 0:
        return leaf(xmask)
    key = (xmask, depth)
    got = memo.get(key)
    if got is not None:
        return got
    total = 0
    for s in _bits(machine.candidate_shifts(xmask)):
        machine.tick()
        child = xmask & machine.shifted(s)
        total += _tuple_sum(machine, child, depth - 1, leaf, memo)
    memo[key] = total
    return total


def count_nonempty_slice_tuples(A: GSet, arity: int, budget: int | None = None) -> int:
    """|{(s_1..s_arity) : A cap (A-s_1) ... cap (A-s_arity) nonempty}|.

    Equals the number of distinct tuples (a_1 - a, ..., a_arity - a) over a, a_i in A.
    """
    if arity < 0:
        raise ValueError("arity must be >= 0")
    if not A.card:
        return 0
    if arity == 0:
        return 1
    machine = _SliceMachine(A, budget)
    return _tuple_sum(machine, A.int_mask(), arity, lambda _m: 1, {})


def delta_sumset_size(A: GSet, n: int, sign: str, budget: int | None = None) -> int:
    """|A^n - Delta(A)| (sign '-') or |A^n + Delta(A)| (sign '+').

    n == 2 additionally cross-checks the direct pair count against the
    shift-tuple identity; they must agree exactly.
    """
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    if n < 2:
        raise ValueError("n must be >= 2")
    if not A.card:
        return 0
    machine = _SliceMachine(A, budget)
    pick = machine.diff_from if sign == "-" else machine.sum_from

    def leaf(xmask: int) -> int:
        out = 0
        for b in _bits(xmask):
            out |= pick(b)
        return out.bit_count()

    ident = _tuple_sum(machine, A.int_mask(), n - 1, leaf, {})
    if n == 2:
        direct = delta_pairs_direct(A, sign)
        if direct != ident:
            raise AssertionError(
                f"delta_sumset_size disagreement at n=2 sign {sign}: direct {direct} vs identity {ident}")
    return ident


def delta_pairs_direct(A: GSet, sign: str) -> int:
    """|A^2 -+ Delta(A)| by the direct distinct-pair sweep (no shift tuples)."""
    g = A.group
    rows: dict[int, int] = {}
    for a in A.members.tolist():
        if sign == "-":
            moved = GSet(g, A._roll(int(g.neg_perm[a])))
        else:
            moved = GSet(g, A._roll(int(a)))
        m = moved.int_mask()
        for x in moved.members.tolist():
            rows[x] = rows.get(x, 0) | m
    return sum(r.bit_count() for r in rows.values())


def tuple_sumset_sum(A: GSet, arity: int, sign: str, budget: int | None = None) -> int:
    """sum over nonempty arity-tuples of |A -+ A_tuple| (the identity-path summand)."""
    machine = _SliceMachine(A, budget)
    pick = machine.diff_from if sign == "-" else machine.sum_from

    def leaf(xmask: int) -> int:
        out = 0
        for b in _bits(xmask):
            out |= pick(b)
        return out.bit_count()

    return _tuple_sum(machine, A.int_mask(), arity, leaf, {})


# -- inclusion checks -----------------------------------------------------------


def katz_koester_check(A: GSet, shifts: Sequence[int]) -> bool:
    """True iff A - A_t is contained in (A-A)_{-t} and A + A_t in (A+A)_t.

    Both hold for every set and tuple; False signals a computation bug.
    """
    g = A.group
    At = self_slice(A, shifts)
    D = difference_set(A, A)
    S = sumset(A, A)
    neg_shifts = [int(g.neg_perm[int(s)]) for s in shifts]
    left_minus = difference_set(A, At)
    right_minus = slice_set(D, D, neg_shifts)
    left_plus = sumset(A, At)
    right_plus = slice_set(S, S, list(int(s) for s in shifts))
    return left_minus.is_subset(right_minus) and left_plus.is_subset(right_plus)
