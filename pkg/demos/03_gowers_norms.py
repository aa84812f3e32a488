"""Uniformity counts: the cube-count ladder, normalization, and the two-set form."""

from energylab import gowers_normalized_monotonicity, gowers_pair_u3, gowers_u
from energylab.constructors import golden_z7_triple, random_set, subspace
from energylab.energy import energy_k, pair_energy
from energylab.group import make_group
from energylab.setfun import GSet

A = golden_z7_triple()
print("A =", A.members.tolist())
for d in (1, 2, 3, 4):
    gv = gowers_u(A, d)
    print(f"  order {d}: count = {gv.count:>3}  normalized = {gv.normalized:.6f}")
print("order 2 equals the additive energy:", gowers_u(A, 2).count == energy_k(A, 2).value)

print("\nnormalized values are monotone in the order:")
for d in (2, 3, 4):
    print(f"  d={d}:", gowers_normalized_monotonicity(A, d))

H = subspace(4, 2)
print("\nsubgroup ladder |H|^(d+1):", [gowers_u(H, d).count for d in (1, 2, 3, 4)])

# two-set order-3 quantity with its energy floor
B = GSet.from_indices(A.group, [0, 3])
v = int(gowers_pair_u3(A, B).value)
e = pair_energy(A, B)
print(f"\ntwo-set order-3 count = {v}, floor E(A,B)^4/(|A||B|)^4 = "
      f"{e ** 4 / (A.card ** 4 * B.card ** 4):.3f}")

# a random set sits near its heuristic count; a structured set runs far above
g = make_group([2] * 8)
R = random_set(g, 0.2, 1)
print(f"\nrandom (|A|={R.card}): U3 = {gowers_u(R, 3).count}, "
      f"E^4/|A|^8 floor = {int(energy_k(R, 2).value) ** 4 / R.card ** 8:.1f}")
S = subspace(8, 4)
print(f"subspace (|H|={S.card}): U3 = {gowers_u(S, 3).count} = |H|^4 = {S.card ** 4}")
