"""Higher energies, restricted variants, tuple-indexed sumset counts.

Reproduces the worked numbers on the golden Z_7 triple and on the structured
direct-sum family, then shows the two independent routes to |A^2 -+ Delta(A)|.
"""

from energylab import (delta_sumset_size, difference_set, energy_k, energy_pair_k,
                       mixed_energy, sigma_k, starred_energy, sumset, t_k, wiener_norm)
from energylab.constructors import golden_z7_triple, h_plus_lambda, subspace
from energylab.setfun import GSet, tuple_sumset_sum

A = golden_z7_triple()
print("A =", A.members.tolist(), "in", A.group)
for k in (1, 2, 3, 4):
    print(f"  E_{k}(A) =", energy_k(A, k).value)
print("  E_{3/2}(A) =", energy_k(A, 1.5).value)
print("  T_2(A) =", t_k(A, 2), "  sigma_2 =", sigma_k(A, 2), "  sigma_3 =", sigma_k(A, 3))
print("  E*_3(A) =", starred_energy(A, 3).value, " (zero shift removed: 45 - 27)")

B = GSet.from_indices(A.group, [0, 3])
print("  E(A, B) =", energy_pair_k(A, B, 2).value)
D = difference_set(A, A)
print("  mixed E(D, A, A) =", mixed_energy([D, A, A]).value)
print("  Wiener norm =", round(wiener_norm(A), 6))

# |A^2 - Delta(A)|: direct distinct-pair count vs the per-shift identity
print("\n|A^2 - Delta(A)| =", delta_sumset_size(A, 2, "-"),
      " = sum over s in A-A of |A - A_s| =", tuple_sumset_sum(A, 1, "-"))
print("|A^2 + Delta(A)| =", delta_sumset_size(A, 2, "+"))

# the structured family H + L: energy collapses by the piece count K
for (n, dim, K) in ((6, 2, 4), (8, 3, 5)):
    X = h_plus_lambda(n, dim, K)
    e = int(energy_k(X, 2).value)
    print(f"\nH+L (n={n}, dim={dim}, K={K}): |A| = {X.card}, E = {e}, "
          f"|A|^3 / (K E) = {X.card ** 3 / (K * e):.3f}")

H = subspace(4, 2)
print("\nsubgroup sanity: E_k(H) = |H|^(k+1):",
      [int(energy_k(H, k).value) for k in (1, 2, 3)], "=", [4 ** 2, 4 ** 3, 4 ** 4])
print("sumset of the triple:", sorted(sumset(A, A).members.tolist()),
      " difference set:", sorted(D.members.tolist()))
