"""How fast the finite-n expectations reach their limits.

The exact dynamic-programming oracle gives E[# vertices of rank k] as a
rational for any tree size n.  Dividing by n and comparing with the
limiting constants c_k shows the 1/n-scale convergence; the same tables
prove the generating-function layer correct coefficient by coefficient.
"""

from ranktree import genfun, oracle

limits = [float(genfun.rank_constant(k)) for k in range(4)]

print("E[# rank-k vertices]/n against the limit c_k")
header = "".join(f"{'k=' + str(k):>14}" for k in range(4))
print(f"{'n':>6}{header}")
for n in (10, 30, 100, 300):
    counts = oracle.expected_rank_counts(n, 3)
    row = "".join(f"{float(c) / n:>14.8f}" for c in counts)
    print(f"{n:>6}{row}")
print(f"{'limit':>6}" + "".join(f"{c:>14.8f}" for c in limits))

print()
print("series coefficients of the cumulative GF vs 1 - P(root rank > k)")
k = 2
coeffs = genfun.root_rank_cdf_gf(k).series(12)
print(f"{'n':>4} {'GF coefficient':>24} {'oracle':>24}")
for n in range(1, 13):
    dp = 1 - oracle.root_rank_tail(n, k)
    match = "ok" if coeffs[n] == dp else "MISMATCH"
    print(f"{n:>4} {str(coeffs[n]):>24} {str(dp):>24}  {match}")

print()
print("subtree counts: E[# subtrees with >= ell vertices] = (n+1)(2/(ell+1)) - 1")
n = 100
for ell in (1, 2, 5, 10):
    value = oracle.expected_subtrees_atleast(n, ell)
    print(f"n={n}, ell={ell:>2}: {value} ~ {float(value):.4f}")
