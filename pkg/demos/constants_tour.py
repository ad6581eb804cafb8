"""Tour of the exact limiting constants.

The fraction of vertices at distance k from their nearest descendant
leaf converges, for a random binary search tree, to an exact rational
c_k.  This script computes c_0..c_5 along two independent symbolic
routes, prints them with their partial sums, and factors the
denominators, whose prime support stays below 2^(k+1)+1 and (for
k >= 2) fills the whole interval of primes gap-free.
"""

from ranktree import conjecture, genfun

print("exact rank constants and partial sums")
print(f"{'k':>2} {'c_k':>28} {'float':>12} {'S_k':>12}")
for k in range(6):
    c = genfun.rank_constant(k)  # raises if the two routes disagree
    s = genfun.partial_sum(k)
    c_str = f"{c.numerator}/{c.denominator}"
    if len(c_str) > 28:
        c_str = c_str[:12] + "..." + c_str[-12:]
    print(f"{k:>2} {c_str:>28} {float(c):>12.8f} {float(s):>12.8f}")

print()
print("denominator factorizations (prime support is gap-free for k >= 2)")
for k in range(6):
    verdict = conjecture.check_conjectures(k, genfun.rank_constant(k))
    factors = " * ".join(
        f"{p}^{e}" if e > 1 else str(p) for p, e in verdict.denominator.factors
    )
    print(
        f"k={k}: {factors or 1}  "
        f"(largest prime {verdict.largest_prime} <= {verdict.threshold}, "
        f"gap-free: {verdict.gap_free})"
    )

print()
print("per-vertex leaf counts: descendant leaves f_k/c_k, closest leaves g_k/c_k")
for k in range(4):
    f_ratio, g_ratio = genfun.per_vertex_ratios(k)
    print(f"k={k}: f/c = {f_ratio} ~ {float(f_ratio):.5f},  g/c = {g_ratio} ~ {float(g_ratio):.5f}")
