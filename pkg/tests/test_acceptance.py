"""Acceptance suite: one pass/fail line per criterion (run with -s to see them).

Criterion 1 is split: the printed approximation for the k = 3 constant in
the source table is inconsistent with its own exactly-stated denominator
factorization and with the surrounding data, so the +-0.001 window around
0.105 is recorded as a strict expected failure, and a companion test pins
the independently cross-validated exact value (~0.10915) instead.  See
the decisions ledger for the full evidence.
"""

import json

import pytest

from exact_values import (
    C3_DEN_FACTORS,
    C5_DEN_FACTORS,
    C_EXACT,
    F_EXACT,
    F_OVER_C,
    G_EXACT,
    G_OVER_C,
)
from ranktree import cli, conjecture, genfun, montecarlo, oracle
from ranktree.plring import PLExpr, Rational


def report(tag: str, ok: bool, detail: str = "") -> None:
    suffix = f" — {detail}" if detail else ""
    print(f"ACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'}{suffix}")
    assert ok, f"criterion {tag} failed: {detail}"


def test_criterion_1_exact_constants():
    ok = (
        genfun.rank_constant(0) == C_EXACT[0]
        and genfun.rank_constant(1) == C_EXACT[1]
        and genfun.rank_constant(2) == C_EXACT[2]
        and genfun.rank_constant(4) == C_EXACT[4]
        and abs(float(genfun.rank_constant(4)) - 0.0364) <= 5e-4
        and abs(float(genfun.rank_constant(5)) - 0.0074) <= 5e-4
        and conjecture.check_conjectures(5, genfun.rank_constant(5)).denominator.factors
        == C5_DEN_FACTORS
    )
    report("1", ok, "c_0..c_2, c_4 exact; c_4, c_5 windows; c_5 factorization")


@pytest.mark.xfail(
    strict=True,
    reason="the printed approximation 0.105 for k = 3 contradicts the"
    " exactly-stated denominator factorization, the partial sum S_3 ~ 0.955,"
    " the k = 4 printed fraction, and the finite-n oracle limit ~ 0.1091;"
    " the engine's exact value is 0.109153...",
)
def test_criterion_1_c3_printed_window():
    c3 = float(genfun.rank_constant(3))
    report("1-c3-window", abs(c3 - 0.105) <= 1e-3, f"c_3 ~ {c3:.6f}")


def test_criterion_1_c3_corrected_value():
    c3 = genfun.rank_constant(3)
    factors = conjecture.check_conjectures(3, c3).denominator.factors
    # the finite-n oracle converges to the same limit from above
    finite = float(oracle.expected_rank_counts(300, 3)[3]) / 300
    ok = (
        c3 == C_EXACT[3]
        and factors == C3_DEN_FACTORS
        and abs(float(c3) - 0.109153) < 1e-5
        and abs(finite - float(c3)) < 2e-3
    )
    report("1-c3-corrected", ok, f"c_3 = {c3} ~ {float(c3):.6f}, E_300/300 ~ {finite:.6f}")


def test_criterion_2_pair_constants():
    ok = (
        [genfun.leaf_pair_constant(k) for k in range(3)] == F_EXACT
        and [genfun.closest_leaf_constant(k) for k in range(3)] == G_EXACT
        and [genfun.per_vertex_ratios(k) for k in range(3)]
        == list(zip(F_OVER_C, G_OVER_C))
    )
    report("2", ok, "f, g, and both ratio families exact for k <= 2")


def test_criterion_3_partial_sums():
    s = [float(genfun.partial_sum(k)) for k in range(6)]
    ok = 0.954 < s[3] < 0.956 and 0.9913 < s[4] < 0.9915 and 0.9987 < s[5] < 0.9988
    report("3", ok, f"S_3..S_5 = {s[3]:.6f}, {s[4]:.6f}, {s[5]:.6f}")


def test_criterion_4_tail_bounds():
    ok = True
    i01 = genfun.tail_moment(0, 1)
    for k in range(11):
        ik1 = genfun.tail_moment(k, 1)
        ok = ok and i01 / Rational(3) ** k <= ik1 <= Rational(6 * k + 7) / 6 / Rational(3) ** k
    for k in range(6):
        ok = ok and 1 - genfun.partial_sum(k) <= 2 * genfun.tail_moment(k, 1)
    for k in range(7):
        for t in range(1, 5):
            direct = (PLExpr.term(1, t, 0) * genfun.greedy_tail_gf(k)).integral01()
            ok = ok and genfun.tail_moment(k, t) == direct
    report("4", ok, "moment envelopes k <= 10; tails k <= 5; dual routes k <= 6")


def test_criterion_5_coefficient_equivalence():
    ok = True
    for k in range(6):
        coeffs = genfun.root_rank_cdf_gf(k).series(50)
        for n in range(1, 51):
            ok = ok and coeffs[n] == 1 - oracle.root_rank_tail(n, k)
    for k in range(4):
        tail = genfun.leaf_pair_tail_gf(k).series(25)
        hat = genfun.closest_leaf_gf(k).series(25)
        for n in range(1, 26):
            ok = ok and tail[n] == oracle.expected_leaf_pairs_tail(n, k)
            ok = ok and hat[n] == oracle.expected_closest_pairs(n, k)
    report("5", ok, "series coefficients equal the exact DP tables")


def test_criterion_6_symbolic_residuals():
    ranges = {
        "root_rank": range(0, 6),
        "root_rank_cdf": range(0, 6),
        "leaf_pair_tail": range(0, 4),
        "closest_leaf": range(1, 4),
        "greedy_tail": range(0, 7),
    }
    ok = all(
        genfun.ode_residual(kind, k).is_zero() for kind, ks in ranges.items() for k in ks
    )
    report("6", ok, "all five families satisfy their equations identically")


def test_criterion_7_structure_and_conjectures():
    ok = True
    for k in range(6):
        verdict = conjecture.check_conjectures(k, genfun.rank_constant(k))
        ok = ok and verdict.smoothness_pass
        if k >= 2:
            ok = ok and verdict.gap_free is True
        ok = ok and conjecture.check_pl_structure(k).passed
    report("7", ok, "structure bounds and both denominator conjectures, k <= 5")


def test_criterion_8_monte_carlo_vs_oracle():
    n, trials = 1000, 2000
    rep = montecarlo.estimate(n, trials, seed=0, kmax=3)
    ok = True
    for k in range(4):
        stat = rep[f"rank_fraction/{k}"]
        exact = float(oracle.expected_rank_counts(n, k)[k]) / n
        ok = ok and abs(stat.mean - exact) <= 4 * stat.stderr
    leaf = rep["leaf_fraction"]
    ok = ok and abs(leaf.mean - float(oracle.expected_rank_counts(n, 0)[0]) / n) <= (
        4 * leaf.stderr
    )
    rep200 = montecarlo.estimate(200, trials, seed=1, kmax=3)
    for k in range(4):
        stat = rep200[f"root_rank_freq/{k}"]
        ok = ok and abs(stat.mean - float(oracle.root_rank_prob(200, k))) <= (
            4 * stat.stderr
        )
    rep30 = montecarlo.estimate(30, trials, seed=2, kmax=5)
    for k in range(6):
        stat = rep30[f"greedy_gt/{k}"]
        exact = float(genfun.greedy_tail_gf(k).series(30)[30])
        ok = ok and abs(stat.mean - exact) <= 4 * stat.stderr
    report("8", ok, f"rank/leaf at n={n}, root rank at n=200, greedy at n=30")


def test_criterion_9_asymptotic_behavior():
    rho = Rational(7) / 5
    ratios = [float(oracle.moment_gf_ratio(n, rho)) for n in (100, 200, 400)]
    ok = (max(ratios) - min(ratios)) / max(ratios) < 0.05

    # pairwise factorization of rank counts at n = 10^4
    n, trials = 10**4, 300
    rep = montecarlo.estimate(n, trials, seed=5, kmax=2, pair_kmax=2)
    for k1 in range(3):
        for k2 in range(3):
            stat = rep[f"pair_joint/{k1},{k2}"]
            product = float(genfun.rank_constant(k1) * genfun.rank_constant(k2))
            ok = ok and abs(stat.mean - product) <= 4 * stat.stderr

    # per-vertex descendant-leaf ratios at n = 10^5
    big = montecarlo.estimate(10**5, 8, seed=6, kmax=2)
    for k in range(3):
        ok = ok and abs(big[f"leaf_ratio/{k}"].mean - float(F_OVER_C[k])) <= (
            0.05 * float(F_OVER_C[k])
        )
        ok = ok and abs(big[f"closest_ratio/{k}"].mean - float(G_OVER_C[k])) <= (
            0.05 * float(G_OVER_C[k])
        )

    a0 = conjecture.alpha0(1e-12)
    ok = ok and 0.3725 < a0 < 0.3735
    report("9", ok, f"moment ratio, pair factorization, per-vertex ratios, alpha0 ~ {a0:.6f}")


def test_criterion_10_verify_determinism(capsys, tmp_path):
    argv = ["verify", "--n", "150", "--trials", "200", "--seed", "3"]
    code_a = cli.main(list(argv))
    out_a = capsys.readouterr().out
    code_b = cli.main(list(argv))
    out_b = capsys.readouterr().out
    ok = code_a == 0 and code_b == 0 and out_a == out_b
    payload = json.loads(out_a[out_a.index("{") :])
    ok = ok and payload["pass"] is True
    report("10", ok, "verify twice with identical config is byte-identical")
