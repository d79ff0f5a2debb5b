"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run the fast set with plain ``pytest``; the long verifications (orders 18-24
of the tau table, the m=5 block theorem) need ``pytest --runlong``.
"""

import time

import pytest

from latintrav import (
    SearchMode,
    cayley_table,
    classify,
    count_parity_check,
    delta_sum,
    find,
    forced_entry_certificate,
    is_pinned,
    is_transversal,
    iter_solutions,
    witness_transversal,
)
from latintrav.blocks import verify_hit_theorem
from latintrav.bounds import check_sets_only, lower_bound, verify_bound
from latintrav.engine import enumerate_solutions
from latintrav.families import (
    build_exceptional,
    build_family,
    build_L,
    build_T,
    build_U,
    build_V,
    claimed_free_cells,
    family_of_order,
)
from latintrav.blocks import PHI_BLOCK_MAP, TAU_BLOCK_MAP, automorphism_tau, autotopism_phi, verify_block_maps

# Computed tau values per order, cross-checked against the published table.
EXPECTED_TAU = {10: 34, 12: 67, 14: 88, 16: 107, 18: 159, 20: 190, 22: 217, 24: 287}
EXPECTED_LOWER = {10: 27, 12: 60, 14: 70, 16: 95, 18: 147, 20: 166, 22: 201, 24: 271}

T_ALL = range(12, 301, 6)
U_ALL = range(14, 301, 6)
V_ALL = range(10, 301, 6)
L_ALL = range(3, 100, 2)


def report(num, name, ok):
    print(f"ACCEPTANCE {num} {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {num} ({name})"


def test_criterion_1_construction_validity():
    t0 = time.perf_counter()
    squares = ([build_T(n) for n in T_ALL] + [build_U(n) for n in U_ALL]
               + [build_V(n) for n in V_ALL] + [build_L(m) for m in L_ALL])
    elapsed = time.perf_counter() - t0
    # LatinSquare construction validates rows/columns; reaching here means all passed.
    ok = len(squares) == len(list(T_ALL)) + len(list(U_ALL)) + len(list(V_ALL)) + len(list(L_ALL))
    ok = ok and elapsed < 5.0
    report(1, f"construction-validity ({elapsed:.2f}s)", ok)


def test_criterion_2_witness_transversals():
    t0 = time.perf_counter()
    ok = True
    for family, orders in (("T", T_ALL), ("U", U_ALL), ("V", V_ALL)):
        for n in orders:
            ok = ok and is_transversal(build_family(family, n), witness_transversal(family, n))
    for m in L_ALL:
        ok = ok and is_transversal(build_L(m), witness_transversal("L", 3 * m))
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 5.0
    report(2, f"witness-transversals ({elapsed:.2f}s)", ok)


def test_criterion_3_tau_table_fast():
    t0 = time.perf_counter()
    ok = True
    for n in (10, 12, 14, 16):
        family = family_of_order(n)
        rep = classify(build_family(family, n))
        ok = ok and rep.tau == EXPECTED_TAU[n] and not rep.partial
        ok = ok and lower_bound(family, n) == EXPECTED_LOWER[n]
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    report(3, f"tau-table n<=16 ({elapsed:.1f}s)", ok)


@pytest.mark.long
@pytest.mark.parametrize("n", [18, 20, 22, 24])
def test_criterion_3_tau_table_long(n):
    t0 = time.perf_counter()
    family = family_of_order(n)
    rep = classify(build_family(family, n), node_budget=10**13)
    elapsed = time.perf_counter() - t0
    ok = rep.tau == EXPECTED_TAU[n] and not rep.partial
    ok = ok and lower_bound(family, n) == EXPECTED_LOWER[n]
    ok = ok and elapsed < 3600.0
    report(3, f"tau-table {family}{n} ({elapsed:.0f}s)", ok)


def test_criterion_4_pinned_certificates():
    t0 = time.perf_counter()
    ok = True
    for n in range(10, 25, 2):
        family = family_of_order(n)
        square = build_family(family, n)
        cert = forced_entry_certificate(square)
        ok = ok and cert.valid and len(cert.forced) == n // 6
        for e in cert.forced:
            ok = ok and is_pinned(square, e)
        if n <= 14:
            for e in cert.forced:
                avoiding = find(square, forbidden_cells=((e.row, e.col),),
                                mode=SearchMode.SUITABLE_DIAGONAL)
                ok = ok and avoiding is None
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 600.0
    report(4, f"pinned-certificates ({elapsed:.1f}s)", ok)


def test_criterion_5_lower_bound_sets():
    t0 = time.perf_counter()
    ok = True
    for family, orders in (("T", range(12, 101, 6)), ("U", range(14, 101, 6)),
                           ("V", range(10, 101, 6))):
        for n in orders:
            check = check_sets_only(family, n)
            ok = ok and check.size_ok
    set_elapsed = time.perf_counter() - t0
    ok = ok and set_elapsed < 5.0
    for n in (10, 12, 14, 16):
        family = family_of_order(n)
        rep = classify(build_family(family, n))
        check = verify_bound(family, n, rep)
        ok = ok and check.subset_ok and check.size_ok and check.tau_ok
    report(5, f"lower-bound-sets (sets {set_elapsed:.2f}s)", ok)


def test_criterion_6_euler_refutation():
    ok = True
    for n in range(2, 21, 2):
        square = cayley_table(n)
        # root-level refutation: no nodes expanded, so budget 0 is never hit
        ok = ok and find(square, node_budget=0) is None
        find(square)  # warm candidate prep before timing
        best = min(_timed_find(square) for _ in range(5))
        ok = ok and best < 1e-3
    for n in (2, 4, 6, 8):
        ok = ok and next(iter_solutions(cayley_table(n), prune=False), None) is None
    report(6, "euler-refutation", ok)


def _timed_find(square):
    t0 = time.perf_counter()
    assert find(square) is None
    return time.perf_counter() - t0


def test_criterion_7_block_theorem_m3():
    t0 = time.perf_counter()
    check = verify_hit_theorem(3)
    elapsed = time.perf_counter() - t0
    ok = (check.passed and check.min_block_hits == 1 and check.block22_ok
          and check.block11_ok and elapsed < 10.0)
    report(7, f"block-theorem m=3 ({elapsed:.1f}s)", ok)


@pytest.mark.long
def test_criterion_7_block_theorem_m5():
    t0 = time.perf_counter()
    check = verify_hit_theorem(5)
    elapsed = time.perf_counter() - t0
    ok = check.passed and check.min_block_hits >= 1
    report(7, f"block-theorem m=5 ({elapsed:.0f}s)", ok)


def test_criterion_8_autotopisms():
    t0 = time.perf_counter()
    ok = True
    for m in L_ALL:
        square = build_L(m)
        ok = ok and verify_block_maps(square, automorphism_tau(m), m, TAU_BLOCK_MAP)
        ok = ok and verify_block_maps(square, autotopism_phi(m), m, PHI_BLOCK_MAP)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 5.0
    report(8, f"autotopisms ({elapsed:.2f}s)", ok)


def test_criterion_9_property_suites(oracle):
    t0 = time.perf_counter()
    ok = True
    # delta sums over complete (pruning-disabled) enumerations at n <= 8
    squares = [cayley_table(n) for n in range(1, 9)]
    squares += [build_exceptional(6), build_exceptional(8)]
    for sq in squares:
        n = sq.order
        expected = 0 if n % 2 else n // 2
        for diag in iter_solutions(sq, prune=False):
            ok = ok and delta_sum(sq, diag) == expected % n
    # even-order counts are even wherever fully enumerated
    for sq in [cayley_table(n) for n in (2, 4, 6, 8)] + [build_exceptional(6), build_exceptional(8)]:
        count, parity_ok = count_parity_check(sq)
        ok = ok and parity_ok
    # engine agrees with the naive permutation scan at n <= 6
    for sq in [cayley_table(n) for n in range(1, 7)] + [build_exceptional(6)]:
        expected = [tuple(p) for p in oracle(sq.grid)]
        ok = ok and [d.cols for d in iter_solutions(sq)] == expected
        ok = ok and enumerate_solutions(sq) == len(expected)
    # order-6 exceptional square: tau and the claimed free set, plus its witness
    rep6 = classify(build_exceptional(6))
    ok = ok and rep6.tau == 16 and set(rep6.free_cells) == set(claimed_free_cells(6))
    ok = ok and is_transversal(build_exceptional(6), witness_transversal("EX6", 6))
    ok = ok and is_transversal(build_exceptional(8), witness_transversal("EX8", 8))
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    report(9, f"property-suites ({elapsed:.1f}s)", ok)


def test_criterion_9_exceptional_8_claimed_tau():
    # Known discrepancy: exhaustive search (engine and a raw permutation scan
    # agree) finds 28 transversal-free cells in the printed order-8 square,
    # and two of its 25 claimed-free cells lie on explicit transversals.
    # The stated expectation is kept as-is so the mismatch stays visible.
    rep8 = classify(build_exceptional(8))
    report(9, f"exceptional-8 tau=25 (actual {rep8.tau})", rep8.tau == 25)
