import pytest

from latintrav import (
    DomainError,
    Isotopism,
    apply_isotopism,
    witness_transversal,
)
from latintrav.blocks import (
    PHI_BLOCK_MAP,
    TAU_BLOCK_MAP,
    NotAutotopism,
    SumViolation,
    automorphism_tau,
    autotopism_phi,
    block_cells,
    block_hits,
    block_image_map,
    block_of,
    verify_block_maps,
    verify_hit_theorem,
)
from latintrav.families import build_L


def test_block_of_examples():
    assert block_of((0, 1), 3) == (1, 1)
    assert block_of((8, 2), 3) == (3, 1)
    assert block_of((7, 12), 5) == (2, 3)
    with pytest.raises(DomainError):
        block_of((9, 0), 3)


def test_block_cells():
    cells = block_cells(2, 3, 3)
    assert len(cells) == 9
    assert (3, 6) in cells and (5, 8) in cells


def test_block_hits_witness_L9_all_ones():
    sq = build_L(3)
    x = block_hits(sq, witness_transversal("L", 9), 3)
    assert x == ((1, 1, 1), (1, 1, 1), (1, 1, 1))


def test_block_hits_row_col_sums(oracle):
    sq = build_L(3)
    for cols in oracle(sq.grid):
        x = block_hits(sq, cols, 3)
        assert all(sum(row) == 3 for row in x)
        assert all(sum(x[i][j] for i in range(3)) == 3 for j in range(3))
        assert min(min(row) for row in x) >= 1


def test_block_hits_sum_violation_on_non_diagonal():
    # a diagonal concentrated on the first block column is not a transversal
    sq = build_L(3)
    with pytest.raises(SumViolation):
        block_hits(sq, (0, 1, 2, 0, 1, 2, 0, 1, 2), 3)


def test_tau_phi_definitions_m3():
    tau = automorphism_tau(3)
    assert tau.alpha == tau.beta == tau.gamma
    assert tau.alpha == (0, 1, 2, 6, 7, 8, 3, 4, 5)
    phi = autotopism_phi(3)
    assert phi.alpha == (3, 4, 5, 0, 1, 2, 6, 7, 8)
    assert phi.beta == (6, 7, 8, 3, 4, 5, 0, 1, 2)
    assert phi.gamma[0] == 5   # symbol 0 swaps with 2m-1
    assert phi.gamma == (5, 1, 2, 6, 7, 0, 3, 4, 8)


@pytest.mark.parametrize("m", [3, 5, 7, 9, 21, 99])
def test_tau_phi_fix_the_square(m):
    sq = build_L(m)
    assert apply_isotopism(sq, automorphism_tau(m)) == sq
    assert apply_isotopism(sq, autotopism_phi(m)) == sq


@pytest.mark.long
def test_tau_phi_cap_sweep():
    for m in range(3, 200, 2):
        sq = build_L(m)
        assert verify_block_maps(sq, automorphism_tau(m), m, TAU_BLOCK_MAP)
        assert verify_block_maps(sq, autotopism_phi(m), m, PHI_BLOCK_MAP)


@pytest.mark.parametrize("m", [3, 5, 9])
def test_block_maps(m):
    sq = build_L(m)
    assert verify_block_maps(sq, automorphism_tau(m), m, TAU_BLOCK_MAP)
    assert verify_block_maps(sq, autotopism_phi(m), m, PHI_BLOCK_MAP)
    ident = Isotopism.identity(3 * m)
    image = block_image_map(ident, m)
    assert all(image[b] == b for b in image)


def test_verify_block_maps_rejects_non_autotopism():
    sq = build_L(3)
    shift = tuple((i + 1) % 9 for i in range(9))
    with pytest.raises(NotAutotopism):
        verify_block_maps(sq, Isotopism(shift, shift, shift), 3)


def test_block_image_map_rejects_band_breaker():
    mixed = (0, 3, 1, 4, 2, 5, 6, 7, 8)
    with pytest.raises(DomainError):
        block_image_map(Isotopism(mixed, mixed, mixed), 3)


def test_hit_theorem_m3():
    check = verify_hit_theorem(3)
    assert check.passed
    assert check.min_block_hits == 1
    assert check.block22_ok and check.block11_ok
    assert not check.budget_exhausted
    assert check.transversal_count and check.transversal_count > 0


def test_hit_theorem_budget_marks_exhausted():
    check = verify_hit_theorem(3, node_budget=5)
    assert check.budget_exhausted
    assert not check.passed


@pytest.mark.long
def test_hit_theorem_m5():
    check = verify_hit_theorem(5)
    assert check.passed
    assert check.min_block_hits >= 1


def test_theorem_check_json_shape():
    data = verify_hit_theorem(3).to_json_dict()
    assert set(data) == {"m", "transversalCount", "minBlockHits", "pass",
                         "block22OK", "block11OK", "budgetExhausted"}


@pytest.mark.parametrize("m", [3, 5, 9])
def test_blocks_are_latin_subarrays(m):
    sq = build_L(m)
    for i in range(3):
        for j in range(3):
            rows = [sq.grid[r][j * m:(j + 1) * m] for r in range(i * m, (i + 1) * m)]
            assert all(len(set(row)) == m for row in rows)
            assert all(len({row[c] for row in rows}) == m for c in range(m))


@pytest.mark.parametrize("m", [3, 5, 7, 9])
def test_symbol_classes_pin_block_residues(m):
    # grid-level fact behind the special-symbol pattern: every cell carrying a
    # non-special symbol s has (r+c) mod m determined by s; special symbols
    # only ever sit on residue 0 or m-1.
    sq = build_L(m)
    special = {0, 2 * m - 1, 3 * m - 1}
    for e in sq.entries():
        dm = (e.row + e.col) % m
        if e.sym in special:
            assert dm in (0, m - 1)
        elif e.sym < m:
            assert dm == e.sym
        elif e.sym < 2 * m - 1:
            assert dm == e.sym - m
        else:
            assert dm == e.sym - 2 * m


@pytest.mark.long
def test_L15_transversal_invariants_sampled():
    # every-transversal block coverage at m=5 is checked exhaustively by the
    # kernel in verify_hit_theorem; here a lexicographic prefix is run through
    # the full per-transversal checks (the grid-level residue test above
    # covers the symbol pattern for all of them).
    import itertools

    from latintrav import iter_solutions, special_symbol_delta_check

    sq = build_L(5)
    for t in itertools.islice(iter_solutions(sq), 3000):
        x = block_hits(sq, t, 5)
        assert min(min(row) for row in x) >= 1
        assert special_symbol_delta_check(sq, t, 5)
