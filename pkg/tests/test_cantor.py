import itertools
from fractions import Fraction

import pytest

from thompson_cantor.cantor import (
    Address,
    AffineIFS,
    GenericityKind,
    NotCantor,
    NotNormalized,
    PointSide,
    box_count_estimate,
    check_genericity,
    classify_point,
    endpoints_up_to,
    evaluate_address,
    gaps_up_to,
    hausdorff_dimension_central,
    parse_word,
    sparseness_bound,
    standard_interval,
    validate_ifs,
    words_of_length,
)

C3 = AffineIFS.central(3)
AC = AffineIFS.asymmetric()


def test_validate_c3():
    ifs = validate_ifs([(Fraction(1, 3), 0), (Fraction(1, 3), Fraction(2, 3))])
    assert ifs == C3
    assert ifs.initial_gaps == (Fraction(1, 3),)


def test_validate_rejects_touching_pieces():
    with pytest.raises(NotCantor):
        validate_ifs([(Fraction(1, 2), 0), (Fraction(1, 2), Fraction(1, 2))])


def test_validate_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        validate_ifs([(Fraction(1, 3), Fraction(1, 10)), (Fraction(1, 3), Fraction(2, 3))])
    with pytest.raises(NotNormalized):
        validate_ifs([(Fraction(1, 3), 0), (Fraction(1, 4), Fraction(2, 3))])


def test_validate_ac():
    assert AC.pieces == ((Fraction(1, 4), Fraction(0)), (Fraction(1, 2), Fraction(1, 2)))
    assert AC.initial_gaps == (Fraction(1, 4),)
    assert not AC.is_palindromic
    assert C3.is_palindromic


def test_address_canonical_form():
    a = Address((0, 1), (1, 0, 1, 0))
    assert a.per == (1, 0) or a.per == (0, 1)
    # 01(10)^inf == 0(11...)? rotate: preperiod must not share last letter with period.
    assert a.pre[-1:] != a.per[-1:]
    # period "00" reduces to "0"
    assert Address((), (0, 0)) == Address((), (0,))
    # 1(0) stays; 10(0) collapses to 1(0)
    assert Address((1, 0), (0,)) == Address((1,), (0,))


def test_evaluate_address_examples():
    assert evaluate_address(C3, Address((), (0,))) == 0
    assert evaluate_address(C3, Address((1,), (0,))) == Fraction(2, 3)
    # Fixed point of phi_1 . phi_0: x = x/9 + 2/3.
    assert evaluate_address(C3, Address((), (1, 0))) == Fraction(3, 4)
    assert evaluate_address(C3, Address((), (1,))) == 1


def test_address_uniqueness_on_c3():
    # Distinct canonical addresses of bounded size evaluate to distinct points.
    seen = {}
    for pre_len in range(3):
        for per_len in range(1, 3):
            for pre in itertools.product((0, 1), repeat=pre_len):
                for per in itertools.product((0, 1), repeat=per_len):
                    addr = Address(pre, per)
                    value = evaluate_address(C3, addr)
                    if addr in seen:
                        continue
                    for other, v in seen.items():
                        assert v != value, (addr, other)
                    seen[addr] = value


def test_standard_interval_examples():
    assert standard_interval(C3, ()).lo == 0
    assert standard_interval(C3, ()).hi == 1
    si = standard_interval(C3, (0,))
    assert (si.lo, si.hi) == (0, Fraction(1, 3))
    si = standard_interval(C3, parse_word("01"))
    assert (si.lo, si.hi) == (Fraction(2, 9), Fraction(1, 3))


def test_interval_nesting_and_disjointness():
    for word in words_of_length(C3, 3):
        parent = standard_interval(C3, word)
        for letter in range(C3.arity):
            child = standard_interval(C3, word + (letter,))
            assert parent.lo <= child.lo < child.hi <= parent.hi
            assert child.length < parent.length
    level = [standard_interval(AC, w) for w in words_of_length(AC, 3)]
    level.sort(key=lambda si: si.lo)
    for left, right in zip(level, level[1:]):
        assert left.hi < right.lo


def test_gaps_c3():
    gaps = gaps_up_to(C3, 2)
    assert [(g.lo, g.hi) for g in gaps] == [
        (Fraction(1, 3), Fraction(2, 3)),
        (Fraction(1, 9), Fraction(2, 9)),
        (Fraction(7, 9), Fraction(8, 9)),
    ]
    # Lengths at generation 2 follow (lam-2)*lam^-2 with lam = 3.
    assert gaps[1].length == gaps[2].length == Fraction(1, 9)
    assert len(gaps_up_to(C3, 4)) == 2**4 - 1


def test_gaps_ac():
    gaps = gaps_up_to(AC, 1)
    assert [(g.lo, g.hi) for g in gaps] == [(Fraction(1, 4), Fraction(1, 2))]


def test_gap_lengths_tile_the_interval():
    # Gaps of generation <= G plus generation-G intervals partition [0,1].
    for ifs in (C3, AC):
        total = sum(g.length for g in gaps_up_to(ifs, 4))
        total += sum(standard_interval(ifs, w).length for w in words_of_length(ifs, 4))
        assert total == 1


def test_gap_length_multiplicativity():
    from thompson_cantor.exact import scale_value

    for gap in gaps_up_to(AC, 4):
        expected = scale_value(AC.ratios, AC.word_exponents(gap.parent))
        assert gap.length == expected * AC.initial_gaps[gap.slot - 1]


def test_sparseness_central():
    assert sparseness_bound(C3, 3) == Fraction(1, 3)
    assert sparseness_bound(AffineIFS.central(4), 3) == Fraction(1, 2)


def test_sparseness_monotone():
    previous = None
    for g in range(1, 4):
        value = sparseness_bound(AC, g)
        if previous is not None:
            assert value <= previous
        previous = value


def test_sparseness_ac_golden():
    # Frozen from the brute-force oracle on first run; stable for G = 1..4.
    assert sparseness_bound(AC, 3) == Fraction(1, 4)


def test_c3_gap_ratios_are_powers_of_lambda():
    lengths = [g.length for g in gaps_up_to(C3, 5)]
    for a in lengths:
        for b in lengths:
            q = a / b
            while q > 1:
                q /= 3
            while q < 1:
                q *= 3
            assert q == 1


def test_genericity_c3_equal_branch():
    assert check_genericity(C3).kind is GenericityKind.EQUAL_BRANCH


def test_genericity_ac_fails():
    verdict = check_genericity(AC)
    assert verdict.kind is GenericityKind.FAILS
    assert verdict.witness in ((1, -2), (-1, 2))
    assert not verdict


def test_genericity_incommensurable():
    ifs = validate_ifs(
        [(Fraction(1, 3), 0), (Fraction(1, 5), Fraction(4, 5))]
    )
    assert ifs.initial_gaps == (Fraction(7, 15),)
    assert check_genericity(ifs).kind is GenericityKind.INCOMMENSURABLE_BRANCH


def test_genericity_gap_pair_violation():
    # Equal ratios but unequal commensurable gaps: 1/5 scale carries one
    # gap onto the other.
    ifs = validate_ifs(
        [
            (Fraction(1, 5), 0),
            (Fraction(1, 5), Fraction(4, 15)),
            (Fraction(1, 5), Fraction(4, 5)),
        ]
    )
    gaps = ifs.initial_gaps
    assert gaps == (Fraction(1, 15), Fraction(1, 3))
    assert gaps[1] / gaps[0] == 5
    verdict = check_genericity(ifs)
    assert verdict.kind is GenericityKind.FAILS


def test_classify_point_examples():
    assert classify_point(C3, Address((1,), (0,))) is PointSide.LEFT
    assert classify_point(C3, Address((), (1,))) is PointSide.RIGHT
    assert classify_point(C3, Address((), (1, 0))) is PointSide.TWO_SIDED
    assert classify_point(C3, Address((), (0,))) is PointSide.LEFT


def test_hausdorff_dimension():
    assert hausdorff_dimension_central(4) == 0.5
    assert abs(hausdorff_dimension_central(3) - 0.630929753571457) < 1e-12
    with pytest.raises(Exception):
        hausdorff_dimension_central(2)


def test_box_count_estimate():
    import math

    assert abs(box_count_estimate(C3, 8) - math.log(2) / math.log(3)) < 0.05
    with pytest.raises(Exception):
        box_count_estimate(C3, 1)


def test_endpoints_are_attractor_points():
    points = endpoints_up_to(C3, 2)
    values = {
        evaluate_address(C3, Address(w, (d,)))
        for w in words_of_length(C3, 2)
        for d in (0, 1)
    } | {
        evaluate_address(C3, Address((), (d,))) for d in (0, 1)
    }
    assert set(points) <= {
        evaluate_address(C3, Address(tuple(w), (d,)))
        for n in range(3)
        for w in itertools.product((0, 1), repeat=n)
        for d in (0, 1)
    }
