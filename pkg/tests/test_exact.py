from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thompson_cantor.exact import (
    ExactError,
    ScaleElement,
    factorize,
    format_rational,
    in_lattice_span,
    parse_rational,
    relation_lattice,
    scale_value,
    solve_exponent_product,
    unfactorize,
)


def test_factorize_identity():
    assert factorize(Fraction(1)) == {}


def test_factorize_examples():
    # Oracle: multiply the factorization back together.
    for q in (Fraction(4, 9), Fraction(7, 15)):
        exps = factorize(q)
        assert unfactorize(exps) == q
        assert all(e != 0 for e in exps.values())
    assert factorize(Fraction(4, 9)) == {2: 2, 3: -2}
    assert factorize(Fraction(7, 15)) == {7: 1, 3: -1, 5: -1}


def test_factorize_rejects_nonpositive():
    with pytest.raises(ExactError):
        factorize(Fraction(0))
    with pytest.raises(ExactError):
        factorize(Fraction(-3, 7))


def test_factorize_large_prime_factor_rejected():
    with pytest.raises(ExactError):
        factorize(Fraction(10**13 + 37) * Fraction(10**13 + 99))


positive_rationals = st.builds(
    Fraction,
    st.integers(min_value=1, max_value=5000),
    st.integers(min_value=1, max_value=5000),
)


@given(positive_rationals, positive_rationals)
def test_factorize_is_multiplicative(a, b):
    combined = factorize(a * b)
    merged = dict(factorize(a))
    for p, e in factorize(b).items():
        merged[p] = merged.get(p, 0) + e
        if merged[p] == 0:
            del merged[p]
    assert combined == merged


def test_scale_value_examples():
    third = Fraction(1, 3)
    assert scale_value([third, third], ScaleElement((0, 0))) == 1
    assert scale_value([third, third], ScaleElement((2, 1))) == Fraction(1, 27)
    # Witnesses the commensurability of the asymmetric-set parameters.
    assert scale_value([Fraction(1, 4), Fraction(1, 2)], ScaleElement((1, -2))) == 1


def test_scale_value_length_mismatch():
    with pytest.raises(ExactError):
        scale_value([Fraction(1, 3)], ScaleElement((1, 2)))


@given(
    st.lists(positive_rationals, min_size=1, max_size=4),
    st.data(),
)
@settings(max_examples=60)
def test_scale_value_is_homomorphism(ratios, data):
    k1 = ScaleElement(
        tuple(data.draw(st.integers(-4, 4)) for _ in ratios)
    )
    k2 = ScaleElement(
        tuple(data.draw(st.integers(-4, 4)) for _ in ratios)
    )
    assert scale_value(ratios, k1 + k2) == scale_value(ratios, k1) * scale_value(ratios, k2)


def test_relation_lattice_independent():
    assert relation_lattice([Fraction(1, 3), Fraction(1, 5)]) == []


def test_relation_lattice_pow_relation():
    basis = relation_lattice([Fraction(1, 4), Fraction(1, 2)])
    assert len(basis) == 1
    vec = basis[0]
    assert scale_value([Fraction(1, 4), Fraction(1, 2)], ScaleElement(vec)) == 1
    assert vec in ((1, -2), (-1, 2))


def test_relation_lattice_equal_values():
    basis = relation_lattice([Fraction(1, 3), Fraction(1, 3)])
    assert len(basis) == 1
    assert in_lattice_span((1, -1), basis)


@given(st.lists(positive_rationals, min_size=1, max_size=3))
@settings(max_examples=40)
def test_relation_lattice_members_multiply_to_one(values):
    basis = relation_lattice(values)
    for vec in basis:
        assert scale_value(values, ScaleElement(vec)) == 1


def test_relation_lattice_brute_force_completeness():
    # Every small integer relation must lie in the span of the basis.
    values = [Fraction(2, 3), Fraction(4, 9), Fraction(1, 2)]
    basis = relation_lattice(values)
    box = range(-3, 4)
    for m0 in box:
        for m1 in box:
            for m2 in box:
                prod = values[0] ** m0 * values[1] ** m1 * values[2] ** m2
                if prod == 1:
                    assert in_lattice_span((m0, m1, m2), basis)


def test_solve_exponent_product():
    vals = [Fraction(1, 4), Fraction(1, 2)]
    k = solve_exponent_product(vals, Fraction(1, 8))
    assert k is not None
    assert scale_value(vals, ScaleElement(k)) == Fraction(1, 8)
    assert solve_exponent_product([Fraction(1, 3)], Fraction(1, 5)) is None
    assert solve_exponent_product([Fraction(1, 3)], Fraction(1)) == (0,)


def test_rational_parsing_round_trip():
    assert parse_rational("2/3") == Fraction(2, 3)
    assert parse_rational("-7") == Fraction(-7)
    assert format_rational(Fraction(2, 3)) == "2/3"
    assert format_rational(Fraction(5)) == "5"
    with pytest.raises(ExactError):
        parse_rational("abc")
