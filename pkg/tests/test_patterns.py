import random
from fractions import Fraction

import pytest

from thompson_cantor.cantor import Address, AffineIFS, AperiodicWitness
from thompson_cantor.patterns import (
    CELL,
    CubeSymmetry,
    NVElement,
    PatternError,
    PatternTree,
    apply_nv,
    compose_nv,
    cut,
    expand_source_leaf,
    identity_nv,
    inverse_nv,
    leaf_boxes,
    leaf_words,
    random_nv,
    random_symmetry,
    reduce_nv,
    refine_to_match,
    stabilizer_rank,
    superpose,
    tangent_hull_type,
)

C3 = AffineIFS.central(3)


def baker() -> NVElement:
    """Cut axis 0 in the source, axis 1 in the target, leaves crossed."""
    return NVElement(
        2,
        cut(0),
        cut(1),
        (1, 0),
        (CubeSymmetry.identity(2),) * 2,
    )


def random_dust_point(rng, dim=2):
    coords = []
    for _ in range(dim):
        pre = tuple(rng.randrange(2) for _ in range(rng.randrange(3)))
        per = tuple(rng.randrange(2) for _ in range(rng.randint(1, 3)))
        coords.append(Address(pre, per))
    return tuple(coords)


def test_leaf_words_examples():
    assert leaf_words(CELL, 2) == [((), ())]
    assert leaf_words(cut(0), 2) == [((0,), ()), ((1,), ())]
    two = cut(0, cut(1), CELL)
    assert leaf_words(two, 2) == [((0,), (0,)), ((0,), (1,)), ((1,), ())]


def test_leaf_boxes_measure_sums_to_one():
    rng = random.Random(73)
    for _ in range(20):
        from thompson_cantor.patterns import random_pattern

        p = random_pattern(rng, 3, rng.randrange(8))
        total = Fraction(0)
        for box in leaf_boxes(p, 3):
            measure = Fraction(1)
            for lo, hi in box:
                measure *= hi - lo
            total += measure
        assert total == 1


def test_refine_to_match_self():
    p = cut(0, cut(1), CELL)
    refined, emb1, emb2 = refine_to_match(p, p, 2)
    assert refined == p
    assert emb1 == emb2 == [0, 1, 2]


def test_refine_to_match_crossing_cuts():
    vertical = cut(0)
    horizontal = cut(1)
    refined, emb1, emb2 = refine_to_match(vertical, horizontal, 2)
    assert refined.leaf_count() == 4
    assert sorted(emb1) == [0, 0, 1, 1]
    assert sorted(emb2) == [0, 0, 1, 1]


def test_refine_to_match_measure_bookkeeping():
    rng = random.Random(79)
    from thompson_cantor.patterns import random_pattern

    for _ in range(15):
        p1 = random_pattern(rng, 2, rng.randrange(6))
        p2 = random_pattern(rng, 2, rng.randrange(6))
        refined, emb1, emb2 = refine_to_match(p1, p2, 2)
        boxes1 = leaf_boxes(p1, 2)
        boxes_r = leaf_boxes(refined, 2)

        def measure(box):
            m = Fraction(1)
            for lo, hi in box:
                m *= hi - lo
            return m

        for leaf1 in range(p1.leaf_count()):
            inside = sum(
                measure(boxes_r[k]) for k in range(len(boxes_r)) if emb1[k] == leaf1
            )
            assert inside == measure(boxes1[leaf1])


def test_identity_and_inverse():
    e = identity_nv(2)
    b = baker()
    assert compose_nv(b, e) == b
    assert compose_nv(e, b) == b
    assert compose_nv(b, inverse_nv(b)) == e
    assert compose_nv(inverse_nv(b), b) == e


def test_baker_action():
    b = baker()
    pt = (Address((), (0,)), Address((), (1,)))
    image = apply_nv(b, pt)
    # (0, 1) lies in the low half along axis 0; it lands in the high half
    # along axis 1 with the axis-0 prefix stripped.
    assert image == (Address((), (0,)), Address((1,), (1,)))


def test_apply_matches_rational_affine_evaluation():
    from thompson_cantor.cantor import evaluate_address

    rng = random.Random(83)
    for _ in range(25):
        elem = random_nv(rng, 2, rng.randrange(5))
        words = leaf_words(elem.source, 2)
        tgt_words = leaf_words(elem.target, 2)
        pt = random_dust_point(rng)
        image = apply_nv(elem, pt)
        # Locate the covering piece by value arithmetic.
        values = tuple(evaluate_address(C3, c) for c in pt)
        piece = None
        for i, ws in enumerate(words):
            ok = True
            for axis in range(2):
                depth = len(ws[axis])
                if pt[axis].digits(depth) != ws[axis]:
                    ok = False
                    break
            if ok:
                piece = i
                break
        assert piece is not None
        # Per-axis affine formula on the half-interval model of C3.
        for axis in range(2):
            src_word = words[piece][axis]
            tgt_word = tgt_words[elem.perm[piece]][axis]
            x = values[axis]
            lo = evaluate_address(C3, Address(src_word, (0,)))
            tlo = evaluate_address(C3, Address(tgt_word, (0,)))
            scale = Fraction(1, 3) ** (len(tgt_word) - len(src_word))
            expected = tlo + scale * (x - lo)
            assert evaluate_address(C3, image[axis]) == expected


def test_compose_pointwise_oracle():
    rng = random.Random(89)
    for _ in range(30):
        f = random_nv(rng, 2, rng.randrange(5))
        g = random_nv(rng, 2, rng.randrange(5))
        fg = compose_nv(f, g)
        for _ in range(5):
            pt = random_dust_point(rng)
            assert apply_nv(fg, pt) == apply_nv(f, apply_nv(g, pt))


def test_compose_associative():
    rng = random.Random(97)
    for _ in range(15):
        a = random_nv(rng, 2, 3)
        b = random_nv(rng, 2, 3)
        c = random_nv(rng, 2, 3)
        assert compose_nv(compose_nv(a, b), c) == compose_nv(a, compose_nv(b, c))


def test_reduce_cancels_cocuts():
    # Source and target both cut axis 0, identity assignment: reduces away.
    elem = NVElement(2, cut(0), cut(0), (0, 1), (CubeSymmetry.identity(2),) * 2)
    assert reduce_nv(elem) == identity_nv(2)


def test_expand_then_reduce_round_trip():
    rng = random.Random(101)
    for _ in range(30):
        elem = reduce_nv(random_nv(rng, 2, 3, with_syms=True))
        grown = expand_source_leaf(
            elem, rng.randrange(elem.leaf_count), rng.randrange(2)
        )
        assert reduce_nv(grown) == elem
        pt = random_dust_point(rng)
        assert apply_nv(grown, pt) == apply_nv(elem, pt)


def test_symmetry_group_axioms():
    rng = random.Random(103)
    for dim in (2, 3):
        for _ in range(40):
            a = random_symmetry(rng, dim)
            b = random_symmetry(rng, dim)
            ab = a.compose(b)
            assert ab.determinant == 1
            assert a.compose(a.inverse()) == CubeSymmetry.identity(dim)
            # Matrix model agrees with the compose rule.
            ma, mb = a.matrix(), b.matrix()
            prod = [
                [sum(ma[i][k] * mb[k][j] for k in range(dim)) for j in range(dim)]
                for i in range(dim)
            ]
            assert prod == ab.matrix()


def test_symmetry_orientation_rejected():
    with pytest.raises(PatternError):
        CubeSymmetry((0, 1), (-1, 1))
    CubeSymmetry((0, 1), (-1, -1))
    CubeSymmetry((1, 0), (-1, 1))


def test_symmetry_swap_action():
    swap = CubeSymmetry((1, 0), (1, -1))
    elem = NVElement(2, CELL, CELL, (0,), (swap,))
    pt = (Address((0,), (1,)), Address((), (0, 1)))
    image = apply_nv(elem, pt)
    assert image[1] == pt[0]
    assert image[0] == pt[1].complement(1)
    back = apply_nv(inverse_nv(elem), image)
    assert back == pt


def test_plain_nv_closure():
    rng = random.Random(107)
    for _ in range(25):
        f = random_nv(rng, 2, 3)
        g = random_nv(rng, 2, 3)
        assert compose_nv(f, g).is_plain


def test_apply_is_bijective_on_leaf_tuples():
    rng = random.Random(109)
    depth = 3
    grid = []
    import itertools

    for words in itertools.product(
        itertools.product((0, 1), repeat=depth), repeat=2
    ):
        grid.append(tuple(Address(w, (0,)) for w in words))
    for _ in range(10):
        elem = random_nv(rng, 2, 4, with_syms=True)
        images = {apply_nv(elem, pt) for pt in grid}
        assert len(images) == len(grid)


def test_stabilizer_rank():
    periodic = Address((), (0,))
    mixed = Address((), (1, 0))
    witness = AperiodicWitness((0, 1, 1))
    assert stabilizer_rank((periodic, periodic)) == 2
    assert stabilizer_rank((mixed, witness)) == 1
    assert stabilizer_rank((witness, witness)) == 0


def test_tangent_hull_type():
    corner = tuple(Address((), (0,)) for _ in range(2))
    assert tangent_hull_type(C3, corner) == 0
    assert tangent_hull_type(C3, (Address((), (1, 0)), Address((), (0,)))) == 1
    assert (
        tangent_hull_type(C3, (Address((), (1, 0)), Address((), (0, 1)))) == 2
    )
    assert tangent_hull_type(C3, (AperiodicWitness((0, 1)), Address((), (0,)))) == 1


def test_dimension_mismatch_rejected():
    with pytest.raises(PatternError):
        compose_nv(identity_nv(2), identity_nv(3))
    with pytest.raises(PatternError):
        NVElement(2, cut(0), cut(1), (0,), (CubeSymmetry.identity(2),))
