"""Exact piecewise-affine maps preserving a self-similar Cantor set.

A map is a finite list of pieces, each carrying one standard interval affinely
onto another (optionally mirrored, on palindromic sets).  Pieces act on
addresses by prefix substitution and on rational coordinates by the affine
formula; the two actions are kept consistent and cross-checked in tests.
The module also houses the standard-germ calculus (prefix-to-prefix affine
germs, multi-germ extension) and point stabilizers.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cantor import (
    Address,
    AffineIFS,
    AperiodicWitness,
    Point,
    Word,
    standard_interval,
    word_str,
)
from .exact import ScaleElement, scale_value
from .trees import (
    GroupElement,
    Symbol,
    Tree,
    Variant,
    classify_symbol,
)


class PLError(ValueError):
    """Invalid piecewise-affine data."""


class PLModel(enum.Enum):
    LINE = "line"
    CIRCLE = "circle"
    EXCHANGE = "exchange"


_MODEL_ORDER = [PLModel.LINE, PLModel.CIRCLE, PLModel.EXCHANGE]

_VARIANT_MODEL = {
    Variant.F: PLModel.LINE,
    Variant.T: PLModel.CIRCLE,
    Variant.V: PLModel.EXCHANGE,
    Variant.VPM: PLModel.EXCHANGE,
}


def _is_prefix(prefix: Word, word: Word) -> bool:
    return word[: len(prefix)] == prefix


@dataclass(frozen=True)
class PLPiece:
    """One affine piece: the standard interval of `source` onto that of `target`."""

    source: Word
    target: Word
    rev: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))


def tree_from_words(words: Sequence[Word], arity: int) -> Tree:
    """Tree whose leaf paths are exactly `words`; fails unless they partition."""
    words = sorted(tuple(w) for w in words)
    if len(set(words)) != len(words):
        raise PLError("duplicate words in covering")

    def build(suffixes: list[Word]) -> Tree:
        if suffixes == [()]:
            return Tree()
        groups: list[list[Word]] = [[] for _ in range(arity)]
        for w in suffixes:
            if not w:
                raise PLError("word set mixes an interval with its subintervals")
            groups[w[0]].append(w[1:])
        for letter, group in enumerate(groups):
            if not group:
                raise PLError(f"covering misses letter {letter} branch")
        return Tree(tuple(build(sorted(g)) for g in groups))

    return build(words)


@dataclass(frozen=True)
class PLMap:
    """Finite covering of the attractor by affine pieces; acts bijectively on it."""

    ifs: AffineIFS
    pieces: tuple[PLPiece, ...]
    model: PLModel = PLModel.EXCHANGE

    def __post_init__(self) -> None:
        pieces = tuple(sorted(self.pieces, key=lambda p: p.source))
        object.__setattr__(self, "pieces", pieces)
        arity = self.ifs.arity
        for piece in pieces:
            for word in (piece.source, piece.target):
                for letter in word:
                    if not 0 <= letter < arity:
                        raise PLError(f"letter {letter} outside alphabet")
        tree_from_words([p.source for p in pieces], arity)
        tree_from_words([p.target for p in pieces], arity)
        if any(p.rev for p in pieces) and not self.ifs.is_palindromic:
            raise PLError("mirrored pieces need a palindromic IFS")
        if self.model in (PLModel.LINE, PLModel.CIRCLE):
            if any(p.rev for p in pieces):
                raise PLError(f"{self.model.value} model admits no mirrored pieces")
            targets = [p.target for p in pieces]
            # On an antichain, lexicographic order is spatial order; a circle
            # map is a cyclic rotation, so at most one descent may appear.
            descents = sum(1 for a, b in zip(targets, targets[1:]) if b < a)
            limit = 0 if self.model is PLModel.LINE else 1
            if descents > limit:
                raise PLError(f"targets not in {self.model.value}-compatible order")

    @property
    def arity(self) -> int:
        return self.ifs.arity

    def piece_scale(self, piece: PLPiece) -> ScaleElement:
        src = Counter(piece.source)
        tgt = Counter(piece.target)
        return ScaleElement(
            tuple(tgt.get(i, 0) - src.get(i, 0) for i in range(self.arity))
        )

    def piece_slope(self, piece: PLPiece) -> Fraction:
        return scale_value(self.ifs.ratios, self.piece_scale(piece))


def identity_pl(ifs: AffineIFS) -> PLMap:
    return PLMap(ifs, (PLPiece((), ()),), PLModel.LINE)


def from_symbol(elem: GroupElement, ifs: AffineIFS) -> PLMap:
    """Realize a tree-pair element on the attractor of the IFS."""
    if elem.arity != ifs.arity:
        raise PLError(
            f"element arity {elem.arity} does not match IFS arity {ifs.arity}"
        )
    sym = elem.symbol
    source_words = sym.source.leaf_paths()
    target_words = sym.target.leaf_paths()
    pieces = tuple(
        PLPiece(source_words[i], target_words[sym.perm[i]], sym.flips[i])
        for i in range(sym.leaf_count)
    )
    return PLMap(ifs, pieces, _VARIANT_MODEL[elem.variant])


def to_symbol(plmap: PLMap) -> GroupElement:
    """Tree-pair element realized by the map (inverse of from_symbol)."""
    sources = [p.source for p in plmap.pieces]
    targets = sorted(p.target for p in plmap.pieces)
    source_tree = tree_from_words(sources, plmap.arity)
    target_tree = tree_from_words(targets, plmap.arity)
    rank = {w: i for i, w in enumerate(targets)}
    perm = tuple(rank[p.target] for p in plmap.pieces)
    flips = tuple(p.rev for p in plmap.pieces)
    sym = Symbol(target_tree, source_tree, perm, flips)
    if plmap.model is PLModel.LINE:
        variant = Variant.F
    elif plmap.model is PLModel.CIRCLE:
        variant = Variant.T
    else:
        variant = Variant.VPM if any(flips) else Variant.V
    return GroupElement(sym, plmap.arity, variant)


def covering_piece(plmap: PLMap, addr: Address) -> PLPiece:
    depth = max(len(p.source) for p in plmap.pieces)
    digits = addr.digits(depth)
    for piece in plmap.pieces:
        if digits[: len(piece.source)] == piece.source:
            return piece
    raise AssertionError("piece covering violated: no source prefix matches")


def apply_address(plmap: PLMap, addr: Address) -> Address:
    """Image of an attractor point, by prefix substitution on its address."""
    piece = covering_piece(plmap, addr)
    tail = addr.drop(len(piece.source))
    if piece.rev:
        tail = tail.complement(plmap.ifs.top_letter)
    return tail.prepend(piece.target)


def apply_value(plmap: PLMap, x: Fraction) -> Fraction:
    """Image of a point of the attractor, by exact affine arithmetic."""
    for piece in plmap.pieces:
        src = standard_interval(plmap.ifs, piece.source)
        if src.lo <= x <= src.hi:
            tgt = standard_interval(plmap.ifs, piece.target)
            slope = tgt.length / src.length
            if piece.rev:
                return tgt.hi - slope * (x - src.lo)
            return tgt.lo + slope * (x - src.lo)
    raise PLError(f"{x} lies outside every source interval")


def _split_piece(piece: PLPiece, arity: int) -> list[PLPiece]:
    top = arity - 1
    if piece.rev:
        return [
            PLPiece(piece.source + (i,), piece.target + (top - i,), True)
            for i in range(arity)
        ]
    return [
        PLPiece(piece.source + (i,), piece.target + (i,), False) for i in range(arity)
    ]


def _merge_pieces(pieces: Iterable[PLPiece], arity: int) -> list[PLPiece]:
    top = arity - 1
    out = sorted(pieces, key=lambda p: p.source)
    while True:
        by_source = {p.source: p for p in out}
        merged = None
        for piece in out:
            w = piece.source
            if not w or w[-1] != 0:
                continue
            parent = w[:-1]
            siblings = [by_source.get(parent + (i,)) for i in range(arity)]
            if any(s is None for s in siblings):
                continue
            t0 = siblings[0].target
            if not t0:
                continue
            tparent = t0[:-1]
            if all(not s.rev for s in siblings) and t0[-1] == 0:
                if all(
                    siblings[i].target == tparent + (i,) for i in range(arity)
                ):
                    merged = (siblings, PLPiece(parent, tparent, False))
            elif all(s.rev for s in siblings) and t0[-1] == top:
                if all(
                    siblings[i].target == tparent + (top - i,) for i in range(arity)
                ):
                    merged = (siblings, PLPiece(parent, tparent, True))
            if merged:
                break
        if merged is None:
            return out
        removed, combined = merged
        out = [p for p in out if p not in removed]
        out.append(combined)
        out.sort(key=lambda p: p.source)


def compose_pl(f: PLMap, g: PLMap) -> PLMap:
    """Composite map acting as g first, then f; pieces in canonical merged form."""
    if f.ifs != g.ifs:
        raise PLError("maps live on different attractors")
    arity = f.arity
    top = arity - 1
    result: list[PLPiece] = []
    stack = list(g.pieces)
    while stack:
        piece = stack.pop()
        outer = next(
            (fp for fp in f.pieces if _is_prefix(fp.source, piece.target)), None
        )
        if outer is None:
            stack.extend(_split_piece(piece, arity))
            continue
        suffix = piece.target[len(outer.source) :]
        if outer.rev:
            suffix = tuple(top - d for d in suffix)
        result.append(
            PLPiece(piece.source, outer.target + suffix, piece.rev ^ outer.rev)
        )
    model = _MODEL_ORDER[max(_MODEL_ORDER.index(f.model), _MODEL_ORDER.index(g.model))]
    return PLMap(f.ifs, tuple(_merge_pieces(result, arity)), model)


def inverse_pl(f: PLMap) -> PLMap:
    pieces = tuple(PLPiece(p.target, p.source, p.rev) for p in f.pieces)
    return PLMap(f.ifs, pieces, f.model)


def slope_spectrum(f: PLMap) -> set[ScaleElement]:
    """The set of scale-group elements realized by the pieces."""
    return {f.piece_scale(p) for p in f.pieces}


# ---------------------------------------------------------------------------
# Standard germs: affine maps carrying the standard interval of word I onto
# that of word J by phi_{I/J}(phi_I(x)) = phi_J(x).


@dataclass(frozen=True)
class StandardGerm:
    source: Word
    target: Word

    def __post_init__(self) -> None:
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))

    def __str__(self) -> str:
        return f"phi_{{{word_str(self.source)}/{word_str(self.target)}}}"


def germ_scale(germ: StandardGerm, arity: int) -> ScaleElement:
    src = Counter(germ.source)
    tgt = Counter(germ.target)
    return ScaleElement(tuple(tgt.get(i, 0) - src.get(i, 0) for i in range(arity)))


def germ_slope(ifs: AffineIFS, germ: StandardGerm) -> Fraction:
    return scale_value(ifs.ratios, germ_scale(germ, ifs.arity))


def germ_apply(germ: StandardGerm, addr: Address) -> Address:
    """Image of an address in the germ's domain cylinder."""
    depth = len(germ.source)
    if addr.digits(depth) != germ.source:
        raise PLError(f"address {addr} outside the domain of {germ}")
    return addr.drop(depth).prepend(germ.target)


def germ_compose(g1: StandardGerm, g2: StandardGerm) -> StandardGerm:
    """Composite germ: g1 from I to J, then g2 from J to K."""
    if g1.target != g2.source:
        raise PLError(
            f"cannot chain {g1} with {g2}: target and source words differ"
        )
    return StandardGerm(g1.source, g2.target)


def germ_invert(germ: StandardGerm) -> StandardGerm:
    return StandardGerm(germ.target, germ.source)


def germ_extend(germ: StandardGerm) -> Optional[StandardGerm]:
    """One-step extension to the parent intervals; exists iff last letters agree."""
    if not germ.source or not germ.target:
        return None
    if germ.source[-1] != germ.target[-1]:
        return None
    return StandardGerm(germ.source[:-1], germ.target[:-1])


def _adjacent_across_gap(left: Word, right: Word, top: int) -> bool:
    """Whether two standard intervals are separated by exactly one gap."""
    k = 0
    while k < min(len(left), len(right)) and left[k] == right[k]:
        k += 1
    if k == len(left) or k == len(right):
        return False
    if right[k] != left[k] + 1:
        return False
    return all(d == top for d in left[k + 1 :]) and all(d == 0 for d in right[k + 1 :])


@dataclass(frozen=True)
class MultiGerm:
    """Ordered standard germs whose consecutive domains and images straddle gaps."""

    germs: tuple[StandardGerm, ...]
    top_letter: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "germs", tuple(self.germs))
        if not self.germs:
            raise PLError("a multi-germ needs at least one germ")
        for left, right in zip(self.germs, self.germs[1:]):
            if not _adjacent_across_gap(left.source, right.source, self.top_letter):
                raise PLError(
                    f"domains of {left} and {right} are not gap-adjacent"
                )
            if not _adjacent_across_gap(left.target, right.target, self.top_letter):
                raise PLError(
                    f"images of {left} and {right} are not gap-adjacent"
                )


def _absorbs(big: StandardGerm, small: StandardGerm) -> bool:
    """Whether `big` restricts to `small` on the smaller domain."""
    if not _is_prefix(big.source, small.source):
        return False
    suffix = small.source[len(big.source) :]
    return small.target == big.target + suffix


def extend_multigerm_trace(mg: MultiGerm) -> list[MultiGerm]:
    """All intermediate states of the maximal-extension rewrite.

    One rewrite step extends a germ to its parent pair (last letters equal)
    provided every other germ whose domain falls inside the extension agrees
    with it; agreeing germs are absorbed.  The final state is the fixed point.
    """
    states = [mg]
    germs = list(mg.germs)
    while True:
        applied = False
        for idx, germ in enumerate(germs):
            ext = germ_extend(germ)
            if ext is None:
                continue
            absorbed: set[int] = set()
            blocked = False
            for k, other in enumerate(germs):
                if k == idx:
                    continue
                inside_src = _is_prefix(ext.source, other.source)
                inside_tgt = _is_prefix(ext.target, other.target)
                if inside_src or inside_tgt:
                    if _absorbs(ext, other):
                        absorbed.add(k)
                    else:
                        blocked = True
                        break
            if blocked:
                continue
            germs = [
                ext if k == idx else h
                for k, h in enumerate(germs)
                if k == idx or k not in absorbed
            ]
            applied = True
            states.append(MultiGerm(tuple(germs), mg.top_letter))
            break
        if not applied:
            return states


def extend_multigerm(mg: MultiGerm) -> MultiGerm:
    """Maximal extension of a multi-germ; fixed point of the extension rewrite."""
    return extend_multigerm_trace(mg)[-1]


# ---------------------------------------------------------------------------
# Stabilizers.


class StabilizerKind(enum.Enum):
    TRIVIAL = "trivial"
    INFINITE_CYCLIC = "infinite-cyclic"


@dataclass(frozen=True)
class StabilizerDescriptor:
    kind: StabilizerKind
    generator: Optional[StandardGerm] = None
    scale: Optional[ScaleElement] = None


def stabilizer(ifs: AffineIFS, point: Point) -> StabilizerDescriptor:
    """Germ stabilizer of an attractor point.

    Eventually periodic points have infinite cyclic stabilizer generated by
    the one-period shift germ (the contracting direction); declared-aperiodic
    witnesses have trivial stabilizer.
    """
    if isinstance(point, AperiodicWitness):
        return StabilizerDescriptor(StabilizerKind.TRIVIAL)
    addr = point
    generator = StandardGerm(addr.pre, addr.pre + addr.per)
    return StabilizerDescriptor(
        StabilizerKind.INFINITE_CYCLIC,
        generator,
        germ_scale(generator, ifs.arity),
    )


# ---------------------------------------------------------------------------
# The germ family of the asymmetric Cantor set: maps between left points have
# slopes 2^-parity * 4^-k, where the parity is that of the weighted geodesic
# in the subdivided binary tree (a 0-edge weighs 2, a 1-edge weighs 1).


def ac_weight(word: Word) -> int:
    return sum(2 if letter == 0 else 1 for letter in word)


def ac_parity(a_word: Word, b_word: Word) -> int:
    """Parity n(a,b) for left points of the asymmetric set given by their words."""
    # The common-prefix weight cancels modulo 2.
    return (ac_weight(a_word) + ac_weight(b_word)) % 2
