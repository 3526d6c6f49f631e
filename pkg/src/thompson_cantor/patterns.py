"""Dyadic pattern pairs on the n-cube: the higher-dimensional groups nV, nV^sym.

A pattern is a binary tree of axis-aligned halving cuts; its leaves are
dyadic boxes partitioning the unit cube and, equivalently, clopen pieces of
the n-fold product dust.  An element is a pair of patterns with a leaf
bijection and one orientation-preserving cube symmetry per piece; it acts on
product addresses by per-axis prefix substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cantor import Address, AffineIFS, AperiodicWitness, PointSide, Word, classify_point


class PatternError(ValueError):
    """Malformed pattern or element data."""


@dataclass(frozen=True)
class PatternTree:
    """Cell, or a halving cut along `axis` with low/high sub-patterns."""

    axis: Optional[int] = None
    low: Optional["PatternTree"] = None
    high: Optional["PatternTree"] = None

    def __post_init__(self) -> None:
        if (self.axis is None) != (self.low is None or self.high is None):
            raise PatternError("a cut needs an axis and two halves")

    @property
    def is_cell(self) -> bool:
        return self.axis is None

    def leaf_count(self) -> int:
        if self.is_cell:
            return 1
        return self.low.leaf_count() + self.high.leaf_count()

    def validate_dim(self, dim: int) -> None:
        if self.is_cell:
            return
        if not 0 <= self.axis < dim:
            raise PatternError(f"cut axis {self.axis} outside dimension {dim}")
        self.low.validate_dim(dim)
        self.high.validate_dim(dim)


CELL = PatternTree()


def cut(axis: int, low: PatternTree = CELL, high: PatternTree = CELL) -> PatternTree:
    return PatternTree(axis, low, high)


def leaf_words(pattern: PatternTree, dim: int) -> list[tuple[Word, ...]]:
    """Per-axis binary words of each leaf box, in depth-first leaf order."""
    out: list[tuple[Word, ...]] = []

    def walk(node: PatternTree, words: tuple[Word, ...]) -> None:
        if node.is_cell:
            out.append(words)
            return
        a = node.axis
        walk(node.low, words[:a] + (words[a] + (0,),) + words[a + 1 :])
        walk(node.high, words[:a] + (words[a] + (1,),) + words[a + 1 :])

    walk(pattern, ((),) * dim)
    return out


def leaf_boxes(pattern: PatternTree, dim: int) -> list[tuple[tuple[Fraction, Fraction], ...]]:
    """Per-axis dyadic intervals of each leaf box."""
    boxes = []
    for words in leaf_words(pattern, dim):
        box = []
        for word in words:
            lo = Fraction(0)
            width = Fraction(1)
            for digit in word:
                width /= 2
                lo += digit * width
            box.append((lo, lo + width))
        boxes.append(tuple(box))
    return boxes


def _restrict(node: PatternTree, axis: int, side: int) -> PatternTree:
    """Pattern induced on one half of the current box along `axis`."""
    if node.is_cell:
        return CELL
    if node.axis == axis:
        return node.low if side == 0 else node.high
    return PatternTree(
        node.axis, _restrict(node.low, axis, side), _restrict(node.high, axis, side)
    )


def superpose(p1: PatternTree, p2: PatternTree) -> PatternTree:
    """Common refinement: replay the cuts of p1, then the remaining cuts of p2."""
    if p1.is_cell:
        return p2
    return PatternTree(
        p1.axis,
        superpose(p1.low, _restrict(p2, p1.axis, 0)),
        superpose(p1.high, _restrict(p2, p1.axis, 1)),
    )


def _leaf_index_containing(pattern: PatternTree, words: tuple[Word, ...]) -> int:
    """Index of the pattern leaf whose box contains the given (finer) box."""
    node = pattern
    consumed = [0] * len(words)
    index = 0
    while not node.is_cell:
        a = node.axis
        if consumed[a] >= len(words[a]):
            raise PatternError("box is not contained in a single leaf")
        digit = words[a][consumed[a]]
        consumed[a] += 1
        if digit == 0:
            node = node.low
        else:
            index += node.low.leaf_count()
            node = node.high
    return index


def refine_to_match(
    p1: PatternTree, p2: PatternTree, dim: int
) -> tuple[PatternTree, list[int], list[int]]:
    """Common refinement R plus, per R-leaf, the containing leaf in p1 and p2."""
    refined = superpose(p1, p2)
    emb1 = []
    emb2 = []
    for words in leaf_words(refined, dim):
        emb1.append(_leaf_index_containing(p1, words))
        emb2.append(_leaf_index_containing(p2, words))
    return refined, emb1, emb2


def _cut_leaf(pattern: PatternTree, leaf: int, axis: int) -> PatternTree:
    """Insert a halving cut at the given leaf (depth-first index)."""

    def walk(node: PatternTree, first: int) -> tuple[PatternTree, int]:
        if node.is_cell:
            if first == leaf:
                return PatternTree(axis, CELL, CELL), first + 1
            return node, first + 1
        low, first = walk(node.low, first)
        high, first = walk(node.high, first)
        return PatternTree(node.axis, low, high), first

    new, count = walk(pattern, 0)
    if not 0 <= leaf < count:
        raise PatternError(f"leaf index {leaf} out of range")
    return new


def _pattern_cuts(pattern: PatternTree) -> list[tuple[int, int]]:
    """(first leaf index, axis) of each cut whose two children are cells."""
    out: list[tuple[int, int]] = []

    def walk(node: PatternTree, first: int) -> int:
        if node.is_cell:
            return first + 1
        if node.low.is_cell and node.high.is_cell:
            out.append((first, node.axis))
            return first + 2
        first = walk(node.low, first)
        return walk(node.high, first)

    walk(pattern, 0)
    return out


# ---------------------------------------------------------------------------
# Cube symmetries: signed permutation matrices of determinant +1.


def _perm_parity(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    parity = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            parity = -parity
    return parity


@dataclass(frozen=True)
class CubeSymmetry:
    """Signed axis permutation: source axis j maps to axis_perm[j], with sign."""

    axis_perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.axis_perm)
        if sorted(self.axis_perm) != list(range(n)):
            raise PatternError(f"{self.axis_perm} is not an axis permutation")
        if len(self.signs) != n or any(s not in (-1, 1) for s in self.signs):
            raise PatternError("signs must be +-1, one per axis")
        if self.determinant != 1:
            raise PatternError("cube symmetry must preserve orientation")

    @property
    def dim(self) -> int:
        return len(self.axis_perm)

    @property
    def determinant(self) -> int:
        sign = 1
        for s in self.signs:
            sign *= s
        return _perm_parity(self.axis_perm) * sign

    @property
    def is_identity(self) -> bool:
        return self.axis_perm == tuple(range(self.dim)) and all(
            s == 1 for s in self.signs
        )

    @staticmethod
    def identity(dim: int) -> "CubeSymmetry":
        return CubeSymmetry(tuple(range(dim)), (1,) * dim)

    def compose(self, first: "CubeSymmetry") -> "CubeSymmetry":
        """Symmetry acting as `first`, then self (matrix product self*first)."""
        if self.dim != first.dim:
            raise PatternError("dimension mismatch")
        perm = tuple(self.axis_perm[first.axis_perm[j]] for j in range(self.dim))
        signs = tuple(
            first.signs[j] * self.signs[first.axis_perm[j]] for j in range(self.dim)
        )
        return CubeSymmetry(perm, signs)

    def inverse(self) -> "CubeSymmetry":
        inv = [0] * self.dim
        for j, image in enumerate(self.axis_perm):
            inv[image] = j
        signs = tuple(self.signs[inv[i]] for i in range(self.dim))
        return CubeSymmetry(tuple(inv), signs)

    def matrix(self) -> list[list[int]]:
        m = [[0] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            m[self.axis_perm[j]][j] = self.signs[j]
        return m


DustAddress = tuple[Union[Address, AperiodicWitness], ...]


@dataclass(frozen=True)
class NVElement:
    """Pattern pair with leaf bijection and per-piece cube symmetry."""

    dim: int
    source: PatternTree
    target: PatternTree
    perm: tuple[int, ...]
    syms: tuple[CubeSymmetry, ...]

    def __post_init__(self) -> None:
        self.source.validate_dim(self.dim)
        self.target.validate_dim(self.dim)
        m = self.source.leaf_count()
        if self.target.leaf_count() != m:
            raise PatternError("source and target leaf counts differ")
        if sorted(self.perm) != list(range(m)):
            raise PatternError(f"perm {self.perm} is not a bijection")
        if len(self.syms) != m:
            raise PatternError("one symmetry per piece is required")
        for sym in self.syms:
            if sym.dim != self.dim:
                raise PatternError("symmetry dimension mismatch")

    @property
    def leaf_count(self) -> int:
        return len(self.perm)

    @property
    def is_plain(self) -> bool:
        return all(s.is_identity for s in self.syms)


def identity_nv(dim: int) -> NVElement:
    return NVElement(dim, CELL, CELL, (0,), (CubeSymmetry.identity(dim),))


def expand_source_leaf(elem: NVElement, leaf: int, axis: int) -> NVElement:
    """Cut source leaf `leaf` along `axis` and its image along the mapped axis."""
    sym = elem.syms[leaf]
    image = elem.perm[leaf]
    target_axis = sym.axis_perm[axis]
    swap = sym.signs[axis] < 0
    source = _cut_leaf(elem.source, leaf, axis)
    target = _cut_leaf(elem.target, image, target_axis)

    def new_src(k: int) -> int:
        return k if k < leaf else k + 1

    def new_tgt(k: int) -> int:
        return k if k < image else k + 1

    m = elem.leaf_count
    perm = [0] * (m + 1)
    syms: list[CubeSymmetry] = [CubeSymmetry.identity(elem.dim)] * (m + 1)
    for k in range(m):
        if k == leaf:
            continue
        perm[new_src(k)] = new_tgt(elem.perm[k])
        syms[new_src(k)] = elem.syms[k]
    perm[leaf] = image + (1 if swap else 0)
    perm[leaf + 1] = image + (0 if swap else 1)
    syms[leaf] = syms[leaf + 1] = sym
    return NVElement(elem.dim, source, target, tuple(perm), tuple(syms))


def expand_target_leaf(elem: NVElement, leaf: int, axis: int) -> NVElement:
    """Cut target leaf `leaf` along `axis`, pulled back through the piece map."""
    source_leaf = elem.perm.index(leaf)
    sym = elem.syms[source_leaf]
    source_axis = sym.axis_perm.index(axis)
    return expand_source_leaf(elem, source_leaf, source_axis)


def _refine_target_toward(elem: NVElement, refinement: PatternTree) -> NVElement:
    """Expand until the element's target equals the given finer pattern."""
    while True:
        found = _first_cell_vs_cut(elem.target, refinement)
        if found is None:
            return elem
        leaf, axis = found
        elem = expand_target_leaf(elem, leaf, axis)


def _refine_source_toward(elem: NVElement, refinement: PatternTree) -> NVElement:
    while True:
        found = _first_cell_vs_cut(elem.source, refinement)
        if found is None:
            return elem
        leaf, axis = found
        elem = expand_source_leaf(elem, leaf, axis)


def _first_cell_vs_cut(coarse: PatternTree, fine: PatternTree) -> Optional[tuple[int, int]]:
    """First leaf of `coarse` where `fine` still cuts; fine must refine coarse."""
    result: list[tuple[int, int]] = []

    def walk(a: PatternTree, b: PatternTree, ia: int) -> tuple[int, bool]:
        if a.is_cell and b.is_cell:
            return ia + 1, False
        if a.is_cell:
            result.append((ia, b.axis))
            return ia, True
        if b.is_cell or a.axis != b.axis:
            raise PatternError("pattern does not refine the coarser one")
        ia, found = walk(a.low, b.low, ia)
        if found:
            return ia, True
        return walk(a.high, b.high, ia)

    walk(coarse, fine, 0)
    return result[0] if result else None


def compose_nv(f: NVElement, g: NVElement) -> NVElement:
    """Composite element acting as g first, then f; reduced form.

    The middle patterns are refined to a common partition.  The two
    superposition orders give the same partition but different cut trees,
    so the handoff between g-target leaves and f-source leaves goes through
    the leaf boxes rather than leaf indices.
    """
    if f.dim != g.dim:
        raise PatternError(f"dimension mismatch: {f.dim} vs {g.dim}")
    g = _refine_target_toward(g, superpose(g.target, f.source))
    f = _refine_source_toward(f, superpose(f.source, g.target))
    target_words = leaf_words(g.target, g.dim)
    source_lookup = {box: k for k, box in enumerate(leaf_words(f.source, f.dim))}
    perm = []
    syms = []
    for i in range(g.leaf_count):
        mid = source_lookup[target_words[g.perm[i]]]
        perm.append(f.perm[mid])
        syms.append(f.syms[mid].compose(g.syms[i]))
    return reduce_nv(NVElement(f.dim, g.source, f.target, tuple(perm), tuple(syms)))


def inverse_nv(elem: NVElement) -> NVElement:
    m = elem.leaf_count
    inv = [0] * m
    for i, j in enumerate(elem.perm):
        inv[j] = i
    syms = tuple(elem.syms[inv[j]].inverse() for j in range(m))
    return NVElement(elem.dim, elem.target, elem.source, tuple(inv), syms)


def reduce_nv(elem: NVElement) -> NVElement:
    """Remove co-cut sibling piece pairs mapped by a common symmetry."""
    while True:
        found = _find_nv_reduction(elem)
        if found is None:
            return elem
        elem = found


def _find_nv_reduction(elem: NVElement) -> Optional[NVElement]:
    target_cuts = dict(_pattern_cuts(elem.target))
    for i, axis in _pattern_cuts(elem.source):
        sym = elem.syms[i]
        if elem.syms[i + 1] != sym:
            continue
        swap = sym.signs[axis] < 0
        j = elem.perm[i] - (1 if swap else 0)
        expected = (j + 1, j) if swap else (j, j + 1)
        if (elem.perm[i], elem.perm[i + 1]) != expected:
            continue
        if target_cuts.get(j) != sym.axis_perm[axis]:
            continue
        return _merge_nv(elem, i, j, sym)
    return None


def _remove_cut_at(pattern: PatternTree, first_leaf: int) -> PatternTree:
    def walk(node: PatternTree, first: int) -> tuple[PatternTree, int]:
        if node.is_cell:
            return node, first + 1
        if node.low.is_cell and node.high.is_cell and first == first_leaf:
            return CELL, first + 2
        low, first = walk(node.low, first)
        high, first = walk(node.high, first)
        return PatternTree(node.axis, low, high), first

    return walk(pattern, 0)[0]


def _merge_nv(elem: NVElement, i: int, j: int, sym: CubeSymmetry) -> NVElement:
    m = elem.leaf_count
    source = _remove_cut_at(elem.source, i)
    target = _remove_cut_at(elem.target, j)

    def new_src(k: int) -> int:
        return k if k < i else k - 1

    def new_tgt(k: int) -> int:
        return k if k < j else k - 1

    perm = [0] * (m - 1)
    syms: list[CubeSymmetry] = [sym] * (m - 1)
    perm[i] = j
    for k in range(m):
        if k in (i, i + 1):
            continue
        perm[new_src(k)] = new_tgt(elem.perm[k])
        syms[new_src(k)] = elem.syms[k]
    return NVElement(elem.dim, source, target, tuple(perm), tuple(syms))


def apply_nv(elem: NVElement, point: DustAddress) -> DustAddress:
    """Image of a dust point: strip the source box, apply the symmetry, re-prefix."""
    if len(point) != elem.dim:
        raise PatternError("point dimension mismatch")
    for coord in point:
        if not isinstance(coord, Address):
            raise PatternError("apply needs exact addresses in every coordinate")
    node = elem.source
    consumed = [0] * elem.dim
    index = 0
    while not node.is_cell:
        a = node.axis
        digit = point[a].digit(consumed[a])
        consumed[a] += 1
        if digit == 0:
            node = node.low
        else:
            index += node.low.leaf_count()
            node = node.high
    sym = elem.syms[index]
    tails = [None] * elem.dim
    for a in range(elem.dim):
        tail = point[a].drop(consumed[a])
        if sym.signs[a] < 0:
            tail = tail.complement(1)
        tails[sym.axis_perm[a]] = tail
    prefixes = leaf_words(elem.target, elem.dim)[elem.perm[index]]
    return tuple(tails[a].prepend(prefixes[a]) for a in range(elem.dim))


def stabilizer_rank(point: DustAddress) -> int:
    """Number of eventually periodic coordinates; the stabilizer is Z^rank."""
    return sum(1 for coord in point if isinstance(coord, Address))


def tangent_hull_type(ifs: AffineIFS, point: DustAddress) -> int:
    """Number k of two-sided coordinates: the tangent hull is of type L_{k,n}.

    Aperiodic coordinates are two-sided: one-sided points have eventually
    constant, hence periodic, addresses.
    """
    k = 0
    for coord in point:
        if isinstance(coord, AperiodicWitness):
            k += 1
        elif classify_point(ifs, coord) is PointSide.TWO_SIDED:
            k += 1
    return k


def random_pattern(rng, dim: int, cuts: int) -> PatternTree:
    pattern = CELL
    for _ in range(cuts):
        leaf = rng.randrange(pattern.leaf_count())
        pattern = _cut_leaf(pattern, leaf, rng.randrange(dim))
    return pattern


def random_symmetry(rng, dim: int) -> CubeSymmetry:
    perm = list(range(dim))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(dim)]
    sign_product = 1
    for s in signs:
        sign_product *= s
    if _perm_parity(perm) * sign_product != 1:
        signs[0] = -signs[0]
    return CubeSymmetry(tuple(perm), tuple(signs))


def random_nv(rng, dim: int, cuts: int, with_syms: bool = False) -> NVElement:
    source = random_pattern(rng, dim, cuts)
    target = random_pattern(rng, dim, cuts)
    m = source.leaf_count()
    perm = list(range(m))
    rng.shuffle(perm)
    if with_syms:
        syms = tuple(random_symmetry(rng, dim) for _ in range(m))
    else:
        syms = (CubeSymmetry.identity(dim),) * m
    return NVElement(dim, source, target, tuple(perm), syms)
