"""Tree-pair calculus for the groups F, T, V and the flip extension V+-.

A group element is a pair of finite rooted (n+1)-ary planar trees with the
same number of leaves, a bijection of the leaves, and (for the orientation
extension only) a flip flag per piece.  Composition refines both symbols to
a common tree, reduction cancels matching carets; elements are stored in
reduced form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

TreePath = tuple[int, ...]


class SymbolError(ValueError):
    """Malformed or incompatible tree-pair data."""


@dataclass(frozen=True)
class Tree:
    children: tuple["Tree", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return sum(c.leaf_count() for c in self.children)

    def caret_count(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + sum(c.caret_count() for c in self.children)

    def subtree(self, path: TreePath) -> "Tree":
        node = self
        for step in path:
            node = node.children[step]
        return node

    def replace(self, path: TreePath, new: "Tree") -> "Tree":
        if not path:
            return new
        head, tail = path[0], path[1:]
        children = list(self.children)
        children[head] = children[head].replace(tail, new)
        return Tree(tuple(children))

    def leaf_paths(self) -> list[TreePath]:
        if self.is_leaf:
            return [()]
        out = []
        for i, child in enumerate(self.children):
            out.extend((i,) + p for p in child.leaf_paths())
        return out


LEAF = Tree()


def caret(arity: int) -> Tree:
    return Tree((LEAF,) * arity)


def check_arity(tree: Tree, arity: int) -> None:
    if tree.is_leaf:
        return
    if len(tree.children) != arity:
        raise SymbolError(
            f"internal node with {len(tree.children)} children in an arity-{arity} tree"
        )
    for child in tree.children:
        check_arity(child, arity)


def parse_tree(text: str) -> Tree:
    """Parse parenthesis notation: '.' is a leaf, '(' ... ')' an internal node."""
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(text):
            raise SymbolError(f"unexpected end of tree text {text!r}")
        ch = text[pos]
        if ch == ".":
            pos += 1
            return LEAF
        if ch != "(":
            raise SymbolError(f"unexpected character {ch!r} in tree text")
        pos += 1
        children = []
        while pos < len(text) and text[pos] != ")":
            children.append(parse())
        if pos >= len(text):
            raise SymbolError(f"unbalanced parentheses in {text!r}")
        pos += 1
        if not children:
            raise SymbolError("internal node needs children")
        return Tree(tuple(children))

    tree = parse()
    if pos != len(text.strip()):
        raise SymbolError(f"trailing input in tree text {text!r}")
    return tree


def tree_str(tree: Tree) -> str:
    if tree.is_leaf:
        return "."
    return "(" + "".join(tree_str(c) for c in tree.children) + ")"


def carets_with_leaf_index(tree: Tree) -> list[tuple[TreePath, int]]:
    """Internal nodes whose children are all leaves, with first leaf index."""
    out: list[tuple[TreePath, int]] = []

    def walk(node: Tree, path: TreePath, first: int) -> int:
        if node.is_leaf:
            return first + 1
        if all(c.is_leaf for c in node.children):
            out.append((path, first))
            return first + len(node.children)
        for i, child in enumerate(node.children):
            first = walk(child, path + (i,), first)
        return first

    walk(tree, (), 0)
    return out


class Variant(enum.Enum):
    F = "F"
    T = "T"
    V = "V"
    VPM = "Vpm"


_ORDER = [Variant.F, Variant.T, Variant.V, Variant.VPM]


def variant_join(a: Variant, b: Variant) -> Variant:
    return _ORDER[max(_ORDER.index(a), _ORDER.index(b))]


@dataclass(frozen=True)
class Symbol:
    """Tree pair with leaf bijection: source leaf i maps to target leaf perm[i]."""

    target: Tree
    source: Tree
    perm: tuple[int, ...]
    flips: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        m = self.source.leaf_count()
        if self.target.leaf_count() != m:
            raise SymbolError("source and target leaf counts differ")
        if sorted(self.perm) != list(range(m)):
            raise SymbolError(f"perm {self.perm} is not a bijection on {m} leaves")
        flips = self.flips if self.flips else (False,) * m
        if len(flips) != m:
            raise SymbolError("flip vector length differs from leaf count")
        object.__setattr__(self, "flips", tuple(bool(f) for f in flips))

    @property
    def leaf_count(self) -> int:
        return len(self.perm)


def identity_symbol() -> Symbol:
    return Symbol(LEAF, LEAF, (0,))


def expand(sym: Symbol, leaf: int, arity: int) -> Symbol:
    """Refine: attach a caret at source leaf `leaf` and at its image.

    The new source leaves map to the new target leaves in order, or in
    reversed order when the piece is flipped (each new piece inherits the
    flip).  The refined symbol represents the same group element.
    """
    m = sym.leaf_count
    if not 0 <= leaf < m:
        raise SymbolError(f"leaf index {leaf} out of range for {m} leaves")
    n = arity - 1
    image = sym.perm[leaf]
    flip = sym.flips[leaf]
    source = sym.source.replace(sym.source.leaf_paths()[leaf], caret(arity))
    target = sym.target.replace(sym.target.leaf_paths()[image], caret(arity))

    def new_src(j: int) -> int:
        return j if j < leaf else j + n

    def new_tgt(j: int) -> int:
        return j if j < image else j + n

    perm = [0] * (m + n)
    flips = [False] * (m + n)
    for j in range(m):
        if j == leaf:
            continue
        perm[new_src(j)] = new_tgt(sym.perm[j])
        flips[new_src(j)] = sym.flips[j]
    for t in range(arity):
        perm[leaf + t] = image + (n - t if flip else t)
        flips[leaf + t] = flip
    return Symbol(target, source, tuple(perm), tuple(flips))


def _find_reduction(sym: Symbol, arity: int) -> Optional[tuple[TreePath, int, TreePath, int, bool]]:
    n = arity - 1
    target_carets = {first: path for path, first in carets_with_leaf_index(sym.target)}
    for path, i in carets_with_leaf_index(sym.source):
        images = [sym.perm[i + t] for t in range(arity)]
        flips = [sym.flips[i + t] for t in range(arity)]
        j = min(images)
        if j not in target_carets:
            continue
        if images == list(range(j, j + arity)) and not any(flips):
            return path, i, target_carets[j], j, False
        if images == list(range(j + n, j - 1, -1)) and all(flips):
            return path, i, target_carets[j], j, True
    return None


def reduce_symbol(sym: Symbol, arity: int) -> Symbol:
    """Cancel matching caret pairs until none remain (canonical representative)."""
    while True:
        found = _find_reduction(sym, arity)
        if found is None:
            return sym
        spath, i, tpath, j, flip = found
        n = arity - 1
        m = sym.leaf_count
        source = sym.source.replace(spath, LEAF)
        target = sym.target.replace(tpath, LEAF)

        def old_to_new_src(k: int) -> int:
            # Valid for surviving indices: k < i or k > i + n.
            return k if k < i else k - n

        def old_to_new_tgt(k: int) -> int:
            return k if k < j else k - n

        perm = [0] * (m - n)
        flips = [False] * (m - n)
        perm[i] = j
        flips[i] = flip
        for k in range(m):
            if i <= k <= i + n:
                continue
            perm[old_to_new_src(k)] = old_to_new_tgt(sym.perm[k])
            flips[old_to_new_src(k)] = sym.flips[k]
        sym = Symbol(target, source, tuple(perm), tuple(flips))


def _tree_mismatch(t1: Tree, t2: Tree) -> Optional[tuple[bool, int, int]]:
    """First position where exactly one of two trees has a leaf.

    Returns (t1 holds the leaf, leaf index in t1, leaf index in t2), or None
    when the trees are equal.
    """
    result: list[tuple[bool, int, int]] = []

    def walk(a: Tree, b: Tree, ia: int, ib: int) -> tuple[int, int, bool]:
        if a.is_leaf and b.is_leaf:
            return ia + 1, ib + 1, False
        if a.is_leaf or b.is_leaf:
            result.append((a.is_leaf, ia, ib))
            return ia, ib, True
        for ca, cb in zip(a.children, b.children):
            ia, ib, found = walk(ca, cb, ia, ib)
            if found:
                return ia, ib, True
        return ia, ib, False

    walk(t1, t2, 0, 0)
    return result[0] if result else None


def compose_symbols(a: Symbol, b: Symbol, arity: int) -> Symbol:
    """Symbol of the composite a.b, acting as b first then a.

    Both symbols are refined until source(a) and target(b) coincide, then the
    leaf bijections compose and flips combine by parity.
    """
    while True:
        mismatch = _tree_mismatch(a.source, b.target)
        if mismatch is None:
            break
        a_holds_leaf, ia, ib = mismatch
        if a_holds_leaf:
            a = expand(a, ia, arity)
        else:
            b = expand(b, b.perm.index(ib), arity)
    perm = tuple(a.perm[b.perm[i]] for i in range(b.leaf_count))
    flips = tuple(b.flips[i] ^ a.flips[b.perm[i]] for i in range(b.leaf_count))
    return reduce_symbol(Symbol(a.target, b.source, perm, flips), arity)


def invert_symbol(sym: Symbol) -> Symbol:
    m = sym.leaf_count
    inv = [0] * m
    for i, j in enumerate(sym.perm):
        inv[j] = i
    flips = tuple(sym.flips[inv[j]] for j in range(m))
    return Symbol(sym.source, sym.target, tuple(inv), flips)


def classify_symbol(sym: Symbol) -> Variant:
    if any(sym.flips):
        return Variant.VPM
    m = sym.leaf_count
    if sym.perm == tuple(range(m)):
        return Variant.F
    shift = sym.perm[0]
    if all(sym.perm[i] == (i + shift) % m for i in range(m)):
        return Variant.T
    return Variant.V


@dataclass(frozen=True)
class GroupElement:
    """Reduced symbol together with the ambient group it is considered in."""

    symbol: Symbol
    arity: int
    variant: Variant

    def __post_init__(self) -> None:
        check_arity(self.symbol.source, self.arity)
        check_arity(self.symbol.target, self.arity)
        object.__setattr__(self, "symbol", reduce_symbol(self.symbol, self.arity))
        actual = classify_symbol(self.symbol)
        if _ORDER.index(actual) > _ORDER.index(self.variant):
            raise SymbolError(
                f"symbol of class {actual.value} declared as {self.variant.value}"
            )

    @property
    def is_identity(self) -> bool:
        return self.symbol == identity_symbol()

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(invert_symbol(self.symbol), self.arity, self.variant)


def element(symbol: Symbol, arity: int = 2, variant: Variant | None = None) -> GroupElement:
    if variant is None:
        variant = classify_symbol(symbol)
    return GroupElement(symbol, arity, variant)


def identity_element(arity: int = 2, variant: Variant = Variant.F) -> GroupElement:
    return GroupElement(identity_symbol(), arity, variant)


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Group law: (a.b) acts as a after b."""
    if a.arity != b.arity:
        raise SymbolError(f"arity mismatch: {a.arity} vs {b.arity}")
    if a.variant is not b.variant:
        raise SymbolError(
            f"variant mismatch: {a.variant.value} vs {b.variant.value}"
        )
    return GroupElement(compose_symbols(a.symbol, b.symbol, a.arity), a.arity, a.variant)


def classify(a: GroupElement) -> Variant:
    """Smallest class in F < T < V < V+- containing the element."""
    return classify_symbol(a.symbol)


def abelianization_F(a: GroupElement) -> tuple[int, int]:
    """Image in Z^2 of a binary F element: log2 slopes at 0 and at 1."""
    if a.arity != 2:
        raise SymbolError("abelianization is defined for binary F only")
    if classify(a) is not Variant.F:
        raise SymbolError("abelianization requires an F element")

    def left_depth(t: Tree) -> int:
        d = 0
        while not t.is_leaf:
            t = t.children[0]
            d += 1
        return d

    def right_depth(t: Tree) -> int:
        d = 0
        while not t.is_leaf:
            t = t.children[-1]
            d += 1
        return d

    src, tgt = a.symbol.source, a.symbol.target
    return (left_depth(src) - left_depth(tgt), right_depth(src) - right_depth(tgt))


# ---------------------------------------------------------------------------
# Piecewise-affine evaluation on the equal-subdivision model.  This is the
# independent oracle for the group laws: leaves of an arity-(n+1) tree label
# the intervals of the iterated (n+1)-equal subdivision of [0,1].


def leaf_intervals(tree: Tree) -> list[tuple[Fraction, Fraction]]:
    out: list[tuple[Fraction, Fraction]] = []

    def walk(node: Tree, lo: Fraction, hi: Fraction) -> None:
        if node.is_leaf:
            out.append((lo, hi))
            return
        k = len(node.children)
        step = (hi - lo) / k
        for i, child in enumerate(node.children):
            walk(child, lo + i * step, lo + (i + 1) * step)

    walk(tree, Fraction(0), Fraction(1))
    return out


def evaluate_affine(a: GroupElement, x: Fraction) -> Fraction:
    """Value at x of the piecewise-affine realization of the element."""
    if not 0 <= x <= 1:
        raise SymbolError("evaluation point outside [0,1]")
    src = leaf_intervals(a.symbol.source)
    tgt = leaf_intervals(a.symbol.target)
    for i, (lo, hi) in enumerate(src):
        if lo <= x < hi or (x == 1 and hi == 1):
            tlo, thi = tgt[a.symbol.perm[i]]
            scale = (thi - tlo) / (hi - lo)
            if a.symbol.flips[i]:
                return thi - scale * (x - lo)
            return tlo + scale * (x - lo)
    raise AssertionError("source intervals do not cover [0,1]")


# ---------------------------------------------------------------------------
# Named generators and random elements.


def x0() -> GroupElement:
    return element(
        Symbol(parse_tree("((..).)"), parse_tree("(.(..))"), (0, 1, 2)), 2, Variant.F
    )


def x1() -> GroupElement:
    return element(
        Symbol(parse_tree("(.((..).))"), parse_tree("(.(.(..)))"), (0, 1, 2, 3)),
        2,
        Variant.F,
    )


def rotation(arity: int = 2, steps: int = 1) -> GroupElement:
    """One-caret element rotating the first-generation intervals."""
    m = arity
    perm = tuple((i + steps) % m for i in range(m))
    return element(Symbol(caret(arity), caret(arity), perm), arity, Variant.T)


def transposition(arity: int = 2) -> GroupElement:
    """Element swapping two adjacent pieces, fixing the rest; lies in V."""
    if arity == 2:
        sym = Symbol(parse_tree("((..).)"), parse_tree("((..).)"), (1, 0, 2))
    else:
        perm = (1, 0) + tuple(range(2, arity))
        sym = Symbol(caret(arity), caret(arity), perm)
    return element(sym, arity, Variant.V)


def random_tree(rng, arity: int, carets: int) -> Tree:
    tree = LEAF if carets == 0 else caret(arity)
    for _ in range(max(carets - 1, 0)):
        paths = tree.leaf_paths()
        tree = tree.replace(paths[rng.randrange(len(paths))], caret(arity))
    return tree


def random_element(rng, variant: Variant, arity: int, max_carets: int) -> GroupElement:
    carets_count = rng.randint(0, max_carets)
    source = random_tree(rng, arity, carets_count)
    target = random_tree(rng, arity, carets_count)
    m = source.leaf_count()
    if variant is Variant.F:
        perm = tuple(range(m))
    elif variant is Variant.T:
        shift = rng.randrange(m)
        perm = tuple((i + shift) % m for i in range(m))
    else:
        order = list(range(m))
        rng.shuffle(order)
        perm = tuple(order)
    flips = (
        tuple(rng.random() < 0.4 for _ in range(m))
        if variant is Variant.VPM
        else (False,) * m
    )
    return GroupElement(Symbol(target, source, perm, flips), arity, variant)
