"""Affine IFSs on [0,1], their attractors, addressing, gaps and genericity.

An IFS here is a list of affine contractions phi_j(x) = l_j*x + a_j whose
images of [0,1] are disjoint and normalized to touch 0 and 1.  Points of the
attractor are addressed by infinite words over {0..n}; the eventually
periodic ones are represented exactly and evaluated as exact rationals.
"""

from __future__ import annotations

import bisect
import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .exact import (
    Rational,
    ScaleElement,
    relation_lattice,
    solve_exponent_product,
)

Word = tuple[int, ...]


class IFSError(ValueError):
    """Invalid IFS data."""


class NotNormalized(IFSError):
    """First offset is not 0 or last image does not end at 1."""


class NotCantor(IFSError):
    """Consecutive images overlap or touch: the attractor is not a Cantor set."""


def parse_word(text: str, alphabet_size: int | None = None) -> Word:
    """Parse a word like "012" (single-digit letters) into a tuple."""
    word = tuple(int(ch) for ch in text.strip())
    if alphabet_size is not None:
        for letter in word:
            if not 0 <= letter < alphabet_size:
                raise IFSError(f"letter {letter} outside alphabet of size {alphabet_size}")
    return word


def word_str(word: Word) -> str:
    return "".join(str(letter) for letter in word)


@dataclass(frozen=True)
class AffineIFS:
    """Validated affine IFS with rational ratios and offsets."""

    pieces: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        pieces = tuple((Fraction(r), Fraction(a)) for r, a in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if len(pieces) < 2:
            raise IFSError("an IFS needs at least two pieces")
        for ratio, _ in pieces:
            if not 0 < ratio < 1:
                raise IFSError(f"ratio {ratio} outside (0,1)")
        if pieces[0][1] != 0:
            raise NotNormalized(f"first offset is {pieces[0][1]}, expected 0")
        last_ratio, last_offset = pieces[-1]
        if last_ratio + last_offset != 1:
            raise NotNormalized(
                f"last image ends at {last_ratio + last_offset}, expected 1"
            )
        for j in range(len(pieces) - 1):
            right = pieces[j][0] + pieces[j][1]
            nxt = pieces[j + 1][1]
            if right >= nxt:
                raise NotCantor(
                    f"images of pieces {j} and {j + 1} overlap or touch "
                    f"({right} >= {nxt})"
                )

    @property
    def arity(self) -> int:
        return len(self.pieces)

    @property
    def top_letter(self) -> int:
        return len(self.pieces) - 1

    @property
    def ratios(self) -> tuple[Fraction, ...]:
        return tuple(r for r, _ in self.pieces)

    @property
    def offsets(self) -> tuple[Fraction, ...]:
        return tuple(a for _, a in self.pieces)

    @property
    def initial_gaps(self) -> tuple[Fraction, ...]:
        """Gap lengths g_1..g_n between consecutive first-generation images."""
        out = []
        for j in range(len(self.pieces) - 1):
            r, a = self.pieces[j]
            out.append(self.pieces[j + 1][1] - r - a)
        return tuple(out)

    @property
    def is_palindromic(self) -> bool:
        """Whether x -> 1-x maps the attractor to itself (mirror symmetry)."""
        n = self.top_letter
        ratios = self.ratios
        gaps = self.initial_gaps
        return all(ratios[i] == ratios[n - i] for i in range(self.arity)) and all(
            gaps[i] == gaps[n - 1 - i] for i in range(len(gaps))
        )

    def word_map(self, word: Word) -> tuple[Fraction, Fraction]:
        """Slope and intercept of the composite phi_word (leftmost letter outermost)."""
        slope, intercept = Fraction(1), Fraction(0)
        for letter in word:
            if not 0 <= letter < self.arity:
                raise IFSError(f"letter {letter} outside alphabet")
            r, a = self.pieces[letter]
            slope, intercept = slope * r, slope * a + intercept
        return slope, intercept

    def word_exponents(self, word: Word) -> ScaleElement:
        """Letter-count vector of a word, as a scale-group element."""
        counts = [0] * self.arity
        for letter in word:
            counts[letter] += 1
        return ScaleElement(tuple(counts))

    @staticmethod
    def central(lam: Rational) -> "AffineIFS":
        """Central Cantor set C_lam: two pieces of ratio 1/lam, lam > 2."""
        lam = Fraction(lam)
        if lam <= 2:
            raise NotCantor(f"central parameter {lam} <= 2 gives no Cantor set")
        return AffineIFS(((Fraction(1, 1) / lam, Fraction(0)), (1 / lam, (lam - 1) / lam)))

    @staticmethod
    def asymmetric() -> "AffineIFS":
        """The asymmetric Cantor set with ratios 1/4 and 1/2."""
        return AffineIFS(((Fraction(1, 4), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))))

    @staticmethod
    def equal_ratio(arity: int, ratio: Rational | None = None) -> "AffineIFS":
        """Homogeneous IFS with `arity` equal pieces and equal gaps."""
        if arity < 2:
            raise IFSError("arity must be at least 2")
        if ratio is None:
            ratio = Fraction(1, 2 * arity - 1)
        ratio = Fraction(ratio)
        if ratio * arity >= 1:
            raise NotCantor(f"{arity} pieces of ratio {ratio} leave no gaps")
        gap = (1 - arity * ratio) / (arity - 1)
        pieces = tuple((ratio, j * (ratio + gap)) for j in range(arity))
        return AffineIFS(pieces)


def validate_ifs(pieces: Iterable[tuple[Rational, Rational]]) -> AffineIFS:
    """Validate raw (ratio, offset) pairs; raises NotCantor/NotNormalized."""
    return AffineIFS(tuple((Fraction(r), Fraction(a)) for r, a in pieces))


@dataclass(frozen=True)
class Address:
    """Eventually periodic address pre . (per)^infinity, stored canonically.

    Canonical form: the period is primitive (not a power of a shorter word)
    and the preperiod does not end with the period's last letter, so equal
    points of the attractor have structurally equal addresses.
    """

    pre: Word
    per: Word

    def __post_init__(self) -> None:
        pre = tuple(int(x) for x in self.pre)
        per = tuple(int(x) for x in self.per)
        if not per:
            raise IFSError("address period must be nonempty")
        # Minimal period.
        for d in range(1, len(per) + 1):
            if len(per) % d == 0 and per == per[:d] * (len(per) // d):
                per = per[:d]
                break
        # Minimal preperiod: absorb trailing letters into a rotated period.
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "per", per)

    @staticmethod
    def parse(pre: str, per: str) -> "Address":
        return Address(parse_word(pre), parse_word(per))

    def digit(self, index: int) -> int:
        if index < len(self.pre):
            return self.pre[index]
        return self.per[(index - len(self.pre)) % len(self.per)]

    def digits(self, count: int) -> Word:
        return tuple(self.digit(i) for i in range(count))

    def drop(self, count: int) -> "Address":
        """Address of the tail after removing the first `count` digits."""
        if count <= len(self.pre):
            return Address(self.pre[count:], self.per)
        shift = (count - len(self.pre)) % len(self.per)
        return Address((), self.per[shift:] + self.per[:shift])

    def prepend(self, word: Word) -> "Address":
        return Address(tuple(word) + self.pre, self.per)

    def complement(self, top_letter: int) -> "Address":
        """Digitwise i -> n-i (mirror map on a palindromic attractor)."""
        return Address(
            tuple(top_letter - d for d in self.pre),
            tuple(top_letter - d for d in self.per),
        )

    def __str__(self) -> str:
        return f"{word_str(self.pre)}({word_str(self.per)})"


@dataclass(frozen=True)
class AperiodicWitness:
    """Symbolic stand-in for a point with a declared-aperiodic address.

    Only a finite sample of digits is stored; consumers must not evaluate it,
    they may only branch on its aperiodicity.
    """

    sample: Word = ()


Point = Union[Address, AperiodicWitness]


@dataclass(frozen=True)
class StandardInterval:
    """Image of [0,1] under the composite map of `word`."""

    word: Word
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class Gap:
    """Complementary interval between two consecutive child images."""

    generation: int
    parent: Word
    slot: int
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def standard_interval(ifs: AffineIFS, word: Word) -> StandardInterval:
    slope, intercept = ifs.word_map(tuple(word))
    return StandardInterval(tuple(word), intercept, slope + intercept)


def evaluate_address(ifs: AffineIFS, addr: Address) -> Fraction:
    """Exact value of the attractor point with the given address.

    The periodic tail is the fixed point of the period's composite map; the
    preperiod map is then applied to it.
    """
    ps, pt = ifs.word_map(addr.per)
    fixed = pt / (1 - ps)
    s, t = ifs.word_map(addr.pre)
    return s * fixed + t


def words_of_length(ifs: AffineIFS, length: int) -> list[Word]:
    return [tuple(w) for w in itertools.product(range(ifs.arity), repeat=length)]


def gaps_up_to(ifs: AffineIFS, generations: int) -> list[Gap]:
    """All gaps of generation <= `generations`, ordered by generation then position."""
    if generations < 1:
        raise IFSError("generation bound must be >= 1")
    out: list[Gap] = []
    for gen in range(1, generations + 1):
        for parent in words_of_length(ifs, gen - 1):
            slope, intercept = ifs.word_map(parent)
            for slot in range(1, ifs.arity):
                r, a = ifs.pieces[slot - 1]
                lo = slope * (r + a) + intercept
                hi = slope * ifs.pieces[slot][1] + intercept
                out.append(Gap(gen, parent, slot, lo, hi))
    return out


def endpoints_up_to(ifs: AffineIFS, generations: int) -> list[Fraction]:
    """Sorted distinct endpoints of all standard intervals of generation <= G."""
    points: set[Fraction] = set()
    for length in range(generations + 1):
        for word in words_of_length(ifs, length):
            s, t = ifs.word_map(word)
            points.add(t)
            points.add(s + t)
    return sorted(points)


def sparseness_bound(ifs: AffineIFS, generations: int) -> Fraction:
    """Brute-force sparseness constant over generation-<=G endpoint pairs.

    For each pair a < b of standard-interval endpoints, the longest gap
    inside (a,b) is found; the bound is the least ratio (gap length)/(b-a).
    A longest gap between two generation-<=G endpoints always has generation
    <= G+1, so searching gaps_up_to(G+1) is exact.
    """
    if generations < 1:
        raise IFSError("generation bound must be >= 1")
    points = endpoints_up_to(ifs, generations)
    gaps = gaps_up_to(ifs, generations + 1)
    gaps.sort(key=lambda g: g.lo)
    starts = [g.lo for g in gaps]
    best: Optional[Fraction] = None
    for i, a in enumerate(points):
        first = bisect.bisect_left(starts, a)
        for b in points[i + 1 :]:
            longest = Fraction(0)
            for gap in gaps[first:]:
                if gap.lo >= b:
                    break
                if gap.hi <= b and gap.length > longest:
                    longest = gap.length
            ratio = longest / (b - a)
            if best is None or ratio < best:
                best = ratio
    assert best is not None
    return best


class PointSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"


def classify_point(ifs: AffineIFS, addr: Address) -> PointSide:
    """Left/right/two-sided accumulation type of an attractor point."""
    if addr.per == (0,):
        return PointSide.LEFT
    if addr.per == (ifs.top_letter,):
        return PointSide.RIGHT
    return PointSide.TWO_SIDED


class GenericityKind(enum.Enum):
    EQUAL_BRANCH = "equal-branch"
    INCOMMENSURABLE_BRANCH = "incommensurable-branch"
    FAILS = "fails"


@dataclass(frozen=True)
class GenericityVerdict:
    kind: GenericityKind
    witness: Optional[tuple[int, ...]] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.kind is not GenericityKind.FAILS


def _normalize_sign(vec: tuple[int, ...]) -> tuple[int, ...]:
    for v in vec:
        if v != 0:
            return vec if v > 0 else tuple(-x for x in vec)
    return vec


def check_genericity(ifs: AffineIFS) -> GenericityVerdict:
    """Decide the standard-interval rigidity condition for the IFS.

    Either all ratios and all initial gaps are equal, or the ratios and gaps
    must be multiplicatively incommensurable: no scale element carries one
    gap onto another (condition a), and no non-identity permutation of the
    gaps is realized by a common multiplier whose arity-th power lies in the
    scale group (condition b).  Positivity of the exponents in (b) is not
    restrictive: differences of nonnegative vectors reach every integer
    vector, so the test runs over all of Z^(n+1).
    """
    ratios = list(ifs.ratios)
    gaps = list(ifs.initial_gaps)
    if all(r == ratios[0] for r in ratios) and all(g == gaps[0] for g in gaps):
        return GenericityVerdict(GenericityKind.EQUAL_BRANCH)

    basis = relation_lattice(ratios)
    if basis:
        witness = _normalize_sign(basis[0])
        return GenericityVerdict(
            GenericityKind.FAILS,
            witness,
            "multiplicative relation among the ratios",
        )
    for alpha in range(len(gaps)):
        for beta in range(alpha + 1, len(gaps)):
            k = solve_exponent_product(ratios, gaps[beta] / gaps[alpha])
            if k is not None:
                return GenericityVerdict(
                    GenericityKind.FAILS,
                    tuple(k),
                    f"scale element carries gap {alpha + 1} onto gap {beta + 1}",
                )
    n = len(gaps)
    for sigma in itertools.permutations(range(n)):
        if sigma == tuple(range(n)):
            continue
        mults = {gaps[sigma[alpha]] / gaps[alpha] for alpha in range(n)}
        if len(mults) != 1:
            continue
        mu = mults.pop()
        k = solve_exponent_product(ratios, mu**n)
        if k is not None:
            return GenericityVerdict(
                GenericityKind.FAILS,
                tuple(k),
                f"gap permutation {tuple(s + 1 for s in sigma)} realized by "
                f"common multiplier {mu}",
            )
    return GenericityVerdict(GenericityKind.INCOMMENSURABLE_BRANCH)


def hausdorff_dimension_central(lam: Rational) -> float:
    """log 2 / log lam for the central Cantor set, exact for powers of two."""
    lam = Fraction(lam)
    if lam <= 2:
        raise IFSError(f"central parameter must exceed 2, got {lam}")
    if lam.denominator == 1:
        m, e = int(lam), 0
        while m % 2 == 0:
            m //= 2
            e += 1
        if m == 1:
            return 1.0 / e
    return math.log(2) / (math.log(lam.numerator) - math.log(lam.denominator))


def box_count_estimate(ifs: AffineIFS, depth: int) -> float:
    """log(covering count) / -log(mesh) at the given subdivision depth."""
    if depth < 2:
        raise IFSError("depth must be at least 2")
    count = ifs.arity**depth
    mesh = max(ifs.ratios) ** depth
    log_mesh = math.log(mesh.numerator) - math.log(mesh.denominator)
    return math.log(count) / -log_mesh
