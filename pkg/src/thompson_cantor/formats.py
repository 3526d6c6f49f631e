"""JSON-able wire formats for every object the CLI reads and writes.

Rationals travel as "p/q" strings, words as digit strings, permutations as
1-based lists; structured output carries a top-level schema version.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Union

from .cantor import (
    Address,
    AffineIFS,
    AperiodicWitness,
    IFSError,
    Word,
    parse_word,
    word_str,
)
from .exact import format_rational, parse_rational
from .patterns import (
    CELL,
    CubeSymmetry,
    DustAddress,
    NVElement,
    PatternError,
    PatternTree,
)
from .plmaps import MultiGerm, PLError, PLMap, PLModel, PLPiece, StandardGerm
from .trees import (
    GroupElement,
    Symbol,
    SymbolError,
    Variant,
    classify_symbol,
    parse_tree,
    tree_str,
)

SCHEMA_VERSION = 1


class FormatError(ValueError):
    """Malformed serialized object."""


def _require(data: Any, key: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise FormatError(f"missing field {key!r}")
    return data[key]


# -- IFS --------------------------------------------------------------------


def ifs_to_data(ifs: AffineIFS) -> dict:
    return {
        "pieces": [
            {"ratio": format_rational(r), "offset": format_rational(a)}
            for r, a in ifs.pieces
        ]
    }


def ifs_from_data(data: Any) -> AffineIFS:
    pieces = _require(data, "pieces")
    if not isinstance(pieces, list):
        raise FormatError("pieces must be a list")
    parsed = []
    for piece in pieces:
        parsed.append(
            (parse_rational(_require(piece, "ratio")), parse_rational(_require(piece, "offset")))
        )
    return AffineIFS(tuple(parsed))


# -- Addresses and points ----------------------------------------------------


def point_to_data(point: Union[Address, AperiodicWitness]) -> dict:
    if isinstance(point, AperiodicWitness):
        return {"aperiodic": word_str(point.sample)}
    return {"pre": word_str(point.pre), "per": word_str(point.per)}


def point_from_data(data: Any) -> Union[Address, AperiodicWitness]:
    if isinstance(data, dict) and "aperiodic" in data:
        return AperiodicWitness(parse_word(data["aperiodic"]))
    return Address(parse_word(_require(data, "pre")), parse_word(_require(data, "per")))


def dust_to_data(point: DustAddress) -> dict:
    return {"coords": [point_to_data(c) for c in point]}


def dust_from_data(data: Any) -> DustAddress:
    coords = _require(data, "coords")
    return tuple(point_from_data(c) for c in coords)


# -- Tree-pair elements -------------------------------------------------------


def element_to_data(elem: GroupElement) -> dict:
    sym = elem.symbol
    return {
        "target": tree_str(sym.target),
        "source": tree_str(sym.source),
        "perm": [p + 1 for p in sym.perm],
        "flips": "".join("1" if f else "0" for f in sym.flips),
        "variant": elem.variant.value,
        "arity": elem.arity,
    }


def element_from_data(data: Any) -> GroupElement:
    target = parse_tree(_require(data, "target"))
    source = parse_tree(_require(data, "source"))
    perm = tuple(int(p) - 1 for p in _require(data, "perm"))
    flips_text = data.get("flips", "")
    flips = tuple(ch == "1" for ch in flips_text) if flips_text else ()
    symbol = Symbol(target, source, perm, flips)
    arity = int(data.get("arity", 0))
    if arity == 0:
        arity = _infer_arity(source) or _infer_arity(target) or 2
    variant_name = data.get("variant")
    variant = Variant(variant_name) if variant_name else classify_symbol(symbol)
    return GroupElement(symbol, arity, variant)


def _infer_arity(tree) -> int:
    if tree.is_leaf:
        return 0
    return len(tree.children)


# -- Piecewise-affine maps ----------------------------------------------------


def plmap_to_data(plmap: PLMap) -> dict:
    pieces = []
    for piece in plmap.pieces:
        target_left = Address(piece.target, (0,))
        pieces.append(
            {
                "source": word_str(piece.source),
                "target_left": point_to_data(target_left),
                "scale": list(plmap.piece_scale(piece).exponents),
                "rev": piece.rev,
            }
        )
    return {"model": plmap.model.value, "pieces": pieces}


def _target_word_from(source: Word, left: Address, scale: list[int], arity: int) -> Word:
    if left.per != (0,):
        raise FormatError("target_left must be a left point (period '0')")
    counts_source = [0] * arity
    for letter in source:
        counts_source[letter] += 1
    counts_pre = [0] * arity
    for letter in left.pre:
        counts_pre[letter] += 1
    for letter in range(1, arity):
        if counts_pre[letter] != counts_source[letter] + scale[letter]:
            raise FormatError(
                "scale vector inconsistent with source and target_left words"
            )
    zeros = counts_source[0] + scale[0] - counts_pre[0]
    if zeros < 0:
        raise FormatError("scale vector inconsistent with target_left depth")
    return left.pre + (0,) * zeros


def plmap_from_data(data: Any, ifs: AffineIFS) -> PLMap:
    model = PLModel(_require(data, "model"))
    pieces = []
    for piece in _require(data, "pieces"):
        source = parse_word(_require(piece, "source"), ifs.arity)
        left = point_from_data(_require(piece, "target_left"))
        if not isinstance(left, Address):
            raise FormatError("target_left must be an exact address")
        scale = [int(v) for v in _require(piece, "scale")]
        if len(scale) != ifs.arity:
            raise FormatError("scale vector has wrong length")
        rev = bool(piece.get("rev", False))
        target = _target_word_from(source, left, scale, ifs.arity)
        pieces.append(PLPiece(source, target, rev))
    return PLMap(ifs, tuple(pieces), model)


# -- Germs ---------------------------------------------------------------------


def germ_to_data(germ: StandardGerm) -> dict:
    return {"source": word_str(germ.source), "target": word_str(germ.target)}


def germ_from_data(data: Any) -> StandardGerm:
    return StandardGerm(parse_word(_require(data, "source")), parse_word(_require(data, "target")))


def multigerm_to_data(mg: MultiGerm) -> dict:
    return {
        "germs": [germ_to_data(g) for g in mg.germs],
        "top": mg.top_letter,
    }


def multigerm_from_data(data: Any) -> MultiGerm:
    germs = tuple(germ_from_data(g) for g in _require(data, "germs"))
    return MultiGerm(germs, int(data.get("top", 1)))


# -- Patterns and nV elements ---------------------------------------------------


def pattern_to_data(pattern: PatternTree) -> Any:
    if pattern.is_cell:
        return "cell"
    return {
        "cut": pattern.axis + 1,
        "low": pattern_to_data(pattern.low),
        "high": pattern_to_data(pattern.high),
    }


def pattern_from_data(data: Any) -> PatternTree:
    if data == "cell":
        return CELL
    axis = int(_require(data, "cut")) - 1
    return PatternTree(
        axis, pattern_from_data(_require(data, "low")), pattern_from_data(_require(data, "high"))
    )


def symmetry_to_data(sym: CubeSymmetry) -> dict:
    return {"perm": [p + 1 for p in sym.axis_perm], "signs": list(sym.signs)}


def symmetry_from_data(data: Any) -> CubeSymmetry:
    perm = tuple(int(p) - 1 for p in _require(data, "perm"))
    signs = tuple(int(s) for s in _require(data, "signs"))
    return CubeSymmetry(perm, signs)


def nv_to_data(elem: NVElement) -> dict:
    return {
        "dim": elem.dim,
        "source": pattern_to_data(elem.source),
        "target": pattern_to_data(elem.target),
        "perm": [p + 1 for p in elem.perm],
        "syms": [symmetry_to_data(s) for s in elem.syms],
    }


def nv_from_data(data: Any) -> NVElement:
    dim = int(_require(data, "dim"))
    source = pattern_from_data(_require(data, "source"))
    target = pattern_from_data(_require(data, "target"))
    perm = tuple(int(p) - 1 for p in _require(data, "perm"))
    syms_data = data.get("syms")
    if syms_data is None:
        syms = (CubeSymmetry.identity(dim),) * len(perm)
    else:
        syms = tuple(symmetry_from_data(s) for s in syms_data)
    return NVElement(dim, source, target, perm, syms)


DOMAIN_ERRORS = (FormatError, IFSError, PLError, PatternError, SymbolError)
