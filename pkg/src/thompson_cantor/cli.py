"""Command-line front end.

One verb per library operation; structured output is versioned JSON, text
output prints exact "p/q" rationals, SVG goes to --out.  Exit codes: 0 on
success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import cantor, formats, patterns, plmaps, svg, trees
from .exact import ExactError, format_rational

DOMAIN_ERRORS = formats.DOMAIN_ERRORS + (ExactError, ValueError, OSError)


def _load(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _emit(args, payload: dict, text_lines: list[str], svg_text: str | None = None) -> None:
    fmt = getattr(args, "format", "text")
    if fmt == "svg":
        if svg_text is None:
            raise formats.FormatError("no SVG rendering for this command")
        _write_out(args, svg_text)
        return
    if fmt == "json":
        payload = {"schema": formats.SCHEMA_VERSION, **payload}
        _write_out(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return
    _write_out(args, "\n".join(text_lines) + "\n")


def _write_out(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# -- ifs ----------------------------------------------------------------------


def cmd_ifs_check(args) -> None:
    ifs = formats.ifs_from_data(_load(args.file))
    sigma = cantor.sparseness_bound(ifs, args.gen)
    verdict = cantor.check_genericity(ifs)
    payload = {
        "valid": True,
        "arity": ifs.arity,
        "sparseness": {"generation": args.gen, "sigma": format_rational(sigma)},
        "genericity": verdict.kind.value,
    }
    if verdict.witness is not None:
        payload["witness"] = list(verdict.witness)
    lines = [
        f"valid; {ifs.arity} pieces",
        f"sparse sigma_{args.gen} = {format_rational(sigma)}",
        f"genericity: {verdict.kind.value}"
        + (f" witness {list(verdict.witness)}" if verdict.witness else ""),
    ]
    _emit(args, payload, lines)


def cmd_ifs_gaps(args) -> None:
    ifs = formats.ifs_from_data(_load(args.file))
    gaps = cantor.gaps_up_to(ifs, args.gen)
    payload = {
        "gaps": [
            {
                "generation": g.generation,
                "parent": cantor.word_str(g.parent),
                "slot": g.slot,
                "lo": format_rational(g.lo),
                "hi": format_rational(g.hi),
            }
            for g in gaps
        ]
    }
    lines = [
        f"gen {g.generation} parent '{cantor.word_str(g.parent)}' slot {g.slot}: "
        f"({format_rational(g.lo)}, {format_rational(g.hi)})"
        for g in gaps
    ]
    _emit(args, payload, lines, svg.render_ifs(ifs, args.gen))


def cmd_ifs_sparse(args) -> None:
    ifs = formats.ifs_from_data(_load(args.file))
    sigma = cantor.sparseness_bound(ifs, args.gen)
    _emit(
        args,
        {"generation": args.gen, "sigma": format_rational(sigma)},
        [f"sigma_{args.gen} = {format_rational(sigma)}"],
    )


def cmd_ifs_genericity(args) -> None:
    ifs = formats.ifs_from_data(_load(args.file))
    verdict = cantor.check_genericity(ifs)
    payload = {"genericity": verdict.kind.value, "detail": verdict.detail}
    if verdict.witness is not None:
        payload["witness"] = list(verdict.witness)
    lines = [f"genericity: {verdict.kind.value}"]
    if verdict.witness is not None:
        lines.append(f"witness: {list(verdict.witness)}")
    if verdict.detail:
        lines.append(verdict.detail)
    _emit(args, payload, lines)


def cmd_ifs_dimension(args) -> None:
    ifs = formats.ifs_from_data(_load(args.file))
    estimate = cantor.box_count_estimate(ifs, args.depth)
    payload = {"box_count_estimate": estimate, "depth": args.depth}
    lines = [f"box-count estimate (approximate): {estimate:.6f}"]
    ratios = ifs.ratios
    if ifs.arity == 2 and ratios[0] == ratios[1]:
        lam = 1 / ratios[0]
        closed = cantor.hausdorff_dimension_central(lam)
        payload["central_closed_form"] = closed
        lines.append(f"central closed form log2/log({format_rational(lam)}) "
                     f"(approximate): {closed:.6f}")
    _emit(args, payload, lines)


# -- elem ---------------------------------------------------------------------


def _element_payload(elem) -> dict:
    return formats.element_to_data(elem)


def cmd_elem_parse(args) -> None:
    elem = formats.element_from_data(_load(args.elem))
    _emit(args, _element_payload(elem), [json.dumps(_element_payload(elem))],
          svg.render_element(elem))


def cmd_elem_compose(args) -> None:
    a = formats.element_from_data(_load(args.a))
    b = formats.element_from_data(_load(args.b))
    if a.variant is not b.variant:
        variant = trees.variant_join(a.variant, b.variant)
        a = trees.GroupElement(a.symbol, a.arity, variant)
        b = trees.GroupElement(b.symbol, b.arity, variant)
    c = trees.compose(a, b)
    _emit(args, _element_payload(c), [json.dumps(_element_payload(c))],
          svg.render_element(c))


def cmd_elem_inverse(args) -> None:
    elem = formats.element_from_data(_load(args.elem)).inverse()
    _emit(args, _element_payload(elem), [json.dumps(_element_payload(elem))],
          svg.render_element(elem))


def cmd_elem_reduce(args) -> None:
    # Elements are stored reduced; parsing is reduction.
    cmd_elem_parse(args)


def cmd_elem_classify(args) -> None:
    elem = formats.element_from_data(_load(args.elem))
    smallest = trees.classify(elem).value
    _emit(args, {"class": smallest}, [smallest])


def cmd_elem_abelianize(args) -> None:
    elem = formats.element_from_data(_load(args.elem))
    pair = trees.abelianization_F(elem)
    _emit(args, {"abelianization": list(pair)}, [f"({pair[0]}, {pair[1]})"])


def cmd_elem_eval(args) -> None:
    elem = formats.element_from_data(_load(args.elem))
    ifs = formats.ifs_from_data(_load(args.file))
    point = formats.point_from_data(_load(args.point))
    if not isinstance(point, cantor.Address):
        raise formats.FormatError("evaluation needs an exact address")
    plmap = plmaps.from_symbol(elem, ifs)
    image = plmaps.apply_address(plmap, point)
    value = cantor.evaluate_address(ifs, image)
    payload = {"image": formats.point_to_data(image), "value": format_rational(value)}
    _emit(args, payload, [f"{image} = {format_rational(value)}"])


def cmd_elem_render(args) -> None:
    elem = formats.element_from_data(_load(args.elem))
    _write_out(args, svg.render_element(elem))


# -- germ ---------------------------------------------------------------------


def cmd_germ_compose(args) -> None:
    a = formats.germ_from_data(_load(args.a))
    b = formats.germ_from_data(_load(args.b))
    c = plmaps.germ_compose(a, b)
    _emit(args, formats.germ_to_data(c), [str(c)])


def cmd_germ_extend(args) -> None:
    germ = formats.germ_from_data(_load(args.germ))
    ext = plmaps.germ_extend(germ)
    if ext is None:
        _emit(args, {"extends": False}, ["no extension: last letters differ"])
    else:
        _emit(args, {"extends": True, **formats.germ_to_data(ext)}, [str(ext)])


def cmd_germ_extend_multi(args) -> None:
    mg = formats.multigerm_from_data(_load(args.file))
    out = plmaps.extend_multigerm(mg)
    _emit(
        args,
        formats.multigerm_to_data(out),
        [", ".join(str(g) for g in out.germs)],
    )


# -- stab ---------------------------------------------------------------------


def cmd_stab_point(args) -> None:
    ifs = formats.ifs_from_data(_load(args.file))
    point = formats.point_from_data(_load(args.point))
    desc = plmaps.stabilizer(ifs, point)
    payload: dict = {"kind": desc.kind.value}
    lines = [f"stabilizer: {desc.kind.value}"]
    if desc.generator is not None:
        payload["generator"] = formats.germ_to_data(desc.generator)
        payload["scale"] = list(desc.scale.exponents)
        slope = plmaps.germ_slope(ifs, desc.generator)
        payload["slope"] = format_rational(slope)
        lines.append(f"generator {desc.generator} with slope {format_rational(slope)}")
    _emit(args, payload, lines)


# -- nv -----------------------------------------------------------------------


def cmd_nv_compose(args) -> None:
    a = formats.nv_from_data(_load(args.a))
    b = formats.nv_from_data(_load(args.b))
    c = patterns.compose_nv(a, b)
    _emit(args, formats.nv_to_data(c), [json.dumps(formats.nv_to_data(c))],
          svg.render_nv(c) if c.dim == 2 else None)


def cmd_nv_inverse(args) -> None:
    elem = patterns.inverse_nv(formats.nv_from_data(_load(args.elem)))
    _emit(args, formats.nv_to_data(elem), [json.dumps(formats.nv_to_data(elem))],
          svg.render_nv(elem) if elem.dim == 2 else None)


def cmd_nv_apply(args) -> None:
    elem = formats.nv_from_data(_load(args.elem))
    point = formats.dust_from_data(_load(args.point))
    image = patterns.apply_nv(elem, point)
    _emit(
        args,
        formats.dust_to_data(image),
        [", ".join(str(c) for c in image)],
    )


def cmd_nv_rank(args) -> None:
    point = formats.dust_from_data(_load(args.point))
    rank = patterns.stabilizer_rank(point)
    _emit(args, {"rank": rank}, [f"stabilizer rank {rank}"])


def cmd_nv_render(args) -> None:
    elem = formats.nv_from_data(_load(args.elem))
    _write_out(args, svg.render_nv(elem))


# -- parser -------------------------------------------------------------------


def _add_common(parser) -> None:
    parser.add_argument("--format", choices=("text", "json", "svg"), default="text")
    parser.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thompson-cantor",
        description="Exact computations in Thompson-like groups on Cantor sets",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    ifs = groups.add_parser("ifs").add_subparsers(dest="verb", required=True)
    p = ifs.add_parser("check")
    p.add_argument("--file", required=True)
    p.add_argument("--gen", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_ifs_check)
    p = ifs.add_parser("gaps")
    p.add_argument("--file", required=True)
    p.add_argument("--gen", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_ifs_gaps)
    p = ifs.add_parser("sparse")
    p.add_argument("--file", required=True)
    p.add_argument("--gen", type=int, default=3)
    _add_common(p)
    p.set_defaults(func=cmd_ifs_sparse)
    p = ifs.add_parser("genericity")
    p.add_argument("--file", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_ifs_genericity)
    p = ifs.add_parser("dimension")
    p.add_argument("--file", required=True)
    p.add_argument("--depth", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_ifs_dimension)

    elem = groups.add_parser("elem").add_subparsers(dest="verb", required=True)
    p = elem.add_parser("parse")
    p.add_argument("--elem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_parse)
    p = elem.add_parser("compose")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_compose)
    p = elem.add_parser("inverse")
    p.add_argument("--elem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_inverse)
    p = elem.add_parser("reduce")
    p.add_argument("--elem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_reduce)
    p = elem.add_parser("classify")
    p.add_argument("--elem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_classify)
    p = elem.add_parser("abelianize")
    p.add_argument("--elem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_abelianize)
    p = elem.add_parser("eval")
    p.add_argument("--elem", required=True)
    p.add_argument("--file", required=True, help="IFS file")
    p.add_argument("--point", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_elem_eval)
    p = elem.add_parser("render")
    p.add_argument("--elem", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_elem_render)

    germ = groups.add_parser("germ").add_subparsers(dest="verb", required=True)
    p = germ.add_parser("compose")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_germ_compose)
    p = germ.add_parser("extend")
    p.add_argument("--germ", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_germ_extend)
    p = germ.add_parser("extend-multi")
    p.add_argument("--file", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_germ_extend_multi)

    stab = groups.add_parser("stab").add_subparsers(dest="verb", required=True)
    p = stab.add_parser("point")
    p.add_argument("--file", required=True, help="IFS file")
    p.add_argument("--point", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_stab_point)

    nv = groups.add_parser("nv").add_subparsers(dest="verb", required=True)
    p = nv.add_parser("compose")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_nv_compose)
    p = nv.add_parser("inverse")
    p.add_argument("--elem", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_nv_inverse)
    p = nv.add_parser("apply")
    p.add_argument("--elem", required=True)
    p.add_argument("--point", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_nv_apply)
    p = nv.add_parser("rank")
    p.add_argument("--point", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_nv_rank)
    p = nv.add_parser("render")
    p.add_argument("--elem", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_nv_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
