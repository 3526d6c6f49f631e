"""Deterministic SVG renderings: interval generations, tree pairs, patterns."""

from __future__ import annotations

from .cantor import AffineIFS, standard_interval, words_of_length
from .patterns import NVElement, PatternTree, leaf_boxes
from .trees import GroupElement, Tree

_HEADER = '<?xml version="1.0" encoding="UTF-8"?>\n'


def _fmt(x) -> str:
    return f"{float(x):.4f}"


def _document(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    return _HEADER + "\n".join([head, *body, "</svg>"]) + "\n"


def render_ifs(ifs: AffineIFS, generations: int = 5) -> str:
    """Horizontal bar diagram: one row of standard intervals per generation."""
    width, row_height, margin = 600.0, 22.0, 10.0
    body = []
    for gen in range(generations + 1):
        y = margin + gen * row_height
        for word in words_of_length(ifs, gen):
            si = standard_interval(ifs, word)
            x = margin + float(si.lo) * (width - 2 * margin)
            w = float(si.length) * (width - 2 * margin)
            body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" '
                f'height="{_fmt(row_height - 6)}" fill="#3a6ea5"/>'
            )
    height = margin * 2 + (generations + 1) * row_height
    return _document(width, height, body)


def _tree_layout(tree: Tree, width: float, top: float, depth_step: float, upward: bool):
    """Leaf x-positions evenly spaced; internal nodes centered over children."""
    positions = {}
    leaves = tree.leaf_paths()
    m = len(leaves)
    for i, path in enumerate(leaves):
        x = width * (i + 1) / (m + 1)
        positions[path] = (x, top + (len(path)) * depth_step * (1 if upward else -1))

    def place(node: Tree, path):
        if node.is_leaf:
            return positions[path]
        xs = []
        for k, child in enumerate(node.children):
            xs.append(place(child, path + (k,))[0])
        pos = (sum(xs) / len(xs), top + len(path) * depth_step * (1 if upward else -1))
        positions[path] = pos
        return pos

    place(tree, ())
    return positions


def _render_tree(tree: Tree, width: float, top: float, depth_step: float, upward: bool):
    positions = _tree_layout(tree, width, top, depth_step, upward)
    lines = []

    def walk(node: Tree, path):
        if node.is_leaf:
            return
        x0, y0 = positions[path]
        for k, child in enumerate(node.children):
            x1, y1 = positions[path + (k,)]
            lines.append(
                f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" '
                f'y2="{_fmt(y1)}" stroke="#222222" stroke-width="1.5"/>'
            )
            walk(child, path + (k,))

    walk(tree, ())
    return lines


def render_element(elem: GroupElement) -> str:
    """Tree-pair diagram: target tree above, source tree below, leaf labels."""
    sym = elem.symbol
    width, depth_step = 400.0, 35.0
    max_depth = max(
        (len(p) for p in sym.target.leaf_paths() + sym.source.leaf_paths()), default=0
    )
    band = depth_step * max(max_depth, 1)
    mid = 30.0 + band
    body = _render_tree(sym.target, width, 30.0, depth_step, True)
    body += _render_tree(sym.source, width, mid + band + 60.0, depth_step, False)
    m = sym.leaf_count
    for i in range(m):
        x = width * (i + 1) / (m + 1)
        body.append(
            f'<text x="{_fmt(x)}" y="{_fmt(mid + band + 75.0)}" font-size="12" '
            f'text-anchor="middle">{i + 1}</text>'
        )
        tx = width * (sym.perm[i] + 1) / (m + 1)
        mark = "*" if sym.flips[i] else ""
        body.append(
            f'<text x="{_fmt(tx)}" y="{_fmt(mid - band + 15.0)}" font-size="12" '
            f'text-anchor="middle">{i + 1}{mark}</text>'
        )
    height = mid + band + 95.0
    return _document(width, height, body)


def _pattern_cells(
    pattern: PatternTree, labels: list[int], offset: float, size: float, margin: float
) -> list[str]:
    body = []
    for index, box in enumerate(leaf_boxes(pattern, 2)):
        (x0, x1), (y0, y1) = box
        x = offset + margin + float(x0) * size
        w = float(x1 - x0) * size
        # The vertical axis points up in the cube, down in SVG.
        y = margin + (1.0 - float(y1)) * size
        h = float(y1 - y0) * size
        body.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="none" stroke="#222222" stroke-width="1.5"/>'
        )
        body.append(
            f'<text x="{_fmt(x + w / 2)}" y="{_fmt(y + h / 2 + 4)}" font-size="14" '
            f'text-anchor="middle">{labels[index]}</text>'
        )
    return body


def render_pattern(pattern: PatternTree, dim: int = 2) -> str:
    """Rectangle diagram of a 2-dimensional pattern with leaf numbering."""
    if dim != 2:
        raise ValueError("pattern rendering is 2-dimensional only")
    size, margin = 400.0, 10.0
    labels = list(range(1, pattern.leaf_count() + 1))
    body = _pattern_cells(pattern, labels, 0.0, size, margin)
    return _document(size + 2 * margin, size + 2 * margin, body)


def render_nv(elem: NVElement) -> str:
    """Side-by-side source and target pattern diagrams, pieces numbered alike."""
    if elem.dim != 2:
        raise ValueError("pattern rendering is 2-dimensional only")
    size, margin, gap = 400.0, 10.0, 40.0
    source_labels = list(range(1, elem.leaf_count + 1))
    target_labels = [elem.perm.index(j) + 1 for j in range(elem.leaf_count)]
    body = _pattern_cells(elem.source, source_labels, 0.0, size, margin)
    body += _pattern_cells(
        elem.target, target_labels, size + 2 * margin + gap, size, margin
    )
    width = 2 * (size + 2 * margin) + gap
    return _document(width, size + 2 * margin, body)
