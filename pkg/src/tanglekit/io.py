"""Text formats and SVG rendering.

TGL format, one item per non-comment line::

    ((l1,l2),(l3,l4));      # left tree, Newick-style nesting
    ((r1,r2),(r3,r4));      # right tree
    l1-r1,l2-r3,l3-r2,l4-r4 # matching, leftLabel-rightLabel

``#`` starts a comment, blank lines are skipped, LF and CRLF are both
accepted.  A one-leaf tree is written ``a;``.  The degree-1 root stub is not
written; it is added on parse.

Layout files hold two lines of comma-separated labels: the left order, then
the right order, each top to bottom.
"""

from __future__ import annotations

from typing import Iterator

from .errors import ConsistencyError, ParseError, TanglegramError
from .layout import LayoutRep, crossing_count, is_consistent
from .model import LABEL_RE, Nested, RootedBinaryTree, Tanglegram


def _content_lines(text: str) -> Iterator[tuple[int, int, str]]:
    """Yield ``(line number, column offset, stripped content)`` for non-blank lines."""
    if text.startswith("﻿"):
        text = text[1:]
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if stripped:
            yield no, len(body) - len(body.lstrip()), stripped


class _NewickReader:
    def __init__(self, s: str, line: int, offset: int):
        self.s, self.i, self.line, self.offset = s, 0, line, offset

    def error(self, code: str, msg: str, at: int | None = None) -> ParseError:
        col = (self.i if at is None else at) + self.offset + 1
        return ParseError(code, msg, self.line, col)

    def skip(self) -> None:
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of line"
            raise self.error("syntax", f"expected {ch!r}, found {found!r}")
        self.i += 1

    def label(self) -> str:
        self.skip()
        start = self.i
        while self.i < len(self.s) and self.s[self.i] not in "(),;" and not self.s[self.i].isspace():
            self.i += 1
        lab = self.s[start : self.i]
        if not lab:
            found = self.peek() or "end of line"
            raise self.error("syntax", f"expected a leaf label, found {found!r}")
        if not LABEL_RE.fullmatch(lab):
            raise self.error("label", f"label {lab!r} may only use letters, digits and '_'", start)
        return lab

    def node(self) -> Nested:
        if self.peek() != "(":
            return self.label()
        start = self.i
        self.i += 1
        kids = [self.node()]
        while self.peek() == ",":
            self.i += 1
            kids.append(self.node())
        self.expect(")")
        if len(kids) != 2:
            raise self.error("non_binary", f"a branching node has {len(kids)} children, expected 2", start)
        return (kids[0], kids[1])

    def tree(self) -> Nested:
        nested = self.node()
        self.expect(";")
        if self.peek():
            raise self.error("syntax", f"unexpected text after ';': {self.peek()!r}")
        return nested


def _leaves(nested: Nested) -> list[str]:
    if isinstance(nested, str):
        return [nested]
    return _leaves(nested[0]) + _leaves(nested[1])


def parse_tree(text: str, line: int = 1, offset: int = 0) -> RootedBinaryTree:
    nested = _NewickReader(text, line, offset).tree()
    seen: set[str] = set()
    for lab in _leaves(nested):
        if lab in seen:
            raise ParseError("duplicate_label", f"leaf label {lab!r} occurs twice", line)
        seen.add(lab)
    return RootedBinaryTree.from_nested(nested)


def parse_tanglegram(text: str) -> Tanglegram:
    """Parse TGL text into a validated tanglegram."""
    lines = list(_content_lines(text))
    if len(lines) != 3:
        raise ParseError("syntax", f"expected 3 non-comment lines (two trees and a matching), found {len(lines)}")
    (ln1, off1, s1), (ln2, off2, s2), (ln3, off3, s3) = lines
    left = parse_tree(s1, ln1, off1)
    right = parse_tree(s2, ln2, off2)

    pairs: list[tuple[str, str]] = []
    used_l: set[str] = set()
    used_r: set[str] = set()
    col = off3
    for item in s3.split(","):
        token = item.strip()
        where = col + len(item) - len(item.lstrip()) + 1
        col += len(item) + 1
        parts = token.split("-")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ParseError("syntax", f"matching entry {token!r} is not of the form left-right", ln3, where)
        a, b = parts[0].strip(), parts[1].strip()
        for lab in (a, b):
            if not LABEL_RE.fullmatch(lab):
                raise ParseError("label", f"label {lab!r} may only use letters, digits and '_'", ln3, where)
        if a not in left.leaf_labels:
            raise ParseError("matching", f"{a!r} is not a leaf of the left tree", ln3, where)
        if b not in right.leaf_labels:
            raise ParseError("matching", f"{b!r} is not a leaf of the right tree", ln3, where)
        if a in used_l or b in used_r:
            raise ParseError("matching", f"entry {token!r} reuses a matched leaf", ln3, where)
        used_l.add(a)
        used_r.add(b)
        pairs.append((a, b))
    missing = sorted(left.leaf_labels - used_l) + sorted(right.leaf_labels - used_r)
    if missing:
        raise ParseError("matching", f"unmatched leaves: {', '.join(missing)}", ln3)
    return Tanglegram(left, right, pairs)


def format_nested(nested: Nested) -> str:
    if isinstance(nested, str):
        return nested
    return f"({format_nested(nested[0])},{format_nested(nested[1])})"


def serialize_tanglegram(tg: Tanglegram) -> str:
    return (
        f"{format_nested(tg.left.to_nested())};\n"
        f"{format_nested(tg.right.to_nested())};\n"
        + ",".join(f"{a}-{b}" for a, b in tg.edges)
        + "\n"
    )


def read_tanglegram(path) -> Tanglegram:
    with open(path, encoding="utf-8") as fh:
        return parse_tanglegram(fh.read())


def write_tanglegram(tg: Tanglegram, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_tanglegram(tg))


# -- layout files ------------------------------------------------------------------------


def parse_layout(text: str, tg: Tanglegram | None = None) -> LayoutRep:
    lines = list(_content_lines(text))
    if len(lines) != 2:
        raise ParseError("syntax", f"a layout has 2 non-comment lines, found {len(lines)}")
    orders = []
    for ln, _, s in lines:
        labels = [x.strip() for x in s.split(",")]
        for lab in labels:
            if not LABEL_RE.fullmatch(lab):
                raise ParseError("label", f"bad label {lab!r} in layout", ln)
        if len(set(labels)) != len(labels):
            raise ParseError("duplicate_label", "a label repeats in the layout", ln)
        orders.append(tuple(labels))
    rep = LayoutRep(orders[0], orders[1])
    if tg is not None:
        if set(rep.left_order) != tg.left.leaf_labels or set(rep.right_order) != tg.right.leaf_labels:
            raise ParseError("matching", "layout orders are not permutations of the tanglegram's leaves")
    return rep


def serialize_layout(rep: LayoutRep) -> str:
    return ",".join(rep.left_order) + "\n" + ",".join(rep.right_order) + "\n"


def read_layout(path, tg: Tanglegram | None = None) -> LayoutRep:
    with open(path, encoding="utf-8") as fh:
        return parse_layout(fh.read(), tg)


def write_layout(rep: LayoutRep, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_layout(rep))


# -- SVG ---------------------------------------------------------------------------------

_ROW = 30
_STEP = 24
_TOP = 30
_GAP = 160
_LABEL_W = 60


def _orient(p, q, r) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def segments_cross(s, t) -> bool:
    """Proper intersection of two segments with integer endpoints."""
    (p1, p2), (q1, q2) = s, t
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def _intersection(s, t) -> tuple[float, float]:
    (x1, y1), (x2, y2) = s
    (x3, y3), (x4, y4) = t
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    a = x1 * y2 - y1 * x2
    b = x3 * y4 - y3 * x4
    return ((a * (x3 - x4) - (x1 - x2) * b) / den, (a * (y3 - y4) - (y1 - y2) * b) / den)


def _tree_coords(tree: RootedBinaryTree, order, x_leaf: int, step: int) -> dict[int, tuple[int, int]]:
    """Leaf at ``x_leaf``; each level towards the root moves ``step`` outward.

    Coordinates are doubled to keep midpoints integral.
    """
    ypos = {lab: 2 * (_TOP + _ROW * i) for i, lab in enumerate(order)}
    height: dict[int, int] = {}
    coords: dict[int, tuple[int, int]] = {}
    for v in sorted(range(tree.n_nodes), key=tree.depth.__getitem__, reverse=True):
        kids = tree.children[v]
        if not kids:
            height[v] = 0
            coords[v] = (2 * x_leaf, ypos[tree.labels[v]])
            continue
        height[v] = 1 + max(height[c] for c in kids)
        ys = [coords[c][1] for c in kids]
        coords[v] = (2 * (x_leaf + step * height[v]), (min(ys) + max(ys)) // 2)
    return coords


def _fmt(v: float) -> str:
    s = f"{v / 2:.2f}".rstrip("0").rstrip(".")
    return s if s != "-0" else "0"


def render_svg(tg: Tanglegram, rep: LayoutRep, title: str | None = None) -> str:
    """Deterministic SVG drawing of a layout with crossings highlighted."""
    if not is_consistent(tg.left, rep.left_order):
        raise TanglegramError("left order is not consistent with the left tree")
    if not is_consistent(tg.right, rep.right_order):
        raise TanglegramError("right order is not consistent with the right tree")
    n = tg.size
    hl = max(tg.left.depth) + 1
    hr = max(tg.right.depth) + 1
    xl = _LABEL_W + _STEP * hl
    xr = xl + _GAP
    lc = _tree_coords(tg.left, rep.left_order, xl, -_STEP)
    rc = _tree_coords(tg.right, rep.right_order, xr, _STEP)
    width = xr + _STEP * hr + _LABEL_W
    height = 2 * _TOP + _ROW * max(n - 1, 0) + 30

    segs = []
    for a in rep.left_order:
        b = tg.right_of[a]
        segs.append(((a, b), lc[tg.left.node_of(a)], rc[tg.right.node_of(b)]))
    hits = []
    crossing_edges = set()
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            s, t = segs[i][1:], segs[j][1:]
            if segments_cross(s, t):
                hits.append(_intersection(s, t))
                crossing_edges.update((segs[i][0], segs[j][0]))
    expected = crossing_count(tg, rep)
    if len(hits) != expected:
        raise ConsistencyError("SVG_CROSSINGS", f"drawing shows {len(hits)} crossings, order count is {expected}")

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out.append('<g id="trees" stroke="black" stroke-width="1.5" fill="none">')
    for tree, coords, stub in ((tg.left, lc, -_STEP), (tg.right, rc, _STEP)):
        for v in tree.edges():
            if tree.parent[v] == tree.root:
                continue
            (x1, y1), (x2, y2) = coords[tree.parent[v]], coords[v]
            out.append(
                f'<polyline points="{_fmt(x1)},{_fmt(y1)} {_fmt(x1)},{_fmt(y2)} {_fmt(x2)},{_fmt(y2)}"/>'
            )
        top = coords[tree.top]
        out.append(
            f'<line x1="{_fmt(top[0])}" y1="{_fmt(top[1])}" x2="{_fmt(top[0] + 2 * stub)}" y2="{_fmt(top[1])}"/>'
        )
    out.append("</g>")
    out.append('<g id="matching" stroke-width="1.2">')
    for e, p, q in segs:
        colour = "#d62728" if e in crossing_edges else "#1f77b4"
        out.append(
            f'<line class="{"crossing" if e in crossing_edges else "edge"}" data-edge="{e[0]}-{e[1]}" '
            f'x1="{_fmt(p[0])}" y1="{_fmt(p[1])}" x2="{_fmt(q[0])}" y2="{_fmt(q[1])}" stroke="{colour}"/>'
        )
    out.append("</g>")
    out.append('<g id="crossings" fill="#d62728">')
    for x, y in sorted(hits):
        out.append(f'<circle class="crossing-point" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4"/>')
    out.append("</g>")
    out.append('<g id="labels" font-family="sans-serif" font-size="12">')
    for a in rep.left_order:
        x, y = lc[tg.left.node_of(a)]
        out.append(f'<text x="{_fmt(x - 12)}" y="{_fmt(y + 8)}" text-anchor="end">{a}</text>')
    for b in rep.right_order:
        x, y = rc[tg.right.node_of(b)]
        out.append(f'<text x="{_fmt(x + 12)}" y="{_fmt(y + 8)}">{b}</text>')
    out.append("</g>")
    out.append(
        f'<text id="caption" x="{width // 2}" y="{height - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">crossings: {len(hits)}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
