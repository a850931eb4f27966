from __future__ import annotations

import re

import pytest
from hypothesis import given

from strategies import random_consistent_rep, random_permutation_rep, seeds, tanglegrams
from tanglekit.errors import ParseError, TanglegramError
from tanglekit.gen import K1_TEXT, K2_TEXT, build_family, random_tanglegram
from tanglekit.io import (
    parse_layout,
    parse_tanglegram,
    read_layout,
    read_tanglegram,
    render_svg,
    segments_cross,
    serialize_layout,
    serialize_tanglegram,
    write_layout,
    write_tanglegram,
)
from tanglekit.layout import LayoutRep, crossing_count, exact_crt, is_consistent
from tanglekit.model import tanglegram_isomorphic


def _same(a, b) -> bool:
    return a.left.to_nested() == b.left.to_nested() and a.right.to_nested() == b.right.to_nested() and a.sigma == b.sigma


# -- parsing ---------------------------------------------------------------------------------


def test_parse_k1_text():
    tg = parse_tanglegram(K1_TEXT)
    assert _same(tg, build_family("K1"))
    assert _same(parse_tanglegram(K2_TEXT), build_family("K2"))


def test_parse_tolerates_comments_crlf_bom_and_spaces():
    text = "\ufeff# K1\r\n ( (l1, l2) ,(l3,l4) ) ;  # left\r\n\r\n((r1,r2),(r3,r4));\r\nl1-r1, l2-r3 ,l3-r2,l4-r4\r\n"
    assert _same(parse_tanglegram(text), build_family("K1"))


def test_parse_single_leaf():
    tg = parse_tanglegram("a;\nb;\na-b\n")
    assert tg.size == 1 and tg.edges == (("a", "b"),)


@pytest.mark.parametrize(
    "text, code, line, column",
    [
        ("((a,b),c;\n(x,(y,z));\na-x,b-y,c-z\n", "syntax", 1, 9),
        ("(a);\nb;\na-b\n", "non_binary", 1, 1),
        ("(a,b,c);\n(x,(y,z));\na-x,b-y,c-z\n", "non_binary", 1, 1),
        ("((a,b),c);\n(x,(y,z));\na-x,b-y,c-q\n", "matching", 3, 9),
        ("((a,b),c);\n(x,(y,z));\na-x,b-x,c-z\n", "matching", 3, 5),
        ("((a,b),c);\n(x,(y,z));\na-x,b-y\n", "matching", 3, None),
        ("((a,b),a);\n(x,(y,z));\na-x,b-y,a-z\n", "duplicate_label", 1, None),
        ("((a,b),c);\n(x,(y,z$));\na-x,b-y,c-z\n", "label", 2, 7),
        ("((a,b),c);\n(x,(y,z));\n", "syntax", None, None),
        ("((a,b),c);\n(x,(y,z));\na:x,b-y,c-z\n", "syntax", 3, 1),
    ],
)
def test_parse_errors(text, code, line, column):
    with pytest.raises(ParseError) as info:
        parse_tanglegram(text)
    err = info.value
    assert (err.code, err.line, err.column) == (code, line, column)


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        parse_tanglegram("nonsense")


# -- round trips -----------------------------------------------------------------------------


def test_round_trip_fixtures():
    for name, m in [("K1", 1), ("K2", 1), ("T1", 3), ("T2", 2)]:
        tg = build_family(name, m)
        back = parse_tanglegram(serialize_tanglegram(tg))
        assert _same(back, tg)


def test_round_trip_random():
    for i in range(500):
        tg = random_tanglegram(1 + i % 20, 104729 * i + 5)
        text = serialize_tanglegram(tg)
        back = parse_tanglegram(text)
        assert _same(back, tg) and serialize_tanglegram(back) == text


@given(tanglegrams(max_size=10))
def test_round_trip_preserves_isomorphism_class(tg):
    assert tanglegram_isomorphic(parse_tanglegram(serialize_tanglegram(tg)), tg)


def test_file_round_trip(tmp_path, k1):
    path = tmp_path / "k1.tgl"
    write_tanglegram(k1, path)
    assert _same(read_tanglegram(path), k1)
    rep = exact_crt(k1).witness
    lpath = tmp_path / "k1.layout"
    write_layout(rep, lpath)
    assert read_layout(lpath, k1) == rep
    assert parse_layout(serialize_layout(rep)) == rep


def test_layout_errors(k1):
    with pytest.raises(ParseError) as info:
        parse_layout("l1,l2,l3,l4\n")
    assert info.value.code == "syntax"
    with pytest.raises(ParseError) as info:
        parse_layout("l1,l1,l3,l4\nr1,r2,r3,r4\n")
    assert info.value.code == "duplicate_label"
    with pytest.raises(ParseError) as info:
        parse_layout("l1,l2,l3,zz\nr1,r2,r3,r4\n", k1)
    assert info.value.code == "matching"


# -- svg ---------------------------------------------------------------------------------------


def _circles(svg: str) -> int:
    return len(re.findall(r'class="crossing-point"', svg))


def test_segments_cross_examples():
    assert segments_cross(((0, 0), (10, 10)), ((0, 10), (10, 0)))
    assert not segments_cross(((0, 0), (10, 0)), ((0, 10), (10, 10)))
    # shared endpoint is not a crossing
    assert not segments_cross(((0, 0), (10, 10)), ((0, 0), (10, 0)))


def test_svg_k1_optimal(k1):
    svg = render_svg(k1, exact_crt(k1).witness, title="K1 <optimal>")
    assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
    assert _circles(svg) == 1 and "crossings: 1</text>" in svg
    assert "K1 &lt;optimal&gt;" in svg


def test_svg_planar_ladder():
    tg = parse_tanglegram("(a1,(a2,(a3,a4)));\n(b1,(b2,(b3,b4)));\na1-b1,a2-b2,a3-b3,a4-b4\n")
    svg = render_svg(tg, LayoutRep(("a1", "a2", "a3", "a4"), ("b1", "b2", "b3", "b4")))
    assert _circles(svg) == 0 and 'class="crossing"' not in svg


def test_svg_deterministic():
    tg = build_family("T2", 2)
    rep = exact_crt(tg).witness
    assert render_svg(tg, rep) == render_svg(tg, rep)
    assert _circles(render_svg(tg, rep)) == 4


@given(tanglegrams(max_size=12), seeds)
def test_svg_highlights_every_crossing(tg, seed):
    rep = random_consistent_rep(tg, seed)
    assert _circles(render_svg(tg, rep)) == crossing_count(tg, rep)


@given(tanglegrams(min_size=3, max_size=8), seeds)
def test_svg_rejects_inconsistent_orders(tg, seed):
    rep = random_permutation_rep(tg, seed)
    if is_consistent(tg.left, rep.left_order) and is_consistent(tg.right, rep.right_order):
        return
    with pytest.raises(TanglegramError):
        render_svg(tg, rep)
