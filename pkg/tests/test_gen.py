from __future__ import annotations

from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tanglekit.detect import count_cross_responsible
from tanglekit.errors import RefusalError, TanglegramError
from tanglekit.gen import (
    Rng,
    build_family,
    enumerate_tanglegrams,
    random_tanglegram,
    random_tree,
    seed_stream,
    tree_shapes,
)
from tanglekit.layout import exact_crt
from tanglekit.model import Tanglegram


# -- integer source ------------------------------------------------------------------------


def test_rng_frozen_outputs():
    r = Rng(0)
    assert [r.next64() for _ in range(3)] == [11749869230777074271, 4976686463289251617, 755828109848996024]
    r = Rng(42)
    assert [r.below(10) for _ in range(10)] == [0, 5, 2, 7, 1, 4, 1, 8, 9, 0]


def test_rng_matches_raw_bit_generator():
    bits = np.random.PCG64(123)
    r = Rng(123)
    assert [r.next64() for _ in range(50)] == [int(bits.random_raw()) for _ in range(50)]


def test_below_rejects_non_positive():
    with pytest.raises(ValueError):
        Rng(1).below(0)


@given(st.integers(min_value=0, max_value=2**64 - 1), st.integers(min_value=1, max_value=1000))
def test_below_in_range(seed, k):
    r = Rng(seed)
    assert all(0 <= r.below(k) < k for _ in range(20))


def test_shuffle_is_permutation():
    items = list(range(30))
    assert sorted(Rng(5).shuffle(items[:])) == items


def test_below_roughly_uniform():
    r = Rng(9)
    counts = np.bincount([r.below(6) for _ in range(60000)], minlength=6)
    assert np.all(np.abs(counts - 10000) < 400)


# -- random instances ------------------------------------------------------------------------


def test_size_one():
    tg = random_tanglegram(1, 7)
    assert tg.size == 1 and tg.edges == (("l1", "r1"),)


def test_random_is_deterministic():
    assert random_tanglegram(9, 31).edges == random_tanglegram(9, 31).edges
    a, b = random_tanglegram(9, 31), random_tanglegram(9, 31)
    assert a.left.to_nested() == b.left.to_nested() and a.right.to_nested() == b.right.to_nested()


def test_random_rejects_bad_size():
    with pytest.raises(TanglegramError):
        random_tanglegram(0, 1)


@given(st.integers(min_value=1, max_value=40), st.integers(min_value=0, max_value=10**9))
def test_random_tree_has_n_leaves(n, seed):
    t = random_tree(n, seed, "q")
    assert len(t.leaf_labels) == n and all(lab.startswith("q") for lab in t.leaf_labels)


def test_seed_stream_deterministic():
    a, b = seed_stream(3), seed_stream(3)
    assert [next(a) for _ in range(5)] == [next(b) for _ in range(5)]


# -- enumeration ---------------------------------------------------------------------------


def test_shape_counts():
    assert [len(tree_shapes(n)) for n in range(1, 7)] == [1, 1, 1, 2, 3, 6]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_enumeration_counts(n):
    assert sum(1 for _ in enumerate_tanglegrams(n)) == len(tree_shapes(n)) ** 2 * factorial(n)


def test_enumeration_raw_counts_frozen():
    assert [sum(1 for _ in enumerate_tanglegrams(n)) for n in range(1, 6)] == [1, 2, 6, 96, 1080]


def test_enumeration_limits():
    with pytest.raises(RefusalError):
        next(enumerate_tanglegrams(7))
    with pytest.raises(TanglegramError):
        next(enumerate_tanglegrams(0))


# -- families ------------------------------------------------------------------------------


def test_family_sizes_and_values():
    assert build_family("K1").size == 4 and exact_crt(build_family("K1")).value == 1
    for m in range(1, 5):
        tg = build_family("T1", m)
        assert tg.size == m + 4
        assert count_cross_responsible(tg) == 1
    assert exact_crt(build_family("T2", 1)).value == 1
    assert exact_crt(build_family("T2", 2)).value == 4


def test_family_errors():
    with pytest.raises(TanglegramError):
        build_family("K9")
    with pytest.raises(TanglegramError):
        build_family("T2", 0)


# -- size-4 baseline ------------------------------------------------------------------------


def _balanced(tree) -> bool:
    nested = tree.to_nested()
    return not isinstance(nested[0], str) and not isinstance(nested[1], str)


def test_size4_probability_exact():
    """Weight each enumerated instance by its chance under edge insertion.

    A 3-leaf tree has five edges and only the one above the lone leaf yields
    the balanced 4-leaf shape, so balanced has weight 1/5 and the caterpillar 4/5.
    """
    shape_p = {True: Fraction(1, 5), False: Fraction(4, 5)}
    total = Fraction(0)
    for tg in enumerate_tanglegrams(4):
        if count_cross_responsible(tg):
            total += shape_p[_balanced(tg.left)] * shape_p[_balanced(tg.right)] / 24
    assert total == Fraction(2, 15)


def test_size4_shape_frequency():
    hits = sum(_balanced(random_tree(4, s)) for s in range(5000))
    assert abs(hits / 5000 - 0.2) < 0.02


def test_size4_sampler_frequency():
    seeds = seed_stream(2024)
    hits = sum(count_cross_responsible(random_tanglegram(4, next(seeds)), stop_after=1) > 0 for _ in range(10000))
    assert abs(hits / 10000 - 2 / 15) < 0.02


def test_small_tanglegram_from_text():
    tg = Tanglegram.from_nested(("a", "b"), ("x", "y"), [("a", "y"), ("b", "x")])
    assert exact_crt(tg).value == 0
