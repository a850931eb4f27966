from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import random_consistent_rep, random_permutation_rep, seeds, tanglegrams
from tanglekit.errors import BudgetExhausted, RefusalError, TanglegramError
from tanglekit.gen import Rng, build_family, enumerate_tanglegrams, random_tanglegram
from tanglekit.layout import (
    LayoutRep,
    brute_force_crt,
    crossing_count,
    crossing_pairs,
    exact_crt,
    is_consistent,
    optimize_one_side,
    planar_layout,
    restrict_layout,
)
from tanglekit.model import RootedBinaryTree, Tanglegram, induce_subtanglegram


def ladder(n: int) -> Tanglegram:
    def cat(prefix):
        nested = f"{prefix}{n}"
        for i in range(n - 1, 0, -1):
            nested = (f"{prefix}{i}", nested)
        return nested

    return Tanglegram.from_nested(cat("a"), cat("b"), [(f"a{i}", f"b{i}") for i in range(1, n + 1)])


def contiguity_oracle(tree: RootedBinaryTree, order) -> bool:
    """Direct check over every node's leaf set."""
    pos = {lab: i for i, lab in enumerate(order)}
    for v in range(tree.n_nodes):
        idx = sorted(pos[x] for x in tree.leaves_below(v))
        if idx[-1] - idx[0] + 1 != len(idx):
            return False
    return True


# -- consistency ---------------------------------------------------------------------


def test_consistency_examples(k1):
    two = RootedBinaryTree.from_nested(("a", "b"))
    assert is_consistent(two, ["a", "b"]) and is_consistent(two, ["b", "a"])
    assert not is_consistent(k1.left, ["l1", "l3", "l2", "l4"])
    assert is_consistent(k1.left, ["l2", "l1", "l4", "l3"])


def test_consistency_rejects_non_permutation(k1):
    with pytest.raises(TanglegramError):
        is_consistent(k1.left, ["l1", "l2", "l3"])
    with pytest.raises(TanglegramError):
        is_consistent(k1.left, ["l1", "l2", "l3", "l3"])


def test_consistent_orders_are_exactly_tree_orders():
    t = RootedBinaryTree.from_nested((("a", "b"), ("c", ("d", "e"))))
    tree_orders = set(t.orders())
    for perm in itertools.permutations("abcde"):
        assert is_consistent(t, perm) == (perm in tree_orders) == contiguity_oracle(t, perm)


@given(tanglegrams(max_size=12), seeds)
def test_consistency_matches_oracle(tg, seed):
    rep = random_permutation_rep(tg, seed)
    assert is_consistent(tg.left, rep.left_order) == contiguity_oracle(tg.left, rep.left_order)
    rep = random_consistent_rep(tg, seed)
    assert is_consistent(tg.left, rep.left_order) and is_consistent(tg.right, rep.right_order)


# -- crossing counts -----------------------------------------------------------------------


def test_crossing_count_examples(k2):
    lad = ladder(6)
    rep = LayoutRep(lad.left.default_order(), lad.right.default_order())
    assert crossing_count(lad, rep) == 0
    assert crossing_count(lad, LayoutRep(rep.left_order, rep.right_order[::-1])) == 15
    # one-crossing drawing of K2 with only x and y crossing
    fig = LayoutRep(("l1", "l2", "l3", "l4"), ("r4", "r3", "r2", "r1"))
    assert crossing_count(k2, fig) == 1
    assert crossing_pairs(k2, fig) == [(("l2", "r2"), ("l3", "r3"))]


def test_crossing_count_rejects_foreign_labels(k1):
    with pytest.raises(TanglegramError):
        crossing_count(k1, LayoutRep(("l1", "l2", "l3", "x"), ("r1", "r2", "r3", "r4")))


def test_crossing_count_matches_pairwise_on_1000_instances():
    for i in range(1000):
        tg = random_tanglegram(1 + i % 15, 7919 * i + 1)
        rep = random_permutation_rep(tg, i) if i % 2 else random_consistent_rep(tg, i)
        assert crossing_count(tg, rep) == len(crossing_pairs(tg, rep))


# -- one-sided optimisation -------------------------------------------------------------------


def test_one_side_k1_fixed_left(k1):
    order, count = optimize_one_side(k1, ("l1", "l2", "l3", "l4"))
    best = min(crossing_count(k1, LayoutRep(("l1", "l2", "l3", "l4"), ro)) for ro in k1.right.orders())
    assert count == best == 1
    assert crossing_count(k1, LayoutRep(("l1", "l2", "l3", "l4"), order)) == 1


def test_one_side_tie_keeps_natural_order():
    tg = Tanglegram.from_nested(("a", "b"), ("x", "y"), [("a", "x"), ("b", "y")])
    assert optimize_one_side(tg, ("a", "b")) == (("x", "y"), 0)
    # top node: blocks {w, x} and {y, z} sit over left positions {0, 3} and {1, 2},
    # so both child orders cost 2 and the stored order must be kept
    tie = Tanglegram.from_nested(
        (("a", "b"), ("c", "d")), (("w", "x"), ("y", "z")), [("a", "w"), ("b", "y"), ("c", "z"), ("d", "x")]
    )
    assert optimize_one_side(tie, ("a", "b", "c", "d")) == (("w", "x", "y", "z"), 2)


def test_one_side_rejects_inconsistent(k1):
    with pytest.raises(TanglegramError):
        optimize_one_side(k1, ("l1", "l3", "l2", "l4"))


@given(tanglegrams(max_size=7), seeds)
def test_one_side_optimal_against_enumeration(tg, seed):
    left = random_consistent_rep(tg, seed).left_order
    order, count = optimize_one_side(tg, left)
    assert is_consistent(tg.right, order)
    assert crossing_count(tg, LayoutRep(left, order)) == count
    assert count == min(crossing_count(tg, LayoutRep(left, ro)) for ro in tg.right.orders())


# -- exact solver ------------------------------------------------------------------------------


def test_crt_fixtures():
    assert exact_crt(build_family("K1")).value == 1
    assert exact_crt(build_family("K2")).value == 1
    assert exact_crt(build_family("T2", 2)).value == 4


def test_size_three_all_planar():
    assert all(exact_crt(tg).value == 0 for tg in enumerate_tanglegrams(3))


def test_crt_matches_brute_force_exhaustive_size4():
    for tg in enumerate_tanglegrams(4):
        r = exact_crt(tg)
        assert r.optimal
        assert r.value == brute_force_crt(tg)[0] == crossing_count(tg, r.witness)
        assert is_consistent(tg.left, r.witness.left_order) and is_consistent(tg.right, r.witness.right_order)


@given(tanglegrams(min_size=5, max_size=7))
def test_crt_matches_brute_force_random(tg):
    r = exact_crt(tg)
    assert r.value == brute_force_crt(tg)[0]
    # the swapped tanglegram has the same value
    assert exact_crt(tg.mirror()).value == r.value


def test_crt_cap_and_override():
    tg = random_tanglegram(19, 1)
    with pytest.raises(RefusalError):
        exact_crt(tg)
    r = exact_crt(tg, cap=None)
    assert crossing_count(tg, r.witness) == r.value


def test_crt_budget_truncation(monkeypatch):
    tg = random_tanglegram(14, 3)
    r = exact_crt(tg, budget=5)
    assert not r.optimal and r.explored > 0
    assert crossing_count(tg, r.witness) == r.value
    assert r.value >= exact_crt(tg).value
    monkeypatch.setenv("TGL_BUDGET", "5")
    assert not exact_crt(tg).optimal


@given(tanglegrams(min_size=3, max_size=9), seeds)
def test_monotone_under_restriction(tg, seed):
    rng = Rng(seed)
    Z = [e for e in tg.edges if rng.below(2)] or [tg.edges[0]]
    assert exact_crt(induce_subtanglegram(tg, Z)).value <= exact_crt(tg).value


# -- planar layouts -----------------------------------------------------------------------------


def test_planar_layout_examples(k1, k2):
    assert planar_layout(k1) is None and planar_layout(k2) is None
    single = Tanglegram.from_nested("a", "b", [("a", "b")])
    assert planar_layout(single) == LayoutRep(("a",), ("b",))
    t1 = build_family("T1", 2)
    rest = induce_subtanglegram(t1, t1.sigma - {("l1", "r1")})
    rep = planar_layout(rest)
    assert rep is not None and crossing_count(rest, rep) == 0


@given(tanglegrams(max_size=10))
def test_planar_layout_agrees_with_crt(tg):
    rep = planar_layout(tg)
    if exact_crt(tg).value == 0:
        assert rep is not None and crossing_count(tg, rep) == 0
        assert is_consistent(tg.left, rep.left_order) and is_consistent(tg.right, rep.right_order)
    else:
        assert rep is None


def test_planar_layout_budget():
    tg = random_tanglegram(16, 11)
    if exact_crt(tg).value > 0:
        with pytest.raises(BudgetExhausted):
            planar_layout(tg, budget=1)


# -- restriction ------------------------------------------------------------------------------


def test_restrict_layout(k1):
    rep = LayoutRep(("l1", "l2", "l3", "l4"), ("r1", "r2", "r3", "r4"))
    assert restrict_layout(k1, rep, k1.sigma) == rep
    with pytest.raises(TanglegramError):
        restrict_layout(k1, rep, [("l1", "r2")])


@given(tanglegrams(min_size=2, max_size=10), seeds)
def test_restriction_is_consistent_and_monotone(tg, seed):
    rng = Rng(seed)
    rep = random_consistent_rep(tg, seed)
    Z = [e for e in tg.edges if rng.below(2)] or [tg.edges[-1]]
    sub = induce_subtanglegram(tg, Z)
    r = restrict_layout(tg, rep, Z)
    assert is_consistent(sub.left, r.left_order) and is_consistent(sub.right, r.right_order)
    assert crossing_count(sub, r) <= crossing_count(tg, rep)
    planar = planar_layout(tg)
    if planar is not None:
        assert crossing_count(sub, restrict_layout(tg, planar, Z)) == 0


def test_k1_restriction_of_planar_sublayout_is_forced():
    """Without e1, the planar sublayout on the other three edges of K1 is unique up to mirroring."""
    k1 = build_family("K1")
    three = induce_subtanglegram(k1, k1.sigma - {("l1", "r1")})
    planar = {
        (lo, ro) for lo in three.left.orders() for ro in three.right.orders() if crossing_count(three, LayoutRep(lo, ro)) == 0
    }
    assert len(planar) == 2
    (a, b) = sorted(planar)
    assert a == (b[0][::-1], b[1][::-1])


@pytest.mark.parametrize("n", [2, 5, 8])
def test_ladder_planar(n):
    lad = ladder(n)
    assert exact_crt(lad).value == 0


@given(st.integers(min_value=1, max_value=8))
def test_reversed_ladder_is_still_planar(n):
    lad = ladder(n)
    rep = LayoutRep(lad.left.default_order(), lad.right.default_order()[::-1])
    assert crossing_count(lad, rep) == n * (n - 1) // 2
    assert exact_crt(lad).value == 0
