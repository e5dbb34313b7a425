import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from awaregames.core import (NATURE, ExtensiveGame, check_perfect_recall, fmt, is_prefix,
                             prefixes, project, same_cell, validate_game)
from gen import random_game


def simple(histories, to_move, infosets, nature=None, payoffs=None, players=("A",)):
    histories = [tuple(h) for h in histories]
    runs = [h for h in histories if not any(len(x) == len(h) + 1 and x[:-1] == h for x in histories)]
    if payoffs is None:
        payoffs = {i: {z: 0 for z in runs} for i in players}
    moves = {m for h in histories for m in h}
    return ExtensiveGame(frozenset(players), frozenset(moves), frozenset(histories),
                         to_move, nature or {}, infosets, payoffs)


def test_history_helpers():
    assert fmt(()) == "<>"
    assert fmt(("a", "b")) == "<a,b>"
    assert is_prefix((), ("a",)) and is_prefix(("a",), ("a",))
    assert not is_prefix(("b",), ("a", "b"))
    assert prefixes(("a", "b")) == [(), ("a",), ("a", "b")]


def test_project_drops_foreign_moves_and_keeps_virtuals():
    assert project(("aware", "across_A", "down_B"), {"across_A", "down_B"}) == ("across_A", "down_B")
    v = ("across_A", "mystery")
    assert project(v, {"across_A"}, frozenset({v})) == v


def test_fig1_underlying_is_valid(fig1_gs):
    u = fig1_gs.underlying
    assert validate_game(u).ok
    assert u.runs == {("down_A",), ("across_A", "down_B"), ("across_A", "across_B")}
    assert u.children[()] == ["across_A", "down_A"]


def test_missing_prefix_is_the_only_violation():
    g = simple([(), ("a", "b"), ("c",)], {(): "A"}, {"A": {"r": [()]}})
    rep = validate_game(g)
    assert [v.tag for v in rep] == ["prefix-closure"]
    assert rep.violations[0].where == "<a,b>"


def test_nature_probabilities_must_sum_to_one():
    g = simple([(), ("x",), ("y",)], {(): NATURE}, {}, nature={(): {"x": Fraction(1, 3), "y": Fraction(1, 3)}})
    assert validate_game(g).tags() == {"nature-probs"}


def test_cell_with_unequal_moves():
    g = simple([(), ("l",), ("r",), ("l", "x"), ("r", "y")],
               {(): "A", ("l",): "A", ("r",): "A"}, {"A": {"r0": [()], "c": [("l",), ("r",)]}})
    assert "info-moves" in validate_game(g).tags()


def test_forgetting_own_move_breaks_perfect_recall():
    g = simple([(), ("l",), ("r",), ("l", "x"), ("l", "y"), ("r", "x"), ("r", "y")],
               {(): "A", ("l",): "A", ("r",): "A"}, {"A": {"r0": [()], "c": [("l",), ("r",)]}})
    assert validate_game(g).tags() == {"perfect-recall"}
    assert check_perfect_recall(g)


def test_absent_mindedness_breaks_perfect_recall():
    g = simple([(), ("l",), ("r",), ("l", "l"), ("l", "r")],
               {(): "A", ("l",): "A"}, {"A": {"c": [(), ("l",)]}})
    assert check_perfect_recall(g)


def test_nature_name_is_reserved():
    g = simple([(), ("a",)], {(): NATURE}, {}, nature={(): {"a": 1}}, players=("A", NATURE))
    assert "nature-reserved" in validate_game(g).tags()


def test_same_cell():
    g = simple([(), ("l",), ("r",), ("l", "x"), ("r", "x")],
               {(): "A", ("l",): "B", ("r",): "B"},
               {"A": {"a": [()]}, "B": {"b": [("l",), ("r",)]}}, players=("A", "B"))
    assert same_cell(g, ("l",), ("r",))
    assert same_cell(g, ("l", "x"), ("l", "x"))
    assert not same_cell(g, (), ("l",))


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_random_games_are_valid_with_perfect_recall(seed, n, depth):
    g = random_game(random.Random(seed), n, depth)
    assert validate_game(g).ok
    assert not check_perfect_recall(g)
    assert all(g.children[z] == [] for z in g.runs)
    for i in g.players:
        assert set(g.payoffs[i]) == set(g.runs)


@pytest.mark.parametrize("h", [(), ("a",), ("a", "b", "c")])
def test_project_is_identity_on_underlying_histories(h):
    assert project(h, {"a", "b", "c"}) == h
