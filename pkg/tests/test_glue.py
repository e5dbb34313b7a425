import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from awaregames.core import NATURE, check_perfect_recall, validate_game
from awaregames.equilibrium import nash_regrets, verify_generalized_nash
from awaregames.glue import (GlueError, full_nu, glue, lift_profile, lower_profile, prune,
                             selector, uniform_nu)
from common import CORPUS_BUNDLES, bundle, named, random_profile
from gen import random_awareness_game

THIRD = Fraction(1, 3)


def test_glue_of_worked_example(fig1_gs):
    gl = glue(fig1_gs)
    g = gl.game
    assert gl.nu == {"Gm": THIRD, "GA": THIRD, "GB": THIRD}
    assert g.to_move[()] == NATURE
    assert g.nature_probs[()] == {selector(x): THIRD for x in ("Gm", "GA", "GB")}
    assert dict(gl.players) == {"A@GA": ("A", "GA"), "A@GB": ("A", "GB"),
                                "B@Gm": ("B", "Gm"), "B@GB": ("B", "GB")}
    assert g.infosets["B@Gm"]["Gm/m.B"] == {("game:Gm", "across_A"),
                                             ("game:GA", "aware", "across_A")}
    assert g.infosets["A@GA"]["GA/A.1"] == {("game:Gm",), ("game:GA", "unaware"),
                                             ("game:GA", "aware")}
    assert g.infosets["B@GB"]["GB/B.3"] == {("game:GB", "across_A"),
                                             ("game:GA", "unaware", "across_A")}


def test_prune_drops_moves_the_mover_cannot_name(fig1_gs):
    ga = fig1_gs.games["GA"].game
    assert ga.histories - prune(fig1_gs, "GA") == {("unaware", "across_A", "down_B")}
    assert prune(fig1_gs, "GB") == fig1_gs.games["GB"].game.histories
    assert prune(fig1_gs, "Gm") == fig1_gs.games["Gm"].game.histories


def test_payoffs_vanish_outside_the_believed_game(fig1_gs):
    g = glue(fig1_gs).game
    z = ("game:GA", "aware", "across_A", "down_B")
    assert g.payoffs["A@GA"][z] == 2
    assert g.payoffs["B@Gm"][z] == 0
    assert g.payoffs["A@GB"][z] == 0
    assert g.payoffs["B@Gm"][("game:Gm", "across_A", "down_B")] == 3


@pytest.mark.parametrize("name", CORPUS_BUNDLES)
def test_glue_is_a_valid_perfect_recall_game(name):
    gs = bundle(name)
    for nu in (None, full_nu(gs)):
        g = glue(gs, nu).game
        assert validate_game(g).ok
        assert not check_perfect_recall(g)


@pytest.mark.parametrize("nu, msg", [
    ({"Gm": Fraction(1)}, "omits"),
    ({"Gm": Fraction(1, 2), "GA": Fraction(1, 2), "GX": Fraction(0)}, "unknown"),
    ({"Gm": Fraction(1, 2), "GA": Fraction(1, 2), "GB": Fraction(0)}, "positive"),
    ({"Gm": THIRD, "GA": THIRD, "GB": Fraction(1, 2)}, "sum"),
])
def test_bad_nu_is_rejected(fig1_gs, nu, msg):
    with pytest.raises(GlueError, match=msg):
        glue(fig1_gs, nu)


def test_nu_on_a_closed_subset(fig1_gs):
    gl = glue(fig1_gs, {"GB": Fraction(1)})
    assert set(gl.players) == {"A@GB", "B@GB"}
    assert uniform_nu(fig1_gs) == full_nu(fig1_gs)


def test_lift_lower_round_trip(fig1_gs):
    gl = glue(fig1_gs)
    for name in ("e1", "e2", "e3"):
        gp = named(name)
        assert lower_profile(fig1_gs, gl, lift_profile(fig1_gs, gl, gp)) == gp


def test_lower_accepts_history_keyed_profiles(fig1_gs):
    gl = glue(fig1_gs)
    gp = named("e1")
    by_cell = lift_profile(fig1_gs, gl, gp)
    by_history = {h: by_cell[c] for h, c in gl.game.cell_of.items()}
    assert lower_profile(fig1_gs, gl, by_history) == gp


def test_glue_nash_matches_generalized_equilibria(fig1_gs):
    gl = glue(fig1_gs)
    for name, expect in (("e1", True), ("e2", False), ("e3", True)):
        regrets = nash_regrets(gl.game, lift_profile(fig1_gs, gl, named(name)))
        assert all(best == cur for cur, best in regrets.values()) is expect


@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 3), st.integers(0, 2))
def test_glue_is_valid_on_generated_games(seed, n, depth, levels):
    gs = random_awareness_game(random.Random(seed), n, depth, levels)
    g = glue(gs, full_nu(gs)).game
    assert validate_game(g).ok
    assert not check_perfect_recall(g)


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_glue_regret_is_nu_scaled_generalized_regret(seed, levels):
    rng = random.Random(seed)
    gs = random_awareness_game(rng, 2, 3, levels)
    gp = random_profile(gs, rng)
    gl = glue(gs, full_nu(gs))
    regrets = nash_regrets(gl.game, lift_profile(gs, gl, gp))
    rep = verify_generalized_nash(gs, gp)
    for pid, (i, gid) in gl.players.items():
        e = rep.entry(i, gid)
        cur, best = regrets[pid]
        assert cur == gl.nu[gid] * e.value
        assert best == gl.nu[gid] * e.best
