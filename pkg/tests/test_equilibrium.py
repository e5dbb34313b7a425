import json
import random
from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from awaregames.equilibrium import (EnumerationBoundError, best_response,
                                    enumerate_pure_equilibria, expected_utility,
                                    run_distribution, verify_generalized_nash)
from awaregames.profiles import count_pure, uniform_profile
from common import CORPUS, P_FILES, bruteforce, bundle, fig1, fig1_profile, named, random_profile
from gen import random_awareness_game

P3, P7, HALF = Fraction(3, 10), Fraction(7, 10), Fraction(1, 2)
PROFILES = {"e1": ("across_A", "down_A", "down_B"),
            "e2": ("down_A", "down_A", "down_B"),
            "e3": ("down_A", "down_A", "across_B")}


def eq_names(gs):
    found = set(enumerate_pure_equilibria(gs))
    return {n for n, args in PROFILES.items() if fig1_profile(gs, *args) in found}, len(found)


def test_named_profiles_match_corpus(fig1_gs):
    for n, args in PROFILES.items():
        assert named(n) == fig1_profile(fig1_gs, *args)


def test_run_distribution_of_e1():
    gs = fig1(P7)
    dist = run_distribution(gs, "GA", named("e1"))
    assert dist[("unaware", "across_A", "across_B")] == P7
    assert dist[("aware", "across_A", "down_B")] == Fraction(3, 10)
    assert sum(dist.values()) == 1
    assert run_distribution(gs, "Gm", named("e1"))[("across_A", "down_B")] == 1


def test_expected_utilities_of_the_worked_example():
    gs = fig1(P3)
    assert expected_utility(gs, named("e1"), "A", "GA") == Fraction(7, 5)
    gs7 = fig1(P7)
    assert expected_utility(gs7, named("e1"), "A", "GA") == Fraction(3, 5)
    assert [expected_utility(gs7, named("e1"), i, "Gm") for i in "AB"] == [2, 3]
    assert [expected_utility(gs7, named("e2"), i, "Gm") for i in "AB"] == [1, 1]


def test_regrets_on_the_wrong_side_of_the_threshold():
    rep = verify_generalized_nash(fig1(P7), named("e1"))
    assert not rep.ok
    assert rep.max_regret == Fraction(2, 5)
    assert rep.entry("A", "GA").regret == Fraction(2, 5)
    assert all(e.regret == 0 for e in rep.entries if (e.player, e.game) != ("A", "GA"))
    rep = verify_generalized_nash(fig1(P3), named("e2"))
    assert rep.entry("A", "GA").regret == Fraction(2, 5)
    assert rep.entry("A", "GA").best == Fraction(7, 5)


@pytest.mark.parametrize("p", sorted(P_FILES))
def test_threshold_at_one_half(p):
    gs = fig1(p)
    assert verify_generalized_nash(gs, named("e1")).ok == (p <= HALF)
    assert verify_generalized_nash(gs, named("e2")).ok == (p >= HALF)
    assert verify_generalized_nash(gs, named("e3")).ok


def test_ties_at_the_threshold():
    gs = fig1(HALF)
    e1 = verify_generalized_nash(gs, named("e1"))
    e2 = verify_generalized_nash(gs, named("e2"))
    assert e1.ok and e2.ok
    for rep in (e1, e2):
        assert [(e.player, e.game) for e in rep.entries if e.tie] == [("A", "GA")]
        assert rep.entry("A", "GA").value == rep.entry("A", "GA").best == 1
    assert "tie" in e2.render()
    for p in (Fraction(3, 10), Fraction(7, 10)):
        for name in ("e1", "e2", "e3"):
            assert not any(e.tie for e in verify_generalized_nash(fig1(p), named(name)).entries)


def test_mixed_equilibrium_is_a_tie():
    gs = bundle("canonical_mp.awg")
    rep = verify_generalized_nash(gs, uniform_profile(gs))
    assert rep.ok and all(e.tie for e in rep.entries)


def test_best_response_from_uniform():
    gs = fig1(P3)
    gp = named("e1").with_local("A", "GA", {"A.1": {"across_A": HALF, "down_A": HALF}})
    local, value = best_response(gs, gp, "A", "GA")
    assert local == {"A.1": {"across_A": 1}}
    assert value == Fraction(7, 5)


def test_pure_equilibria_of_the_worked_example():
    assert count_pure(fig1(P3)) == 8
    assert eq_names(fig1(P3)) == ({"e1", "e3"}, 2)
    assert eq_names(fig1(P7)) == ({"e2", "e3"}, 2)
    assert eq_names(fig1(HALF)) == ({"e1", "e2", "e3"}, 3)


def as_choices(gp):
    return tuple(sorted(((i, gid, c), next(iter(d)))
                        for (i, gid), loc in gp.strategies.items() for c, d in loc.items()))


@pytest.mark.parametrize("p", sorted(P_FILES))
def test_enumeration_matches_standalone_brute_force(p):
    bf = bruteforce()
    games, beliefs = bf.load(CORPUS / "fig1.awg", {"p": p})
    expected = set(bf.equilibria(games, beliefs))
    assert {as_choices(gp) for gp in enumerate_pure_equilibria(fig1(p))} == expected


def test_au_bundle_against_brute_force():
    bf = bruteforce()
    expected = set(bf.equilibria(*bf.load(CORPUS / "fig1_au.awg")))
    found = {as_choices(gp) for gp in enumerate_pure_equilibria(bundle("fig1_au.awg"))}
    assert found == expected
    assert len(found) == 3


def test_expected_outcomes_file():
    table = json.loads((CORPUS / "expected.json").read_text())
    assert len(table) == 15
    for key, want in table.items():
        bfile, prof = key.split()
        rep = verify_generalized_nash(bundle(bfile), named(prof.removesuffix(".prof")))
        assert rep.ok == want["ok"]
        assert rep.max_regret == Fraction(want["max_regret"])


def test_enumeration_bound(fig1_gs):
    with pytest.raises(EnumerationBoundError):
        enumerate_pure_equilibria(fig1_gs, bound=7)


def scaled(gs, a, b):
    games = {}
    for gid, aug in gs.games.items():
        g = aug.game
        pay = {i: {z: a * u + b for z, u in us.items()} for i, us in g.payoffs.items()}
        games[gid] = replace(aug, game=replace(g, payoffs=pay))
    return replace(gs, games=games)


seeds = st.integers(0, 10**6)


@given(seeds, st.integers(0, 2))
def test_distributions_sum_to_one_and_regret_is_nonnegative(seed, levels):
    rng = random.Random(seed)
    gs = random_awareness_game(rng, 2, 3, levels)
    gp = random_profile(gs, rng)
    for gid in gs.games:
        assert sum(run_distribution(gs, gid, gp).values()) == 1
    rep = verify_generalized_nash(gs, gp)
    assert all(e.regret >= 0 for e in rep.entries)
    assert rep.ok == (rep.max_regret == 0)


@given(seeds, st.fractions(0, 1, max_denominator=12))
def test_expected_utility_is_linear_in_each_class(seed, lam):
    rng = random.Random(seed)
    gs = random_awareness_game(rng, 2, 3, 1)
    a, b = random_profile(gs, rng), random_profile(gs, rng)
    assume(a.strategies)
    (i, tgt), loc = rng.choice(sorted(a.strategies.items()))
    cell = rng.choice(sorted(loc))
    da, db = loc[cell], b.strategies[(i, tgt)][cell]
    mix = {m: lam * da.get(m, 0) + (1 - lam) * db.get(m, 0) for m in set(da) | set(db)}

    def at(d):
        return a.with_local(i, tgt, {**loc, cell: d})

    for j in gs.players:
        for gid in gs.games:
            lhs = expected_utility(gs, at(mix), j, gid)
            rhs = lam * expected_utility(gs, at(da), j, gid) + (1 - lam) * expected_utility(gs, at(db), j, gid)
            assert lhs == rhs


@given(seeds, st.integers(1, 5), st.integers(-3, 3))
def test_regret_scales_with_positive_affine_payoffs(seed, a, b):
    rng = random.Random(seed)
    gs = random_awareness_game(rng, 2, 3, 1)
    gp = random_profile(gs, rng)
    before = verify_generalized_nash(gs, gp)
    after = verify_generalized_nash(scaled(gs, a, b), gp)
    assert [e.regret * a for e in before.entries] == [e.regret for e in after.entries]


@given(seeds)
def test_best_response_beats_every_pure_deviation(seed):
    rng = random.Random(seed)
    gs = random_awareness_game(rng, 2, 2, 1)
    gp = random_profile(gs, rng)
    for (i, gid) in sorted(gp.strategies):
        if gid not in gs.games:
            continue
        local, best = best_response(gs, gp, i, gid)
        assert expected_utility(gs, gp.with_local(i, gid, local), i, gid) == best
        for alt in (uniform_profile(gs), random_profile(gs, rng, 1.0)):
            dev = gp.with_local(i, gid, alt.strategies[(i, gid)])
            assert expected_utility(gs, dev, i, gid) <= best
