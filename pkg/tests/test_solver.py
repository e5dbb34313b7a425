import random
import time
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from awaregames.equilibrium import enumerate_pure_equilibria, verify_generalized_nash
from awaregames.profiles import count_pure
from awaregames.solver import pure_prepass, solve
from common import CORPUS_BUNDLES, bundle, fig1, named
from gen import random_awareness_game

HALF = Fraction(1, 2)


@pytest.mark.parametrize("p", ["3/10", "7/10"])
def test_solve_worked_example(p):
    gs = fig1(Fraction(p))
    gp, rep = solve(gs)
    assert rep.ok and rep.max_regret == 0
    assert gp in enumerate_pure_equilibria(gs)


def test_prepass_on_worked_example():
    assert set(pure_prepass(fig1(Fraction(3, 10)))) == {named("e1"), named("e3")}


def test_solve_au_bundle():
    gs = bundle("fig1_au.awg")
    gp, rep = solve(gs)
    assert rep.ok
    assert gp.strategies[("A", "GV")]["V.A"] == {"across_A": 1}
    assert gp.strategies[("B", "GV")]["V.B"] == {"mystery": 1}
    assert gp.strategies[("B", "Gm")]["m.B"] == {"down_B": 1}


def test_matching_pennies_needs_mixing():
    gs = bundle("canonical_mp.awg")
    assert enumerate_pure_equilibria(gs) == []
    start = time.perf_counter()
    gp, rep = solve(gs, seed=0)
    assert time.perf_counter() - start < 5
    assert rep.ok and rep.max_regret == 0
    for loc in gp.strategies.values():
        for d in loc.values():
            assert set(d.values()) == {HALF}


def test_solve_is_deterministic_for_a_seed():
    gs = bundle("canonical_mp.awg")
    assert solve(gs, seed=3) == solve(gs, seed=3)


def test_negative_epsilon_is_rejected(fig1_gs):
    with pytest.raises(ValueError):
        solve(fig1_gs, epsilon=Fraction(-1))


def test_failure_is_reported_not_hidden():
    gs = bundle("canonical_mp.awg")
    gp, rep = solve(gs, epsilon=Fraction(0), max_iters=1, check_every=1, seed=1)
    assert rep.ok == (rep.max_regret == 0)
    assert rep == verify_generalized_nash(gs, gp, 0)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 3), st.integers(0, 2))
def test_prepass_agrees_with_direct_enumeration(seed, n, depth, levels):
    gs = random_awareness_game(random.Random(seed), n, depth, levels)
    assume(count_pure(gs) <= 200)
    assert set(pure_prepass(gs)) == set(enumerate_pure_equilibria(gs))


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_solver_output_is_verified(seed):
    gs = random_awareness_game(random.Random(seed), 2, 3, 1)
    assume(count_pure(gs) <= 200)
    gp, rep = solve(gs, epsilon=Fraction(1, 100), max_iters=500, seed=seed, bound=0)
    assert rep == verify_generalized_nash(gs, gp, Fraction(1, 100))


@pytest.mark.parametrize("name", CORPUS_BUNDLES)
def test_regret_matching_alone_converges_on_corpus(name):
    gs = bundle(name)
    gp, rep = solve(gs, epsilon=Fraction(1, 10**4), seed=0, bound=0)
    assert rep.ok
