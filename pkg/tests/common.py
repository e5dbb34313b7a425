"""Shared helpers for the test suite: corpus access and the named profiles."""
from __future__ import annotations

import importlib.util
import random
from fractions import Fraction
from pathlib import Path

from awaregames.bundle import load_bundle, load_profile
from awaregames.profiles import pure_profile

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
P_FILES = {Fraction(1, 10): "fig1_p1_10.awg", Fraction(3, 10): "fig1_p3_10.awg",
           Fraction(1, 2): "fig1_p1_2.awg", Fraction(7, 10): "fig1_p7_10.awg",
           Fraction(9, 10): "fig1_p9_10.awg"}
CORPUS_BUNDLES = ["fig1.awg", *P_FILES.values(), "fig1_au.awg", "canonical_mp.awg"]


def fig1(p: Fraction | str = Fraction(3, 10)):
    return load_bundle(CORPUS / "fig1.awg", {"p": Fraction(p)})


def bundle(name: str):
    return load_bundle(CORPUS / name)


def named(name: str):
    """``e1``, ``e2`` or ``e3`` from the corpus."""
    return load_profile(CORPUS / f"{name}.prof")


def fig1_profile(gs, a1: str, a3: str, mb: str, b3: str = "across_B"):
    return pure_profile(gs, {("A", "GA", "A.1"): a1, ("A", "GB", "A.3"): a3,
                             ("B", "Gm", "m.B"): mb, ("B", "GB", "B.3"): b3})


def bruteforce():
    path = Path(__file__).parent / "fixtures" / "bruteforce_fig1.py"
    spec = importlib.util.spec_from_file_location("bruteforce_fig1", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def random_profile(gs, rng: random.Random, pure_bias: float = 0.3):
    """A random behavioral generalized profile with small-denominator weights."""
    from awaregames.profiles import GeneralizedProfile, profile_domain
    strategies = {}
    for key, classes in profile_domain(gs).items():
        loc = {}
        for cell, ms in classes.items():
            if rng.random() < pure_bias:
                loc[cell] = {rng.choice(ms): Fraction(1)}
            else:
                w = [rng.randint(0, 4) for _ in ms]
                if not any(w):
                    w[rng.randrange(len(w))] = 1
                loc[cell] = {m: Fraction(x, sum(w)) for m, x in zip(ms, w)}
        strategies[key] = loc
    return GeneralizedProfile(strategies)
