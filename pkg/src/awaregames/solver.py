"""Finding generalized Nash equilibria through the glued game.

``solve`` first enumerates pure profiles of the glued game (when small
enough) and checks each as a standard Nash equilibrium.  Otherwise it runs
regret matching on the glued game in floating point and periodically
rounds the average strategy to nearby rationals, accepting a candidate only
after exact verification on the game with awareness.
"""
from __future__ import annotations

import logging
import random
from fractions import Fraction
from itertools import product
from typing import Mapping

from .awareness import GameWithAwareness
from .core import NATURE, ROOT, ExtensiveGame, History
from .equilibrium import (EnumerationBoundError, EquilibriumReport, behavior_eu, max_enum,
                          verify_generalized_nash)
from .glue import GlueGame, full_nu, glue, lower_profile
from .profiles import GeneralizedProfile, iter_pure, profile_domain

log = logging.getLogger(__name__)

DEFAULT_EPSILON = Fraction(1, 10**6)
DEFAULT_MAX_ITERS = 10**5
DENOMINATORS = (2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 50, 100, 1000, 10**4)


def _glue_pure_count(gl: GlueGame) -> int:
    n = 1
    for cells in gl.game.infosets.values():
        for members in cells.values():
            n *= len(gl.game.children[min(members)])
    return n


def _is_pure_nash(g: ExtensiveGame, prof: dict[str, dict[str, Fraction]]) -> bool:
    """Exact Nash check of a pure glue profile, stopping at the first gain.

    Single-cell deviations are tried first since they reject most profiles;
    then every pure strategy of each player.
    """
    base = {i: behavior_eu(g, prof, i) for i in g.players}
    moves = {c: g.children[min(ms)] for cs in g.infosets.values() for c, ms in cs.items()}
    for i in sorted(g.players):
        for c in sorted(g.infosets.get(i, {})):
            for m in moves[c]:
                if m not in prof[c] and behavior_eu(g, {**prof, c: {m: Fraction(1)}}, i) > base[i]:
                    return False
    for i in sorted(g.players):
        cells = sorted(g.infosets.get(i, {}))
        if len(cells) < 2:
            continue
        for picks in product(*(moves[c] for c in cells)):
            dev = {**prof, **{c: {m: Fraction(1)} for c, m in zip(cells, picks)}}
            if behavior_eu(g, dev, i) > base[i]:
                return False
    return True


def pure_prepass(gs: GameWithAwareness, nu: Mapping[str, Fraction] | None = None,
                 bound: int | None = None) -> list[GeneralizedProfile]:
    """Pure generalized equilibria found via pure Nash equilibria of the glue.

    ``nu`` defaults to uniform over all member games so that the
    correspondence with generalized equilibria also covers orphan games.
    Classes absent from the glued game cannot affect any payoff, so every
    choice there is expanded.
    """
    bound = max_enum() if bound is None else bound
    gl = glue(gs, full_nu(gs) if nu is None else nu)
    g = gl.game
    cells = [(c, g.children[min(m)]) for cs in g.infosets.values() for c, m in cs.items()]
    if _glue_pure_count(gl) > bound:
        raise EnumerationBoundError("glue game too large for pure enumeration")
    found: set[GeneralizedProfile] = set()
    missing = [(i, gid, c, ms) for (i, gid), classes in profile_domain(gs).items()
               for c, ms in classes.items() if f"{gid}/{c}" not in gl.cells]
    for picks in product(*(ms for _, ms in cells)):
        prof = {c: {m: Fraction(1)} for (c, _), m in zip(cells, picks)}
        if _is_pure_nash(g, prof):
            for fill_picks in product(*(ms for *_, ms in missing)):
                base = lower_profile(gs, gl, prof)
                strategies = {k: dict(v) for k, v in base.strategies.items()}
                for (i, gid, c, _), m in zip(missing, fill_picks):
                    strategies[(i, gid)][c] = {m: Fraction(1)}
                found.add(GeneralizedProfile(strategies))
    order = {gp: k for k, gp in enumerate(iter_pure(gs))}
    return sorted(found, key=lambda gp: order.get(gp, len(order)))


class RegretMatching:
    """Simultaneous-update counterfactual regret matching (CFR+ style)."""

    def __init__(self, game: ExtensiveGame, seed: int | None = None):
        self.g = game
        self.players = sorted(game.players)
        self.moves = {c: game.children[min(ms)] for cs in game.infosets.values()
                      for c, ms in cs.items()}
        rng = random.Random(seed)
        self.regret = {c: [rng.random() * 1e-3 if seed is not None else 0.0 for _ in ms]
                       for c, ms in self.moves.items()}
        self.avg = {c: [0.0] * len(ms) for c, ms in self.moves.items()}
        self.iterations = 0

    def current(self, cell: str) -> list[float]:
        r = [max(x, 0.0) for x in self.regret[cell]]
        s = sum(r)
        n = len(r)
        return [x / s for x in r] if s > 0 else [1.0 / n] * n

    def _walk(self, h: History, reach: dict[str, float], chance: float) -> dict[str, float]:
        g = self.g
        if h in g.runs:
            return {p: float(g.payoffs[p][h]) for p in self.players}
        mover = g.to_move[h]
        if mover == NATURE:
            out = dict.fromkeys(self.players, 0.0)
            for m, q in g.nature_probs[h].items():
                if q:
                    sub = self._walk(h + (m,), reach, chance * float(q))
                    for p in self.players:
                        out[p] += float(q) * sub[p]
            return out
        cell = g.cell_of[h]
        sigma = self.current(cell)
        child_vals = []
        out = dict.fromkeys(self.players, 0.0)
        for m, s in zip(self.moves[cell], sigma):
            r2 = dict(reach)
            r2[mover] = reach[mover] * s
            sub = self._walk(h + (m,), r2, chance)
            child_vals.append(sub[mover])
            for p in self.players:
                out[p] += s * sub[p]
        others = chance
        for p, r in reach.items():
            if p != mover:
                others *= r
        if others > 0:
            for k, v in enumerate(child_vals):
                self.regret[cell][k] += others * (v - out[mover])
        own = reach[mover]
        w = self.iterations + 1
        for k, s in enumerate(sigma):
            self.avg[cell][k] += w * own * s
        return out

    def step(self) -> None:
        self._walk(ROOT, dict.fromkeys(self.players, 1.0), 1.0)
        for c, r in self.regret.items():
            self.regret[c] = [max(x, 0.0) for x in r]
        self.iterations += 1

    def average(self) -> dict[str, list[float]]:
        out = {}
        for c, ws in self.avg.items():
            s = sum(ws)
            out[c] = [x / s for x in ws] if s > 0 else self.current(c)
        return out


def _rationalize(probs: list[float], moves: list[str], denom: int | None) -> dict[str, Fraction] | None:
    if denom is None:
        fr = [Fraction(x) for x in probs]
    else:
        fr = [Fraction(x).limit_denominator(denom) for x in probs]
    total = sum(fr[:-1], Fraction(0))
    fr[-1] = 1 - total
    if any(q < 0 for q in fr):
        return None
    return {m: q for m, q in zip(moves, fr) if q}


def _candidates(avg: dict[str, list[float]], moves: dict[str, list[str]]):
    for denom in (*DENOMINATORS, None):
        prof = {}
        for c, ps in avg.items():
            d = _rationalize(ps, moves[c], denom)
            if d is None:
                break
            prof[c] = d
        else:
            yield prof


def solve(gs: GameWithAwareness, nu: Mapping[str, Fraction] | None = None,
          epsilon: Fraction | float = DEFAULT_EPSILON, max_iters: int = DEFAULT_MAX_ITERS,
          seed: int | None = None, bound: int | None = None, check_every: int = 50
          ) -> tuple[GeneralizedProfile, EquilibriumReport]:
    """Return a profile and its exact verification report.

    ``nu`` defaults to uniform over all member games (see ``pure_prepass``).

    The report's flag is false when no candidate within ``epsilon`` was
    found in ``max_iters`` iterations; the best candidate seen is returned.
    """
    epsilon = Fraction(epsilon)
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    try:
        pure = pure_prepass(gs, nu, bound)
    except EnumerationBoundError:
        pure = []
    if pure:
        gp = pure[0]
        return gp, verify_generalized_nash(gs, gp, 0)

    gl = glue(gs, full_nu(gs) if nu is None else nu)
    rm = RegretMatching(gl.game, seed)
    best: tuple[GeneralizedProfile, EquilibriumReport] | None = None
    while rm.iterations < max_iters:
        for _ in range(min(check_every, max_iters - rm.iterations)):
            rm.step()
        seen = set()
        for prof in _candidates(rm.average(), rm.moves):
            key = tuple(sorted((c, tuple(sorted(d.items()))) for c, d in prof.items()))
            if key in seen:
                continue
            seen.add(key)
            gp = lower_profile(gs, gl, prof)
            rep = verify_generalized_nash(gs, gp, epsilon)
            if best is None or rep.max_regret < best[1].max_regret:
                best = (gp, rep)
            if rep.ok:
                log.info("converged after %d iterations", rm.iterations)
                return gp, rep
    assert best is not None
    return best
