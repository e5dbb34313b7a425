"""Expected utilities, best responses and the generalized-Nash verifier.

Everything here is exact.  The iterative solver lives in :mod:`.solver`
and only hands candidate profiles to :func:`verify_generalized_nash`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping

from .awareness import GameWithAwareness, games_of
from .core import NATURE, ROOT, ExtensiveGame, History, fmt
from .profiles import (GeneralizedProfile, Local, ProfileError, count_pure,
                       iter_pure, profile_domain)

DEFAULT_MAX_ENUM = 10**6


class EnumerationBoundError(RuntimeError):
    pass


def max_enum() -> int:
    return int(os.environ.get("AWG_MAX_ENUM", DEFAULT_MAX_ENUM))


def _move_dist(gs: GameWithAwareness, gp: GeneralizedProfile, gid: str, h: History
               ) -> Mapping[str, Fraction]:
    g = gs.games[gid].game
    mover = g.to_move[h]
    if mover == NATURE:
        return g.nature_probs[h]
    f = gs.belief(gid, h)
    if f is None:
        raise ProfileError(f"no belief at {fmt(h)} in {gid}")
    tgt, cell = f
    loc = gp.strategies.get((mover, tgt))
    if loc is None or cell not in loc:
        raise ProfileError(f"missing local strategy for {mover} in {tgt} at {cell}")
    return loc[cell]


def run_distribution(gs: GameWithAwareness, gid: str, gp: GeneralizedProfile
                     ) -> dict[History, Fraction]:
    """Probability of every run of ``gid`` when ``gp`` is played there.

    At a player history the mover follows the local strategy for the game
    it believes it is in; moves outside that strategy's support, including
    moves the mover is unaware of, get probability zero.
    """
    g = gs.games[gid].game
    out = {z: Fraction(0) for z in g.runs}
    stack: list[tuple[History, Fraction]] = [(ROOT, Fraction(1))]
    while stack:
        h, p = stack.pop()
        if h in g.runs:
            out[h] += p
            continue
        dist = _move_dist(gs, gp, gid, h)
        for m in g.children[h]:
            q = dist.get(m, 0)
            if q:
                stack.append((h + (m,), p * q))
    return out


def expected_utility(gs: GameWithAwareness, gp: GeneralizedProfile, player: str, gid: str
                     ) -> Fraction:
    g = gs.games[gid].game
    us = g.payoffs[player]
    return sum((p * us[z] for z, p in run_distribution(gs, gid, gp).items() if p), Fraction(0))


def best_response(gs: GameWithAwareness, gp: GeneralizedProfile, player: str, gid: str
                  ) -> tuple[Local, Fraction]:
    """A pure best local strategy for ``player`` believing it plays ``gid``.

    Only histories of ``gid`` where ``player`` believes it is in ``gid``
    are under its control.  Choices are made per class by backward
    induction on counterfactual values, which is exact under perfect
    recall.  Ties go to the lexicographically smallest move; classes that
    do not occur in ``gid`` keep their values from ``gp``.
    """
    g = gs.games[gid].game
    members: dict[str, list[History]] = {}
    for h in g.player_histories(player):
        f = gs.belief(gid, h)
        if f is not None and f[0] == gid:
            members.setdefault(f[1], []).append(h)
    owner_of = {h: c for c, hs in members.items() for h in hs}

    weight: dict[History, Fraction] = {}
    stack = [(ROOT, Fraction(1))]
    while stack:
        h, w = stack.pop()
        weight[h] = w
        if h in g.runs:
            continue
        if h in owner_of:
            for m in g.children[h]:
                stack.append((h + (m,), w))
            continue
        dist = _move_dist(gs, gp, gid, h)
        for m in g.children[h]:
            stack.append((h + (m,), w * dist.get(m, 0)))

    us = g.payoffs[player]
    chosen: dict[str, str] = {}
    busy: set[str] = set()
    values: dict[History, Fraction] = {}

    def choose(cell: str) -> str:
        if cell in chosen:
            return chosen[cell]
        if cell in busy:
            raise ProfileError(f"class {cell} recurs below itself; perfect recall fails")
        busy.add(cell)
        best_m, best_q = None, None
        for m in g.children[members[cell][0]]:
            q = sum((weight[h] * value(h + (m,)) for h in members[cell] if weight[h]), Fraction(0))
            if best_q is None or q > best_q:
                best_m, best_q = m, q
        busy.discard(cell)
        chosen[cell] = best_m
        return best_m

    def value(h: History) -> Fraction:
        if h in values:
            return values[h]
        if h in g.runs:
            v = us[h]
        elif h in owner_of:
            v = value(h + (choose(owner_of[h]),))
        else:
            dist = _move_dist(gs, gp, gid, h)
            v = sum((q * value(h + (m,)) for m, q in dist.items() if q), Fraction(0))
        values[h] = v
        return v

    total = value(ROOT)
    for cell in sorted(members):
        choose(cell)
    local = {c: dict(d) for c, d in gp.strategies.get((player, gid), {}).items()}
    for cell, m in chosen.items():
        local[cell] = {m: Fraction(1)}
    return local, total


@dataclass(frozen=True)
class RegretEntry:
    player: str
    game: str
    value: Fraction
    best: Fraction
    regret: Fraction
    tie: bool = False


@dataclass
class EquilibriumReport:
    entries: list[RegretEntry] = field(default_factory=list)
    epsilon: Fraction = Fraction(0)

    @property
    def max_regret(self) -> Fraction:
        return max((e.regret for e in self.entries), default=Fraction(0))

    @property
    def ok(self) -> bool:
        return self.max_regret <= self.epsilon

    def entry(self, player: str, gid: str) -> RegretEntry:
        for e in self.entries:
            if (e.player, e.game) == (player, gid):
                return e
        raise KeyError((player, gid))

    def render(self) -> str:
        lines = []
        for e in self.entries:
            note = "  (tie: a different response does equally well)" if e.tie else ""
            lines.append(f"({e.player},{e.game}): EU={e.value} best={e.best} regret={e.regret}{note}")
        if self.ok:
            lines.append(f"max regret {self.max_regret} <= {self.epsilon}: equilibrium")
        else:
            lines.append(f"max regret {self.max_regret} > {self.epsilon}: NOT an equilibrium")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "ok": self.ok,
            "max_regret": str(self.max_regret),
            "entries": [{"player": e.player, "game": e.game, "value": str(e.value),
                         "best": str(e.best), "regret": str(e.regret), "tie": e.tie}
                        for e in self.entries],
        }


def verify_generalized_nash(gs: GameWithAwareness, gp: GeneralizedProfile,
                            epsilon: Fraction | int = 0) -> EquilibriumReport:
    """Regret of every local strategy against the rest of ``gp``.

    Ties satisfy the weak inequality.  An entry with zero regret is flagged
    as a tie when switching some reached class to a different pure move
    leaves the expected utility unchanged.
    """
    report = EquilibriumReport(epsilon=Fraction(epsilon))
    for i in gs.players:
        for gid in sorted(games_of(gs, i)):
            cur = expected_utility(gs, gp, i, gid)
            _, best = best_response(gs, gp, i, gid)
            regret = best - cur
            tie = regret == 0 and _has_tie(gs, gp, i, gid, cur)
            report.entries.append(RegretEntry(i, gid, cur, best, regret, tie))
    return report


def _reached_classes(gs: GameWithAwareness, gp: GeneralizedProfile, i: str, gid: str) -> set[str]:
    g = gs.games[gid].game
    dist = run_distribution(gs, gid, gp)
    live = {z[:k] for z, p in dist.items() if p for k in range(len(z))}
    out = set()
    for h in g.player_histories(i):
        f = gs.belief(gid, h)
        if f is not None and f[0] == gid and h in live:
            out.add(f[1])
    return out


def _has_tie(gs, gp, i, gid, cur) -> bool:
    local = gp.strategies[(i, gid)]
    for cell in sorted(_reached_classes(gs, gp, i, gid)):
        for m in gs.cell_moves(gid, cell):
            if local[cell] == {m: 1}:
                continue
            dev = gp.with_local(i, gid, {**local, cell: {m: Fraction(1)}})
            if expected_utility(gs, dev, i, gid) == cur:
                return True
    return False


def enumerate_pure_equilibria(gs: GameWithAwareness, bound: int | None = None
                              ) -> list[GeneralizedProfile]:
    """Every pure generalized profile with zero regret, exhaustively."""
    bound = max_enum() if bound is None else bound
    n = count_pure(gs)
    if n > bound:
        raise EnumerationBoundError(f"{n} pure profiles exceed the bound {bound}")
    return [gp for gp in iter_pure(gs) if verify_generalized_nash(gs, gp).ok]


# Standard games with behavioral profiles keyed by cell name.

def behavior_run_distribution(g: ExtensiveGame, profile: Mapping[str, Mapping[str, Fraction]]
                              ) -> dict[History, Fraction]:
    out = {z: Fraction(0) for z in g.runs}
    stack = [(ROOT, Fraction(1))]
    while stack:
        h, p = stack.pop()
        if h in g.runs:
            out[h] += p
            continue
        if g.to_move[h] == NATURE:
            dist = g.nature_probs[h]
        else:
            dist = profile[g.cell_of[h]]
        for m in g.children[h]:
            q = dist.get(m, 0)
            if q:
                stack.append((h + (m,), p * Fraction(q)))
    return out


def behavior_eu(g: ExtensiveGame, profile: Mapping[str, Mapping[str, Fraction]], player: str
                ) -> Fraction:
    us = g.payoffs[player]
    return sum((p * us[z] for z, p in behavior_run_distribution(g, profile).items() if p),
               Fraction(0))


def nash_regrets(g: ExtensiveGame, profile: Mapping[str, Mapping[str, Fraction]],
                 players: list[str] | None = None) -> dict[str, tuple[Fraction, Fraction]]:
    """``{player: (EU, best EU over pure deviations)}`` in a standard game.

    Best responses are found by enumerating the player's pure strategies,
    independently of the backward-induction code used for games with
    awareness.
    """
    out = {}
    for i in sorted(g.players) if players is None else players:
        cells = sorted(g.infosets.get(i, {}))
        cur = behavior_eu(g, profile, i)
        options = [g.children[min(g.infosets[i][c])] for c in cells]
        best = None
        for picks in product(*options):
            dev = dict(profile)
            dev.update({c: {m: Fraction(1)} for c, m in zip(cells, picks)})
            v = behavior_eu(g, dev, i)
            best = v if best is None or v > best else best
        out[i] = (cur, cur if best is None else best)
    return out


def profile_of_canonical(gs: GameWithAwareness, gp: GeneralizedProfile
                         ) -> dict[str, dict[str, Fraction]]:
    """Behavioral profile of the modeler's game in a canonical embedding."""
    out = {}
    for (i, gid), loc in gp.strategies.items():
        if gid == gs.modeler:
            out.update({c: dict(d) for c, d in loc.items()})
    return out


__all__ = [
    "EnumerationBoundError", "EquilibriumReport", "RegretEntry", "behavior_eu",
    "behavior_run_distribution", "best_response", "enumerate_pure_equilibria",
    "expected_utility", "max_enum", "nash_regrets", "profile_domain",
    "profile_of_canonical", "run_distribution", "verify_generalized_nash",
]
