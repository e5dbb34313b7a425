"""Gluing a game with awareness into one standard extensive game.

Nature first picks a member game; each member contributes its playable
histories, and player ``i`` believing itself in game ``G'`` becomes the
composite player ``i@G'``.  Nash equilibria of the glued game correspond to
generalized Nash equilibria of the game with awareness.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .awareness import Belief, GameWithAwareness, reachable_closure
from .core import NATURE, ROOT, ExtensiveGame, History, fmt
from .profiles import GeneralizedProfile, ProfileError, profile_domain, uniform_profile

SELECTOR = "game:"


class GlueError(ValueError):
    pass


def selector(gid: str) -> str:
    return SELECTOR + gid


def glue_player(player: str, gid: str) -> str:
    return f"{player}@{gid}"


def glue_cell(gid: str, cell: str) -> str:
    return f"{gid}/{cell}"


def prune(gs: GameWithAwareness, gid: str) -> frozenset[History]:
    """Histories of ``gid`` that can actually be played.

    A history survives if every player move on it is available at every
    history of the information set the mover believes it is in.
    """
    g = gs.games[gid].game
    step_ok: dict[tuple[History, str], bool] = {}

    def allowed(h1: History, m: str) -> bool:
        key = (h1, m)
        if key not in step_ok:
            ok = True
            if g.to_move.get(h1) in g.players:
                tgt, cell = gs.beliefs[(gid, h1)]
                g2 = gs.games[tgt].game
                ok = all(h2 + (m,) in g2.histories for h2 in g2.cell(cell))
            step_ok[key] = ok
        return step_ok[key]

    kept: set[History] = set()
    for h in sorted(g.histories, key=len):
        if not h or (h[:-1] in kept and allowed(h[:-1], h[-1])):
            kept.add(h)
    return frozenset(kept)


@dataclass(frozen=True)
class GlueGame:
    game: ExtensiveGame
    nu: Mapping[str, Fraction]
    players: Mapping[str, tuple[str, str]]
    cells: Mapping[str, Belief]
    to_source: Mapping[History, tuple[str, History]]
    from_source: Mapping[tuple[str, History], History]

    def cell_name(self, belief: Belief) -> str:
        return glue_cell(*belief)


def _check_nu(gs: GameWithAwareness, nu: Mapping[str, Fraction]) -> dict[str, Fraction]:
    nu = {g: Fraction(q) for g, q in nu.items()}
    unknown = set(nu) - set(gs.games)
    if unknown:
        raise GlueError(f"nu mentions unknown games {sorted(unknown)}")
    if any(q <= 0 for q in nu.values()):
        raise GlueError("nu must be strictly positive on every game it lists")
    if sum(nu.values(), Fraction(0)) != 1:
        raise GlueError("nu must sum to 1")
    for (src, _), (tgt, _) in gs.beliefs.items():
        if src in nu and tgt not in nu:
            raise GlueError(f"nu omits {tgt}, which {src} refers to")
    return nu


def uniform_nu(gs: GameWithAwareness) -> dict[str, Fraction]:
    closure = sorted(reachable_closure(gs))
    return {gid: Fraction(1, len(closure)) for gid in closure}


def full_nu(gs: GameWithAwareness) -> dict[str, Fraction]:
    """Uniform over every member game, orphans included.

    Orphan games never affect payoffs in the modeler's closure, but the
    players believing themselves in them still need best responses there.
    """
    return {gid: Fraction(1, len(gs.games)) for gid in sorted(gs.games)}


def glue(gs: GameWithAwareness, nu: Mapping[str, Fraction] | None = None) -> GlueGame:
    """Build the glued standard game.

    ``nu`` defaults to the uniform distribution over the games reachable
    from the modeler's game; any explicit ``nu`` must be positive, sum to
    one, and be closed under the belief map.
    """
    nu = _check_nu(gs, uniform_nu(gs) if nu is None else nu)

    histories: set[History] = {ROOT}
    to_move: dict[History, str] = {ROOT: NATURE}
    nature: dict[History, dict[str, Fraction]] = {ROOT: {selector(g): q for g, q in nu.items()}}
    cells: dict[str, dict[str, set[History]]] = {}
    cell_map: dict[str, Belief] = {}
    players: dict[str, tuple[str, str]] = {}
    to_source: dict[History, tuple[str, History]] = {}
    runs: list[tuple[str, History]] = []
    moves: set[str] = {selector(g) for g in nu}

    for gid in sorted(nu):
        g = gs.games[gid].game
        kept = prune(gs, gid)
        for h in sorted(kept):
            gh = (selector(gid),) + h
            histories.add(gh)
            moves.update(h)
            to_source[gh] = (gid, h)
            mover = g.to_move.get(h)
            if mover is None:
                runs.append((gid, h))
                continue
            if not any(h + (m,) in kept for m in g.children[h]):
                raise GlueError(f"pruning leaves {fmt(h)} in {gid} without moves")
            if mover == NATURE:
                to_move[gh] = NATURE
                nature[gh] = dict(g.nature_probs[h])
                continue
            tgt, cell = gs.beliefs[(gid, h)]
            pid = glue_player(mover, tgt)
            players[pid] = (mover, tgt)
            to_move[gh] = pid
            cname = glue_cell(tgt, cell)
            cell_map[cname] = (tgt, cell)
            cells.setdefault(pid, {}).setdefault(cname, set()).add(gh)

    payoffs: dict[str, dict[History, Fraction]] = {pid: {} for pid in players}
    for gid, z in runs:
        g = gs.games[gid].game
        gz = (selector(gid),) + z
        for pid, (i, tgt) in players.items():
            payoffs[pid][gz] = g.payoffs[i][z] if tgt == gid else Fraction(0)

    game = ExtensiveGame(frozenset(players), frozenset(moves), frozenset(histories),
                         to_move, nature, cells, payoffs)
    return GlueGame(game, nu, players, cell_map, to_source,
                    {v: k for k, v in to_source.items()})


def lift_profile(gs: GameWithAwareness, gl: GlueGame, gp: GeneralizedProfile) -> dict[str, dict[str, Fraction]]:
    """Translate a generalized profile to a behavioral profile on the glue."""
    out: dict[str, dict[str, Fraction]] = {}
    for cname, (tgt, cell) in sorted(gl.cells.items()):
        i = gs.games[tgt].game.cell_owner[cell]
        dist = gp.strategies.get((i, tgt), {}).get(cell)
        if dist is None:
            raise ProfileError(f"no local strategy for {i} at {tgt}:{cell}")
        out[cname] = dict(dist)
    return out


def cells_from_histories(gl: GlueGame, by_history: Mapping[History, Mapping[str, Fraction]]
                         ) -> dict[str, dict[str, Fraction]]:
    """Collapse a per-history glue profile to cells, rejecting non-constant ones."""
    out: dict[str, dict[str, Fraction]] = {}
    for h, dist in sorted(by_history.items()):
        cname = gl.game.cell_of.get(tuple(h))
        if cname is None:
            raise ProfileError(f"{fmt(h)} is not a player history of the glue game")
        d = {m: Fraction(q) for m, q in dist.items() if q}
        if cname in out and out[cname] != d:
            raise ProfileError(f"profile differs within glue cell {cname}")
        out[cname] = d
    return out


def lower_profile(gs: GameWithAwareness, gl: GlueGame, bp,
                  fill: GeneralizedProfile | None = None) -> GeneralizedProfile:
    """Translate a glue behavioral profile back to a generalized profile.

    ``bp`` is keyed by glue cell name, or by glue history (then it must be
    constant on cells).  Classes that never occur in the glue game, because
    all their histories were pruned or lie outside ``nu``, are taken from
    ``fill`` (a generalized profile), defaulting to uniform.
    """
    if bp and isinstance(next(iter(bp)), tuple):
        bp = cells_from_histories(gl, bp)
    fill = fill if fill is not None else uniform_profile(gs)
    strategies: dict[tuple[str, str], dict[str, dict[str, Fraction]]] = {}
    for (i, tgt), classes in profile_domain(gs).items():
        local: dict[str, dict[str, Fraction]] = {}
        for cell in classes:
            cname = glue_cell(tgt, cell)
            if cname in gl.cells:
                if cname not in bp:
                    raise ProfileError(f"glue profile lacks cell {cname}")
                local[cell] = {m: Fraction(q) for m, q in bp[cname].items() if q}
            else:
                local[cell] = dict(fill.strategies[(i, tgt)][cell])
        strategies[(i, tgt)] = local
    return GeneralizedProfile(strategies)
