"""Augmented games, games with awareness, and their consistency conditions.

Condition tags follow the usual naming: ``A1``..``A12`` for augmented games,
``M1``..``M3`` for the modeler's game, ``C1``..``C10`` for the belief map,
with primed variants (``A4'``, ``C2'`` ...) under awareness of unawareness.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from .core import (NATURE, ExtensiveGame, History, ValidationReport,
                   fmt, is_prefix, prefixes, project, same_cell, validate_game)

PLAIN = "plain"
AU = "au"


@dataclass(frozen=True)
class AugmentedGame:
    game: ExtensiveGame
    awareness: Mapping[str, Mapping[History, frozenset[History]]]
    mode: str = PLAIN

    def __post_init__(self) -> None:
        object.__setattr__(self, "awareness", {
            i: {tuple(h): frozenset(tuple(x) for x in a) for h, a in lv.items()}
            for i, lv in self.awareness.items()})
        if self.mode not in (PLAIN, AU):
            raise ValueError(f"unknown mode {self.mode!r}")

    def aware(self, player: str, h: History) -> frozenset[History] | None:
        return self.awareness.get(player, {}).get(h)


def virtual_histories(aug: AugmentedGame, underlying: ExtensiveGame) -> frozenset[History]:
    """Histories of ``aug`` that contain a virtual move.

    Empty for plain games.  Computed by one pass in order of length: a
    history is virtual if its parent is, or if it ends in a move outside
    the underlying alphabet made by a player, or by nature where the
    underlying game also has nature moving.
    """
    if aug.mode != AU:
        return frozenset()
    g = aug.game
    outside = g.moves - underlying.moves
    virtual: set[History] = set()
    for h in sorted(g.histories, key=len):
        if not h:
            continue
        parent, m = h[:-1], h[-1]
        if parent in virtual:
            virtual.add(h)
        elif m in outside:
            mover = g.to_move.get(parent)
            if mover in g.players:
                virtual.add(h)
            elif mover == NATURE and underlying.to_move.get(project(parent, underlying.moves)) == NATURE:
                virtual.add(h)
    return frozenset(virtual)


class _View:
    """Per-game derived data used by the validators."""

    def __init__(self, aug: AugmentedGame, underlying: ExtensiveGame):
        self.aug = aug
        self.g = aug.game
        self.u = underlying
        self.virtual = virtual_histories(aug, underlying)
        self._bars: dict[History, History] = {}

    def bar(self, h: History) -> History:
        b = self._bars.get(h)
        if b is None:
            b = project(h, self.u.moves, self.virtual)
            self._bars[h] = b
        return b

    def u_moves(self, h: History) -> frozenset[str]:
        return frozenset(self.u.children.get(h, ()))


def _closed(a: frozenset[History]) -> bool:
    return all(h[:-1] in a for h in a if h)


def validate_augmented(aug: AugmentedGame, underlying: ExtensiveGame,
                       gid: str | None = None) -> ValidationReport:
    """Check A1-A12 (plain) or their awareness-of-unawareness variants."""
    rep = ValidationReport()
    v = _View(aug, underlying)
    g, u = v.g, underlying
    au = aug.mode == AU
    t4, t5, t8 = ("A4'", "A5'", "A8'") if au else ("A4", "A5", "A8")

    for bad in validate_game(g):
        rep.add("A1", bad.where, f"{bad.tag}: {bad.detail}", gid)
    if not rep.ok:
        return rep

    for i in sorted(set(aug.awareness) | g.players):
        levels = aug.awareness.get(i, {})
        own = set(g.player_histories(i))
        if i not in g.players:
            rep.add("A2", i, "awareness for a non-player", gid)
            continue
        for h in sorted(own - set(levels)):
            rep.add("A2", fmt(h), f"no awareness level for {i}", gid)
        for h in sorted(set(levels) - own):
            rep.add("A2", fmt(h), f"awareness level for {i} where {i} does not move", gid)
        for h in sorted(set(levels) & own):
            a = levels[h]
            if not a <= u.histories:
                rep.add("A2", fmt(h), f"{i} aware of non-histories of the underlying game", gid)
            elif not _closed(a):
                rep.add("A2", fmt(h), f"awareness of {i} not prefix-closed", gid)

    for i in sorted(g.players - u.players):
        rep.add("A3", i, "player not in the underlying game", gid)

    for h in g.ordered:
        mover = g.to_move.get(h)
        if mover is None or (au and h in v.virtual):
            continue
        hb = v.bar(h)
        here = set(g.children[h])
        if mover in g.players:
            if u.to_move.get(hb) != mover:
                rep.add(t4, fmt(h), f"mover {mover} but underlying {fmt(hb)} has {u.to_move.get(hb)}", gid)
            allowed = set(v.u_moves(hb)) | (set(g.moves - u.moves) if au else set())
            if not here <= allowed:
                rep.add(t4, fmt(h), f"moves {sorted(here - allowed)} not available at {fmt(hb)}", gid)
        else:
            if u.to_move.get(hb) == NATURE:
                allowed = set(v.u_moves(hb)) | (set(g.moves - u.moves) if au else set())
                ok = here <= allowed or (not au and not here & u.moves)
            else:
                ok = not here & u.moves
            if not ok:
                rep.add(t5, fmt(h), "nature moves neither copy the underlying chance node nor are awareness moves", gid)

    for i in sorted(g.infosets):
        for name in sorted(g.infosets[i]):
            cell = sorted(g.infosets[i][name])
            levels = {aug.aware(i, h) for h in cell}
            if len(levels) > 1:
                rep.add("A6", name, "awareness differs within the cell", gid)
            members = [h for h in cell if not (au and h in v.virtual)]
            for x in members:
                for y in members:
                    if x < y and not same_cell(u, v.bar(x), v.bar(y)):
                        rep.add(t8, name, f"{fmt(v.bar(x))} and {fmt(v.bar(y))} differ in the underlying game", gid)

    for i in sorted(g.players):
        for h in g.player_histories(i):
            a = aug.aware(i, h)
            if a is None:
                continue
            for h1 in prefixes(h)[:-1]:
                if g.to_move.get(h1) == i:
                    a1 = aug.aware(i, h1)
                    if a1 is not None and not a1 <= a:
                        rep.add("A7", fmt(h), f"{i} forgets histories known at {fmt(h1)}", gid)

    for i in sorted(g.players):
        both = [h for h in g.player_histories(i) if h in u.histories]
        for x in both:
            for y in both:
                if x < y and same_cell(u, x, y) and g.cell_of.get(x) != g.cell_of.get(y):
                    rep.add("A9", fmt(x), f"{fmt(y)} shares an underlying cell but not a cell here", gid)

    seen: set[frozenset[History]] = set()
    for i in sorted(g.players):
        for h in g.player_histories(i):
            a = aug.aware(i, h)
            if a is None or a in seen:
                continue
            seen.add(a)
            for cells in u.infosets.values():
                for name, cell in sorted(cells.items()):
                    inside = [x for x in sorted(cell) if x in a]
                    nexts = {frozenset(m for m in u.children[x] if x + (m,) in a) for x in inside}
                    if len(nexts) > 1:
                        rep.add("A10", fmt(h), f"awareness of {i} splits moves within underlying cell {name}", gid)

    if not au:
        for z in sorted(g.runs):
            if project(z, u.moves) not in u.runs:
                rep.add("A11", fmt(z), "projection is not an underlying run", gid)
        checked: set[frozenset[History]] = set()
        for i in sorted(g.players):
            for h in g.player_histories(i):
                a = aug.aware(i, h)
                if a is None or a in checked:
                    continue
                checked.add(a)
                for x in sorted(a):
                    maximal = not any(y != x and is_prefix(x, y) for y in a)
                    if maximal and x not in u.runs:
                        rep.add("A11", fmt(h), f"{i}'s awareness ends at non-run {fmt(x)}", gid)

    for z in sorted(g.runs):
        zb = v.bar(z)
        if zb not in u.runs:
            continue
        for i in sorted(g.players):
            mine, theirs = g.payoffs.get(i, {}).get(z), u.payoffs.get(i, {}).get(zb)
            if mine is not None and theirs is not None and mine != theirs:
                rep.add("A12", fmt(z), f"u_{i} = {mine} but underlying {fmt(zb)} pays {theirs}", gid)
    return rep


Belief = tuple[str, str]


@dataclass(frozen=True)
class GameWithAwareness:
    """A family of augmented games, the modeler's game and the belief map.

    ``beliefs`` maps ``(game id, history)`` at every player history to
    ``(game id, cell name)`` of the game and information set the mover
    believes in.
    """

    underlying: ExtensiveGame
    games: Mapping[str, AugmentedGame]
    modeler: str
    beliefs: Mapping[tuple[str, History], Belief]
    mode: str = PLAIN

    def __post_init__(self) -> None:
        object.__setattr__(self, "beliefs",
                           {(gid, tuple(h)): tuple(t) for (gid, h), t in self.beliefs.items()})

    def belief(self, gid: str, h: History) -> Belief | None:
        return self.beliefs.get((gid, h))

    def mover(self, gid: str, h: History) -> str | None:
        return self.games[gid].game.to_move.get(h)

    @cached_property
    def virtuals(self) -> dict[str, frozenset[History]]:
        return {gid: virtual_histories(aug, self.underlying) for gid, aug in self.games.items()}

    def bar(self, gid: str, h: History) -> History:
        return project(h, self.underlying.moves, self.virtuals[gid])

    def cell_members(self, gid: str, cell: str) -> frozenset[History]:
        return self.games[gid].game.cell(cell)

    def cell_moves(self, gid: str, cell: str) -> list[str]:
        g = self.games[gid].game
        h = min(g.cell(cell))
        return list(g.children[h])

    @cached_property
    def players(self) -> list[str]:
        return sorted(self.underlying.players)


def _check_beliefs_domain(gs: GameWithAwareness, rep: ValidationReport) -> set[tuple[str, History]]:
    """Report F-domain problems; return the entries usable by the C-checks."""
    good: set[tuple[str, History]] = set()
    for gid in sorted(gs.games):
        g = gs.games[gid].game
        for h in g.ordered:
            if g.to_move.get(h) in g.players and (gid, h) not in gs.beliefs:
                rep.add("F-domain", fmt(h), "belief map undefined", gid)
    for (gid, h), (tgt, cell) in sorted(gs.beliefs.items()):
        if gid not in gs.games:
            rep.add("F-domain", fmt(h), f"unknown source game {gid!r}")
            continue
        g = gs.games[gid].game
        i = g.to_move.get(h)
        if i not in g.players:
            rep.add("F-domain", fmt(h), "belief at a history where no player moves", gid)
            continue
        if tgt not in gs.games:
            rep.add("F-domain", fmt(h), f"unknown target game {tgt!r}", gid)
            continue
        owner = gs.games[tgt].game.cell_owner.get(cell)
        if owner != i:
            rep.add("F-domain", fmt(h), f"{cell!r} is not an {i}-information set of {tgt}", gid)
            continue
        good.add((gid, h))
    return good


def _check_modeler(gs: GameWithAwareness, rep: ValidationReport) -> None:
    u = gs.underlying
    gm = gs.games[gs.modeler].game
    gid = gs.modeler
    if gm.players != u.players:
        rep.add("M1", "players", f"{sorted(gm.players)} != {sorted(u.players)}", gid)
    if not u.moves <= gm.moves:
        rep.add("M2", "moves", f"missing {sorted(u.moves - gm.moves)}", gid)
    if {project(z, u.moves) for z in gm.runs} != set(u.runs):
        rep.add("M2", "runs", "projected runs differ from the underlying runs", gid)
    for h in gm.ordered:
        mover = gm.to_move.get(h)
        if mover is None:
            continue
        hb = project(h, u.moves)
        here = set(gm.children[h])
        under = set(u.children.get(hb, ()))
        if mover in u.players:
            if here != under:
                rep.add("M3", fmt(h), f"modeler offers {sorted(here)}, underlying {sorted(under)}", gid)
        elif mover == NATURE and here & u.moves:
            if here != under or dict(gm.nature_probs.get(h, {})) != dict(u.nature_probs.get(hb, {})):
                rep.add("M3", fmt(h), "chance node differs from the underlying one", gid)
    if gs.virtuals[gid] or (gs.games[gid].mode == AU and gm.moves - u.moves - _awareness_moves(gm, u)):
        rep.add("M-virtual", "moves", "modeler's game contains virtual moves", gid)


def _awareness_moves(g: ExtensiveGame, u: ExtensiveGame) -> set[str]:
    out: set[str] = set()
    for h, mover in g.to_move.items():
        if mover == NATURE and not set(g.children[h]) & u.moves:
            out.update(g.children[h])
    return out


def _c_checks(gs: GameWithAwareness, gid: str, h: History, rep: ValidationReport) -> None:
    au = gs.mode == AU
    u = gs.underlying
    src = gs.games[gid]
    gp = src.game
    i = gp.to_move[h]
    a = src.aware(i, h) or frozenset()
    tgt, cname = gs.beliefs[(gid, h)]
    dst = gs.games[tgt]
    gh = dst.game
    I = sorted(gh.cell(cname))
    vsrc, vdst = gs.virtuals[gid], gs.virtuals[tgt]
    where = f"F({fmt(h)})"

    def tag(base: str) -> str:
        return base + "'" if au and base in ("C1", "C2", "C6") else base

    def bar_src(x: History) -> History:
        return gs.bar(gid, x)

    def bar_dst(x: History) -> History:
        return gs.bar(tgt, x)

    proj = {bar_dst(x) for x in gh.histories if not (au and x in vdst)}
    if proj != set(a):
        rep.add(tag("C1"), where, f"{tgt} projects to {len(proj)} histories, awareness has {len(a)}", gid)

    for x in gh.ordered:
        j = gh.to_move.get(x)
        if j not in gh.players:
            continue
        aj = dst.aware(j, x)
        if aj is not None and not aj <= a:
            rep.add(tag("C2"), where, f"{j} at {fmt(x)} in {tgt} aware of more than {i}", gid)
        here = set(gh.children[x])
        if not (au and x in vdst):
            xb = bar_dst(x)
            under = set(u.children.get(xb, ()))
            expect = {m for m in under if xb + (m,) in a}
            if au:
                expect |= here - under
            if expect != here:
                rep.add(tag("C2"), where, f"moves at {fmt(x)} in {tgt} are {sorted(here)}, expected {sorted(expect)}", gid)
        if au:
            b = gs.belief(tgt, x)
            if b is not None and b[0] in gs.games and b[1] in gs.games[b[0]].game.cell_owner:
                g2 = gs.games[b[0]].game
                for y in g2.cell(b[1]):
                    if not set(g2.children[y]) <= here:
                        rep.add("C2'", where, f"{b[0]}:{b[1]} offers moves missing at {fmt(x)} in {tgt}", gid)
                        break

    own_cell = gp.cell(gp.cell_of[h])
    for x in sorted(own_cell):
        xb = bar_src(x)
        if xb in a and not any(bar_dst(y) == xb for y in I):
            rep.add("C3", where, f"no history of {cname} projects to {fmt(xb)}", gid)

    for y in I:
        if dst.aware(i, y) != a:
            rep.add("C4", where, f"{i}'s awareness at {fmt(y)} in {tgt} differs", gid)
        if gs.belief(tgt, y) != (tgt, cname):
            rep.add("C4", where, f"F({tgt},{fmt(y)}) is not ({tgt},{cname})", gid)

    for x in gp.player_histories(i):
        if x == h or src.aware(i, x) != a:
            continue
        fx = gs.belief(gid, x)
        if fx is None:
            continue
        if gp.cell_of.get(x) == gp.cell_of.get(h) and fx != (tgt, cname):
            rep.add("C5", where, f"F differs at {fmt(x)} in the same cell", gid)
        elif (is_prefix(x, h) or is_prefix(h, x)) and fx[0] != tgt:
            rep.add("C5", where, f"game changes at {fmt(x)} with unchanged awareness", gid)

    for y in I:
        if au and (h in vsrc or y in vdst):
            continue
        if not same_cell(u, bar_src(h), bar_dst(y)):
            rep.add(tag("C6"), where, f"{fmt(bar_src(h))} and {fmt(bar_dst(y))} differ in the underlying game", gid)

    if tgt == gid and set(I) != set(own_cell):
        rep.add("C7", where, f"{cname} is not the cell of {fmt(h)}", gid)

    # Strict prefixes only: the history itself is covered by C4, which
    # requires F to map every member of I back to (target, I).
    def signature(game_id: str, x: History) -> dict[Belief, frozenset[str]]:
        gg = gs.games[game_id].game
        sig: dict[Belief, set[str]] = {}
        for x1 in prefixes(x)[:-1]:
            if gg.to_move.get(x1) != i:
                continue
            f = gs.belief(game_id, x1)
            if f is None:
                continue
            sig.setdefault(f, set()).add(x[len(x1)])
        return {k: frozenset(s) for k, s in sig.items()}

    mine = signature(gid, h)
    for y in I:
        if signature(tgt, y) != mine:
            rep.add("C8", where, f"belief history at {fmt(y)} in {tgt} does not match", gid)

    def playable(y: History) -> bool:
        for k in range(len(y)):
            y1, m = y[:k], y[k]
            if gh.to_move.get(y1) not in gh.players:
                continue
            f = gs.belief(tgt, y1)
            if f is None or f[0] not in gs.games:
                return False
            g2 = gs.games[f[0]].game
            if f[1] not in g2.cell_owner:
                return False
            if any(z + (m,) not in g2.histories for z in g2.cell(f[1])):
                return False
        return True

    if not any(playable(y) for y in I):
        rep.add("C9", where, f"every history of {cname} uses a move some mover is believed unaware of", gid)

    shared = [x for x in gp.player_histories(i) if gh.to_move.get(x) == i]
    for x in shared:
        for y in shared:
            if x < y and (gp.cell_of.get(x) == gp.cell_of.get(y)) != (gh.cell_of.get(x) == gh.cell_of.get(y)):
                rep.add("C10", where, f"{fmt(x)} and {fmt(y)} are grouped differently in {gid} and {tgt}", gid)


def validate_with_awareness(gs: GameWithAwareness) -> ValidationReport:
    """Validate a game with awareness: A-conditions, then M, then C.

    The C-conditions are only meaningful on A-valid games, so they are
    skipped (with a warning) when any member game fails.
    """
    rep = ValidationReport()
    u = gs.underlying
    for bad in validate_game(u):
        rep.add("underlying", bad.where, f"{bad.tag}: {bad.detail}")
    if gs.modeler not in gs.games:
        rep.add("F-domain", gs.modeler, "modeler's game missing")
        return rep
    if not rep.ok:
        return rep

    a_fail = False
    for gid in sorted(gs.games):
        aug = gs.games[gid]
        if aug.mode != gs.mode:
            rep.add("mode", gid, f"game mode {aug.mode} differs from bundle mode {gs.mode}", gid)
            a_fail = True
            continue
        sub = validate_augmented(aug, u, gid)
        a_fail = a_fail or not sub.ok
        rep.extend(sub)
    if a_fail:
        rep.warnings.append("C-conditions skipped: member games fail A-conditions")
        return rep

    _check_modeler(gs, rep)
    good = _check_beliefs_domain(gs, rep)
    for gid, h in sorted(good):
        _c_checks(gs, gid, h, rep)
    for gid in sorted(orphans(gs)):
        rep.warnings.append(f"game {gid} is not reachable from the modeler's game")
    return rep


def canonical(g: ExtensiveGame, gid: str = "Gm") -> GameWithAwareness:
    """Embed a standard game: everyone aware of everything, beliefs self-directed."""
    everything = frozenset(g.histories)
    awareness = {i: {h: everything for h in g.player_histories(i)} for i in g.players}
    beliefs = {(gid, h): (gid, g.cell_of[h])
               for i in g.players for h in g.player_histories(i)}
    return GameWithAwareness(g, {gid: AugmentedGame(g, awareness)}, gid, beliefs)


def reachable_closure(gs: GameWithAwareness) -> frozenset[str]:
    seen = {gs.modeler}
    frontier = [gs.modeler]
    while frontier:
        gid = frontier.pop()
        for (src, _), (tgt, _) in gs.beliefs.items():
            if src == gid and tgt not in seen:
                seen.add(tgt)
                frontier.append(tgt)
    return frozenset(seen)


def orphans(gs: GameWithAwareness) -> frozenset[str]:
    return frozenset(gs.games) - reachable_closure(gs)


def games_of(gs: GameWithAwareness, player: str) -> frozenset[str]:
    """Games the player takes to be the real one at some history."""
    return frozenset(tgt for (gid, h), (tgt, _) in gs.beliefs.items()
                     if gid in gs.games and gs.mover(gid, h) == player)


def generalized_partition(gs: GameWithAwareness, player: str
                          ) -> dict[Belief, frozenset[tuple[str, History]]]:
    """Classes of pairs ``(game, history)`` grouped by their belief image."""
    classes: dict[Belief, set[tuple[str, History]]] = {}
    for (gid, h), f in sorted(gs.beliefs.items()):
        if gid in gs.games and gs.mover(gid, h) == player:
            classes.setdefault(f, set()).add((gid, h))
    return {f: frozenset(s) for f, s in sorted(classes.items())}
