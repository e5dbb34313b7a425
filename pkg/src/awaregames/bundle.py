"""JSON bundle and profile files.

A bundle serializes a game with awareness.  Rationals are written as
``"num/den"`` strings; in bundles they may also be arithmetic expressions
over named ``parameters`` (e.g. ``"1-p"``).  Histories are arrays of move
tokens.  See ``README.md`` for the full layout.
"""
from __future__ import annotations

import ast
import json
import operator
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .awareness import AU, PLAIN, AugmentedGame, GameWithAwareness
from .core import NATURE, ExtensiveGame, History, is_prefix
from .profiles import GeneralizedProfile

FORMAT_VERSION = 1


class BundleError(ValueError):
    pass


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub,
        ast.Mult: operator.mul, ast.Div: operator.truediv}


def parse_rational(value: Any, params: Mapping[str, Fraction] | None = None) -> Fraction:
    """Parse an int or a string such as ``"3/10"`` or ``"1-p"`` exactly."""
    params = params or {}
    if isinstance(value, bool):
        raise BundleError(f"not a number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        raise BundleError(f"floats are not allowed, write {value!r} as a string fraction")
    if not isinstance(value, str):
        raise BundleError(f"not a rational: {value!r}")
    try:
        tree = ast.parse(value.strip(), mode="eval")
    except SyntaxError as exc:
        raise BundleError(f"bad rational expression {value!r}") from exc

    def ev(node: ast.AST) -> Fraction:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return Fraction(str(node.value))
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise BundleError(f"unbound parameter {node.id!r}")
            return params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            right = ev(node.right)
            if isinstance(node.op, ast.Div) and right == 0:
                raise BundleError(f"division by zero in {value!r}")
            return _OPS[type(node.op)](ev(node.left), right)
        raise BundleError(f"unsupported expression {value!r}")

    return ev(tree)


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _hist(raw: Any, moves: frozenset[str], ctx: str) -> History:
    if not isinstance(raw, list) or not all(isinstance(m, str) for m in raw):
        raise BundleError(f"{ctx}: history must be an array of move tokens")
    unknown = [m for m in raw if m not in moves]
    if unknown:
        raise BundleError(f"{ctx}: unknown moves {unknown}")
    return tuple(raw)


def _need(obj: Mapping, key: str, ctx: str) -> Any:
    if key not in obj:
        raise BundleError(f"{ctx}: missing field {key!r}")
    return obj[key]


def game_from_obj(obj: Mapping, params: Mapping[str, Fraction], ctx: str = "game") -> ExtensiveGame:
    players = frozenset(_need(obj, "players", ctx))
    moves = frozenset(_need(obj, "moves", ctx))
    histories: set[History] = set()
    to_move: dict[History, str] = {}
    nature: dict[History, dict[str, Fraction]] = {}
    for k, node in enumerate(_need(obj, "nodes", ctx)):
        nctx = f"{ctx}.nodes[{k}]"
        h = _hist(_need(node, "history", nctx), moves, nctx)
        if h in histories:
            raise BundleError(f"{nctx}: duplicate history {list(h)}")
        histories.add(h)
        mover = _need(node, "player", nctx)
        to_move[h] = mover
        if mover == NATURE:
            probs = _need(node, "probs", nctx)
            nature[h] = {m: parse_rational(q, params) for m, q in probs.items()}
    payoffs: dict[str, dict[History, Fraction]] = {}
    for k, out in enumerate(_need(obj, "outcomes", ctx)):
        octx = f"{ctx}.outcomes[{k}]"
        z = _hist(_need(out, "history", octx), moves, octx)
        if z in histories:
            raise BundleError(f"{octx}: duplicate history {list(z)}")
        histories.add(z)
        for i, u in _need(out, "payoffs", octx).items():
            payoffs.setdefault(i, {})[z] = parse_rational(u, params)
    infosets: dict[str, dict[str, frozenset[History]]] = {}
    for i, cells in obj.get("infosets", {}).items():
        infosets[i] = {name: frozenset(_hist(h, moves, f"{ctx}.infosets.{name}") for h in hs)
                       for name, hs in cells.items()}
    return ExtensiveGame(players, moves, frozenset(histories), to_move, nature, infosets, payoffs)


def game_to_obj(g: ExtensiveGame) -> dict:
    nodes, outcomes = [], []
    for h in g.ordered:
        if h in g.runs:
            outcomes.append({"history": list(h),
                             "payoffs": {i: fraction_str(g.payoffs[i][h])
                                         for i in sorted(g.payoffs) if h in g.payoffs[i]}})
            continue
        node: dict[str, Any] = {"history": list(h), "player": g.to_move.get(h)}
        if h in g.nature_probs:
            node["probs"] = {m: fraction_str(q) for m, q in sorted(g.nature_probs[h].items())}
        nodes.append(node)
    return {
        "players": sorted(g.players),
        "moves": sorted(g.moves),
        "nodes": nodes,
        "outcomes": outcomes,
        "infosets": {i: {name: [list(h) for h in sorted(cell)] for name, cell in sorted(cells.items())}
                     for i, cells in sorted(g.infosets.items())},
    }


def _awareness_set(spec: Any, underlying: ExtensiveGame, ctx: str) -> frozenset[History]:
    if spec == "all":
        return frozenset(underlying.histories)
    if isinstance(spec, Mapping) and set(spec) == {"all_but"}:
        cut = [_hist(h, underlying.moves, ctx) for h in spec["all_but"]]
        return frozenset(h for h in underlying.histories if not any(is_prefix(c, h) for c in cut))
    if isinstance(spec, list):
        return frozenset(_hist(h, underlying.moves, ctx) for h in spec)
    raise BundleError(f"{ctx}: aware_of must be 'all', {{'all_but': [...]}} or a list of histories")


def bundle_from_obj(obj: Mapping, overrides: Mapping[str, Any] | None = None) -> GameWithAwareness:
    if not isinstance(obj, Mapping):
        raise BundleError("bundle must be a JSON object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleError(f"unsupported format_version {version!r}")
    if obj.get("finite", True) is not True:
        raise BundleError("only finite families of games are supported")
    mode = obj.get("mode", PLAIN)
    if mode not in (PLAIN, AU):
        raise BundleError(f"mode must be {PLAIN!r} or {AU!r}")
    params: dict[str, Fraction] = {}
    for name, raw in obj.get("parameters", {}).items():
        params[name] = parse_rational(raw, params)
    for name, raw in (overrides or {}).items():
        params[name] = parse_rational(raw, params)

    underlying = game_from_obj(_need(obj, "underlying", "bundle"), params, "underlying")
    games: dict[str, AugmentedGame] = {}
    for gid, gobj in _need(obj, "games", "bundle").items():
        ctx = f"games.{gid}"
        g = game_from_obj(gobj, params, ctx)
        awareness: dict[str, dict[History, frozenset[History]]] = {}
        for i, entries in gobj.get("awareness", {}).items():
            for k, e in enumerate(entries):
                ectx = f"{ctx}.awareness.{i}[{k}]"
                h = _hist(_need(e, "at", ectx), g.moves, ectx)
                awareness.setdefault(i, {})[h] = _awareness_set(_need(e, "aware_of", ectx), underlying, ectx)
        games[gid] = AugmentedGame(g, awareness, mode)

    modeler = _need(obj, "modeler", "bundle")
    if modeler not in games:
        raise BundleError(f"unknown modeler game {modeler!r}")
    beliefs: dict[tuple[str, History], tuple[str, str]] = {}
    for k, b in enumerate(_need(obj, "beliefs", "bundle")):
        bctx = f"beliefs[{k}]"
        src, tgt, cell = _need(b, "game", bctx), _need(b, "target", bctx), _need(b, "infoset", bctx)
        for gid in (src, tgt):
            if gid not in games:
                raise BundleError(f"{bctx}: unknown game {gid!r}")
        h = _hist(_need(b, "history", bctx), games[src].game.moves, bctx)
        if h not in games[src].game.histories:
            raise BundleError(f"{bctx}: {list(h)} is not a history of {src}")
        if cell not in games[tgt].game.cell_owner:
            raise BundleError(f"{bctx}: unknown information set {cell!r} in {tgt}")
        if (src, h) in beliefs:
            raise BundleError(f"{bctx}: duplicate belief entry")
        beliefs[(src, h)] = (tgt, cell)
    return GameWithAwareness(underlying, games, modeler, beliefs, mode)


def parse_bundle(text: str, overrides: Mapping[str, Any] | None = None) -> GameWithAwareness:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return bundle_from_obj(obj, overrides)


def load_bundle(path: str | Path, overrides: Mapping[str, Any] | None = None) -> GameWithAwareness:
    return parse_bundle(Path(path).read_text(encoding="utf-8"), overrides)


def bundle_to_obj(gs: GameWithAwareness) -> dict:
    games = {}
    for gid, aug in sorted(gs.games.items()):
        gobj = game_to_obj(aug.game)
        gobj["awareness"] = {
            i: [{"at": list(h), "aware_of": [list(x) for x in sorted(a)]} for h, a in sorted(lv.items())]
            for i, lv in sorted(aug.awareness.items())}
        games[gid] = gobj
    return {
        "format_version": FORMAT_VERSION,
        "mode": gs.mode,
        "parameters": {},
        "underlying": game_to_obj(gs.underlying),
        "games": games,
        "modeler": gs.modeler,
        "beliefs": [{"game": gid, "history": list(h), "target": t, "infoset": c}
                    for (gid, h), (t, c) in sorted(gs.beliefs.items())],
    }


def serialize_bundle(gs: GameWithAwareness) -> str:
    return json.dumps(bundle_to_obj(gs), indent=2, sort_keys=False) + "\n"


def profile_from_obj(obj: Mapping) -> GeneralizedProfile:
    if obj.get("format_version", FORMAT_VERSION) != FORMAT_VERSION:
        raise BundleError("unsupported profile format_version")
    strategies: dict = {}
    for i, per_game in _need(obj, "strategies", "profile").items():
        for gid, classes in per_game.items():
            local = {}
            for cell, dist in classes.items():
                if isinstance(dist, str):
                    local[cell] = {dist: Fraction(1)}
                else:
                    local[cell] = {m: parse_rational(q) for m, q in dist.items()}
                    if sum(local[cell].values(), Fraction(0)) != 1:
                        raise BundleError(f"profile {i}/{gid}/{cell} does not sum to 1")
            strategies[(i, gid)] = local
    return GeneralizedProfile(strategies)


def parse_profile(text: str) -> GeneralizedProfile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return profile_from_obj(obj)


def load_profile(path: str | Path) -> GeneralizedProfile:
    return parse_profile(Path(path).read_text(encoding="utf-8"))


def profile_to_obj(gp: GeneralizedProfile) -> dict:
    out: dict = {}
    for (i, gid), loc in sorted(gp.strategies.items()):
        out.setdefault(i, {})[gid] = {c: {m: fraction_str(q) for m, q in sorted(d.items())}
                                      for c, d in sorted(loc.items())}
    return {"format_version": FORMAT_VERSION, "strategies": out}


def serialize_profile(gp: GeneralizedProfile) -> str:
    return json.dumps(profile_to_obj(gp), indent=2) + "\n"


def load_nu(path: str | Path) -> dict[str, Fraction]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    return {gid: parse_rational(q) for gid, q in obj.items()}
