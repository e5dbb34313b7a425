"""Command-line interface: ``awg <command> ...``.

Exit codes: 0 success, 2 invalid bundle or failed verification, 1 usage
or parse errors.  ``--json PATH`` writes a machine-readable sidecar next
to the text report.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .awareness import (GameWithAwareness, games_of, generalized_partition, orphans,
                        reachable_closure, validate_with_awareness)
from .bundle import (BundleError, fraction_str, game_to_obj, load_bundle, load_nu,
                     load_profile, parse_rational, profile_to_obj, serialize_profile)
from .core import fmt
from .equilibrium import (EnumerationBoundError, enumerate_pure_equilibria, expected_utility,
                          verify_generalized_nash)
from .glue import GlueError, glue, prune
from .profiles import ProfileError, check_profile
from .solver import DEFAULT_EPSILON, DEFAULT_MAX_ITERS, solve

OK, FAIL, USAGE = 0, 2, 1


class _Usage(Exception):
    pass


def _overrides(pairs: Sequence[str]) -> dict[str, Fraction]:
    out = {}
    for item in pairs or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise _Usage(f"--param expects NAME=VALUE, got {item!r}")
        out[name.strip()] = parse_rational(value.strip())
    return out


def _load(args) -> GameWithAwareness:
    return load_bundle(args.bundle, _overrides(args.param))


def _valid_or_report(gs: GameWithAwareness, out) -> bool:
    rep = validate_with_awareness(gs)
    if not rep.ok:
        print("bundle is not a valid game with awareness:", file=out)
        for v in rep:
            print(f"  {v}", file=out)
    return rep.ok


def _nu(args, gs):
    if args.nu in (None, "uniform"):
        return None
    return load_nu(args.nu)


def cmd_validate(args, out) -> tuple[int, dict]:
    gs = _load(args)
    rep = validate_with_awareness(gs)
    for v in rep:
        print(v, file=out)
    for w in rep.warnings:
        print(f"warning: {w}", file=out)
    print("valid" if rep.ok else f"invalid: {len(rep)} violation(s)", file=out)
    data = {"ok": rep.ok,
            "violations": [{"tag": v.tag, "game": v.game, "where": v.where, "detail": v.detail}
                           for v in rep],
            "warnings": list(rep.warnings)}
    return (OK if rep.ok else FAIL), data


def cmd_glue(args, out) -> tuple[int, dict]:
    gs = _load(args)
    if not _valid_or_report(gs, out):
        return FAIL, {"ok": False}
    gl = glue(gs, _nu(args, gs))
    text = json.dumps(game_to_obj(gl.game), indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}: {len(gl.game.histories)} histories, "
              f"{len(gl.players)} players", file=out)
    else:
        out.write(text)
    data = {"ok": True, "nu": {g: fraction_str(q) for g, q in sorted(gl.nu.items())},
            "players": sorted(gl.players), "histories": len(gl.game.histories)}
    return OK, data


def cmd_solve(args, out) -> tuple[int, dict]:
    gs = _load(args)
    if not _valid_or_report(gs, out):
        return FAIL, {"ok": False}
    eps = parse_rational(args.epsilon) if args.epsilon is not None else DEFAULT_EPSILON
    gp, rep = solve(gs, _nu(args, gs), eps, max_iters=args.max_iters, seed=args.seed)
    text = serialize_profile(gp)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    print(rep.render(), file=out)
    return (OK if rep.ok else FAIL), {"report": rep.as_dict(), "profile": profile_to_obj(gp)}


def cmd_verify(args, out) -> tuple[int, dict]:
    gs = _load(args)
    if not _valid_or_report(gs, out):
        return FAIL, {"ok": False}
    gp = load_profile(args.profile)
    check_profile(gs, gp)
    eps = parse_rational(args.epsilon) if args.epsilon is not None else Fraction(0)
    rep = verify_generalized_nash(gs, gp, eps)
    print(rep.render(), file=out)
    return (OK if rep.ok else FAIL), rep.as_dict()


def cmd_eu(args, out) -> tuple[int, dict]:
    gs = _load(args)
    if not _valid_or_report(gs, out):
        return FAIL, {"ok": False}
    gp = load_profile(args.profile)
    check_profile(gs, gp)
    gid = args.game or gs.modeler
    if gid not in gs.games:
        raise _Usage(f"unknown game {gid!r}")
    players = [args.player] if args.player else gs.players
    for i in players:
        if i not in gs.players:
            raise _Usage(f"unknown player {i!r}")
    values = {i: expected_utility(gs, gp, i, gid) for i in players}
    for i, v in values.items():
        print(f"EU[{i},{gid}] = {v}", file=out)
    if len(players) > 1:
        print(f"payoff vector in {gid}: ({', '.join(str(values[i]) for i in players)})", file=out)
    return OK, {"game": gid, "eu": {i: fraction_str(v) for i, v in values.items()}}


def cmd_enumerate(args, out) -> tuple[int, dict]:
    gs = _load(args)
    if not _valid_or_report(gs, out):
        return FAIL, {"ok": False}
    eqs = enumerate_pure_equilibria(gs)
    print(f"{len(eqs)} pure generalized Nash equilibri{'um' if len(eqs) == 1 else 'a'}", file=out)
    for k, gp in enumerate(eqs, 1):
        print(f"[{k}]", file=out)
        for line in gp.describe().splitlines():
            print(f"  {line}", file=out)
    return OK, {"equilibria": [profile_to_obj(gp) for gp in eqs]}


def cmd_inspect(args, out) -> tuple[int, dict]:
    gs = _load(args)
    if not _valid_or_report(gs, out):
        return FAIL, {"ok": False}
    closure = sorted(reachable_closure(gs))
    print(f"modeler's game: {gs.modeler}", file=out)
    print(f"closure: {', '.join(closure)}", file=out)
    stray = sorted(orphans(gs))
    if stray:
        print(f"unreachable: {', '.join(stray)}", file=out)
    data: dict[str, Any] = {"modeler": gs.modeler, "closure": closure, "players": {}, "pruned": {}}
    for i in gs.players:
        gi = sorted(games_of(gs, i))
        print(f"games of {i}: {', '.join(gi) or '-'}", file=out)
        part = generalized_partition(gs, i)
        classes = {}
        for (tgt, cell), members in part.items():
            shown = ", ".join(f"{g}:{fmt(h)}" for g, h in sorted(members))
            print(f"  class {tgt}:{cell} = {{{shown}}}", file=out)
            classes[f"{tgt}/{cell}"] = [[g, list(h)] for g, h in sorted(members)]
        data["players"][i] = {"games": gi, "classes": classes}
    for gid in closure:
        g = gs.games[gid].game
        gone = sorted(g.histories - prune(gs, gid), key=lambda h: (len(h), h))
        print(f"pruned from {gid}: {', '.join(fmt(h) for h in gone) or 'nothing'}", file=out)
        data["pruned"][gid] = [list(h) for h in gone]
    return OK, data


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="awg", description="Games with awareness: validate, glue, solve.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("bundle")
        sp.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="override a bundle parameter, e.g. p=7/10")
        sp.add_argument("--json", metavar="PATH", help="also write a JSON report to PATH")
        return sp

    common(sub.add_parser("validate", help="check every structural condition"))
    sp = common(sub.add_parser("glue", help="build the glued standard game"))
    sp.add_argument("--nu", default="uniform", help="'uniform' or a JSON file {gid: prob}")
    sp.add_argument("-o", "--output")
    sp = common(sub.add_parser("solve", help="find a generalized Nash equilibrium"))
    sp.add_argument("--epsilon")
    sp.add_argument("--nu", default="uniform")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    sp.add_argument("-o", "--output")
    sp = common(sub.add_parser("verify", help="check a profile exactly"))
    sp.add_argument("profile")
    sp.add_argument("--epsilon")
    sp = common(sub.add_parser("eu", help="expected utilities under a profile"))
    sp.add_argument("profile")
    sp.add_argument("--player")
    sp.add_argument("--game")
    common(sub.add_parser("enumerate-pure", help="all pure generalized equilibria"))
    common(sub.add_parser("inspect", help="closure, classes and pruned histories"))
    return p


COMMANDS = {
    "validate": cmd_validate, "glue": cmd_glue, "solve": cmd_solve, "verify": cmd_verify,
    "eu": cmd_eu, "enumerate-pure": cmd_enumerate, "inspect": cmd_inspect,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        code, data = COMMANDS[args.command](args, out)
    except (_Usage, BundleError, ProfileError, GlueError, EnumerationBoundError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    if args.json:
        data = {"command": args.command, "exit_code": code, **data}
        Path(args.json).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return code


if __name__ == "__main__":
    sys.exit(main())
