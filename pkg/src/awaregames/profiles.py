"""Generalized strategy profiles: one local strategy per (player, game)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Mapping

from .awareness import GameWithAwareness

Dist = dict[str, Fraction]
Local = dict[str, Dist]


class ProfileError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GeneralizedProfile:
    """``strategies[(player, game)][cell] -> {move: probability}``.

    A local strategy is keyed by the cells of the believed game, which is
    exactly the set of generalized information sets in its domain.
    """

    strategies: Mapping[tuple[str, str], Mapping[str, Mapping[str, Fraction]]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategies", {
            tuple(k): {c: {m: Fraction(q) for m, q in d.items() if q} for c, d in loc.items()}
            for k, loc in self.strategies.items()})

    def key(self) -> tuple:
        return tuple(sorted(
            (k, tuple(sorted((c, tuple(sorted(d.items()))) for c, d in loc.items())))
            for k, loc in self.strategies.items()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeneralizedProfile) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def local(self, player: str, gid: str) -> Local:
        return {c: dict(d) for c, d in self.strategies[(player, gid)].items()}

    def with_local(self, player: str, gid: str, local: Mapping[str, Mapping[str, Fraction]]
                   ) -> "GeneralizedProfile":
        new = {k: v for k, v in self.strategies.items()}
        new[(player, gid)] = local
        return GeneralizedProfile(new)

    def is_pure(self) -> bool:
        return all(len(d) == 1 for loc in self.strategies.values() for d in loc.values())

    def describe(self) -> str:
        lines = []
        for (i, gid), loc in sorted(self.strategies.items()):
            for cell, d in sorted(loc.items()):
                body = ", ".join(f"{m}:{q}" for m, q in sorted(d.items()))
                lines.append(f"sigma[{i},{gid}] at {cell}: {body}")
        return "\n".join(lines)


def profile_domain(gs: GameWithAwareness) -> dict[tuple[str, str], dict[str, list[str]]]:
    """For every (player, believed game): its classes and their moves."""
    out: dict[tuple[str, str], dict[str, list[str]]] = {}
    for (gid, h), (tgt, cell) in sorted(gs.beliefs.items()):
        i = gs.mover(gid, h)
        out.setdefault((i, tgt), {})[cell] = gs.cell_moves(tgt, cell)
    return {k: dict(sorted(v.items())) for k, v in sorted(out.items())}


def check_profile(gs: GameWithAwareness, gp: GeneralizedProfile) -> None:
    for key, classes in profile_domain(gs).items():
        loc = gp.strategies.get(key)
        if loc is None:
            raise ProfileError(f"missing local strategy for {key[0]} in {key[1]}")
        for cell, moves in classes.items():
            d = loc.get(cell)
            if d is None:
                raise ProfileError(f"local strategy {key} lacks class {cell}")
            if not set(d) <= set(moves):
                raise ProfileError(f"{key} at {cell}: moves {sorted(set(d) - set(moves))} unavailable")
            if any(q < 0 for q in d.values()) or sum(d.values(), Fraction(0)) != 1:
                raise ProfileError(f"{key} at {cell}: not a probability distribution")


def uniform_profile(gs: GameWithAwareness) -> GeneralizedProfile:
    return GeneralizedProfile({
        k: {c: {m: Fraction(1, len(ms)) for m in ms} for c, ms in classes.items()}
        for k, classes in profile_domain(gs).items()})


def pure_profile(gs: GameWithAwareness, choice: Mapping[tuple[str, str, str], str]
                 ) -> GeneralizedProfile:
    """Build a pure profile from ``{(player, game, cell): move}``."""
    strategies: dict = {}
    for (i, gid), classes in profile_domain(gs).items():
        strategies[(i, gid)] = {c: {choice[(i, gid, c)]: Fraction(1)} for c in classes}
    return GeneralizedProfile(strategies)


def count_pure(gs: GameWithAwareness) -> int:
    n = 1
    for classes in profile_domain(gs).values():
        for ms in classes.values():
            n *= len(ms)
    return n


def iter_pure(gs: GameWithAwareness) -> Iterator[GeneralizedProfile]:
    """All pure generalized profiles, in lexicographic order of choices."""
    slots = [(i, gid, c, ms) for (i, gid), classes in profile_domain(gs).items()
             for c, ms in classes.items()]
    for picks in product(*(ms for *_, ms in slots)):
        yield pure_profile(gs, {(i, gid, c): m for (i, gid, c, _), m in zip(slots, picks)})
