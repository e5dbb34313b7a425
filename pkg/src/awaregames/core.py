"""Finite extensive-form games with exact rational data.

Histories are tuples of move tokens; the root is the empty tuple.  All
probabilities and payoffs are :class:`fractions.Fraction` so that every
structural check is an exact equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping

NATURE = "c"

History = tuple[str, ...]
ROOT: History = ()


class UnknownHistoryError(KeyError):
    pass


def fmt(h: Iterable[str]) -> str:
    return "<" + ",".join(h) + ">"


def is_prefix(a: History, b: History) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def prefixes(h: History) -> list[History]:
    """All prefixes of ``h`` from the root up to and including ``h``."""
    return [h[:k] for k in range(len(h) + 1)]


def project(h: History, underlying_moves: frozenset[str] | set[str],
            virtuals: frozenset[History] | set[History] = frozenset()) -> History:
    """Restrict ``h`` to the moves of an underlying game.

    Virtual histories are returned unchanged.
    """
    if h in virtuals:
        return h
    return tuple(m for m in h if m in underlying_moves)


@dataclass(frozen=True)
class Violation:
    tag: str
    where: str
    detail: str = ""
    game: str | None = None

    def __str__(self) -> str:
        loc = f"[{self.game}] " if self.game is not None else ""
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.tag} {loc}{self.where}{tail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def add(self, tag: str, where: str, detail: str = "", game: str | None = None) -> None:
        self.violations.append(Violation(tag, where, detail, game))

    def extend(self, other: "ValidationReport") -> None:
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)

    @property
    def ok(self) -> bool:
        return not self.violations

    def tags(self) -> set[str]:
        return {v.tag for v in self.violations}

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)


@dataclass(frozen=True)
class ExtensiveGame:
    """A finite extensive game.

    ``infosets`` maps each player to named cells; cell names are unique
    within a game so that beliefs can refer to a cell by name alone.
    ``to_move`` uses :data:`NATURE` for chance nodes.
    """

    players: frozenset[str]
    moves: frozenset[str]
    histories: frozenset[History]
    to_move: Mapping[History, str]
    nature_probs: Mapping[History, Mapping[str, Fraction]]
    infosets: Mapping[str, Mapping[str, frozenset[History]]]
    payoffs: Mapping[str, Mapping[History, Fraction]]

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        set_(self, "players", frozenset(self.players))
        set_(self, "moves", frozenset(self.moves))
        set_(self, "histories", frozenset(tuple(h) for h in self.histories))
        set_(self, "to_move", {tuple(h): p for h, p in self.to_move.items()})
        set_(self, "nature_probs", {tuple(h): {m: Fraction(q) for m, q in d.items()}
                                    for h, d in self.nature_probs.items()})
        set_(self, "infosets", {i: {name: frozenset(tuple(h) for h in cell)
                                    for name, cell in cells.items()}
                                for i, cells in self.infosets.items()})
        set_(self, "payoffs", {i: {tuple(z): Fraction(u) for z, u in us.items()}
                               for i, us in self.payoffs.items()})

    @cached_property
    def children(self) -> dict[History, list[str]]:
        out: dict[History, list[str]] = {h: [] for h in self.histories}
        for h in self.histories:
            if h and h[:-1] in out:
                out[h[:-1]].append(h[-1])
        for ms in out.values():
            ms.sort()
        return out

    @cached_property
    def runs(self) -> frozenset[History]:
        return frozenset(h for h, ms in self.children.items() if not ms)

    @cached_property
    def ordered(self) -> list[History]:
        """Histories in canonical (lexicographic by token) order."""
        return sorted(self.histories)

    @cached_property
    def cell_of(self) -> dict[History, str]:
        out: dict[History, str] = {}
        for cells in self.infosets.values():
            for name, members in cells.items():
                for h in members:
                    out.setdefault(h, name)
        return out

    @cached_property
    def cell_owner(self) -> dict[str, str]:
        return {name: i for i, cells in self.infosets.items() for name in cells}

    def cell(self, name: str) -> frozenset[History]:
        return self.infosets[self.cell_owner[name]][name]

    def player_histories(self, player: str) -> list[History]:
        return [h for h in self.ordered if self.to_move.get(h) == player]

    def is_terminal(self, h: History) -> bool:
        return not self.children[h]


def available_moves(g: ExtensiveGame, h: History) -> frozenset[str]:
    h = tuple(h)
    if h not in g.histories:
        raise UnknownHistoryError(fmt(h))
    return frozenset(g.children[h])


def same_cell(g: ExtensiveGame, x: History, y: History) -> bool:
    """True iff ``x`` and ``y`` coincide or share an information set of ``g``."""
    if x == y:
        return True
    cx, cy = g.cell_of.get(x), g.cell_of.get(y)
    return cx is not None and cx == cy


def validate_game(g: ExtensiveGame) -> ValidationReport:
    """Check every clause of the definition of a finite extensive game.

    Returns a report whose violations carry one of the tags
    ``nature-reserved``, ``root``, ``prefix-closure``, ``move-alphabet``,
    ``to-move``, ``nature-probs``, ``info-partition``, ``info-moves``,
    ``payoffs`` or ``perfect-recall``.
    """
    rep = ValidationReport()
    if NATURE in g.players:
        rep.add("nature-reserved", "players", f"{NATURE!r} is reserved for nature")
    if ROOT not in g.histories:
        rep.add("root", fmt(ROOT), "history set lacks the root")
    for h in g.ordered:
        if h and h[:-1] not in g.histories:
            rep.add("prefix-closure", fmt(h), f"missing prefix {fmt(h[:-1])}")
        stray = [m for m in h if m not in g.moves]
        if stray:
            rep.add("move-alphabet", fmt(h), f"moves {sorted(set(stray))} not in M")

    nonterminal = {h for h in g.histories if g.children[h]}
    for h in sorted(nonterminal - set(g.to_move)):
        rep.add("to-move", fmt(h), "no mover assigned")
    for h in sorted(set(g.to_move) - nonterminal):
        rep.add("to-move", fmt(h), "mover assigned to a run or unknown history")
    for h in sorted(g.to_move):
        p = g.to_move[h]
        if p != NATURE and p not in g.players:
            rep.add("to-move", fmt(h), f"unknown mover {p!r}")

    for h in sorted(nonterminal):
        if g.to_move.get(h) != NATURE:
            continue
        dist = g.nature_probs.get(h)
        if dist is None:
            rep.add("nature-probs", fmt(h), "no distribution")
            continue
        avail = set(g.children[h])
        if not set(dist) <= avail:
            rep.add("nature-probs", fmt(h), f"support {sorted(set(dist) - avail)} outside M_h")
        if any(q < 0 for q in dist.values()):
            rep.add("nature-probs", fmt(h), "negative probability")
        total = sum(dist.values(), Fraction(0))
        if total != 1:
            rep.add("nature-probs", fmt(h), f"probabilities sum to {total}")
    for h in sorted(set(g.nature_probs)):
        if g.to_move.get(h) != NATURE:
            rep.add("nature-probs", fmt(h), "distribution at a non-nature history")

    partition_ok = True
    seen_names: dict[str, str] = {}
    for i in sorted(g.infosets):
        if i not in g.players:
            rep.add("info-partition", i, "partition for a non-player")
            partition_ok = False
        covered: dict[History, str] = {}
        for name in sorted(g.infosets[i]):
            cell = g.infosets[i][name]
            if name in seen_names:
                rep.add("info-partition", name, "cell name used twice")
                partition_ok = False
            seen_names[name] = i
            if not cell:
                rep.add("info-partition", name, "empty cell")
                partition_ok = False
            for h in sorted(cell):
                if g.to_move.get(h) != i:
                    rep.add("info-partition", name, f"{fmt(h)} is not a history of {i}")
                    partition_ok = False
                if h in covered:
                    rep.add("info-partition", name, f"{fmt(h)} also in {covered[h]}")
                    partition_ok = False
                covered[h] = name
            move_sets = {tuple(g.children.get(h, ())) for h in cell}
            if len(move_sets) > 1:
                rep.add("info-moves", name, "histories offer different moves")
        for h in g.player_histories(i):
            if h not in covered:
                rep.add("info-partition", fmt(h), f"history of {i} in no cell")
                partition_ok = False
    for i in sorted(g.players - set(g.infosets)):
        if g.player_histories(i):
            rep.add("info-partition", i, "player moves but has no partition")
            partition_ok = False

    for i in sorted(g.players):
        us = g.payoffs.get(i, {})
        for z in sorted(g.runs):
            if z not in us:
                rep.add("payoffs", fmt(z), f"no payoff for {i}")
        for z in sorted(set(us) - g.runs):
            rep.add("payoffs", fmt(z), f"payoff for {i} on a non-run")

    if partition_ok:
        rep.violations.extend(check_perfect_recall(g))
    return rep


def check_perfect_recall(g: ExtensiveGame) -> list[Violation]:
    """Violations of perfect recall, each naming ``(h, h', h1)``."""
    out: list[Violation] = []
    for i in sorted(g.infosets):
        for name in sorted(g.infosets[i]):
            cell = sorted(g.infosets[i][name])
            for h in cell:
                own = [h1 for h1 in prefixes(h)[:-1] if g.to_move.get(h1) == i]
                for h2 in cell:
                    for h1 in own:
                        m = h[len(h1)]
                        c1 = g.cell_of.get(h1)
                        ok = any(
                            g.cell_of.get(k) == c1 and h2[len(k)] == m
                            for k in prefixes(h2)[:-1]
                            if g.to_move.get(k) == i
                        )
                        if not ok:
                            out.append(Violation(
                                "perfect-recall", fmt(h),
                                f"h'={fmt(h2)} forgets {m!r} played at {fmt(h1)} ({c1})"))
    return out
