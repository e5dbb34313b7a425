"""Regenerate the bundled corpus under ``corpus/``.

    python scripts/make_corpus.py [outdir]

Writes the two-player example with A uncertain about B's awareness of
``down_B`` at several values of ``p``, an awareness-of-unawareness variant
with a virtual move, canonical matching pennies, the three named profiles,
and ``expected.json`` with the verifier outcome for each pair.
"""
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from awaregames.awareness import canonical  # noqa: E402
from awaregames.bundle import bundle_from_obj, bundle_to_obj  # noqa: E402

P_VALUES = {"1_10": "1/10", "3_10": "3/10", "1_2": "1/2", "7_10": "7/10", "9_10": "9/10"}

FIG1_MOVES = ["across_A", "across_B", "down_A", "down_B"]


def fig1_underlying():
    return {
        "players": ["A", "B"],
        "moves": FIG1_MOVES,
        "nodes": [
            {"history": [], "player": "A"},
            {"history": ["across_A"], "player": "B"},
        ],
        "outcomes": [
            {"history": ["down_A"], "payoffs": {"A": "1", "B": "1"}},
            {"history": ["across_A", "down_B"], "payoffs": {"A": "2", "B": "3"}},
            {"history": ["across_A", "across_B"], "payoffs": {"A": "0", "B": "2"}},
        ],
        "infosets": {"A": {"A.0": [[]]}, "B": {"B.0": [["across_A"]]}},
    }


UNAWARE_OF_DOWN_B = {"all_but": [["across_A", "down_B"]]}


def fig1_bundle(p="3/10"):
    modeler = fig1_underlying()
    modeler["infosets"] = {"A": {"m.A": [[]]}, "B": {"m.B": [["across_A"]]}}
    modeler["awareness"] = {"A": [{"at": [], "aware_of": "all"}],
                            "B": [{"at": ["across_A"], "aware_of": "all"}]}

    # A's view: nature decides whether B knows about down_B.
    ga = {
        "players": ["A", "B"],
        "moves": FIG1_MOVES + ["aware", "unaware"],
        "nodes": [
            {"history": [], "player": "c", "probs": {"unaware": "p", "aware": "1-p"}},
            {"history": ["unaware"], "player": "A"},
            {"history": ["aware"], "player": "A"},
            {"history": ["unaware", "across_A"], "player": "B"},
            {"history": ["aware", "across_A"], "player": "B"},
        ],
        "outcomes": [
            {"history": [b, "down_A"], "payoffs": {"A": "1", "B": "1"}} for b in ("unaware", "aware")
        ] + [
            {"history": [b, "across_A", "down_B"], "payoffs": {"A": "2", "B": "3"}} for b in ("unaware", "aware")
        ] + [
            {"history": [b, "across_A", "across_B"], "payoffs": {"A": "0", "B": "2"}} for b in ("unaware", "aware")
        ],
        "infosets": {
            "A": {"A.1": [["unaware"], ["aware"]]},
            "B": {"B.1": [["aware", "across_A"]], "B.2": [["unaware", "across_A"]]},
        },
        "awareness": {
            "A": [{"at": ["unaware"], "aware_of": "all"}, {"at": ["aware"], "aware_of": "all"}],
            "B": [{"at": ["aware", "across_A"], "aware_of": "all"},
                  {"at": ["unaware", "across_A"], "aware_of": UNAWARE_OF_DOWN_B}],
        },
    }

    # The game as seen by a B who does not know about down_B.
    gb = {
        "players": ["A", "B"],
        "moves": ["across_A", "across_B", "down_A"],
        "nodes": [
            {"history": [], "player": "A"},
            {"history": ["across_A"], "player": "B"},
        ],
        "outcomes": [
            {"history": ["down_A"], "payoffs": {"A": "1", "B": "1"}},
            {"history": ["across_A", "across_B"], "payoffs": {"A": "0", "B": "2"}},
        ],
        "infosets": {"A": {"A.3": [[]]}, "B": {"B.3": [["across_A"]]}},
        "awareness": {"A": [{"at": [], "aware_of": UNAWARE_OF_DOWN_B}],
                      "B": [{"at": ["across_A"], "aware_of": UNAWARE_OF_DOWN_B}]},
    }

    beliefs = [
        ("Gm", [], "GA", "A.1"),
        ("Gm", ["across_A"], "Gm", "m.B"),
        ("GA", ["unaware"], "GA", "A.1"),
        ("GA", ["aware"], "GA", "A.1"),
        ("GA", ["unaware", "across_A"], "GB", "B.3"),
        ("GA", ["aware", "across_A"], "Gm", "m.B"),
        ("GB", [], "GB", "A.3"),
        ("GB", ["across_A"], "GB", "B.3"),
    ]
    return {
        "format_version": 1,
        "mode": "plain",
        "parameters": {"p": p},
        "underlying": fig1_underlying(),
        "games": {"Gm": modeler, "GA": ga, "GB": gb},
        "modeler": "Gm",
        "beliefs": [{"game": g, "history": h, "target": t, "infoset": c} for g, h, t, c in beliefs],
    }


def fig1_au_bundle():
    """A is unaware of down_B but believes B may have some move A cannot name."""
    modeler = fig1_underlying()
    modeler["infosets"] = {"A": {"m.A": [[]]}, "B": {"m.B": [["across_A"]]}}
    modeler["awareness"] = {"A": [{"at": [], "aware_of": UNAWARE_OF_DOWN_B}],
                            "B": [{"at": ["across_A"], "aware_of": "all"}]}
    gv = {
        "players": ["A", "B"],
        "moves": ["across_A", "across_B", "down_A", "mystery"],
        "nodes": [
            {"history": [], "player": "A"},
            {"history": ["across_A"], "player": "B"},
        ],
        "outcomes": [
            {"history": ["down_A"], "payoffs": {"A": "1", "B": "1"}},
            {"history": ["across_A", "across_B"], "payoffs": {"A": "0", "B": "2"}},
            {"history": ["across_A", "mystery"], "payoffs": {"A": "3/2", "B": "3"}},
        ],
        "infosets": {"A": {"V.A": [[]]}, "B": {"V.B": [["across_A"]]}},
        "awareness": {"A": [{"at": [], "aware_of": UNAWARE_OF_DOWN_B}],
                      "B": [{"at": ["across_A"], "aware_of": UNAWARE_OF_DOWN_B}]},
    }
    beliefs = [
        ("Gm", [], "GV", "V.A"),
        ("Gm", ["across_A"], "Gm", "m.B"),
        ("GV", [], "GV", "V.A"),
        ("GV", ["across_A"], "GV", "V.B"),
    ]
    return {
        "format_version": 1,
        "mode": "au",
        "parameters": {},
        "underlying": fig1_underlying(),
        "games": {"Gm": modeler, "GV": gv},
        "modeler": "Gm",
        "beliefs": [{"game": g, "history": h, "target": t, "infoset": c} for g, h, t, c in beliefs],
    }


def matching_pennies():
    return {
        "players": ["A", "B"],
        "moves": ["H_A", "H_B", "T_A", "T_B"],
        "nodes": [
            {"history": [], "player": "A"},
            {"history": ["H_A"], "player": "B"},
            {"history": ["T_A"], "player": "B"},
        ],
        "outcomes": [
            {"history": [a, b], "payoffs": {"A": "1" if a[0] == b[0] else "-1",
                                            "B": "-1" if a[0] == b[0] else "1"}}
            for a in ("H_A", "T_A") for b in ("H_B", "T_B")
        ],
        "infosets": {"A": {"A.0": [[]]}, "B": {"B.0": [["H_A"], ["T_A"]]}},
    }


def profile(a1, a3, mb, b3="across_B"):
    return {
        "format_version": 1,
        "strategies": {
            "A": {"GA": {"A.1": {a1: "1"}}, "GB": {"A.3": {a3: "1"}}},
            "B": {"Gm": {"m.B": {mb: "1"}}, "GB": {"B.3": {b3: "1"}}},
        },
    }


PROFILES = {
    "e1.prof": profile("across_A", "down_A", "down_B"),
    "e2.prof": profile("down_A", "down_A", "down_B"),
    "e3.prof": profile("down_A", "down_A", "across_B"),
}


def main(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)

    def dump(name, obj):
        (outdir / name).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")

    dump("fig1.awg", fig1_bundle("3/10"))
    for tag, p in P_VALUES.items():
        dump(f"fig1_p{tag}.awg", fig1_bundle(p))
    dump("fig1_au.awg", fig1_au_bundle())
    mp = {"format_version": 1, "mode": "plain", "parameters": {}, "underlying": matching_pennies(),
          "games": {}, "modeler": "Gm", "beliefs": []}
    # build the canonical embedding through the library so the file is exact
    from awaregames.bundle import game_from_obj
    dump("canonical_mp.awg", bundle_to_obj(canonical(game_from_obj(mp["underlying"], {}))))
    for name, obj in PROFILES.items():
        dump(name, obj)

    expected = {}
    from awaregames.equilibrium import verify_generalized_nash
    from awaregames.bundle import profile_from_obj
    for tag in P_VALUES:
        gs = bundle_from_obj(fig1_bundle(P_VALUES[tag]))
        for name, obj in PROFILES.items():
            rep = verify_generalized_nash(gs, profile_from_obj(obj))
            expected[f"fig1_p{tag}.awg {name}"] = {"ok": rep.ok, "max_regret": str(rep.max_regret)}
    dump("expected.json", expected)


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "corpus")
