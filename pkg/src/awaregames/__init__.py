"""Extensive games with possibly unaware players.

Games are finite trees with exact rational probabilities and payoffs.  A
game with awareness is a family of augmented games (each annotated with
what every mover is aware of), a designated modeler's game, and a belief
map sending each player history to the game and information set the mover
thinks it is in.
"""
from .awareness import (AU, PLAIN, AugmentedGame, GameWithAwareness, canonical, games_of,
                        generalized_partition, orphans, reachable_closure,
                        validate_augmented, validate_with_awareness, virtual_histories)
from .bundle import (BundleError, load_bundle, load_profile, parse_bundle, parse_profile,
                     serialize_bundle, serialize_profile)
from .core import (NATURE, ROOT, ExtensiveGame, ValidationReport, Violation,
                   check_perfect_recall, validate_game)
from .equilibrium import (EnumerationBoundError, EquilibriumReport, best_response,
                          enumerate_pure_equilibria, expected_utility, nash_regrets,
                          run_distribution, verify_generalized_nash)
from .glue import GlueError, GlueGame, glue, lift_profile, lower_profile, prune
from .profiles import GeneralizedProfile, ProfileError, pure_profile, uniform_profile
from .solver import pure_prepass, solve

__all__ = [
    "AU", "PLAIN", "NATURE", "ROOT",
    "AugmentedGame", "BundleError", "EnumerationBoundError", "EquilibriumReport",
    "ExtensiveGame", "GameWithAwareness", "GeneralizedProfile", "GlueError", "GlueGame",
    "ProfileError", "ValidationReport", "Violation",
    "best_response", "canonical", "check_perfect_recall", "enumerate_pure_equilibria",
    "expected_utility", "games_of", "generalized_partition", "glue", "lift_profile",
    "load_bundle", "load_profile", "lower_profile", "nash_regrets", "orphans",
    "parse_bundle", "parse_profile", "prune", "pure_prepass", "pure_profile",
    "reachable_closure", "run_distribution", "serialize_bundle", "serialize_profile",
    "solve", "uniform_profile", "validate_augmented", "validate_game",
    "validate_with_awareness", "verify_generalized_nash", "virtual_histories",
]
