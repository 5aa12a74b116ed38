from .adversaries import KINDS, make_adversary
from .checks import Lemma1Report, check_lemma1, check_sum_constant, theorem_bound
from .episode import EpisodeTrace, episode_streams, pseudo_regret, realized_regret, run_episode
from .report import emit_report

__all__ = [
    "KINDS",
    "EpisodeTrace",
    "Lemma1Report",
    "check_lemma1",
    "check_sum_constant",
    "emit_report",
    "episode_streams",
    "make_adversary",
    "pseudo_regret",
    "realized_regret",
    "run_episode",
    "theorem_bound",
]
