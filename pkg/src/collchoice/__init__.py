"""Collective choice over weak-order ballots: tallies, two-policy rules,
weighted councils and exhaustive condition audits."""

__version__ = "0.1.0"

from .prefs import (
    ChoiceSet,
    PolicySet,
    PreferenceError,
    Profile,
    Situation,
    WeakOrder,
    demote,
    demote_strong,
    is_admissible,
    promote,
    promote_strong,
    restrict,
)
from .enumeration import count_weak_orders, enumerate_weak_orders
from .binary import BinaryRule, tally
from .majority import MajorityMatrix
from .multi import agenda, borda, condorcet, detect_cycles, pairwise_matrix, plurality
from .weighted import Council, Leaf, WeightVector, evaluate_tree, find_dictator, weighted_tally
