"""Reality-aware social choice.

Elections where the current social state (Reality) is an ever-present
alternative and every voter ranks the alternatives once per possible Reality.
"""

from realitychoice.core import (
    LinearOrder,
    MajorityTally,
    MetricError,
    Pseudoquasimetric,
    RealityAwareElection,
    RealityChoiceError,
    TableBallot,
    UtilityBallot,
    UtilityTieError,
    condorcet_winner,
    pairwise_tally,
    position,
    reality_viable_set,
    top_cycle,
    validate_pseudoquasimetric,
)
from realitychoice.rules import (
    RuleOutcome,
    elect_conservative,
    elect_distance_from_reality,
    elect_permissive,
    elect_preference_over_reality,
    elect_top_cycle,
    plurality,
)
from realitychoice.agenda import agenda_matches_criterion, run_agenda
from realitychoice.actionplan import AccessibilityMask, ActionPlan, detect_cycle, unfold_plan

__version__ = "0.1.0"
