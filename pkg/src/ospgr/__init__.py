"""One-sided preference game with reference information: simulator, analysis, service."""

from .analysis import (
    ChoiceClassification,
    ChosenRateDistribution,
    ClassificationRates,
    ClassifiedChoice,
    EnumerationResult,
    FormedGroup,
    GroupingResult,
    TauReport,
    VirtualGroup,
    chosen_rate,
    classify_choice,
    classify_session,
    enumerate_tau_bounded,
    form_groups,
    permutations_with_inversions_at_most,
    priority_breakdown,
    reform_virtual_groups,
    session_taus,
)
from .formats import (
    PreferenceSubmissions,
    RoundRecord,
    SchemaError,
    SessionLog,
    decode_prefs,
    decode_session,
    encode_prefs,
    encode_session,
    read_prefs,
    read_session,
    validate_session,
    write_session,
)
from .game import (
    BordaScores,
    CanonicalProfile,
    GameConfig,
    PopularityRanking,
    PreferenceProfile,
    PriorityAssignment,
    RoundOutcome,
    TieRule,
    ValidationError,
    allocate,
    borda_scores,
    canonicalize,
    kendall_tau,
    popularity_ranking,
)
from .rdm import (
    PayoffTable,
    StrategyProfile,
    UtilityMatrix,
    elimination_oracle,
    payoff_table,
    rdm_r_choice,
    rdm_r_choice_row,
    utility_matrix,
)
from .report import (
    AnalysisReport,
    build_enumeration_report,
    build_sessions_report,
    decode_report,
    encode_report,
    render_report_table,
)
from .schedule import cyclic_latin_square, is_latin_square, priority_schedule
from .simulate import random_profile, simulate_session

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
