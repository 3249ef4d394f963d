"""vren: a rally description language for volleyball, with tooling.

The package splits into small layers: zone rules (:mod:`vren.court`),
the data model and linter (:mod:`vren.model`), the text/JSON notation
(:mod:`vren.notation`), statistics (:mod:`vren.stats`), feature encoding
(:mod:`vren.features`), learners and what-if analysis (:mod:`vren.learn`),
a calibrated synthetic generator (:mod:`vren.synth`), and the CLI/HTTP
surfaces (:mod:`vren.cli`, :mod:`vren.service`).
"""

from .court import (
    ALL_ZONES,
    FRONT_ROW_ZONES,
    IN_BOUNDS_ZONES,
    IN_SYSTEM_ZONES,
    OUT_OF_BOUNDS_ZONES,
    AttackerCategory,
    BoundsClass,
    HitDirection,
    PassRating,
    RowClass,
    SetLocation,
    attacker_category,
    check_zone,
    hit_direction,
    pass_rating_for,
    zone_bounds,
    zone_row,
)
from .diagnostics import Diagnostic, Severity, VrenError
from .features import (
    HIT_TYPE_CLASSES,
    LAYOUT,
    SET_TYPE_CLASSES,
    FeatureLayout,
    FeatureMatrix,
    MaskKind,
    TaskKind,
    build_dataset,
    encode_round,
    encode_window,
    export_features,
    import_features,
    window_feature_names,
)
from .learn import (
    EvalReport,
    LinearModel,
    TrainConfig,
    WhatIfResult,
    evaluate_binary,
    evaluate_categorical,
    load_model,
    per_round_win_prob,
    predict_proba,
    save_model,
    split_matches,
    train_binary,
    train_multiclass,
    what_if,
)
from .model import (
    HitType,
    Level,
    Match,
    Rally,
    Round,
    ServeType,
    SetSub,
    Team,
    coerce_field_value,
    replace_round,
    validate_match,
    validate_rally,
    winner_label,
)
from .notation import (
    lint_match,
    match_from_json,
    match_to_json,
    parse_match,
    parse_text,
    serialize_corpus,
    serialize_match,
)
from .stats import (
    AttackRow,
    DirectionCounters,
    PassSetQuality,
    StatReport,
    attack_table,
    pass_set_quality,
    serve_receive_distribution,
    set_location_distribution,
    system_split,
)
from .synth import GeneratorProfile, generate_corpus, generate_match

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
